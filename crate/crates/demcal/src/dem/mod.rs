//! Spherical-particle discrete-element engine.
//!
//! Contact detection over a uniform grid, Hertz normal / Mindlin tangential
//! force laws with restitution-parameterized damping, rigid wall primitives
//! (finite rectangle, conical frustum, open cylinder — optionally rotating
//! about a fixed axis), and explicit time integration (semi-implicit Euler
//! for translation, explicit Euler for rotation).

mod contact;
mod grid;
mod material;
mod step;
mod wall;
mod world;

pub use contact::{
    effective_pair, effective_wall_pair, hertz_normal_force, mindlin_tangential_force,
    rolling_resistance_torque, stable_timestep, EffectivePair,
};
pub use material::{ContactParams, ContactTable, Material, MaterialId};
pub use wall::{Wall, WallMotion, WallShape};
pub use world::{
    write_snapshot_csv, Aabb, ContactKey, Particle, SimConfig, Snapshot, SnapshotRow, StepStats,
    World,
};

use thiserror::Error;

pub type Vec3 = nalgebra::Vector3<f64>;

#[derive(Debug, Error)]
pub enum DemError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("particle {id} escaped the grid domain at ({x:.4}, {y:.4}, {z:.4})")]
    DomainOverflow { id: u32, x: f64, y: f64, z: f64 },
}
