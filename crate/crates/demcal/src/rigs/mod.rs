//! Virtual experiment rigs (repose funnel, rotating incline, drop test)
//! built on the DEM engine, plus the closed-form analyses of physical bench
//! data (density, restitution, static friction, direct shear).

mod bench;
mod drop_test;
mod incline;
mod measure;
mod repose;
mod size_dist;

pub use bench::{
    density_from_displacement, preshear_load, restitution_from_heights, shear_analysis,
    shear_load, static_friction_from_angle, stress_from_load, ShearFit,
};
pub use drop_test::{run_drop, DropRig};
pub use incline::{run_incline, InclineRig};
pub use measure::{measure_repose_angle, ReposeResult};
pub use repose::{run_repose, ReposeRig};
pub use size_dist::{sample_radius, SizeDistribution};

use thiserror::Error;

use crate::dem::{ContactParams, ContactTable, DemError, Material, MaterialId, Snapshot};

#[derive(Debug, Error)]
pub enum RigError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("empty experiment: no particles requested")]
    EmptyExperiment,
    #[error("pile did not settle within {duration} s (mean kinetic energy {kinetic} J)")]
    Timeout {
        duration: f64,
        kinetic: f64,
        snapshot: Box<Snapshot>,
    },
    #[error("no slide before the {max_angle} degree limit")]
    NoSlide { max_angle: f64 },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("degenerate pile: {0}")]
    DegeneratePile(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error(transparent)]
    Dem(#[from] DemError),
}

/// The two-material world shared by every rig: granular particles plus the
/// steel of the plates and funnel.
#[derive(Debug, Clone)]
pub struct RigMaterials {
    pub table: ContactTable,
    pub grain: MaterialId,
    pub wall: MaterialId,
}

impl RigMaterials {
    /// Salt grains (rho 1210 kg/m^3, G 1.9 GPa) against stainless steel
    /// (rho 7800 kg/m^3, nu 0.30, G 80 GPa).
    pub fn salt_steel(
        salt_poisson: f64,
        grain_grain: ContactParams,
        grain_wall: ContactParams,
    ) -> Result<Self, RigError> {
        let mut table = ContactTable::new();
        let grain = table.add_material(Material::new("salt", 1210.0, salt_poisson, 1.9e9)?)?;
        let wall = table.add_material(Material::new("steel", 7800.0, 0.30, 8.0e10)?)?;
        table.set_pair(grain, grain, grain_grain)?;
        table.set_pair(grain, wall, grain_wall)?;
        Ok(Self { table, grain, wall })
    }
}
