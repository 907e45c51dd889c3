use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ContactTable, DemError, MaterialId, Vec3, Wall};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Particle {
    pub id: u32,
    /// m
    pub radius: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    pub angular_velocity: Vec3,
    pub material: MaterialId,
}

impl Particle {
    pub fn mass(&self, table: &ContactTable) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.radius.powi(3) * table.material(self.material).density
    }

    /// Solid-sphere moment of inertia `2/5 m r^2`.
    pub fn inertia(&self, table: &ContactTable) -> f64 {
        0.4 * self.mass(table) * self.radius * self.radius
    }
}

/// Identifier of a touching pair, used to key the tangential contact history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContactKey {
    /// Particle ids in ascending order.
    ParticleParticle(u32, u32),
    /// Particle id, wall index.
    ParticleWall(u32, u32),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimConfig {
    /// s
    pub timestep: f64,
    /// s
    pub duration: f64,
    /// Neighbor-grid cell edge; must be at least the largest particle diameter.
    pub grid_cell: f64,
    pub rng_seed: u64,
    /// s; snapshots are emitted by the rig drivers at this cadence.
    pub snapshot_interval: f64,
    /// When set, force assembly runs serially in canonical pair order.
    /// Results are bit-identical either way; the flag trades speed for a
    /// single-threaded execution trace.
    pub deterministic: bool,
}

impl SimConfig {
    pub fn validate(&self, largest_diameter: f64) -> Result<(), DemError> {
        if !(self.timestep > 0.0 && self.timestep.is_finite()) {
            return Err(DemError::InvalidInput(format!(
                "timestep must be positive, got {}",
                self.timestep
            )));
        }
        if self.grid_cell < largest_diameter {
            return Err(DemError::InvalidInput(format!(
                "grid cell {} is smaller than the largest particle diameter {}",
                self.grid_cell, largest_diameter
            )));
        }
        Ok(())
    }
}

/// Per-step diagnostics, accumulated across a run.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepStats {
    /// Largest overlap/radius ratio seen so far.
    pub max_overlap_frac: f64,
    pub active_contacts: usize,
}

/// Full simulator state. `step` consumes a world by value and returns the
/// advanced one; rig drivers own their world exclusively.
#[derive(Debug, Clone)]
pub struct World {
    pub particles: Vec<Particle>,
    pub walls: Vec<Wall>,
    pub gravity: Vec3,
    pub contact_history: HashMap<ContactKey, Vec3>,
    pub time: f64,
    pub domain: Aabb,
    pub table: ContactTable,
    pub stats: StepStats,
}

impl World {
    pub fn new(table: ContactTable, gravity: Vec3, domain: Aabb) -> Self {
        Self {
            particles: Vec::new(),
            walls: Vec::new(),
            gravity,
            contact_history: HashMap::new(),
            time: 0.0,
            domain,
            table,
            stats: StepStats::default(),
        }
    }

    pub fn add_particle(&mut self, p: Particle) {
        debug_assert!(
            self.particles.iter().all(|q| q.id != p.id),
            "duplicate particle id {}",
            p.id
        );
        self.particles.push(p);
    }

    pub fn max_radius(&self) -> f64 {
        self.particles.iter().map(|p| p.radius).fold(0.0, f64::max)
    }

    /// Total linear momentum of all particles.
    pub fn momentum(&self) -> Vec3 {
        self.particles
            .iter()
            .map(|p| p.mass(&self.table) * p.velocity)
            .sum()
    }

    /// Total kinetic energy (translational + rotational).
    pub fn kinetic_energy(&self) -> f64 {
        self.particles
            .iter()
            .map(|p| {
                0.5 * p.mass(&self.table) * p.velocity.norm_squared()
                    + 0.5 * p.inertia(&self.table) * p.angular_velocity.norm_squared()
            })
            .sum()
    }

    /// Remove particles for which `keep` is false (e.g. fallen off a plate),
    /// clearing any contact history that references them.
    pub fn retain_particles(&mut self, keep: impl Fn(&Particle) -> bool) {
        let removed: Vec<u32> = self
            .particles
            .iter()
            .filter(|p| !keep(p))
            .map(|p| p.id)
            .collect();
        if removed.is_empty() {
            return;
        }
        self.particles.retain(|p| keep(p));
        self.contact_history.retain(|k, _| match k {
            ContactKey::ParticleParticle(a, b) => !removed.contains(a) && !removed.contains(b),
            ContactKey::ParticleWall(a, _) => !removed.contains(a),
        });
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            time: self.time,
            rows: self
                .particles
                .iter()
                .map(|p| SnapshotRow {
                    id: p.id,
                    x: p.position.x,
                    y: p.position.y,
                    z: p.position.z,
                    radius: p.radius,
                    vx: p.velocity.x,
                    vy: p.velocity.y,
                    vz: p.velocity.z,
                    wx: p.angular_velocity.x,
                    wy: p.angular_velocity.y,
                    wz: p.angular_velocity.z,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub radius: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
    pub wx: f64,
    pub wy: f64,
    pub wz: f64,
}

/// Particle state capture in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub time: f64,
    pub rows: Vec<SnapshotRow>,
}

/// Write a snapshot as CSV with header `id,x,y,z,radius,vx,vy,vz,wx,wy,wz`.
pub fn write_snapshot_csv(snapshot: &Snapshot, path: &Path) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "id,x,y,z,radius,vx,vy,vz,wx,wy,wz")?;
    for r in &snapshot.rows {
        writeln!(
            f,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.id, r.x, r.y, r.z, r.radius, r.vx, r.vy, r.vz, r.wx, r.wy, r.wz
        )?;
    }
    Ok(())
}
