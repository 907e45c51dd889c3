use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::measure::measure_repose_angle;
use super::{sample_radius, ReposeResult, RigError, RigMaterials, SizeDistribution};
use crate::dem::{write_snapshot_csv, Aabb, Particle, SimConfig, Vec3, Wall, WallShape, World};
use crate::scaling::standard_gravity;

/// Funnel-discharge angle-of-repose rig: particles are generated inside a
/// conical funnel, drain through a short spout onto a circular base plate,
/// and settle into a pile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReposeRig {
    pub orifice_diameter: f64,
    pub plate_diameter: f64,
    /// Spout exit height above the plate, m.
    pub discharge_height: f64,
    pub particle_count: usize,
    /// 1/s
    pub generation_rate: f64,
    /// Settling budget after which the pile is measured regardless, s.
    pub settle_time: f64,
    /// Funnel wall angle from horizontal, deg. Not fixed by the source
    /// campaign; steep enough that grains drain freely.
    pub funnel_wall_angle: f64,
    /// Mean kinetic energy per particle below which the pile counts as
    /// settled, J.
    pub settle_mean_ke: f64,
}

impl ReposeRig {
    /// Desk-scale preset: 2000 particles.
    pub fn desk_scale() -> Self {
        Self {
            orifice_diameter: 0.020,
            plate_diameter: 0.080,
            discharge_height: 0.075,
            particle_count: 2000,
            generation_rate: 10_000.0,
            settle_time: 12.0,
            funnel_wall_angle: 60.0,
            settle_mean_ke: 1e-8,
        }
    }

    /// Full-scale preset: 10000 particles, as in the physical campaign.
    pub fn full_scale() -> Self {
        Self {
            particle_count: 10_000,
            ..Self::desk_scale()
        }
    }

    pub fn validate(&self) -> Result<(), RigError> {
        if self.particle_count == 0 {
            return Err(RigError::EmptyExperiment);
        }
        if !(self.orifice_diameter < self.plate_diameter) {
            return Err(RigError::InvalidInput(format!(
                "orifice {} must be smaller than the plate {}",
                self.orifice_diameter, self.plate_diameter
            )));
        }
        for (name, v) in [
            ("orifice_diameter", self.orifice_diameter),
            ("plate_diameter", self.plate_diameter),
            ("discharge_height", self.discharge_height),
            ("generation_rate", self.generation_rate),
            ("settle_time", self.settle_time),
            ("funnel_wall_angle", self.funnel_wall_angle),
            ("settle_mean_ke", self.settle_mean_ke),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(RigError::InvalidInput(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of one repose simulation, with runtime diagnostics alongside the
/// measurement.
#[derive(Debug, Clone)]
pub struct ReposeRun {
    pub result: ReposeResult,
    pub generated: usize,
    /// Particles measured after stragglers and spills are excluded.
    pub measured: usize,
    pub sim_time: f64,
    pub max_overlap_frac: f64,
}

/// Run the repose rig: generate, drain, settle, measure.
///
/// When `snapshot_dir` is given, particle snapshots are written there as CSV
/// every `config.snapshot_interval` plus one final `pile.csv`, whose path is
/// recorded in the result.
pub fn run_repose(
    rig: &ReposeRig,
    dist: &SizeDistribution,
    scale_h: f64,
    materials: &RigMaterials,
    config: &SimConfig,
    snapshot_dir: Option<&Path>,
) -> Result<ReposeRun, RigError> {
    rig.validate()?;
    dist.validate()?;
    if !(scale_h > 0.0) {
        return Err(RigError::InvalidInput(format!(
            "scale factor must be positive, got {scale_h}"
        )));
    }

    let r_max = dist.max_radius(scale_h);
    let plate_r = rig.plate_diameter / 2.0;
    let orifice_r = rig.orifice_diameter / 2.0;
    let spout_len = 0.010;
    let spout_top = rig.discharge_height + spout_len;
    let cone_slope = rig.funnel_wall_angle.to_radians().tan();
    let cone_top_r = plate_r.max(orifice_r + 0.03);
    let cone_h = (cone_top_r - orifice_r) * cone_slope;

    let lateral = cone_top_r.max(plate_r) + 0.08;
    let domain = Aabb::new(
        Vec3::new(-lateral, -lateral, -0.06),
        Vec3::new(lateral, lateral, spout_top + cone_h + 0.05),
    );
    let mut world = World::new(materials.table.clone(), standard_gravity(), domain);
    // Base plate: a disc is the height-zero frustum.
    world.walls.push(Wall::fixed(
        WallShape::Frustum {
            base: Vec3::zeros(),
            axis: Vec3::z(),
            radius_lo: 0.0,
            radius_hi: plate_r,
            height: 0.0,
        },
        materials.wall,
    ));
    // Spout and funnel cone.
    world.walls.push(Wall::fixed(
        WallShape::Cylinder {
            base: Vec3::new(0.0, 0.0, rig.discharge_height),
            axis: Vec3::z(),
            radius: orifice_r,
            height: spout_len,
        },
        materials.wall,
    ));
    world.walls.push(Wall::fixed(
        WallShape::Frustum {
            base: Vec3::new(0.0, 0.0, spout_top),
            axis: Vec3::z(),
            radius_lo: orifice_r,
            radius_hi: cone_top_r,
            height: cone_h,
        },
        materials.wall,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let spawn_z = spout_top + 0.35 * cone_h;
    let spawn_disc_r = (orifice_r + 0.35 * cone_h / cone_slope - r_max - 1e-3).max(orifice_r);

    let mut generated = 0usize;
    let mut next_id = 0u32;
    let mut next_snapshot = config.snapshot_interval;
    let mut last_check_ke = f64::INFINITY;
    let kill_z = -0.02;

    if let Some(dir) = snapshot_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| RigError::InvalidInput(format!("snapshot dir: {e}")))?;
    }

    let check_every = 500usize;
    let spawn_every = 100usize;
    let mut step_count = 0usize;
    loop {
        // Dribble new particles in at the configured rate, in batches so the
        // overlap rejection stays cheap when a backlog builds up.
        if step_count % spawn_every == 0 && generated < rig.particle_count {
            let due = ((world.time * rig.generation_rate) as usize).min(rig.particle_count);
            let batch = (due.saturating_sub(generated)).min(32);
            if batch > 0 {
                let near_spawn: Vec<(Vec3, f64)> = world
                    .particles
                    .iter()
                    .filter(|p| p.position.z > spawn_z - 6.0 * r_max)
                    .map(|p| (p.position, p.radius))
                    .collect();
                let mut fresh: Vec<(Vec3, f64)> = Vec::with_capacity(batch);
                for _ in 0..batch {
                    let radius = sample_radius(dist, scale_h, &mut rng)?;
                    for _attempt in 0..8 {
                        let rho = (spawn_disc_r - radius).max(0.0) * rng.gen::<f64>().sqrt();
                        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
                        let pos = Vec3::new(rho * phi.cos(), rho * phi.sin(), spawn_z + radius);
                        let clear = near_spawn
                            .iter()
                            .chain(fresh.iter())
                            .all(|(q, qr)| (q - pos).norm() > (qr + radius) * 1.05);
                        if clear {
                            world.add_particle(Particle {
                                id: next_id,
                                radius,
                                position: pos,
                                velocity: Vec3::new(0.0, 0.0, -0.3),
                                angular_velocity: Vec3::zeros(),
                                material: materials.grain,
                            });
                            fresh.push((pos, radius));
                            next_id += 1;
                            generated += 1;
                            break;
                        }
                    }
                }
            }
        }

        world = world.step(config)?;
        step_count += 1;

        if world.time >= next_snapshot {
            next_snapshot += config.snapshot_interval;
            if let Some(dir) = snapshot_dir {
                let path = dir.join(format!("snapshot_{:07}ms.csv", (world.time * 1e3) as u64));
                write_snapshot_csv(&world.snapshot(), &path)
                    .map_err(|e| RigError::InvalidInput(format!("snapshot write: {e}")))?;
            }
        }

        if step_count % check_every == 0 {
            // Prune spills: below the plate, or past the rim at plate level
            // on their way down.
            let spill_rho = plate_r + 2.0 * r_max;
            let spill_z = 0.5 * rig.discharge_height;
            world.retain_particles(|p| {
                let rho = (p.position.x * p.position.x + p.position.y * p.position.y).sqrt();
                p.position.z > kill_z && !(rho > spill_rho && p.position.z < spill_z)
            });
            let all_spawned = generated >= rig.particle_count;
            if all_spawned && !world.particles.is_empty() {
                let ke = world.kinetic_energy() / world.particles.len() as f64;
                last_check_ke = ke;
                if ke < rig.settle_mean_ke || world.time >= rig.settle_time {
                    break;
                }
            }
            if world.time >= config.duration {
                return Err(RigError::Timeout {
                    duration: config.duration,
                    kinetic: last_check_ke,
                    snapshot: Box::new(world.snapshot()),
                });
            }
        }
    }

    // Measure the pile: drop anything still inside the funnel or spout.
    let cutoff = 0.8 * rig.discharge_height;
    let mut snap = world.snapshot();
    snap.rows.retain(|r| r.z < cutoff);
    let measured = snap.rows.len();
    let mut result = measure_repose_angle(&snap)?;
    if let Some(dir) = snapshot_dir {
        let path = dir.join("pile.csv");
        write_snapshot_csv(&snap, &path)
            .map_err(|e| RigError::InvalidInput(format!("snapshot write: {e}")))?;
        result.snapshot_path = Some(path);
    }
    Ok(ReposeRun {
        result,
        generated,
        measured,
        sim_time: world.time,
        max_overlap_frac: world.stats.max_overlap_frac,
    })
}
