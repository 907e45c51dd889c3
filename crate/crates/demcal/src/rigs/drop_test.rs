use serde::{Deserialize, Serialize};

use super::{RigError, RigMaterials};
use crate::dem::{Aabb, ContactParams, Particle, SimConfig, Vec3, Wall, WallShape, World};
use crate::scaling::standard_gravity;

/// Single-particle bounce test: free drop onto a horizontal plate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DropRig {
    /// Release height of the particle surface above the plate, m.
    pub drop_height: f64,
    pub plate_length: f64,
    pub plate_width: f64,
    pub particle_radius: f64,
}

impl Default for DropRig {
    fn default() -> Self {
        Self {
            drop_height: 0.150,
            plate_length: 0.100,
            plate_width: 0.060,
            particle_radius: 2e-3,
        }
    }
}

impl DropRig {
    pub fn validate(&self) -> Result<(), RigError> {
        for (name, v) in [
            ("drop_height", self.drop_height),
            ("plate_length", self.plate_length),
            ("plate_width", self.plate_width),
            ("particle_radius", self.particle_radius),
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

/// Drop one particle from rest and return the apex height of its first
/// rebound above the plate surface (measured at the particle surface, so a
/// perfectly elastic bounce returns `drop_height`).
///
/// The particle-wall restitution is forced to `e` with both friction
/// coefficients nulled, mirroring the bench protocol.
pub fn run_drop(
    rig: &DropRig,
    e: f64,
    materials: &RigMaterials,
    config: &SimConfig,
) -> Result<f64, RigError> {
    rig.validate()?;
    if !(e > 0.0 && e <= 1.0) {
        return Err(RigError::InvalidInput(format!(
            "restitution must lie in (0, 1], got {e}"
        )));
    }

    let mut mats = materials.clone();
    mats.table
        .set_pair(mats.grain, mats.wall, ContactParams::new(e, 0.0, 0.0)?)?;

    let r = rig.particle_radius;
    let top = rig.drop_height + 2.0 * r + 0.05;
    let domain = Aabb::new(
        Vec3::new(-rig.plate_length, -rig.plate_length, -0.05),
        Vec3::new(rig.plate_length, rig.plate_length, top),
    );
    let mut world = World::new(mats.table, standard_gravity(), domain);
    world.walls.push(Wall::fixed(
        WallShape::Rectangle {
            center: Vec3::zeros(),
            u: Vec3::x(),
            v: Vec3::y(),
            half_u: rig.plate_length / 2.0,
            half_v: rig.plate_width / 2.0,
        },
        mats.wall,
    ));
    world.add_particle(Particle {
        id: 0,
        radius: r,
        position: Vec3::new(0.0, 0.0, rig.drop_height + r),
        velocity: Vec3::zeros(),
        angular_velocity: Vec3::zeros(),
        material: mats.grain,
    });

    let mut touched = false;
    let mut released = false;
    let mut apex: f64 = 0.0;
    let max_steps = (config.duration / config.timestep).ceil() as usize;
    for _ in 0..max_steps {
        world = world.step(config)?;
        let p = &world.particles[0];
        if p.position.z - r < -1e-4 {
            return Err(RigError::Geometry(format!(
                "particle missed the plate at ({:.4}, {:.4})",
                p.position.x, p.position.y
            )));
        }
        if !world.contact_history.is_empty() {
            touched = true;
        } else if touched {
            released = true;
        }
        if released {
            apex = apex.max(p.position.z);
            if p.velocity.z < 0.0 {
                // Past the first-rebound apex.
                return Ok(apex - r);
            }
        }
    }
    Err(RigError::Geometry(
        "first rebound did not complete within the configured duration".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dem::stable_timestep;

    fn materials() -> RigMaterials {
        RigMaterials::salt_steel(
            0.275,
            ContactParams::frictionless(0.5),
            ContactParams::frictionless(0.5),
        )
        .unwrap()
    }

    fn config(rig: &DropRig, mats: &RigMaterials) -> SimConfig {
        let dt = stable_timestep(
            &[mats.table.material(mats.grain)],
            rig.particle_radius,
            0.3,
        )
        .unwrap();
        SimConfig {
            timestep: dt,
            duration: 2.0,
            grid_cell: 4.0 * rig.particle_radius,
            rng_seed: 0,
            snapshot_interval: 1.0,
            deterministic: false,
        }
    }

    #[test]
    fn elastic_bounce_returns_to_release_height() {
        let rig = DropRig::default();
        let mats = materials();
        let cfg = config(&rig, &mats);
        let h = run_drop(&rig, 1.0, &mats, &cfg).unwrap();
        assert!(
            (h / rig.drop_height - 1.0).abs() < 0.02,
            "elastic rebound {h} vs drop {}",
            rig.drop_height
        );
    }

    #[test]
    fn rebound_tracks_e_squared() {
        let rig = DropRig::default();
        let mats = materials();
        let cfg = config(&rig, &mats);
        // e = 0.55 should land near e^2 * H = 45.4 mm.
        let h = run_drop(&rig, 0.55, &mats, &cfg).unwrap();
        assert!(
            (0.042..=0.049).contains(&h),
            "rebound {h} m outside the expected band"
        );
    }

    #[test]
    fn rebound_monotone_in_restitution() {
        let rig = DropRig::default();
        let mats = materials();
        let cfg = config(&rig, &mats);
        let mut prev = 0.0;
        for e in [0.4, 0.5, 0.6, 0.7] {
            let h = run_drop(&rig, e, &mats, &cfg).unwrap();
            assert!(h > prev, "rebound must increase with e: {prev} -> {h}");
            prev = h;
        }
    }

    #[test]
    fn measured_ratio_matches_configured_e() {
        let rig = DropRig::default();
        let mats = materials();
        let cfg = config(&rig, &mats);
        for e in [0.4, 0.6, 0.8] {
            let h = run_drop(&rig, e, &mats, &cfg).unwrap();
            let measured = (h / rig.drop_height).sqrt();
            assert!(
                (measured - e).abs() < 0.03,
                "sqrt(h/H) = {measured} vs e = {e}"
            );
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        let rig = DropRig::default();
        let mats = materials();
        let cfg = config(&rig, &mats);
        assert!(run_drop(&rig, 0.0, &mats, &cfg).is_err());
        assert!(run_drop(&rig, 1.5, &mats, &cfg).is_err());
        let bad = DropRig {
            drop_height: -1.0,
            ..DropRig::default()
        };
        assert!(run_drop(&bad, 0.5, &mats, &cfg).is_err());
    }
}
