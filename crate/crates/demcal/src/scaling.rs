//! Particle coarse-graining: scale factors from dimensional analysis and the
//! dimensionless collision groups that certify scale fidelity.
//!
//! With density held fixed and the elastic modulus scale pinned to one, a
//! length scale factor `h` forces `lambda_T = h` and therefore velocity
//! invariance; mass scales as `h^3` and force as `h^2`. Gravity is an
//! acceleration and is deliberately left untouched by [`apply_scaling`]: the
//! coarse-grained system lives in the same lab frame as the original.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dem::{Vec3, WallShape, World};

#[derive(Debug, Error)]
pub enum ScalingError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Scale factors for the coarse-graining factor `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleSet {
    pub h: f64,
    pub lambda_l: f64,
    pub lambda_rho: f64,
    pub lambda_m: f64,
    pub lambda_f: f64,
    pub lambda_e: f64,
    pub lambda_t: f64,
    pub lambda_v: f64,
}

/// Dimensionless groups of the normal-collision equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessGroups {
    pub pi1: f64,
    pub pi2: f64,
    pub pi3: f64,
}

/// Build the full scale set for length factor `h`.
///
/// `lambda_T` follows from requiring a unit modulus scale
/// (`lambda_E = lambda_rho lambda_L^2 lambda_T^-2 = 1`), which in turn makes
/// velocities scale-invariant.
pub fn scale_factors(h: f64) -> Result<ScaleSet, ScalingError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(ScalingError::InvalidInput(format!(
            "scale factor h must be positive, got {h}"
        )));
    }
    Ok(ScaleSet {
        h,
        lambda_l: h,
        lambda_rho: 1.0,
        lambda_m: h * h * h,
        lambda_f: h * h,
        lambda_e: 1.0,
        lambda_t: h,
        lambda_v: 1.0,
    })
}

/// Scale every length in the world (positions, radii, wall dimensions) by
/// `lambda_L` and every velocity by `lambda_V`; densities and gravity are
/// unchanged.
pub fn apply_scaling(world: &World, s: &ScaleSet) -> World {
    let mut out = world.clone();
    let l = s.lambda_l;
    let v = s.lambda_v;
    for p in &mut out.particles {
        p.radius *= l;
        p.position *= l;
        p.velocity *= v;
        // Angular velocity is velocity over length.
        p.angular_velocity *= v / l;
    }
    for w in &mut out.walls {
        scale_shape(&mut w.shape, l);
        if let Some(m) = &mut w.motion {
            m.axis_point *= l;
        }
    }
    out.domain.min *= l;
    out.domain.max *= l;
    for hist in out.contact_history.values_mut() {
        *hist *= l;
    }
    out
}

fn scale_shape(shape: &mut WallShape, l: f64) {
    match shape {
        WallShape::Rectangle {
            center,
            half_u,
            half_v,
            ..
        } => {
            *center *= l;
            *half_u *= l;
            *half_v *= l;
        }
        WallShape::Frustum {
            base,
            radius_lo,
            radius_hi,
            height,
            ..
        } => {
            *base *= l;
            *radius_lo *= l;
            *radius_hi *= l;
            *height *= l;
        }
        WallShape::Cylinder {
            base,
            radius,
            height,
            ..
        } => {
            *base *= l;
            *radius *= l;
            *height *= l;
        }
    }
}

/// Dimensionless groups `pi1 = 4 pi b^3 / (3 (1 + b^3))`,
/// `pi2 = k_n / (r_i rho v0^2)`, `pi3 = c_n / (r_i^2 rho v0)`.
///
/// Contact stiffness and damping are emergent in the Hertz model, so they are
/// taken as explicit analysis inputs rather than read from a world.
pub fn dimensionless_groups(
    k_n: f64,
    c_n: f64,
    r_i: f64,
    rho: f64,
    v0: f64,
    beta: f64,
) -> Result<DimensionlessGroups, ScalingError> {
    for (name, v) in [
        ("k_n", k_n),
        ("c_n", c_n),
        ("r_i", r_i),
        ("rho", rho),
        ("v0", v0),
        ("beta", beta),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ScalingError::InvalidInput(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    let b3 = beta * beta * beta;
    Ok(DimensionlessGroups {
        pi1: 4.0 * std::f64::consts::PI * b3 / (3.0 * (1.0 + b3)),
        pi2: k_n / (r_i * rho * v0 * v0),
        pi3: c_n / (r_i * r_i * rho * v0),
    })
}

/// Gravity vector shared by the rigs.
pub fn standard_gravity() -> Vec3 {
    Vec3::new(0.0, 0.0, -9.81)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dem::{Aabb, ContactParams, ContactTable, Material, Particle, Wall};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn identity_scaling() {
        let s = scale_factors(1.0).unwrap();
        assert_eq!(
            s,
            ScaleSet {
                h: 1.0,
                lambda_l: 1.0,
                lambda_rho: 1.0,
                lambda_m: 1.0,
                lambda_f: 1.0,
                lambda_e: 1.0,
                lambda_t: 1.0,
                lambda_v: 1.0,
            }
        );
    }

    #[test]
    fn paper_factor_two() {
        let s = scale_factors(2.0).unwrap();
        assert_eq!(s.lambda_m, 8.0);
        assert_eq!(s.lambda_f, 4.0);
        assert_eq!(s.lambda_e, 1.0);
        assert_eq!(s.lambda_v, 1.0);
        assert!(scale_factors(0.0).is_err());
        assert!(scale_factors(-2.0).is_err());
    }

    proptest! {
        #[test]
        fn force_scale_is_dimensionally_consistent(h in 0.01f64..100.0) {
            let s = scale_factors(h).unwrap();
            // lambda_F = lambda_M lambda_L / lambda_T^2
            prop_assert!((s.lambda_f - s.lambda_m * s.lambda_l / (s.lambda_t * s.lambda_t)).abs()
                <= 1e-12 * s.lambda_f);
        }

        #[test]
        fn scaling_round_trips(h in 0.1f64..10.0) {
            let w = demo_world();
            let up = apply_scaling(&w, &scale_factors(h).unwrap());
            let back = apply_scaling(&up, &scale_factors(1.0 / h).unwrap());
            for (a, b) in w.particles.iter().zip(back.particles.iter()) {
                prop_assert!((a.radius - b.radius).abs() <= 1e-12 * a.radius);
                prop_assert!((a.position - b.position).norm() <= 1e-12 * a.position.norm().max(1.0));
            }
        }
    }

    fn demo_world() -> World {
        let mut table = ContactTable::new();
        let salt = table
            .add_material(Material::new("salt", 1210.0, 0.25, 1.9e9).unwrap())
            .unwrap();
        table
            .set_pair(salt, salt, ContactParams::frictionless(0.5))
            .unwrap();
        let mut w = World::new(
            table,
            standard_gravity(),
            Aabb::new(Vec3::new(-1.0, -1.0, -1.0), Vec3::new(1.0, 1.0, 1.0)),
        );
        w.add_particle(Particle {
            id: 0,
            radius: 1e-3,
            position: Vec3::new(0.01, -0.02, 0.005),
            velocity: Vec3::new(0.5, 0.0, -0.1),
            angular_velocity: Vec3::new(0.0, 3.0, 0.0),
            material: salt,
        });
        w.walls.push(Wall::fixed(
            WallShape::Frustum {
                base: Vec3::new(0.0, 0.0, 0.075),
                axis: Vec3::z(),
                radius_lo: 0.01,
                radius_hi: 0.05,
                height: 0.07,
            },
            salt,
        ));
        w
    }

    #[test]
    fn scaling_world_by_two_doubles_lengths_and_octuples_mass() {
        let w = demo_world();
        let s = scale_factors(2.0).unwrap();
        let scaled = apply_scaling(&w, &s);
        let p0 = &w.particles[0];
        let p1 = &scaled.particles[0];
        assert_relative_eq!(p1.radius, 2.0 * p0.radius, max_relative = 1e-15);
        assert_relative_eq!(p1.position.x, 2.0 * p0.position.x, max_relative = 1e-15);
        assert_relative_eq!(p1.velocity.norm(), p0.velocity.norm(), max_relative = 1e-15);
        // mass = 4/3 pi r^3 rho: doubling r at fixed rho gives 8x.
        let m0 = p0.mass(&w.table);
        let m1 = p1.mass(&scaled.table);
        assert_relative_eq!(m1, 8.0 * m0, max_relative = 1e-12);
        // Identity leaves everything alone.
        let same = apply_scaling(&w, &scale_factors(1.0).unwrap());
        assert_eq!(same.particles[0].position, p0.position);
        assert_eq!(same.particles[0].radius, p0.radius);
    }

    #[test]
    fn groups_at_unit_beta_and_invariances() {
        let g = dimensionless_groups(1000.0, 0.01, 1e-3, 1210.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(g.pi1, 2.0 * PI / 3.0, max_relative = 1e-15);

        // k_n ~ h, r_i ~ h leaves pi2 unchanged; c_n ~ h^2 leaves pi3 unchanged.
        let h = 2.0;
        let gs = dimensionless_groups(1000.0 * h, 0.01 * h * h, 1e-3 * h, 1210.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(gs.pi2, g.pi2, max_relative = 1e-15);
        assert_relative_eq!(gs.pi3, g.pi3, max_relative = 1e-15);

        assert!(dimensionless_groups(1000.0, 0.01, 0.0, 1210.0, 1.0, 1.0).is_err());
        assert!(dimensionless_groups(1000.0, 0.01, 1e-3, 1210.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn collision_scale_fidelity_force_ratio_h_squared() {
        // The same head-on collision at h = 1 and h = 2: peak contact force
        // in ratio h^2, rebound speed unchanged.
        let run = |h: f64| -> (f64, f64) {
            let mut w = demo_world();
            w.gravity = Vec3::zeros();
            w.walls.clear();
            w.particles.clear();
            let r = 1e-3;
            let gap = 1e-5;
            let salt = crate::dem::MaterialId(0);
            for (id, sign) in [(0u32, 1.0f64), (1, -1.0)] {
                w.add_particle(Particle {
                    id,
                    radius: r,
                    position: Vec3::new(-sign * (r + 0.5 * gap), 0.0, 0.0),
                    velocity: Vec3::new(sign * 1.0, 0.0, 0.0),
                    angular_velocity: Vec3::zeros(),
                    material: salt,
                });
            }
            let w0 = apply_scaling(&w, &scale_factors(h).unwrap());
            let mut world = w0;
            let cfg = crate::dem::SimConfig {
                timestep: 2e-9 * h, // lambda_T = h keeps the resolution matched
                duration: 1.0,
                grid_cell: 2.5e-3 * h,
                rng_seed: 0,
                snapshot_interval: 1.0,
                deterministic: true,
            };
            let m = world.particles[0].mass(&world.table);
            let mut peak_force: f64 = 0.0;
            let mut prev_v = world.particles[0].velocity;
            let mut touched = false;
            for _ in 0..200_000 {
                world = world.step(&cfg).unwrap();
                let dv = world.particles[0].velocity - prev_v;
                prev_v = world.particles[0].velocity;
                peak_force = peak_force.max((dv / cfg.timestep * m).norm());
                if !world.contact_history.is_empty() {
                    touched = true;
                } else if touched {
                    break;
                }
            }
            assert!(touched);
            (peak_force, world.particles[0].velocity.norm())
        };
        let (f1, v1) = run(1.0);
        let (f2, v2) = run(2.0);
        assert!((f2 / f1 / 4.0 - 1.0).abs() < 0.05, "force ratio {}", f2 / f1);
        assert!((v2 / v1 - 1.0).abs() < 0.02, "speed ratio {}", v2 / v1);
    }
}
