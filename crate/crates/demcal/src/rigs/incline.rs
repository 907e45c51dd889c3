use serde::{Deserialize, Serialize};

use super::{RigError, RigMaterials};
use crate::dem::{
    Aabb, ContactParams, Particle, SimConfig, Vec3, Wall, WallMotion, WallShape, World,
};
use crate::scaling::standard_gravity;

/// Tilting-plate test for the particle-wall static friction coefficient.
///
/// Four rotation-locked particles rest on a plate that is hinged along one
/// edge and rotated at a constant rate; the returned angle is the plate tilt
/// when any particle's in-plane displacement (in the plate frame) exceeds
/// `slide_threshold`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InclineRig {
    pub plate_length: f64,
    pub plate_width: f64,
    /// deg/s
    pub angular_rate: f64,
    /// deg
    pub max_angle: f64,
    /// Initial drop height of the particles above the plate, m.
    pub particle_seed_height: f64,
    /// In-plane displacement that counts as sliding, m.
    pub slide_threshold: f64,
    pub particle_radius: f64,
    /// Settling time before the tilt engages, s.
    pub tilt_delay: f64,
}

impl Default for InclineRig {
    fn default() -> Self {
        Self {
            plate_length: 0.080,
            plate_width: 0.060,
            angular_rate: 5.0,
            max_angle: 80.0,
            particle_seed_height: 3e-3,
            slide_threshold: 1e-3,
            particle_radius: 2e-3,
            tilt_delay: 0.3,
        }
    }
}

impl InclineRig {
    pub fn validate(&self) -> Result<(), RigError> {
        if !(self.angular_rate > 0.0) {
            return Err(RigError::InvalidInput(format!(
                "angular rate must be positive, got {}",
                self.angular_rate
            )));
        }
        if !(self.max_angle > 0.0 && self.max_angle <= 90.0) {
            return Err(RigError::InvalidInput(format!(
                "max angle must lie in (0, 90], got {}",
                self.max_angle
            )));
        }
        for (name, v) in [
            ("plate_length", self.plate_length),
            ("plate_width", self.plate_width),
            ("particle_seed_height", self.particle_seed_height),
            ("slide_threshold", self.slide_threshold),
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

/// Returns the sliding-onset plate angle in degrees for the given
/// particle-wall static friction coefficient.
///
/// Rolling friction and all particle-particle parameters are nulled,
/// mirroring the bench protocol where the test grains are bonded and cannot
/// roll; the particles' angular velocities are likewise held at zero.
pub fn run_incline(
    rig: &InclineRig,
    mu_s: f64,
    materials: &RigMaterials,
    config: &SimConfig,
) -> Result<f64, RigError> {
    rig.validate()?;
    if !(mu_s >= 0.0 && mu_s.is_finite()) {
        return Err(RigError::InvalidInput(format!(
            "static friction must be >= 0, got {mu_s}"
        )));
    }

    let mut mats = materials.clone();
    mats.table
        .set_pair(mats.grain, mats.wall, ContactParams::new(0.5, mu_s, 0.0)?)?;
    mats.table
        .set_pair(mats.grain, mats.grain, ContactParams::new(1.0, 0.0, 0.0)?)?;

    let r = rig.particle_radius;
    let l = rig.plate_length;
    let span = l + 0.05;
    let domain = Aabb::new(
        Vec3::new(-span, -span, -span),
        Vec3::new(span, span, span),
    );
    let mut world = World::new(mats.table, standard_gravity(), domain);

    // Hinged along the y axis at x = 0; a positive rate about +y dips the
    // far (+x) side downward.
    let rate = rig.angular_rate.to_radians();
    world.walls.push(Wall::rotating(
        WallShape::Rectangle {
            center: Vec3::new(l / 2.0, 0.0, 0.0),
            u: Vec3::x(),
            v: Vec3::y(),
            half_u: l / 2.0,
            half_v: rig.plate_width / 2.0,
        },
        mats.wall,
        WallMotion {
            axis_point: Vec3::zeros(),
            axis_dir: Vec3::y(),
            rate,
            t_start: rig.tilt_delay,
        },
    ));

    let spacing = 2.5 * r;
    for (i, (dx, dy)) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)]
        .iter()
        .enumerate()
    {
        world.add_particle(Particle {
            id: i as u32,
            radius: r,
            position: Vec3::new(
                l / 2.0 + dx * spacing,
                dy * spacing,
                r + rig.particle_seed_height,
            ),
            velocity: Vec3::zeros(),
            angular_velocity: Vec3::zeros(),
            material: mats.grain,
        });
    }

    let mut baseline: Option<Vec<Vec3>> = None;
    let max_time = rig.tilt_delay + rig.max_angle / rig.angular_rate + 1.0;
    let max_steps = (max_time / config.timestep).ceil() as usize;
    for _ in 0..max_steps {
        world = world.step(config)?;
        // Bonded grains cannot roll relative to the plate: slave their spin
        // to the plate's. A world-frame zero lock would instead make a
        // sticking ball's center creep through the plate frame at
        // omega * radius, contaminating the slide detection.
        let plate_omega = if world.time >= rig.tilt_delay {
            rate * Vec3::y()
        } else {
            Vec3::zeros()
        };
        for p in &mut world.particles {
            p.angular_velocity = plate_omega;
        }
        if world.time < rig.tilt_delay {
            continue;
        }
        let wall = &world.walls[0];
        let refs: Vec<Vec3> = world
            .particles
            .iter()
            .map(|p| wall.to_reference(p.position, world.time))
            .collect();
        match &baseline {
            None => baseline = Some(refs),
            Some(base) => {
                let slid = refs.iter().zip(base).any(|(now, then)| {
                    let d = now - then;
                    (d.x * d.x + d.y * d.y).sqrt() > rig.slide_threshold
                });
                if slid {
                    return Ok(wall.angle_at(world.time).to_degrees());
                }
            }
        }
        let angle = world.walls[0].angle_at(world.time).to_degrees();
        if angle >= rig.max_angle {
            return Err(RigError::NoSlide {
                max_angle: rig.max_angle,
            });
        }
    }
    Err(RigError::NoSlide {
        max_angle: rig.max_angle,
    })
}
