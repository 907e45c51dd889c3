use nalgebra::{Rotation3, Unit};
use serde::{Deserialize, Serialize};

use super::{MaterialId, Vec3};

/// Prescribed rigid rotation of a wall about a fixed axis, engaging at
/// `t_start`. The rotation angle is `rate * max(0, t - t_start)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WallMotion {
    pub axis_point: Vec3,
    pub axis_dir: Vec3,
    /// rad/s
    pub rate: f64,
    /// s
    pub t_start: f64,
}

impl WallMotion {
    pub fn angle_at(&self, time: f64) -> f64 {
        self.rate * (time - self.t_start).max(0.0)
    }
}

/// Rigid wall geometry, described in its reference (unrotated) pose.
///
/// The frustum covers the lateral surface swept from `radius_lo` at the base
/// to `radius_hi` at `base + height * axis`; with `height = 0` it degenerates
/// to an annulus/disc, which is how flat circular plates are modelled.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum WallShape {
    Rectangle {
        center: Vec3,
        /// Unit in-plane axes; the rectangle spans `center ± half_u * u ± half_v * v`.
        u: Vec3,
        v: Vec3,
        half_u: f64,
        half_v: f64,
    },
    Frustum {
        base: Vec3,
        /// Unit axis direction.
        axis: Vec3,
        radius_lo: f64,
        radius_hi: f64,
        height: f64,
    },
    Cylinder {
        base: Vec3,
        axis: Vec3,
        radius: f64,
        height: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Wall {
    pub shape: WallShape,
    pub material: MaterialId,
    pub motion: Option<WallMotion>,
}

/// One resolved sphere-wall contact.
#[derive(Debug, Clone, Copy)]
pub struct WallContact {
    /// Unit normal pointing from the wall surface toward the particle center.
    pub normal: Vec3,
    pub overlap: f64,
    /// Contact point on the wall surface.
    pub point: Vec3,
    /// Wall surface velocity at the contact point.
    pub velocity: Vec3,
}

impl Wall {
    pub fn fixed(shape: WallShape, material: MaterialId) -> Self {
        Self {
            shape,
            material,
            motion: None,
        }
    }

    pub fn rotating(shape: WallShape, material: MaterialId, motion: WallMotion) -> Self {
        Self {
            shape,
            material,
            motion: Some(motion),
        }
    }

    /// Current rotation angle in radians (zero for fixed walls).
    pub fn angle_at(&self, time: f64) -> f64 {
        self.motion.as_ref().map_or(0.0, |m| m.angle_at(time))
    }

    /// Map a world-space point into the wall's reference pose.
    pub fn to_reference(&self, p: Vec3, time: f64) -> Vec3 {
        match &self.motion {
            None => p,
            Some(m) => {
                let rot = Rotation3::from_axis_angle(&Unit::new_normalize(m.axis_dir), -m.angle_at(time));
                m.axis_point + rot * (p - m.axis_point)
            }
        }
    }

    pub fn contact(&self, center: Vec3, radius: f64, time: f64) -> Option<WallContact> {
        let (p_ref, rot) = match &self.motion {
            None => (center, None),
            Some(m) => {
                let angle = m.angle_at(time);
                let axis = Unit::new_normalize(m.axis_dir);
                let rot = Rotation3::from_axis_angle(&axis, angle);
                (m.axis_point + rot.inverse() * (center - m.axis_point), Some(rot))
            }
        };

        let (q_ref, n_ref, dist) = self.shape.closest(p_ref)?;
        if dist >= radius {
            return None;
        }

        let (point, normal) = match (&self.motion, rot) {
            (Some(m), Some(rot)) => (m.axis_point + rot * (q_ref - m.axis_point), rot * n_ref),
            _ => (q_ref, n_ref),
        };
        let velocity = match &self.motion {
            Some(m) if time >= m.t_start => {
                (m.rate * m.axis_dir.normalize()).cross(&(point - m.axis_point))
            }
            _ => Vec3::zeros(),
        };
        Some(WallContact {
            normal,
            overlap: radius - dist,
            point,
            velocity,
        })
    }
}

impl WallShape {
    /// Closest surface point to `p` in the reference pose, with the unit
    /// direction from that point toward `p` and the separation distance.
    /// Returns `None` when the direction is degenerate (center exactly on
    /// the surface) or provably out of reach.
    fn closest(&self, p: Vec3) -> Option<(Vec3, Vec3, f64)> {
        match *self {
            WallShape::Rectangle {
                center,
                u,
                v,
                half_u,
                half_v,
            } => {
                let d = p - center;
                let pu = d.dot(&u).clamp(-half_u, half_u);
                let pv = d.dot(&v).clamp(-half_v, half_v);
                let q = center + pu * u + pv * v;
                let sep = p - q;
                let dist = sep.norm();
                if dist < 1e-14 {
                    return None;
                }
                Some((q, sep / dist, dist))
            }
            WallShape::Frustum {
                base,
                axis,
                radius_lo,
                radius_hi,
                height,
            } => meridian_closest(p, base, axis, radius_lo, 0.0, radius_hi, height),
            WallShape::Cylinder {
                base,
                axis,
                radius,
                height,
            } => meridian_closest(p, base, axis, radius, 0.0, radius, height),
        }
    }
}

/// Closest point on an axisymmetric lateral surface, described as the segment
/// (rho_a, z_a) -> (rho_b, z_b) in the meridian half-plane of `axis`.
fn meridian_closest(
    p: Vec3,
    base: Vec3,
    axis: Vec3,
    rho_a: f64,
    z_a: f64,
    rho_b: f64,
    z_b: f64,
) -> Option<(Vec3, Vec3, f64)> {
    let a = axis.normalize();
    let w = p - base;
    let z_p = w.dot(&a);
    let radial = w - z_p * a;
    let rho_p = radial.norm();

    // 2-D closest point on the profile segment.
    let (drho, dz) = (rho_b - rho_a, z_b - z_a);
    let len2 = drho * drho + dz * dz;
    let t = if len2 > 0.0 {
        (((rho_p - rho_a) * drho + (z_p - z_a) * dz) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let rho_c = rho_a + t * drho;
    let z_c = z_a + t * dz;

    if rho_p < 1e-12 {
        if rho_c > 1e-12 {
            // On the axis, nearest to an off-axis ring: distance is at least
            // rho_c in every azimuth; report the true distance with an
            // arbitrary but fixed azimuth only when a contact is possible.
            let dist = (rho_c * rho_c + (z_p - z_c) * (z_p - z_c)).sqrt();
            let rho_hat = orthonormal_to(a);
            let q = base + z_c * a + rho_c * rho_hat;
            let sep = p - q;
            return Some((q, sep / dist, dist));
        }
        // Axis point against an on-axis surface point (disc apex).
        let dz_sep = z_p - z_c;
        if dz_sep.abs() < 1e-14 {
            return None;
        }
        let q = base + z_c * a;
        return Some((q, a * dz_sep.signum(), dz_sep.abs()));
    }

    let rho_hat = radial / rho_p;
    let q = base + z_c * a + rho_c * rho_hat;
    let sep = p - q;
    let dist = sep.norm();
    if dist < 1e-14 {
        return None;
    }
    Some((q, sep / dist, dist))
}

fn orthonormal_to(a: Vec3) -> Vec3 {
    let trial = if a.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    (trial - trial.dot(&a) * a).normalize()
}
