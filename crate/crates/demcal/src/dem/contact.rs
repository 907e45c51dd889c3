use std::f64::consts::PI;

use super::{ContactParams, DemError, Material, Vec3};

/// Pair-effective contact quantities for two touching spheres (or a sphere
/// against a flat wall, where the wall contributes infinite radius and mass).
///
/// `damping_ratio` is the restitution-derived factor
/// `ln e / sqrt(ln^2 e + pi^2)`; it is zero for a perfectly elastic pair and
/// negative otherwise.
#[derive(Debug, Clone, Copy)]
pub struct EffectivePair {
    /// Pa
    pub e_star: f64,
    /// Pa
    pub g_star: f64,
    /// m
    pub r_star: f64,
    /// kg
    pub m_star: f64,
    pub damping_ratio: f64,
}

fn sphere_mass(density: f64, radius: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3) * density
}

fn damping_ratio(restitution: f64) -> f64 {
    let l = restitution.ln();
    l / (l * l + PI * PI).sqrt()
}

/// Effective contact quantities for a sphere-sphere pair.
///
/// `r* = r_i r_j / (r_i + r_j)`, `m* = m_i m_j / (m_i + m_j)`,
/// `1/E* = (1 - nu_i^2)/E_i + (1 - nu_j^2)/E_j`,
/// `1/G* = (2 - nu_i)/G_i + (2 - nu_j)/G_j`.
pub fn effective_pair(
    mat_i: &Material,
    mat_j: &Material,
    r_i: f64,
    r_j: f64,
    contact: &ContactParams,
) -> Result<EffectivePair, DemError> {
    if !(r_i > 0.0 && r_i.is_finite() && r_j > 0.0 && r_j.is_finite()) {
        return Err(DemError::InvalidInput(format!(
            "radii must be positive and finite, got {r_i}, {r_j}"
        )));
    }
    mat_i.validate()?;
    mat_j.validate()?;
    contact.validate()?;

    let e_i = mat_i.young_modulus();
    let e_j = mat_j.young_modulus();
    let inv_e = (1.0 - mat_i.poisson_ratio.powi(2)) / e_i + (1.0 - mat_j.poisson_ratio.powi(2)) / e_j;
    let inv_g =
        (2.0 - mat_i.poisson_ratio) / mat_i.shear_modulus + (2.0 - mat_j.poisson_ratio) / mat_j.shear_modulus;
    let m_i = sphere_mass(mat_i.density, r_i);
    let m_j = sphere_mass(mat_j.density, r_j);

    Ok(EffectivePair {
        e_star: 1.0 / inv_e,
        g_star: 1.0 / inv_g,
        r_star: r_i * r_j / (r_i + r_j),
        m_star: m_i * m_j / (m_i + m_j),
        damping_ratio: damping_ratio(contact.restitution),
    })
}

/// Sphere-against-flat-wall variant: the wall contributes infinite radius and
/// mass, so `r* = r` and `m* = m` of the particle.
pub fn effective_wall_pair(
    mat_particle: &Material,
    mat_wall: &Material,
    radius: f64,
    contact: &ContactParams,
) -> Result<EffectivePair, DemError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(DemError::InvalidInput(format!(
            "radius must be positive and finite, got {radius}"
        )));
    }
    mat_particle.validate()?;
    mat_wall.validate()?;
    contact.validate()?;

    let e_i = mat_particle.young_modulus();
    let e_j = mat_wall.young_modulus();
    let inv_e = (1.0 - mat_particle.poisson_ratio.powi(2)) / e_i + (1.0 - mat_wall.poisson_ratio.powi(2)) / e_j;
    let inv_g = (2.0 - mat_particle.poisson_ratio) / mat_particle.shear_modulus
        + (2.0 - mat_wall.poisson_ratio) / mat_wall.shear_modulus;

    Ok(EffectivePair {
        e_star: 1.0 / inv_e,
        g_star: 1.0 / inv_g,
        r_star: radius,
        m_star: sphere_mass(mat_particle.density, radius),
        damping_ratio: damping_ratio(contact.restitution),
    })
}

/// Hertz normal force (scalar along the contact normal, positive repulsive).
///
/// `F_n = 4/3 E* sqrt(r*) d^1.5 + 2 sqrt(5/6) beta sqrt(S_n m*) v_n` with
/// `S_n = 2 E* sqrt(r* d)`. `v_n` is the normal relative velocity, positive
/// when separating, so the damping term (beta <= 0) resists both approach and
/// separation. The elastic part is always repulsive; the damped total is
/// deliberately left unclamped. Flooring it at zero during the unloading tail
/// removes part of the dissipation and inflates the effective restitution by
/// 5-18% over e in [0.4, 0.8], which breaks the configured-restitution
/// contract that the drop and collision rigs calibrate against.
pub fn hertz_normal_force(overlap: f64, normal_rel_velocity: f64, pair: &EffectivePair) -> f64 {
    if overlap <= 0.0 {
        return 0.0;
    }
    let sqrt_rd = (pair.r_star * overlap).sqrt();
    let elastic = 4.0 / 3.0 * pair.e_star * sqrt_rd * overlap;
    let s_n = 2.0 * pair.e_star * sqrt_rd;
    let damping =
        2.0 * (5.0f64 / 6.0).sqrt() * pair.damping_ratio * (s_n * pair.m_star).sqrt() * normal_rel_velocity;
    elastic + damping
}

/// Mindlin tangential force with Coulomb cap.
///
/// `F_t = -S_t xi - 2 sqrt(5/6) |beta| sqrt(S_t m*) v_t` with
/// `S_t = 8 G* sqrt(r* d)` and `xi` the accumulated tangential displacement.
/// The magnitude is capped at `mu_s |f_n|`; the second return value is the
/// history vector rescaled onto the sliding surface when the cap engages.
pub fn mindlin_tangential_force(
    tangential_history: Vec3,
    tangential_rel_velocity: Vec3,
    overlap: f64,
    pair: &EffectivePair,
    contact: &ContactParams,
    f_n: f64,
) -> (Vec3, Vec3) {
    if overlap <= 0.0 {
        return (Vec3::zeros(), Vec3::zeros());
    }
    let s_t = 8.0 * pair.g_star * (pair.r_star * overlap).sqrt();
    let damping_coeff = 2.0 * (5.0f64 / 6.0).sqrt() * pair.damping_ratio.abs() * (s_t * pair.m_star).sqrt();
    let force = -s_t * tangential_history - damping_coeff * tangential_rel_velocity;

    let cap = contact.static_friction * f_n.abs();
    let mag = force.norm();
    if mag <= cap || mag == 0.0 {
        (force, tangential_history)
    } else {
        let capped = force * (cap / mag);
        // Sliding: rescale the spring so it stores exactly the Coulomb force.
        let history = if s_t > 0.0 { -capped / s_t } else { tangential_history };
        (capped, history)
    }
}

/// Constant-directional rolling resistance: a torque of magnitude
/// `mu_r |f_n| r*` opposing the relative angular velocity.
pub fn rolling_resistance_torque(
    rel_angular_velocity: Vec3,
    f_n: f64,
    pair: &EffectivePair,
    contact: &ContactParams,
) -> Vec3 {
    let w = rel_angular_velocity.norm();
    if contact.rolling_friction == 0.0 || w == 0.0 {
        return Vec3::zeros();
    }
    -(contact.rolling_friction * f_n.abs() * pair.r_star / w) * rel_angular_velocity
}

/// Rayleigh-limited stable timestep: `safety * min over materials of
/// pi r_min sqrt(rho / G) / (0.1631 nu + 0.8766)`.
pub fn stable_timestep(materials: &[&Material], r_min: f64, safety_fraction: f64) -> Result<f64, DemError> {
    if materials.is_empty() {
        return Err(DemError::InvalidInput("empty material list".into()));
    }
    if !(safety_fraction > 0.0 && safety_fraction <= 1.0) {
        return Err(DemError::InvalidInput(format!(
            "safety fraction must lie in (0, 1], got {safety_fraction}"
        )));
    }
    if !(r_min > 0.0 && r_min.is_finite()) {
        return Err(DemError::InvalidInput(format!("r_min must be positive, got {r_min}")));
    }
    let mut t = f64::INFINITY;
    for m in materials {
        m.validate()?;
        let rayleigh =
            PI * r_min * (m.density / m.shear_modulus).sqrt() / (0.1631 * m.poisson_ratio + 0.8766);
        t = t.min(rayleigh);
    }
    Ok(safety_fraction * t)
}
