//! Closed-form analyses of the physical bench measurements.

use serde::{Deserialize, Serialize};

use super::RigError;

/// Volume-displacement density: `m / (V2 - V1)`.
pub fn density_from_displacement(mass: f64, v1: f64, v2: f64) -> Result<f64, RigError> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(RigError::InvalidInput(format!(
            "mass must be positive, got {mass}"
        )));
    }
    if !(v2 > v1) {
        return Err(RigError::InvalidInput(format!(
            "invalid volume pair: final {v2} must exceed initial {v1}"
        )));
    }
    Ok(mass / (v2 - v1))
}

/// Bounce-test restitution: `sqrt(h1 / H1)`.
pub fn restitution_from_heights(h1: f64, big_h1: f64) -> Result<f64, RigError> {
    if !(big_h1 > 0.0) {
        return Err(RigError::InvalidInput(format!(
            "release height must be positive, got {big_h1}"
        )));
    }
    if !(0.0..=big_h1).contains(&h1) {
        return Err(RigError::InvalidInput(format!(
            "rebound height {h1} outside [0, {big_h1}]"
        )));
    }
    Ok((h1 / big_h1).sqrt())
}

/// Sliding-onset friction: `tan(alpha)` for the tilt angle in degrees.
pub fn static_friction_from_angle(alpha_deg: f64) -> Result<f64, RigError> {
    if !(0.0..90.0).contains(&alpha_deg) {
        return Err(RigError::InvalidInput(format!(
            "tilt angle {alpha_deg} outside [0, 90)"
        )));
    }
    Ok(alpha_deg.to_radians().tan())
}

/// Pre-shearing normal load `(m_h + m_p + m_a) g` in newtons.
pub fn preshear_load(m_h: f64, m_p: f64, m_a: f64, g: f64) -> f64 {
    (m_h + m_p + m_a) * g
}

/// Shearing normal load `(m_h + m_s + m_a) g` in newtons.
pub fn shear_load(m_h: f64, m_s: f64, m_a: f64, g: f64) -> f64 {
    (m_h + m_s + m_a) * g
}

/// Normal stress from a load over the shear-cell area, in Pa.
pub fn stress_from_load(load_n: f64, area_m2: f64) -> Result<f64, RigError> {
    if !(area_m2 > 0.0) {
        return Err(RigError::InvalidInput(format!(
            "shear-cell area must be positive, got {area_m2}"
        )));
    }
    Ok(load_n / area_m2)
}

/// Yield locus fitted to direct-shear data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShearFit {
    pub slope: f64,
    /// Cohesion intercept, same unit as the stresses.
    pub intercept: f64,
    /// Internal friction angle in degrees.
    pub phi_deg: f64,
    /// Bulk static friction coefficient, `tan(phi) = slope`.
    pub mu_s: f64,
}

/// Least-squares yield locus through (normal stress, shear stress) pairs.
pub fn shear_analysis(normal_stress: &[f64], shear_stress: &[f64]) -> Result<ShearFit, RigError> {
    if normal_stress.len() != shear_stress.len() {
        return Err(RigError::InvalidInput(format!(
            "{} normal stresses but {} shear stresses",
            normal_stress.len(),
            shear_stress.len()
        )));
    }
    if normal_stress.len() < 3 {
        return Err(RigError::InvalidInput(format!(
            "need at least 3 shear points, got {}",
            normal_stress.len()
        )));
    }
    let n = normal_stress.len() as f64;
    let mean_x = normal_stress.iter().sum::<f64>() / n;
    let mean_y = shear_stress.iter().sum::<f64>() / n;
    let sxx: f64 = normal_stress.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    if sxx <= 1e-12 * mean_x.abs().max(1.0) {
        return Err(RigError::DegenerateData(
            "normal stresses are not distinct; the yield locus is undetermined".into(),
        ));
    }
    let sxy: f64 = normal_stress
        .iter()
        .zip(shear_stress)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    Ok(ShearFit {
        slope,
        intercept,
        phi_deg: slope.atan().to_degrees(),
        mu_s: slope,
    })
}
