use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::RigError;
use crate::dem::Snapshot;

const N_SECTORS: usize = 8;
const N_RADIAL_BINS: usize = 16;

/// Measured angle of repose.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReposeResult {
    /// Mean of the sector angles, degrees.
    pub angle_deg: f64,
    pub sector_angles_deg: Vec<f64>,
    /// Snapshot file the measurement was taken from, when one was written.
    pub snapshot_path: Option<PathBuf>,
}

/// Measure the repose angle of a settled pile.
///
/// The pile axis is the x-y centroid. Particles are binned into 8 azimuthal
/// sectors and 16 radial bins; each bin contributes its maximum surface
/// height (`z + radius`). Per sector, a line is fitted by least squares to
/// the (radial distance, height) points whose height lies between 15% and
/// 85% of that sector's height range, cutting off the apex plateau and the
/// toe; the sector angle is `atan(|slope|)` and the pile angle is the mean
/// over sectors.
pub fn measure_repose_angle(snapshot: &Snapshot) -> Result<ReposeResult, RigError> {
    let rows = &snapshot.rows;
    if rows.len() < 50 {
        return Err(RigError::InvalidInput(format!(
            "repose measurement needs at least 50 particles, got {}",
            rows.len()
        )));
    }
    let n = rows.len() as f64;
    let cx = rows.iter().map(|r| r.x).sum::<f64>() / n;
    let cy = rows.iter().map(|r| r.y).sum::<f64>() / n;

    let mut r_extent = 0.0f64;
    let polar: Vec<(f64, f64, f64)> = rows
        .iter()
        .map(|r| {
            let rho = ((r.x - cx).powi(2) + (r.y - cy).powi(2)).sqrt();
            r_extent = r_extent.max(rho);
            (rho, (r.y - cy).atan2(r.x - cx), r.z + r.radius)
        })
        .collect();
    if r_extent <= 0.0 {
        return Err(RigError::DegeneratePile("pile has no radial extent".into()));
    }

    // Per (sector, radial bin) maximum surface height.
    let bin_w = r_extent / N_RADIAL_BINS as f64;
    let mut height = vec![[f64::NEG_INFINITY; N_RADIAL_BINS]; N_SECTORS];
    for &(rho, phi, s) in &polar {
        let sector = (((phi + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)
            * N_SECTORS as f64) as usize)
            .min(N_SECTORS - 1);
        let bin = ((rho / bin_w) as usize).min(N_RADIAL_BINS - 1);
        if s > height[sector][bin] {
            height[sector][bin] = s;
        }
    }

    let mut sector_angles_deg = Vec::with_capacity(N_SECTORS);
    for (sector, bins) in height.iter().enumerate() {
        let usable: Vec<(f64, f64)> = bins
            .iter()
            .enumerate()
            .filter(|(_, h)| h.is_finite())
            .map(|(i, &h)| ((i as f64 + 0.5) * bin_w, h))
            .collect();
        if usable.len() < 3 {
            return Err(RigError::DegeneratePile(format!(
                "sector {sector} has only {} occupied radial bins",
                usable.len()
            )));
        }
        let h_lo = usable.iter().map(|&(_, h)| h).fold(f64::INFINITY, f64::min);
        let h_hi = usable.iter().map(|&(_, h)| h).fold(f64::NEG_INFINITY, f64::max);
        let span = h_hi - h_lo;
        let band: Vec<(f64, f64)> = usable
            .iter()
            .copied()
            .filter(|&(_, h)| h >= h_lo + 0.15 * span && h <= h_lo + 0.85 * span)
            .collect();
        // Flat piles collapse the band to (almost) nothing; fit everything.
        let pts = if band.len() >= 2 { &band } else { &usable };
        let slope = fit_slope(pts);
        sector_angles_deg.push(slope.abs().atan().to_degrees());
    }

    let angle_deg = sector_angles_deg.iter().sum::<f64>() / N_SECTORS as f64;
    Ok(ReposeResult {
        angle_deg,
        sector_angles_deg,
        snapshot_path: None,
    })
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    sxy / sxx
}
