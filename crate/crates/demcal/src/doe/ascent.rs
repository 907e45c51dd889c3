use serde::{Deserialize, Serialize};

use super::{DoeError, FactorSpec};

/// One setting along a steepest-ascent path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AscentPoint {
    pub values: Vec<f64>,
    /// Set when any coordinate had to be clipped to its factor bounds.
    pub clipped: bool,
}

/// Affine path `start + j * deltas` for `j = 0..n_steps`, clipped to each
/// factor's `[low, high]`.
pub fn steepest_path(
    factors: &[FactorSpec],
    start: &[f64],
    deltas: &[f64],
    n_steps: usize,
) -> Result<Vec<AscentPoint>, DoeError> {
    if n_steps == 0 {
        return Err(DoeError::InvalidInput("n_steps must be >= 1".into()));
    }
    if start.len() != factors.len() || deltas.len() != factors.len() {
        return Err(DoeError::InvalidInput(format!(
            "{} factors but start/deltas have lengths {}/{}",
            factors.len(),
            start.len(),
            deltas.len()
        )));
    }
    for (f, &s) in factors.iter().zip(start) {
        f.validate()?;
        if s < f.low || s > f.high {
            return Err(DoeError::InvalidInput(format!(
                "start {} outside bounds [{}, {}] of factor {}",
                s, f.low, f.high, f.name
            )));
        }
    }
    Ok((0..n_steps)
        .map(|j| {
            let mut clipped = false;
            let values = factors
                .iter()
                .zip(start.iter().zip(deltas))
                .map(|(f, (&s, &d))| {
                    let raw = s + j as f64 * d;
                    let v = raw.clamp(f.low, f.high);
                    if v != raw {
                        clipped = true;
                    }
                    v
                })
                .collect();
            AscentPoint { values, clipped }
        })
        .collect())
}
