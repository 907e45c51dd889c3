use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::quad::quad_basis;
use super::{lstsq, QuadModel, RsmError};
use crate::doe::DesignMatrix;

/// Fit-quality summary for a quadratic response surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitMetrics {
    pub r_squared: f64,
    pub r_squared_adjusted: f64,
    pub r_squared_predicted: f64,
    pub cv_percent: f64,
    pub adequate_precision: f64,
    pub press: f64,
}

/// R^2 family, coefficient of variation, and adequate precision
/// (predicted-response range over average prediction standard error).
/// PRESS comes from the leave-one-out identity `e_i / (1 - h_ii)`.
pub fn metrics(
    model: &QuadModel,
    design: &DesignMatrix,
    responses: &[f64],
) -> Result<FitMetrics, RsmError> {
    let n = design.n_runs();
    if responses.len() != n {
        return Err(RsmError::InvalidInput(format!(
            "design has {n} runs but {} responses supplied",
            responses.len()
        )));
    }
    let x = quad_basis(&design.runs);
    let y = DVector::from_column_slice(responses);
    let fit = lstsq(&x, &y)?;

    let supplied = model.coefficient_slice();
    for (i, c) in fit.coeffs.iter().enumerate() {
        if (c - supplied[i]).abs() > 1e-6 * (1.0 + c.abs()) {
            return Err(RsmError::InvalidInput(
                "model was not fitted on this design/response pair".into(),
            ));
        }
    }

    let p = 10usize;
    let nf = n as f64;
    let pf = p as f64;
    let r2 = fit.r_squared();
    let r2_adj = 1.0 - (1.0 - r2) * (nf - 1.0) / (nf - pf);

    let mut press = 0.0;
    for i in 0..n {
        let h = fit.hat_diag[i];
        if h >= 1.0 - 1e-12 {
            return Err(RsmError::PressUndefined { run: i });
        }
        let d = fit.residuals[i] / (1.0 - h);
        press += d * d;
    }
    let r2_pred = 1.0 - press / fit.ss_total;

    let ms_res = if n > p {
        fit.ss_res / (nf - pf)
    } else {
        0.0
    };
    let mean = y.mean();
    let cv_percent = if mean != 0.0 {
        100.0 * ms_res.sqrt() / mean.abs()
    } else {
        0.0
    };
    let (ymin, ymax) = fit
        .fitted
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let adequate_precision = if ms_res > 0.0 {
        (ymax - ymin) / (pf * ms_res / nf).sqrt()
    } else {
        f64::INFINITY
    };

    Ok(FitMetrics {
        r_squared: r2,
        r_squared_adjusted: r2_adj,
        r_squared_predicted: r2_pred,
        cv_percent,
        adequate_precision,
        press,
    })
}
