use nalgebra::{DMatrix, DVector};

use super::RsmError;

/// Ordinary least squares solved through a QR decomposition, with the
/// leverage (hat-matrix diagonal) needed by PRESS and influence diagnostics.
#[derive(Debug, Clone)]
pub struct Lstsq {
    pub coeffs: DVector<f64>,
    pub fitted: DVector<f64>,
    pub residuals: DVector<f64>,
    pub hat_diag: Vec<f64>,
    pub ss_res: f64,
    pub ss_total: f64,
}

impl Lstsq {
    pub fn r_squared(&self) -> f64 {
        if self.ss_total == 0.0 {
            1.0
        } else {
            1.0 - self.ss_res / self.ss_total
        }
    }
}

pub fn lstsq(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<Lstsq, RsmError> {
    let n = x.nrows();
    let p = x.ncols();
    if y.len() != n {
        return Err(RsmError::InvalidInput(format!(
            "design has {n} rows but {} responses supplied",
            y.len()
        )));
    }
    if n < p {
        return Err(RsmError::DegenerateData(format!(
            "{n} observations cannot determine {p} coefficients"
        )));
    }
    let qr = x.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let scale = r[(0, 0)].abs().max(1e-300);
    for i in 0..p {
        if r[(i, i)].abs() < 1e-10 * scale {
            return Err(RsmError::DegenerateData(format!(
                "rank-deficient design (pivot {i} ~ 0)"
            )));
        }
    }
    let qty = q.transpose() * y;
    let coeffs = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| RsmError::DegenerateData("singular triangular solve".into()))?;

    let fitted = x * &coeffs;
    let residuals = y - &fitted;
    let ss_res = residuals.norm_squared();
    let mean = y.mean();
    let ss_total = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    let hat_diag = (0..n).map(|i| q.row(i).norm_squared()).collect();

    Ok(Lstsq {
        coeffs,
        fitted,
        residuals,
        hat_diag,
        ss_res,
        ss_total,
    })
}
