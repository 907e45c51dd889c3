//! Regression and inference: polynomial fits, full quadratic response
//! surfaces, ANOVA with lack-of-fit, fit-quality metrics, F-distribution tail
//! probabilities, quadratic inversion, and target-seeking optimization.

mod anova;
mod fdist;
mod lstsq;
mod metrics;
mod optimize;
mod poly;
mod quad;

pub use anova::{anova, AnovaRow, AnovaTable};
pub use fdist::f_cdf_upper;
pub use lstsq::{lstsq, Lstsq};
pub use metrics::{metrics, FitMetrics};
pub use optimize::{optimize_to_target, Candidate, OptimizeResult};
pub use poly::{fit_poly, invert_quadratic, PolyFit};
pub use quad::{fit_quad_rsm, reduce_model, QuadModel};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RsmError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("degenerate design: {0}")]
    DegenerateDesign(String),
    #[error("no real root reaches the target {target} inside [{lo}, {hi}]")]
    NoSolution { target: f64, lo: f64, hi: f64 },
    #[error("two roots inside [{lo}, {hi}]: {r1} and {r2}")]
    AmbiguousSolution { r1: f64, r2: f64, lo: f64, hi: f64 },
    #[error("PRESS undefined: run {run} has leverage 1 (self-determined fit)")]
    PressUndefined { run: usize },
}
