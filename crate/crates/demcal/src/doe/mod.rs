//! Design-of-experiments generators and screening analysis: Plackett-Burman
//! designs, main-effect screening ANOVA, steepest-ascent paths, Box-Behnken
//! designs, and factor coding.

mod ascent;
mod bbd;
mod pb;
mod screening;

pub use ascent::{steepest_path, AscentPoint};
pub use bbd::box_behnken;
pub use pb::plackett_burman;
pub use screening::{screening_anova, FactorScreen, ScreeningResult};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DoeError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported design size: {0}")]
    UnsupportedSize(String),
    #[error("cannot test: {0}")]
    CannotTest(String),
}

/// One experimental factor with its physical range and coding rule.
///
/// `decode` maps a coded level to `center + coded * step`; by default the
/// center is the range midpoint and the step is the half-range, so coded
/// -1/+1 land on `low`/`high`. Response-surface stages override center and
/// step to recode around the region located by the ascent search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub name: String,
    pub low: f64,
    pub high: f64,
    pub center: f64,
    pub step: f64,
}

impl FactorSpec {
    /// Midpoint coding over `[low, high]`.
    pub fn new(name: &str, low: f64, high: f64) -> Result<Self, DoeError> {
        Self::with_coding(name, low, high, 0.5 * (low + high), 0.5 * (high - low))
    }

    pub fn with_coding(name: &str, low: f64, high: f64, center: f64, step: f64) -> Result<Self, DoeError> {
        let f = Self {
            name: name.to_string(),
            low,
            high,
            center,
            step,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), DoeError> {
        if !(self.low < self.high) {
            return Err(DoeError::InvalidInput(format!(
                "factor {}: low {} must be below high {}",
                self.name, self.low, self.high
            )));
        }
        if !(self.low <= self.center && self.center <= self.high) {
            return Err(DoeError::InvalidInput(format!(
                "factor {}: center {} outside [{}, {}]",
                self.name, self.center, self.low, self.high
            )));
        }
        if !(self.step > 0.0) {
            return Err(DoeError::InvalidInput(format!(
                "factor {}: step must be positive, got {}",
                self.name, self.step
            )));
        }
        Ok(())
    }

    pub fn decode(&self, coded: f64) -> f64 {
        self.center + coded * self.step
    }

    pub fn encode(&self, physical: f64) -> f64 {
        (physical - self.center) / self.step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DesignKind {
    PlackettBurman,
    Ascent,
    BoxBehnken,
}

/// A coded experiment design: one row per run, one column per factor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignMatrix {
    pub factors: Vec<FactorSpec>,
    pub runs: Vec<Vec<f64>>,
    pub kind: DesignKind,
}

impl DesignMatrix {
    pub fn n_runs(&self) -> usize {
        self.runs.len()
    }

    pub fn n_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn decode_run(&self, run: usize) -> Vec<f64> {
        self.runs[run]
            .iter()
            .zip(&self.factors)
            .map(|(&c, f)| f.decode(c))
            .collect()
    }

    /// CSV with header `run,<factor names...>`; coded levels, or physical
    /// values when `decoded` is set.
    pub fn to_csv(&self, decoded: bool) -> String {
        let mut out = String::from("run");
        for f in &self.factors {
            out.push(',');
            out.push_str(&f.name);
        }
        out.push('\n');
        for (i, row) in self.runs.iter().enumerate() {
            out.push_str(&(i + 1).to_string());
            for (j, &c) in row.iter().enumerate() {
                let v = if decoded { self.factors[j].decode(c) } else { c };
                out.push(',');
                out.push_str(&format!("{v}"));
            }
            out.push('\n');
        }
        out
    }
}
