use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{anova, lstsq, RsmError};
use crate::doe::{DesignMatrix, FactorSpec};

pub const TERM_NAMES: [&str; 10] = ["1", "A", "B", "C", "AB", "AC", "BC", "A2", "B2", "C2"];

/// Full quadratic response surface in coded units over three factors:
/// intercept, linear A/B/C, interactions AB/AC/BC, quadratics A2/B2/C2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadModel {
    pub intercept: f64,
    pub linear: [f64; 3],
    pub interaction: [f64; 3],
    pub quadratic: [f64; 3],
    /// Coding used to translate coded coordinates back to physical values.
    pub factors: Vec<FactorSpec>,
}

impl QuadModel {
    pub fn eval_coded(&self, a: f64, b: f64, c: f64) -> f64 {
        self.intercept
            + self.linear[0] * a
            + self.linear[1] * b
            + self.linear[2] * c
            + self.interaction[0] * a * b
            + self.interaction[1] * a * c
            + self.interaction[2] * b * c
            + self.quadratic[0] * a * a
            + self.quadratic[1] * b * b
            + self.quadratic[2] * c * c
    }

    pub fn coefficient_slice(&self) -> [f64; 10] {
        [
            self.intercept,
            self.linear[0],
            self.linear[1],
            self.linear[2],
            self.interaction[0],
            self.interaction[1],
            self.interaction[2],
            self.quadratic[0],
            self.quadratic[1],
            self.quadratic[2],
        ]
    }

    /// JSON with a coefficient map keyed by term name plus the factor-coding
    /// block.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: serde_json::Map<String, serde_json::Value> = TERM_NAMES
            .iter()
            .zip(self.coefficient_slice())
            .map(|(name, v)| (name.to_string(), serde_json::json!(v)))
            .collect();
        serde_json::json!({
            "coefficients": coeffs,
            "factors": self.factors,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, RsmError> {
        let coeffs = v
            .get("coefficients")
            .and_then(|c| c.as_object())
            .ok_or_else(|| RsmError::InvalidInput("missing coefficients map".into()))?;
        let get = |name: &str| -> Result<f64, RsmError> {
            coeffs
                .get(name)
                .and_then(|x| x.as_f64())
                .ok_or_else(|| RsmError::InvalidInput(format!("missing coefficient {name}")))
        };
        let factors: Vec<FactorSpec> = serde_json::from_value(
            v.get("factors")
                .cloned()
                .ok_or_else(|| RsmError::InvalidInput("missing factors block".into()))?,
        )
        .map_err(|e| RsmError::InvalidInput(e.to_string()))?;
        Ok(Self {
            intercept: get("1")?,
            linear: [get("A")?, get("B")?, get("C")?],
            interaction: [get("AB")?, get("AC")?, get("BC")?],
            quadratic: [get("A2")?, get("B2")?, get("C2")?],
            factors,
        })
    }
}

pub(crate) fn quad_basis(runs: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(runs.len(), 10, |i, j| {
        let (a, b, c) = (runs[i][0], runs[i][1], runs[i][2]);
        match j {
            0 => 1.0,
            1 => a,
            2 => b,
            3 => c,
            4 => a * b,
            5 => a * c,
            6 => b * c,
            7 => a * a,
            8 => b * b,
            _ => c * c,
        }
    })
}

/// Least squares over the 10-term quadratic basis in coded units.
pub fn fit_quad_rsm(design: &DesignMatrix, responses: &[f64]) -> Result<QuadModel, RsmError> {
    if design.n_factors() != 3 {
        return Err(RsmError::DegenerateDesign(format!(
            "quadratic response surface needs exactly 3 factors, got {}",
            design.n_factors()
        )));
    }
    if design.n_runs() < 10 {
        return Err(RsmError::DegenerateDesign(format!(
            "need at least 10 runs to span the quadratic basis, got {}",
            design.n_runs()
        )));
    }
    if responses.len() != design.n_runs() {
        return Err(RsmError::InvalidInput(format!(
            "design has {} runs but {} responses supplied",
            design.n_runs(),
            responses.len()
        )));
    }
    let x = quad_basis(&design.runs);
    let y = DVector::from_column_slice(responses);
    let fit = lstsq(&x, &y).map_err(|e| match e {
        RsmError::DegenerateData(msg) => RsmError::DegenerateDesign(msg),
        other => other,
    })?;
    let c = fit.coeffs;
    Ok(QuadModel {
        intercept: c[0],
        linear: [c[1], c[2], c[3]],
        interaction: [c[4], c[5], c[6]],
        quadratic: [c[7], c[8], c[9]],
        factors: design.factors.clone(),
    })
}

/// Refit keeping the intercept and only the terms whose ANOVA p-value is
/// below `alpha`; dropped terms are zeroed. Reported alongside the full model
/// since published reduced equations vary in their pruning rule.
pub fn reduce_model(
    design: &DesignMatrix,
    responses: &[f64],
    alpha: f64,
) -> Result<QuadModel, RsmError> {
    let full = fit_quad_rsm(design, responses)?;
    let table = anova(&full, design, responses)?;
    let mut keep = vec![0usize]; // intercept
    for (i, name) in TERM_NAMES.iter().enumerate().skip(1) {
        let significant = table
            .rows
            .iter()
            .find(|r| r.term == *name)
            .and_then(|r| r.p)
            .map(|p| p < alpha)
            .unwrap_or(false);
        if significant {
            keep.push(i);
        }
    }
    let x_full = quad_basis(&design.runs);
    let x = x_full.select_columns(keep.iter());
    let y = DVector::from_column_slice(responses);
    let fit = lstsq(&x, &y)?;
    let mut coeffs = [0.0; 10];
    for (slot, &term) in keep.iter().enumerate() {
        coeffs[term] = fit.coeffs[slot];
    }
    Ok(QuadModel {
        intercept: coeffs[0],
        linear: [coeffs[1], coeffs[2], coeffs[3]],
        interaction: [coeffs[4], coeffs[5], coeffs[6]],
        quadratic: [coeffs[7], coeffs[8], coeffs[9]],
        factors: design.factors.clone(),
    })
}
