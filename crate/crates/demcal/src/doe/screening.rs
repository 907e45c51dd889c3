use serde::{Deserialize, Serialize};

use super::{DesignKind, DesignMatrix, DoeError};
use crate::rsm::f_cdf_upper;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorScreen {
    pub name: String,
    /// Mean response change from low to high level (`2 C / N`).
    pub effect: f64,
    pub sum_of_squares: f64,
    pub f_value: f64,
    pub p_value: f64,
    pub significant: bool,
}

/// Main-effect ANOVA of a Plackett-Burman screening experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScreeningResult {
    pub factors: Vec<FactorScreen>,
    pub model_ss: f64,
    pub model_df: u32,
    pub model_ms: f64,
    pub model_f: f64,
    pub model_p: f64,
    pub residual_ss: f64,
    pub residual_df: u32,
    pub residual_ms: f64,
    pub total_ss: f64,
    pub threshold: f64,
}

impl ScreeningResult {
    /// Names of the factors below the significance threshold.
    pub fn selected(&self) -> Vec<String> {
        self.factors
            .iter()
            .filter(|f| f.significant)
            .map(|f| f.name.clone())
            .collect()
    }
}

/// Per-factor contrasts `C_i = sum(sign * y)`, `SS_i = C_i^2 / N`, residual
/// from the unassigned columns (`total SS - sum SS_i` with `df = N - k - 1`),
/// and F/p per factor against the residual mean square.
pub fn screening_anova(
    design: &DesignMatrix,
    responses: &[f64],
    significance_threshold: f64,
) -> Result<ScreeningResult, DoeError> {
    if design.kind != DesignKind::PlackettBurman {
        return Err(DoeError::InvalidInput(
            "screening ANOVA expects a Plackett-Burman design".into(),
        ));
    }
    let n = design.n_runs();
    let k = design.n_factors();
    if responses.len() != n {
        return Err(DoeError::InvalidInput(format!(
            "design has {n} runs but {} responses supplied",
            responses.len()
        )));
    }
    let residual_df = (n as i64 - k as i64 - 1) as i64;
    if residual_df <= 0 {
        return Err(DoeError::CannotTest(format!(
            "no residual degrees of freedom with {k} factors in {n} runs; \
             free at least one dummy column (use fewer factors)"
        )));
    }
    let residual_df = residual_df as u32;

    let mean = responses.iter().sum::<f64>() / n as f64;
    let total_ss: f64 = responses.iter().map(|y| (y - mean) * (y - mean)).sum();

    let mut factor_ss = Vec::with_capacity(k);
    let mut effects = Vec::with_capacity(k);
    for col in 0..k {
        let contrast: f64 = design
            .runs
            .iter()
            .zip(responses)
            .map(|(row, &y)| row[col] * y)
            .sum();
        factor_ss.push(contrast * contrast / n as f64);
        effects.push(2.0 * contrast / n as f64);
    }
    let model_ss: f64 = factor_ss.iter().sum();
    let residual_ss = (total_ss - model_ss).max(0.0);
    let residual_ms = residual_ss / f64::from(residual_df);

    let mut factors = Vec::with_capacity(k);
    for (i, spec) in design.factors.iter().enumerate() {
        let (f_value, p_value) = if residual_ms > 0.0 {
            let f = factor_ss[i] / residual_ms;
            (f, f_cdf_upper(f, 1, residual_df).map_err(to_doe)?)
        } else {
            // Perfect fit: zero-SS factors are inert, nonzero ones exact.
            if factor_ss[i] > 0.0 {
                (f64::INFINITY, 0.0)
            } else {
                (0.0, 1.0)
            }
        };
        factors.push(FactorScreen {
            name: spec.name.clone(),
            effect: effects[i],
            sum_of_squares: factor_ss[i],
            f_value,
            p_value,
            significant: p_value < significance_threshold && factor_ss[i] > 0.0,
        });
    }

    let model_df = k as u32;
    let model_ms = model_ss / f64::from(model_df);
    let (model_f, model_p) = if residual_ms > 0.0 {
        let f = model_ms / residual_ms;
        (f, f_cdf_upper(f, model_df, residual_df).map_err(to_doe)?)
    } else if model_ss > 0.0 {
        (f64::INFINITY, 0.0)
    } else {
        (0.0, 1.0)
    };

    Ok(ScreeningResult {
        factors,
        model_ss,
        model_df,
        model_ms,
        model_f,
        model_p,
        residual_ss,
        residual_df,
        residual_ms,
        total_ss,
        threshold: significance_threshold,
    })
}

fn to_doe(e: crate::rsm::RsmError) -> DoeError {
    DoeError::InvalidInput(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doe::{plackett_burman, FactorSpec};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn factors7() -> Vec<FactorSpec> {
        [
            ("steel restitution", 0.3, 0.75),
            ("steel static friction", 0.35, 0.9),
            ("steel rolling friction", 0.2, 0.5),
            ("poisson ratio", 0.2, 0.35),
            ("salt restitution", 0.15, 0.75),
            ("salt static friction", 0.4, 0.9),
            ("salt rolling friction", 0.05, 0.35),
        ]
        .iter()
        .map(|(n, lo, hi)| FactorSpec::new(n, *lo, *hi).unwrap())
        .collect()
    }

    /// Screening campaign responses (repose angles, degrees), one per run of
    /// the 12 x 7 design.
    pub const SCREENING_RESPONSES: [f64; 12] = [
        25.91, 46.23, 55.12, 40.12, 31.25, 46.85, 43.26, 34.56, 51.93, 35.62, 31.24, 31.58,
    ];

    #[test]
    fn screening_golden_values() {
        let d = plackett_burman(&factors7()).unwrap();
        let r = screening_anova(&d, &SCREENING_RESPONSES, 0.05).unwrap();
        // Golden sums of squares, by factor position: G (rolling friction) is
        // the dominant factor, then E (salt restitution), then C.
        assert_abs_diff_eq!(r.factors[6].sum_of_squares, 726.19, epsilon = 0.05);
        assert_abs_diff_eq!(r.factors[4].sum_of_squares, 118.13, epsilon = 0.05);
        assert_abs_diff_eq!(r.factors[2].sum_of_squares, 70.62, epsilon = 0.05);
        assert_abs_diff_eq!(r.factors[6].f_value, 570.37, epsilon = 1.0);
        assert!(r.factors[6].p_value < 0.0001);
        // Model row: SS 930.39, df 7, MS 132.91, F 104.39.
        assert_abs_diff_eq!(r.model_ss, 930.39, epsilon = 0.05);
        assert_eq!(r.model_df, 7);
        assert_abs_diff_eq!(r.model_ms, 132.91, epsilon = 0.05);
        assert_abs_diff_eq!(r.model_f, 104.39, epsilon = 0.5);
        assert_eq!(r.residual_df, 4);
        // At p < 0.01 exactly three factors are selected.
        let strict = screening_anova(&d, &SCREENING_RESPONSES, 0.01).unwrap();
        assert_eq!(
            strict.selected(),
            vec![
                "steel rolling friction".to_string(),
                "salt restitution".to_string(),
                "salt rolling friction".to_string()
            ]
        );
    }

    #[test]
    fn decomposition_identity() {
        let d = plackett_burman(&factors7()).unwrap();
        let r = screening_anova(&d, &SCREENING_RESPONSES, 0.05).unwrap();
        let sum: f64 = r.factors.iter().map(|f| f.sum_of_squares).sum();
        assert_relative_eq!(sum + r.residual_ss, r.total_ss, max_relative = 1e-9);
    }

    #[test]
    fn constant_responses_yield_nothing() {
        let d = plackett_burman(&factors7()).unwrap();
        let r = screening_anova(&d, &[42.0; 12], 0.05).unwrap();
        for f in &r.factors {
            assert_eq!(f.sum_of_squares, 0.0);
            assert!(!f.significant);
        }
    }

    #[test]
    fn linear_truth_recovers_effects_exactly() {
        // y = sum a_i x_i with no noise: effect_i = 2 a_i, p ~ 0 for a_i != 0.
        let a = [3.0, 0.0, -1.5, 0.0, 2.0];
        let factors: Vec<FactorSpec> = (0..5)
            .map(|i| FactorSpec::new(&format!("f{i}"), 0.0, 1.0).unwrap())
            .collect();
        let d = plackett_burman(&factors).unwrap();
        let y: Vec<f64> = d
            .runs
            .iter()
            .map(|row| row.iter().zip(&a).map(|(x, ai)| x * ai).sum())
            .collect();
        let r = screening_anova(&d, &y, 0.05).unwrap();
        for (i, f) in r.factors.iter().enumerate() {
            assert_abs_diff_eq!(f.effect, 2.0 * a[i], epsilon = 1e-10);
            if a[i] != 0.0 {
                assert!(f.p_value < 1e-9, "factor {i} p = {}", f.p_value);
            } else {
                assert!(!f.significant);
            }
        }
    }

    #[test]
    fn saturated_design_cannot_test() {
        let factors: Vec<FactorSpec> = (0..11)
            .map(|i| FactorSpec::new(&format!("f{i}"), 0.0, 1.0).unwrap())
            .collect();
        let d = plackett_burman(&factors).unwrap();
        assert!(matches!(
            screening_anova(&d, &[1.0; 12], 0.05),
            Err(DoeError::CannotTest(_))
        ));
    }
}
