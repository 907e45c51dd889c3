use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::quad::{quad_basis, TERM_NAMES};
use super::{f_cdf_upper, lstsq, QuadModel, RsmError};
use crate::doe::DesignMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnovaRow {
    pub term: String,
    pub ss: f64,
    pub df: u32,
    pub ms: f64,
    /// Absent for the residual/pure-error/total rows, and when the residual
    /// mean square is zero (perfect fit).
    pub f: Option<f64>,
    pub p: Option<f64>,
}

/// Variance decomposition of a fitted quadratic response surface: model,
/// per-term, residual, lack-of-fit, pure-error, and corrected-total rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnovaTable {
    pub rows: Vec<AnovaRow>,
    /// Set when the design has no replicate runs and the lack-of-fit split
    /// was skipped.
    pub no_replicates: bool,
}

impl AnovaTable {
    pub fn row(&self, term: &str) -> Option<&AnovaRow> {
        self.rows.iter().find(|r| r.term == term)
    }

    /// CSV mirroring the standard report layout.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("term,ss,df,ms,f,p\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.term,
                r.ss,
                r.df,
                r.ms,
                r.f.map_or(String::new(), |v| v.to_string()),
                r.p.map_or(String::new(), |v| v.to_string()),
            ));
        }
        out
    }
}

/// Per-term sums of squares by removal from the full model (equivalent to
/// sequential SS on the orthogonal part of a Box-Behnken basis), residual
/// split into lack-of-fit and pure error from replicate groups.
pub fn anova(
    model: &QuadModel,
    design: &DesignMatrix,
    responses: &[f64],
) -> Result<AnovaTable, RsmError> {
    let n = design.n_runs();
    if responses.len() != n {
        return Err(RsmError::InvalidInput(format!(
            "design has {n} runs but {} responses supplied",
            responses.len()
        )));
    }
    let x = quad_basis(&design.runs);
    let y = DVector::from_column_slice(responses);
    let full = lstsq(&x, &y)?;

    // Consistency: the supplied model must be the fit of this data.
    let supplied = model.coefficient_slice();
    for (i, c) in full.coeffs.iter().enumerate() {
        if (c - supplied[i]).abs() > 1e-6 * (1.0 + c.abs()) {
            return Err(RsmError::InvalidInput(
                "model was not fitted on this design/response pair".into(),
            ));
        }
    }

    let ss_total = full.ss_total;
    let ss_res = full.ss_res;
    let ss_model = (ss_total - ss_res).max(0.0);
    let df_model = 9u32;
    let df_res = (n - 10) as u32;
    let ms_res = if df_res > 0 { ss_res / f64::from(df_res) } else { 0.0 };
    // A residual at rounding level means the fit is exact and F ratios are
    // meaningless; those rows carry no F/p.
    let perfect_fit = ss_res <= 1e-12 * ss_total.max(f64::MIN_POSITIVE);

    let fp = |ss: f64, df: u32| -> Result<(Option<f64>, Option<f64>), RsmError> {
        if df_res == 0 || perfect_fit || ms_res <= 0.0 {
            return Ok((None, None));
        }
        let f = (ss / f64::from(df)) / ms_res;
        Ok((Some(f), Some(f_cdf_upper(f, df, df_res)?)))
    };

    let mut rows = Vec::with_capacity(16);
    let (f, p) = fp(ss_model, df_model)?;
    rows.push(AnovaRow {
        term: "model".into(),
        ss: ss_model,
        df: df_model,
        ms: ss_model / f64::from(df_model),
        f,
        p,
    });

    // Type-III term SS: refit without the term.
    for term in 1..10 {
        let keep: Vec<usize> = (0..10).filter(|&j| j != term).collect();
        let xr = x.select_columns(keep.iter());
        let reduced = lstsq(&xr, &y)?;
        let ss_term = (reduced.ss_res - ss_res).max(0.0);
        let (f, p) = fp(ss_term, 1)?;
        rows.push(AnovaRow {
            term: TERM_NAMES[term].into(),
            ss: ss_term,
            df: 1,
            ms: ss_term,
            f,
            p,
        });
    }

    rows.push(AnovaRow {
        term: "residual".into(),
        ss: ss_res,
        df: df_res,
        ms: ms_res,
        f: None,
        p: None,
    });

    // Pure error from replicate groups (identical coded rows).
    let mut groups: Vec<(Vec<u64>, Vec<f64>)> = Vec::new();
    for (row, &resp) in design.runs.iter().zip(responses) {
        let key: Vec<u64> = row.iter().map(|v| v.to_bits()).collect();
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, ys)) => ys.push(resp),
            None => groups.push((key, vec![resp])),
        }
    }
    let mut ss_pe = 0.0;
    let mut df_pe = 0u32;
    for (_, ys) in &groups {
        if ys.len() > 1 {
            let mean = ys.iter().sum::<f64>() / ys.len() as f64;
            ss_pe += ys.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
            df_pe += (ys.len() - 1) as u32;
        }
    }
    let no_replicates = df_pe == 0;
    if !no_replicates {
        let ss_lof = (ss_res - ss_pe).max(0.0);
        let df_lof = df_res - df_pe;
        let ms_pe = ss_pe / f64::from(df_pe);
        let (f_lof, p_lof) = if df_lof > 0 && ms_pe > 0.0 {
            let f = (ss_lof / f64::from(df_lof)) / ms_pe;
            (Some(f), Some(f_cdf_upper(f, df_lof, df_pe)?))
        } else {
            (None, None)
        };
        rows.push(AnovaRow {
            term: "lack of fit".into(),
            ss: ss_lof,
            df: df_lof,
            ms: if df_lof > 0 { ss_lof / f64::from(df_lof) } else { 0.0 },
            f: f_lof,
            p: p_lof,
        });
        rows.push(AnovaRow {
            term: "pure error".into(),
            ss: ss_pe,
            df: df_pe,
            ms: ms_pe,
            f: None,
            p: None,
        });
    }

    rows.push(AnovaRow {
        term: "total".into(),
        ss: ss_total,
        df: (n - 1) as u32,
        ms: ss_total / (n - 1) as f64,
        f: None,
        p: None,
    });

    Ok(AnovaTable {
        rows,
        no_replicates,
    })
}
