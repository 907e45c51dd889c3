use super::{DesignKind, DesignMatrix, DoeError, FactorSpec};

/// First row of the N = 12 Plackett-Burman design; subsequent rows are cyclic
/// right-shifts, and the twelfth row is all -1.
const GENERATOR: [i8; 11] = [1, 1, -1, 1, 1, 1, -1, -1, -1, 1, -1];

/// 12-run Plackett-Burman screening design for up to 11 factors.
///
/// The first `k` of the 11 orthogonal columns are assigned to the factors;
/// the remaining columns are left free, which is what gives the screening
/// ANOVA its residual degrees of freedom.
pub fn plackett_burman(factors: &[FactorSpec]) -> Result<DesignMatrix, DoeError> {
    if factors.is_empty() || factors.len() > 11 {
        return Err(DoeError::UnsupportedSize(format!(
            "the 12-run Plackett-Burman design supports 1..=11 factors, got {}",
            factors.len()
        )));
    }
    for f in factors {
        f.validate()?;
    }
    let k = factors.len();
    let mut runs = Vec::with_capacity(12);
    for i in 0..11 {
        runs.push(
            (0..k)
                .map(|j| f64::from(GENERATOR[(j + 11 - i) % 11]))
                .collect(),
        );
    }
    runs.push(vec![-1.0; k]);
    Ok(DesignMatrix {
        factors: factors.to_vec(),
        runs,
        kind: DesignKind::PlackettBurman,
    })
}
