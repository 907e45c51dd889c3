use super::{DesignKind, DesignMatrix, DoeError, FactorSpec};

/// Three-factor Box-Behnken design: 12 edge-midpoint runs (each factor pair
/// at the four +/-1 combinations with the third factor at 0) followed by
/// `n_center` center replicates. Run order is deterministic: pairs in factor
/// order, the (-,-), (+,-), (-,+), (+,+) corners within a pair, centers last.
pub fn box_behnken(factors: &[FactorSpec], n_center: usize) -> Result<DesignMatrix, DoeError> {
    if factors.len() != 3 {
        return Err(DoeError::UnsupportedSize(format!(
            "Box-Behnken here is the three-factor design, got {} factors",
            factors.len()
        )));
    }
    if n_center == 0 {
        return Err(DoeError::InvalidInput("need at least one center run".into()));
    }
    for f in factors {
        f.validate()?;
    }
    let mut runs = Vec::with_capacity(12 + n_center);
    for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
        for (sa, sb) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
            let mut row = vec![0.0; 3];
            row[a] = sa;
            row[b] = sb;
            runs.push(row);
        }
    }
    for _ in 0..n_center {
        runs.push(vec![0.0; 3]);
    }
    Ok(DesignMatrix {
        factors: factors.to_vec(),
        runs,
        kind: DesignKind::BoxBehnken,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors() -> Vec<FactorSpec> {
        vec![
            FactorSpec::with_coding("x", 0.05, 0.35, 0.23, 0.06).unwrap(),
            FactorSpec::with_coding("y", 0.15, 0.75, 0.45, 0.15).unwrap(),
            FactorSpec::with_coding("z", 0.2, 0.5, 0.38, 0.06).unwrap(),
        ]
    }

    #[test]
    fn seventeen_runs_with_five_centers() {
        let d = box_behnken(&factors(), 5).unwrap();
        assert_eq!(d.n_runs(), 17);
        assert_eq!(d.kind, DesignKind::BoxBehnken);
    }

    #[test]
    fn edge_runs_have_exactly_one_zero() {
        let d = box_behnken(&factors(), 5).unwrap();
        for row in &d.runs[..12] {
            let zeros = row.iter().filter(|&&v| v == 0.0).count();
            assert_eq!(zeros, 1, "edge run {row:?}");
            assert!(row.iter().all(|&v| v == 0.0 || v.abs() == 1.0));
        }
    }

    #[test]
    fn center_runs_are_all_zero() {
        let d = box_behnken(&factors(), 5).unwrap();
        for row in &d.runs[12..] {
            assert_eq!(row, &vec![0.0; 3]);
        }
    }

    #[test]
    fn wrong_factor_count_rejected() {
        let two: Vec<FactorSpec> = factors().into_iter().take(2).collect();
        assert!(matches!(
            box_behnken(&two, 5),
            Err(DoeError::UnsupportedSize(_))
        ));
        assert!(box_behnken(&factors(), 0).is_err());
    }
}
