use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{lstsq, RsmError};

/// Polynomial fit with coefficients in ascending-degree order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyFit {
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
    pub degree: usize,
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Least-squares polynomial fit of degree 1 or 2.
pub fn fit_poly(x: &[f64], y: &[f64], degree: usize) -> Result<PolyFit, RsmError> {
    if !(degree == 1 || degree == 2) {
        return Err(RsmError::InvalidInput(format!(
            "degree must be 1 or 2, got {degree}"
        )));
    }
    if x.len() != y.len() {
        return Err(RsmError::InvalidInput(format!(
            "{} x values but {} y values",
            x.len(),
            y.len()
        )));
    }
    if x.len() <= degree {
        return Err(RsmError::InvalidInput(format!(
            "need more than {degree} points for a degree-{degree} fit, got {}",
            x.len()
        )));
    }
    let xm = DMatrix::from_fn(x.len(), degree + 1, |i, j| x[i].powi(j as i32));
    let yv = DVector::from_column_slice(y);
    let fit = lstsq(&xm, &yv)?;
    Ok(PolyFit {
        coefficients: fit.coeffs.iter().copied().collect(),
        r_squared: fit.r_squared(),
        degree,
    })
}

/// Solve `c2 x^2 + c1 x + c0 = y_target` and return the unique real root
/// inside `[lo, hi]`. Linear equations (`c2 = 0`) are handled directly.
pub fn invert_quadratic(
    c2: f64,
    c1: f64,
    c0: f64,
    y_target: f64,
    valid_range: (f64, f64),
) -> Result<f64, RsmError> {
    let (lo, hi) = valid_range;
    if !(lo < hi) {
        return Err(RsmError::InvalidInput(format!(
            "invalid range [{lo}, {hi}]"
        )));
    }
    let inside = |r: f64| r >= lo && r <= hi;
    let no_solution = || RsmError::NoSolution {
        target: y_target,
        lo,
        hi,
    };

    let roots: Vec<f64> = if c2 == 0.0 {
        if c1 == 0.0 {
            return Err(no_solution());
        }
        vec![(y_target - c0) / c1]
    } else {
        let disc = c1 * c1 - 4.0 * c2 * (c0 - y_target);
        if disc < 0.0 {
            return Err(no_solution());
        }
        let sq = disc.sqrt();
        // Numerically stable pair: q = -(c1 + sign(c1) sqrt(disc))/2.
        let q = -0.5 * (c1 + c1.signum() * sq);
        let r1 = q / c2;
        let r2 = if q != 0.0 { (c0 - y_target) / q } else { -c1 / c2 - r1 };
        vec![r1, r2]
    };

    let mut in_range: Vec<f64> = roots.into_iter().filter(|&r| inside(r)).collect();
    in_range.sort_by(|a, b| a.partial_cmp(b).unwrap());
    in_range.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    match in_range.as_slice() {
        [] => Err(no_solution()),
        [r] => Ok(*r),
        [r1, r2, ..] => Err(RsmError::AmbiguousSolution {
            r1: *r1,
            r2: *r2,
            lo,
            hi,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Incline sweep: tilt angle vs static friction coefficient.
    pub const INCLINE_SWEEP: ([f64; 6], [f64; 6]) = (
        [0.35, 0.45, 0.55, 0.65, 0.75, 0.85],
        [19.97, 24.97, 29.97, 33.43, 37.46, 39.96],
    );
    // Drop sweep: rebound height (mm) vs restitution coefficient.
    pub const DROP_SWEEP: ([f64; 9], [f64; 9]) = (
        [0.35, 0.40, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75],
        [16.2, 20.16, 22.55, 30.26, 42.44, 46.59, 58.75, 68.92, 87.35],
    );

    #[test]
    fn exact_line_recovered() {
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, 3.0, 5.0];
        let f = fit_poly(&x, &y, 1).unwrap();
        assert_relative_eq!(f.coefficients[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(f.coefficients[1], 2.0, max_relative = 1e-12);
        assert_relative_eq!(f.r_squared, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn incline_sweep_quadratic_fit() {
        // Expected coefficients frozen from an independent normal-equation
        // evaluation (numpy.polyfit) of the same six points.
        let (x, y) = INCLINE_SWEEP;
        let f = fit_poly(&x, &y, 2).unwrap();
        assert_relative_eq!(f.coefficients[2], -29.25, max_relative = 1e-6);
        assert_relative_eq!(f.coefficients[1], 75.35142857142857, max_relative = 1e-9);
        assert_relative_eq!(f.coefficients[0], -2.8677321428571333, max_relative = 1e-6);
        assert_relative_eq!(f.r_squared, 0.9990730128907884, max_relative = 1e-9);
    }

    #[test]
    fn drop_sweep_quadratic_fit() {
        let (x, y) = DROP_SWEEP;
        let f = fit_poly(&x, &y, 2).unwrap();
        assert_relative_eq!(f.coefficients[2], 310.5238095238, max_relative = 1e-9);
        assert_relative_eq!(f.coefficients[1], -168.3728571428, max_relative = 1e-9);
        assert_relative_eq!(f.coefficients[0], 37.1873333333, max_relative = 1e-9);
        assert_relative_eq!(f.r_squared, 0.99350684524373, max_relative = 1e-9);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(fit_poly(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], 2).is_err());
        assert!(fit_poly(&[1.0, 2.0], &[1.0, 2.0], 2).is_err());
        assert!(fit_poly(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 3).is_err());
    }

    #[test]
    fn inversion_of_published_curves() {
        // Published incline curve at the bench angle 35.82 deg.
        let x = invert_quadratic(-33.71, 79.99, -3.99, 35.82, (0.35, 0.85)).unwrap();
        assert_relative_eq!(x, 0.710, epsilon = 0.005);
        // Published drop curve at the bench rebound 20.5 mm.
        let x = invert_quadratic(328.955, -186.957, 40.9209, 20.5, (0.3, 0.75)).unwrap();
        assert_relative_eq!(x, 0.421, epsilon = 0.003);
    }

    #[test]
    fn linear_and_error_paths() {
        assert_relative_eq!(
            invert_quadratic(0.0, 2.0, 0.0, 4.0, (0.0, 10.0)).unwrap(),
            2.0,
            max_relative = 1e-12
        );
        // No real root.
        assert!(matches!(
            invert_quadratic(1.0, 0.0, 10.0, 0.0, (-5.0, 5.0)),
            Err(RsmError::NoSolution { .. })
        ));
        // Both roots inside the range.
        assert!(matches!(
            invert_quadratic(1.0, 0.0, -1.0, 0.0, (-5.0, 5.0)),
            Err(RsmError::AmbiguousSolution { .. })
        ));
    }

    proptest! {
        /// Inverting a fitted quadratic at one of its own values recovers the
        /// abscissa when the range isolates it.
        #[test]
        fn inversion_round_trips(c2 in -50.0f64..50.0, c1 in -50.0f64..50.0,
                                 c0 in -50.0f64..50.0, x0 in 0.1f64..0.9) {
            prop_assume!(c2.abs() > 1e-3);
            let y = c2 * x0 * x0 + c1 * x0 + c0;
            // Range around x0 tight enough to exclude the sibling root
            // (which sits at -c1/c2 - x0).
            let other = -c1 / c2 - x0;
            let half = (0.49 * (other - x0).abs()).min(0.05);
            prop_assume!(half > 1e-6);
            let got = invert_quadratic(c2, c1, c0, y, (x0 - half, x0 + half)).unwrap();
            prop_assert!((got - x0).abs() < 1e-9, "{got} vs {x0}");
        }
    }
}
