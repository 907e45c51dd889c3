use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RigError;

/// Sieve-analysis size distribution: mass fraction retained per sieve size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeDistribution {
    /// (sieve size in m, mass fraction), sieve sizes strictly increasing.
    pub bins: Vec<(f64, f64)>,
}

impl SizeDistribution {
    pub fn new(bins: Vec<(f64, f64)>) -> Result<Self, RigError> {
        let d = Self { bins };
        d.validate()?;
        Ok(d)
    }

    /// Measured sieve fractions of the salt sample: 0.3/0.5/1/1.43/2 mm at
    /// 26/25/22/17/10 percent.
    pub fn salt_default() -> Self {
        Self {
            bins: vec![
                (0.3e-3, 0.26),
                (0.5e-3, 0.25),
                (1.0e-3, 0.22),
                (1.43e-3, 0.17),
                (2.0e-3, 0.10),
            ],
        }
    }

    pub fn validate(&self) -> Result<(), RigError> {
        if self.bins.is_empty() {
            return Err(RigError::InvalidInput("empty size distribution".into()));
        }
        let mut sum = 0.0;
        let mut prev = 0.0;
        for &(size, frac) in &self.bins {
            if size <= prev {
                return Err(RigError::InvalidInput(format!(
                    "sieve sizes must be strictly increasing, got {size} after {prev}"
                )));
            }
            if frac < 0.0 {
                return Err(RigError::InvalidInput(format!(
                    "negative mass fraction {frac}"
                )));
            }
            prev = size;
            sum += frac;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(RigError::InvalidInput(format!(
                "mass fractions sum to {sum}, expected 1"
            )));
        }
        Ok(())
    }

    pub fn min_radius(&self, scale_h: f64) -> f64 {
        self.bins[0].0 / 2.0 * scale_h
    }

    pub fn max_radius(&self, scale_h: f64) -> f64 {
        self.bins[self.bins.len() - 1].0 / 2.0 * scale_h
    }
}

/// Draw one particle radius: a bin is chosen with probability equal to its
/// mass fraction and the radius is half its sieve size times the
/// coarse-graining factor.
pub fn sample_radius<R: Rng>(
    dist: &SizeDistribution,
    scale_h: f64,
    rng: &mut R,
) -> Result<f64, RigError> {
    dist.validate()?;
    if !(scale_h > 0.0) {
        return Err(RigError::InvalidInput(format!(
            "scale factor must be positive, got {scale_h}"
        )));
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for &(size, frac) in &dist.bins {
        acc += frac;
        if u < acc {
            return Ok(size / 2.0 * scale_h);
        }
    }
    Ok(dist.bins[dist.bins.len() - 1].0 / 2.0 * scale_h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_bin_always_half_sieve() {
        let d = SizeDistribution::new(vec![(1e-3, 1.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sample_radius(&d, 1.0, &mut rng).unwrap(), 0.5e-3);
        }
    }

    #[test]
    fn empirical_frequencies_match_fractions() {
        let d = SizeDistribution::salt_default();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 100_000;
        let mut counts = vec![0usize; d.bins.len()];
        for _ in 0..n {
            let r = sample_radius(&d, 1.0, &mut rng).unwrap();
            let idx = d.bins.iter().position(|&(s, _)| s / 2.0 == r).unwrap();
            counts[idx] += 1;
        }
        for (i, &(_, frac)) in d.bins.iter().enumerate() {
            let freq = counts[i] as f64 / n as f64;
            assert!(
                (freq - frac).abs() < 0.01,
                "bin {i}: frequency {freq} vs fraction {frac}"
            );
        }
    }

    #[test]
    fn coarse_graining_doubles_radii() {
        let d = SizeDistribution::salt_default();
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let r1 = sample_radius(&d, 1.0, &mut a).unwrap();
            let r2 = sample_radius(&d, 2.0, &mut b).unwrap();
            assert_eq!(r2, 2.0 * r1);
        }
    }

    #[test]
    fn deterministic_under_fixed_seed() {
        let d = SizeDistribution::salt_default();
        let seq = |seed: u64| -> Vec<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| sample_radius(&d, 2.0, &mut rng).unwrap()).collect()
        };
        assert_eq!(seq(9), seq(9));
        assert_ne!(seq(9), seq(10));
    }

    #[test]
    fn invalid_distributions_rejected() {
        assert!(SizeDistribution::new(vec![]).is_err());
        assert!(SizeDistribution::new(vec![(1e-3, 0.5), (0.5e-3, 0.5)]).is_err());
        assert!(SizeDistribution::new(vec![(1e-3, 0.7)]).is_err());
        assert!(SizeDistribution::new(vec![(1e-3, 1.5), (2e-3, -0.5)]).is_err());
    }
}
