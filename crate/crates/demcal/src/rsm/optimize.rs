use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{QuadModel, RsmError};

/// One point on (or near) the target level set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Candidate {
    pub coded: [f64; 3],
    pub physical: [f64; 3],
    pub predicted: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizeResult {
    /// Distinct minima with residual below tolerance, ordered by grid index
    /// of the originating cell. When unconverged, holds the single best
    /// point found.
    pub candidates: Vec<Candidate>,
    pub converged: bool,
}

impl OptimizeResult {
    /// Candidate whose coded coordinates are nearest to `reference`.
    pub fn nearest_to(&self, reference: [f64; 3]) -> Option<&Candidate> {
        self.candidates.iter().min_by(|a, b| {
            let da = dist2(a.coded, reference);
            let db = dist2(b.coded, reference);
            da.partial_cmp(&db).unwrap()
        })
    }
}

fn dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

/// Find the points of the coded box where the model equals `target`.
///
/// Dense grid scan (n^3 cells, default n = 101) keeps every cell whose
/// residual could reach the target, then coordinate descent polishes each
/// survivor onto the level set. The target set is generally a surface, so
/// "all distinct minima" is a deterministic sampling of it, merged in grid
/// order and deduplicated at 1e-3 coded distance.
pub fn optimize_to_target(
    model: &QuadModel,
    target: f64,
    bounds: ([f64; 3], [f64; 3]),
    tolerance: f64,
    grid_n: usize,
) -> Result<OptimizeResult, RsmError> {
    let (lo, hi) = bounds;
    for i in 0..3 {
        if !(lo[i] < hi[i]) {
            return Err(RsmError::InvalidInput(format!(
                "bounds axis {i}: {} not below {}",
                lo[i], hi[i]
            )));
        }
    }
    if !(tolerance > 0.0) || grid_n < 2 {
        return Err(RsmError::InvalidInput(
            "tolerance must be positive and grid_n >= 2".into(),
        ));
    }
    if model.factors.len() != 3 {
        return Err(RsmError::InvalidInput(
            "optimization needs the 3-factor coding block".into(),
        ));
    }

    let axis = |k: usize, i: usize| lo[k] + (hi[k] - lo[k]) * i as f64 / (grid_n - 1) as f64;
    // A residual below this can plausibly refine onto the level set; scaled
    // by the cell diagonal times a crude Lipschitz bound of the model.
    let cell = (0..3)
        .map(|k| (hi[k] - lo[k]) / (grid_n - 1) as f64)
        .fold(0.0f64, f64::max);
    let lipschitz: f64 = model
        .linear
        .iter()
        .chain(model.interaction.iter())
        .chain(model.quadratic.iter().map(|q| q).map(|q| q))
        .map(|c| c.abs())
        .sum::<f64>()
        * 2.0
        + 1.0;
    let keep_threshold = (lipschitz * cell).max(tolerance);

    // Parallel scan over a-slabs; slab results concatenate in grid order.
    let seeds: Vec<[f64; 3]> = (0..grid_n)
        .into_par_iter()
        .map(|ia| {
            let a = axis(0, ia);
            let mut local = Vec::new();
            for ib in 0..grid_n {
                let b = axis(1, ib);
                for ic in 0..grid_n {
                    let c = axis(2, ic);
                    if (model.eval_coded(a, b, c) - target).abs() < keep_threshold {
                        local.push([a, b, c]);
                    }
                }
            }
            local
        })
        .reduce(Vec::new, |mut acc, mut v| {
            acc.append(&mut v);
            acc
        });

    let refined: Vec<Candidate> = seeds
        .par_iter()
        .map(|&seed| refine(model, target, seed, lo, hi))
        .collect();

    // Dedup numerically identical points, preserving grid order.
    let mut candidates: Vec<Candidate> = Vec::new();
    for c in refined {
        if c.residual < tolerance
            && !candidates.iter().any(|k| dist2(k.coded, c.coded) < 1e-6)
        {
            candidates.push(c);
        }
    }

    if candidates.is_empty() {
        // Unconverged: report the best effort.
        let best = seeds
            .iter()
            .map(|&s| refine(model, target, s, lo, hi))
            .min_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap());
        let best = best.unwrap_or_else(|| {
            // Level set nowhere near the grid: evaluate the box center.
            let center = [
                0.5 * (lo[0] + hi[0]),
                0.5 * (lo[1] + hi[1]),
                0.5 * (lo[2] + hi[2]),
            ];
            refine(model, target, center, lo, hi)
        });
        return Ok(OptimizeResult {
            candidates: vec![best],
            converged: false,
        });
    }

    Ok(OptimizeResult {
        candidates,
        converged: true,
    })
}

/// Coordinate descent: along each axis the model is an exact 1-D quadratic,
/// so each sweep solves for the in-bounds root (or bound/vertex minimizer).
fn refine(model: &QuadModel, target: f64, start: [f64; 3], lo: [f64; 3], hi: [f64; 3]) -> Candidate {
    let mut x = start;
    for _ in 0..6 {
        for k in 0..3 {
            x[k] = best_axis_value(model, target, x, k, lo[k], hi[k]);
        }
        if (model.eval_coded(x[0], x[1], x[2]) - target).abs() < 1e-13 {
            break;
        }
    }
    let predicted = model.eval_coded(x[0], x[1], x[2]);
    let physical = [
        model.factors[0].decode(x[0]),
        model.factors[1].decode(x[1]),
        model.factors[2].decode(x[2]),
    ];
    Candidate {
        coded: x,
        physical,
        predicted,
        residual: (predicted - target).abs(),
    }
}

fn best_axis_value(model: &QuadModel, target: f64, x: [f64; 3], k: usize, lo: f64, hi: f64) -> f64 {
    // f(t) = q t^2 + l t + rest - target along axis k.
    let q = model.quadratic[k];
    let (l, rest) = {
        let mut x0 = x;
        x0[k] = 0.0;
        let f0 = model.eval_coded(x0[0], x0[1], x0[2]);
        let mut x1 = x0;
        x1[k] = 1.0;
        let f1 = model.eval_coded(x1[0], x1[1], x1[2]);
        // f1 = q + l + f0
        (f1 - f0 - q, f0)
    };
    let c0 = rest - target;

    let mut best = x[k];
    let mut best_val = f64::INFINITY;
    let mut consider = |t: f64| {
        if t >= lo && t <= hi {
            let v = (q * t * t + l * t + c0).abs();
            // Tie-break toward the current position for stability.
            let v_adj = v + 1e-15 * (t - x[k]).abs();
            if v_adj < best_val {
                best_val = v_adj;
                best = t;
            }
        }
    };

    if q.abs() > 1e-300 {
        let disc = l * l - 4.0 * q * c0;
        if disc >= 0.0 {
            let s = disc.sqrt();
            consider((-l + s) / (2.0 * q));
            consider((-l - s) / (2.0 * q));
        }
        consider(-l / (2.0 * q)); // vertex: closest approach if no root
    } else if l.abs() > 1e-300 {
        consider(-c0 / l);
    }
    consider(lo);
    consider(hi);
    consider(x[k]);
    best
}
