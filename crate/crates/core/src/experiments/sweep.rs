use rayon::prelude::*;

use crate::error::{Error, Result};

/// Resolution of the golden-section refinement.
pub const REFINE_TOLERANCE: f64 = 1e-3;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: String,
    /// `(parameter value, V)` in increasing parameter order.
    pub samples: Vec<(f64, f64)>,
    /// Smallest sample.
    pub best_sample: (f64, f64),
    /// Refined minimum: never worse than `best_sample`.
    pub optimum: (f64, f64),
}

impl SweepResult {
    /// Number of strict interior local minima of the sampled curve.
    pub fn interior_minima(&self) -> usize {
        self.samples
            .windows(3)
            .filter(|w| w[1].1 < w[0].1 && w[1].1 < w[2].1)
            .count()
    }

    /// Whether the sampled minimum sits at either end of the range.
    pub fn at_boundary(&self) -> bool {
        let first = self.samples.first().map(|s| s.0);
        let last = self.samples.last().map(|s| s.0);
        Some(self.best_sample.0) == first || Some(self.best_sample.0) == last
    }
}

/// Evenly spaced points including both ends.
pub fn linspace(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 || !from.is_finite() || !to.is_finite() {
        return Err(Error::InvalidInput(format!(
            "grid [{from}, {to}] with {points} points is empty or not finite"
        )));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    if !(to > from) {
        return Err(Error::InvalidInput(format!("grid end {to} must exceed start {from}")));
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i == points - 1 { to } else { from + i as f64 * step })
        .collect())
}

/// Evaluates `f` at every grid point (concurrently) and refines the best
/// bracket by golden-section search down to [`REFINE_TOLERANCE`].
pub fn scan<F>(parameter: &str, grid: &[f64], f: F) -> Result<SweepResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if grid.is_empty() {
        return Err(Error::InvalidInput("sweep range is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("sweep grid must be strictly increasing".into()));
    }
    let values: Vec<f64> = grid.par_iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let samples: Vec<(f64, f64)> = grid.iter().copied().zip(values).collect();
    let best_idx = samples
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .expect("non-empty");
    let best_sample = samples[best_idx];
    let optimum = if samples.len() < 2 {
        best_sample
    } else {
        let lo = samples[best_idx.saturating_sub(1)].0;
        let hi = samples[(best_idx + 1).min(samples.len() - 1)].0;
        let refined = golden_minimize(&f, lo, hi, REFINE_TOLERANCE)?;
        if refined.1 < best_sample.1 {
            refined
        } else {
            best_sample
        }
    };
    Ok(SweepResult {
        parameter: parameter.to_string(),
        samples,
        best_sample,
        optimum,
    })
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`; returns
/// the best point evaluated.
pub fn golden_minimize<F>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(b >= a) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("invalid bracket [{a}, {b}] or tolerance {tol}")));
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}
