//! Matrix exponentials in double-double arithmetic.

use nalgebra::DMatrix;
use twofloat::TwoFloat;

pub(crate) type Wide = DMatrix<TwoFloat>;

const TAYLOR_NORM: f64 = 0.5;
const TAYLOR_MAX_TERMS: usize = 60;
const TAYLOR_CUTOFF: f64 = 1e-34;

pub(crate) fn widen(m: &DMatrix<f64>) -> Wide {
    m.map(TwoFloat::from)
}

pub(crate) fn narrow(m: &Wide) -> DMatrix<f64> {
    m.map(f64::from)
}

fn norm1(m: &Wide) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|v| v.hi().abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn mul(a: &Wide, b: &Wide) -> Wide {
    a * b
}

/// `e^{m t}` with the product `m t` formed in double-double.
pub(crate) fn expm_scaled(m: &Wide, t: f64) -> Wide {
    let n = m.nrows();
    let norm = norm1(m) * t.abs();
    let squarings = if norm > TAYLOR_NORM { (norm / TAYLOR_NORM).log2().ceil() as i32 } else { 0 };
    let scale = TwoFloat::from(t) / TwoFloat::from(2f64.powi(squarings));
    let x = m.map(|v| v * scale);

    let mut term = Wide::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=TAYLOR_MAX_TERMS {
        term = mul(&term, &x).map(|v| v / TwoFloat::from(k as f64));
        sum += &term;
        if norm1(&term) <= TAYLOR_CUTOFF * norm1(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// `e^{m t}` rounded to `f64`.
pub(crate) fn expm(m: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
    narrow(&expm_scaled(&widen(m), t))
}
