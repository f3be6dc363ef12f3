use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::dynamics::LinearDynamics;
use super::state::{symmetrize, GaussianState};
use crate::error::{Error, Result};

/// Real parts must lie below this for the drift to count as Hurwitz.
pub const HURWITZ_MARGIN: f64 = -1e-12;
/// Required accuracy of the steady covariance, `||A S + S A^T + D||_inf`.
pub const STEADY_RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    pub hurwitz: bool,
    /// Largest real part over the drift spectrum.
    pub abscissa: f64,
    /// An eigenvalue attaining the abscissa.
    pub leading: Complex64,
}

/// Iteration cap of one Schur attempt.
const SCHUR_MAX_ITERATIONS: usize = 10_000;
/// Deflation thresholds tried in turn. The deflation test is relative to the
/// neighbouring diagonal entries, so drifts with zero diagonal blocks may
/// never deflate at machine precision.
const SCHUR_THRESHOLDS: [f64; 4] = [f64::EPSILON, 1e-14, 1e-13, 1e-12];

/// Eigenvalues of a real square matrix. Stalled attempts are retried with a
/// looser deflation threshold and then on the orthogonally similar `H A H`,
/// with `H` a fixed Householder reflection.
pub fn spectrum(a: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    let v = DMatrix::from_fn(n, 1, |i, _| 1.0 + i as f64 * 0.37);
    let h = DMatrix::identity(n, n) - &v * v.transpose() * (2.0 / v.norm_squared());
    for candidate in [a.clone(), &h * a * &h] {
        for eps in SCHUR_THRESHOLDS {
            if let Some(schur) = candidate.clone().try_schur(eps, SCHUR_MAX_ITERATIONS) {
                return Ok(schur.complex_eigenvalues().iter().copied().collect());
            }
        }
    }
    Err(Error::Numerical(format!("eigenvalues of a {n}x{n} drift did not converge")))
}

pub fn hurwitz_check(dynamics: &LinearDynamics) -> Result<Stability> {
    let eigenvalues = spectrum(dynamics.drift())?;
    let leading = eigenvalues
        .iter()
        .copied()
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .expect("drift is non-empty");
    Ok(Stability {
        hurwitz: leading.re < HURWITZ_MARGIN,
        abscissa: leading.re,
        leading,
    })
}

/// Unique stationary state of Hurwitz dynamics: zero mean and the covariance
/// solving `A S + S A^T + D = 0`.
pub fn steady_state(dynamics: &LinearDynamics) -> Result<GaussianState> {
    let stability = hurwitz_check(dynamics)?;
    if !stability.hurwitz {
        return Err(Error::Unstable {
            re: stability.leading.re,
            im: stability.leading.im,
        });
    }
    let covariance = solve_lyapunov(dynamics.drift(), dynamics.diffusion())?;
    GaussianState::from_parts(DVector::zeros(dynamics.dim()), covariance)
}

/// Solves `A X + X A^T + Q = 0` by Kronecker vectorization,
/// `(I (x) A + A (x) I) vec X = -vec Q`, with iterative refinement.
pub fn solve_lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if !a.is_square() || q.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "Lyapunov operands {:?} and {:?} are incompatible",
            a.shape(),
            q.shape()
        )));
    }
    let eye = DMatrix::<f64>::identity(n, n);
    let operator = eye.kronecker(a) + a.kronecker(&eye);
    let lu = operator.lu();
    let residual = |x: &DMatrix<f64>| a * x + x * a.transpose() + q;

    let rhs = DVector::from_column_slice((-q).as_slice());
    let sol = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular Lyapunov operator".into()))?;
    let mut x = DMatrix::from_column_slice(n, n, sol.as_slice());
    symmetrize(&mut x);

    let scale = q.amax().max(1.0);
    for _ in 0..3 {
        let r = residual(&x);
        if r.amax() < STEADY_RESIDUAL_TOLERANCE * scale * 1e-2 {
            break;
        }
        let correction = lu
            .solve(&DVector::from_column_slice((-r).as_slice()))
            .ok_or_else(|| Error::Numerical("singular Lyapunov operator".into()))?;
        x += DMatrix::from_column_slice(n, n, correction.as_slice());
        symmetrize(&mut x);
    }
    let r = residual(&x).amax();
    if r >= STEADY_RESIDUAL_TOLERANCE * scale {
        return Err(Error::Numerical(format!("Lyapunov residual {r:.3e} above tolerance")));
    }
    Ok(x)
}
