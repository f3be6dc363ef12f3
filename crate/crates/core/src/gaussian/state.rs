use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Eigenvalue tolerance for the uncertainty relation `sigma + (i/2) Omega >= 0`.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

/// Gaussian state of `N` bosonic modes in quadrature order `(x1, p1, ..., xN, pN)`.
///
/// Quadratures are `x = (b + b^dag)/sqrt(2)`, `p = -i(b - b^dag)/sqrt(2)`, so the
/// vacuum covariance is `I/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state after checking dimensions, symmetry and physicality.
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "mean vector length {dim} is not a positive even number"
            )));
        }
        if covariance.shape() != (dim, dim) {
            return Err(Error::Dimension(format!(
                "covariance is {:?}, expected ({dim}, {dim})",
                covariance.shape()
            )));
        }
        if mean.iter().chain(covariance.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("state contains non-finite entries".into()));
        }
        let asym = (&covariance - covariance.transpose()).amax();
        if asym > 1e-12 * covariance.amax().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "covariance is not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        Self::from_parts(mean, covariance)
    }

    /// Symmetrizes the covariance and enforces physicality. Used after every
    /// update by integrators and solvers.
    pub(crate) fn from_parts(mean: DVector<f64>, mut covariance: DMatrix<f64>) -> Result<Self> {
        symmetrize(&mut covariance);
        let min_eig = uncertainty_min_eigenvalue(&covariance);
        if min_eig < -PHYSICALITY_TOLERANCE {
            return Err(Error::Unphysical(min_eig));
        }
        if min_eig < 0.0 {
            for i in 0..covariance.nrows() {
                covariance[(i, i)] -= min_eig;
            }
        }
        Ok(Self { mean, covariance })
    }

    pub fn vacuum(num_modes: usize) -> Self {
        Self::thermal(&vec![0.0; num_modes]).expect("vacuum is physical")
    }

    /// Product of thermal states with the given mean occupations.
    pub fn thermal(occupations: &[f64]) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::Dimension("at least one mode is required".into()));
        }
        if let Some(n) = occupations.iter().find(|n| !(**n >= 0.0) || !n.is_finite()) {
            return Err(Error::InvalidInput(format!("occupation {n} must be finite and >= 0")));
        }
        let dim = 2 * occupations.len();
        let diag = DVector::from_iterator(dim, occupations.iter().flat_map(|n| [n + 0.5, n + 0.5]));
        Ok(Self {
            mean: DVector::zeros(dim),
            covariance: DMatrix::from_diagonal(&diag),
        })
    }

    /// Two-mode squeezed vacuum with squeezing `xi >= 0`, correlated so that
    /// `x1 + x2` and `p1 - p2` are squeezed.
    pub fn two_mode_squeezed(xi: f64) -> Result<Self> {
        if !(xi >= 0.0) || !xi.is_finite() {
            return Err(Error::InvalidInput(format!("squeezing {xi} must be finite and >= 0")));
        }
        let (c, s) = ((2.0 * xi).cosh() / 2.0, (2.0 * xi).sinh() / 2.0);
        #[rustfmt::skip]
        let covariance = DMatrix::from_row_slice(4, 4, &[
            c, 0.0, -s, 0.0,
            0.0, c, 0.0, s,
            -s, 0.0, c, 0.0,
            0.0, s, 0.0, c,
        ]);
        Self::from_parts(DVector::zeros(4), covariance)
    }

    pub fn num_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    /// Returns a copy displaced by `shift` in phase space.
    pub fn displaced(&self, shift: &DVector<f64>) -> Result<Self> {
        if shift.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "displacement length {} does not match state dimension {}",
                shift.len(),
                self.dim()
            )));
        }
        Ok(Self {
            mean: &self.mean + shift,
            covariance: self.covariance.clone(),
        })
    }

    /// Minimum eigenvalue of `sigma + (i/2) Omega`; non-negative for physical states.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        uncertainty_min_eigenvalue(&self.covariance)
    }
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Symplectic form: block diagonal with `[[0, 1], [-1, 0]]` blocks.
pub fn symplectic_form(num_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * num_modes, 2 * num_modes);
    for m in 0..num_modes {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}

// The Hermitian matrix S + iK is PSD iff the real symmetric [[S, -K], [K, S]] is.
fn uncertainty_min_eigenvalue(covariance: &DMatrix<f64>) -> f64 {
    let n = covariance.nrows();
    let half_omega = symplectic_form(n / 2) * 0.5;
    let mut embedded = DMatrix::zeros(2 * n, 2 * n);
    embedded.view_mut((0, 0), (n, n)).copy_from(covariance);
    embedded.view_mut((n, n), (n, n)).copy_from(covariance);
    embedded.view_mut((0, n), (n, n)).copy_from(&(-&half_omega));
    embedded.view_mut((n, 0), (n, n)).copy_from(&half_omega);
    embedded.symmetric_eigenvalues().min()
}
