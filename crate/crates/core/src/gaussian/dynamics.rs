use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::state::{symmetrize, GaussianState};
use crate::error::{Error, Result};

/// Eigenvalue tolerance for positive semidefiniteness of the diffusion matrix.
const DIFFUSION_TOLERANCE: f64 = 1e-9;
/// Residue allowed when a complex matrix is expected to be real, or when two
/// copies of the same ladder-operator equation are compared.
const RESIDUE_TOLERANCE: f64 = 1e-12;

/// Moment dynamics `dm/dtau = A m`, `dsigma/dtau = A sigma + sigma A^T + D`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearDynamics {
    drift: DMatrix<f64>,
    diffusion: DMatrix<f64>,
    mode_labels: Vec<String>,
}

impl LinearDynamics {
    pub fn new(drift: DMatrix<f64>, diffusion: DMatrix<f64>, mode_labels: Vec<String>) -> Result<Self> {
        let dim = 2 * mode_labels.len();
        if dim == 0 {
            return Err(Error::Dimension("dynamics need at least one mode".into()));
        }
        if drift.shape() != (dim, dim) || diffusion.shape() != (dim, dim) {
            return Err(Error::Dimension(format!(
                "drift {:?} and diffusion {:?} must both be ({dim}, {dim}) for {} modes",
                drift.shape(),
                diffusion.shape(),
                mode_labels.len()
            )));
        }
        if drift.iter().chain(diffusion.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("dynamics contain non-finite entries".into()));
        }
        let asym = (&diffusion - diffusion.transpose()).amax();
        if asym > RESIDUE_TOLERANCE * diffusion.amax().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "diffusion is not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        let mut diffusion = diffusion;
        symmetrize(&mut diffusion);
        let min_eig = diffusion.clone().symmetric_eigenvalues().min();
        if min_eig < -DIFFUSION_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "diffusion is not positive semidefinite (eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self {
            drift,
            diffusion,
            mode_labels,
        })
    }

    /// Uncoupled damped modes relaxing towards thermal states.
    pub fn damping(decays: &[f64], occupations: &[f64]) -> Result<Self> {
        let labels = (0..decays.len()).map(|i| format!("mode{i}")).collect();
        Self::new(
            DMatrix::zeros(2 * decays.len(), 2 * decays.len()),
            DMatrix::zeros(2 * decays.len(), 2 * decays.len()),
            labels,
        )?
        .with_damping(decays, occupations)
    }

    /// Adds per-mode damping `-k I` to the drift and `k (2 n + 1) I` to the diffusion.
    pub fn with_damping(mut self, decays: &[f64], occupations: &[f64]) -> Result<Self> {
        let n = self.num_modes();
        if decays.len() != n || occupations.len() != n {
            return Err(Error::Dimension(format!(
                "{} decays and {} occupations given for {n} modes",
                decays.len(),
                occupations.len()
            )));
        }
        for (&k, &occ) in decays.iter().zip(occupations) {
            if !(k >= 0.0) || !(occ >= 0.0) || !k.is_finite() || !occ.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "decay {k} and occupation {occ} must be finite and non-negative"
                )));
            }
        }
        for (m, (&k, &occ)) in decays.iter().zip(occupations).enumerate() {
            for q in [2 * m, 2 * m + 1] {
                self.drift[(q, q)] -= k;
                self.diffusion[(q, q)] += k * (2.0 * occ + 1.0);
            }
        }
        Ok(self)
    }

    pub fn drift(&self) -> &DMatrix<f64> {
        &self.drift
    }

    pub fn diffusion(&self) -> &DMatrix<f64> {
        &self.diffusion
    }

    pub fn mode_labels(&self) -> &[String] {
        &self.mode_labels
    }

    pub fn num_modes(&self) -> usize {
        self.mode_labels.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.mode_labels.len()
    }

    /// Right-hand side of the moment equations: `(A m, A sigma + sigma A^T + D)`.
    pub fn lyapunov_rhs(&self, state: &GaussianState) -> Result<(DVector<f64>, DMatrix<f64>)> {
        if state.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "state dimension {} does not match dynamics dimension {}",
                state.dim(),
                self.dim()
            )));
        }
        let mean_rate = &self.drift * state.mean();
        Ok((mean_rate, self.covariance_rate(state.covariance())))
    }

    // A sigma + (A sigma)^T + D is exactly symmetric for symmetric sigma.
    pub(crate) fn covariance_rate(&self, covariance: &DMatrix<f64>) -> DMatrix<f64> {
        let a_sigma = &self.drift * covariance;
        &a_sigma + a_sigma.transpose() + &self.diffusion
    }
}

/// One entry of a mode-operator vector: annihilation operator of `mode`, or
/// its creation operator when `conjugate` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeOp {
    pub mode: usize,
    pub conjugate: bool,
}

impl ModeOp {
    pub fn annihilation(mode: usize) -> Self {
        Self { mode, conjugate: false }
    }

    pub fn creation(mode: usize) -> Self {
        Self { mode, conjugate: true }
    }

    fn ladder_index(self) -> usize {
        2 * self.mode + usize::from(self.conjugate)
    }

    fn flipped(self) -> Self {
        Self {
            mode: self.mode,
            conjugate: !self.conjugate,
        }
    }
}

/// Linear Heisenberg equations `d/dtau v = M v` for an operator vector `v`
/// written in a mixed basis such as `(a1, b1, b2^dag)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDriftSpec {
    basis: Vec<ModeOp>,
    matrix: DMatrix<Complex64>,
    mode_labels: Vec<String>,
}

impl ModeDriftSpec {
    pub fn new(basis: Vec<ModeOp>, matrix: DMatrix<Complex64>, mode_labels: Vec<String>) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Dimension("empty operator basis".into()));
        }
        if matrix.shape() != (basis.len(), basis.len()) {
            return Err(Error::Dimension(format!(
                "matrix {:?} does not match basis of length {}",
                matrix.shape(),
                basis.len()
            )));
        }
        if let Some(op) = basis.iter().find(|op| op.mode >= mode_labels.len()) {
            return Err(Error::Dimension(format!(
                "basis refers to mode {} but only {} labels given",
                op.mode,
                mode_labels.len()
            )));
        }
        let spec = Self {
            basis,
            matrix,
            mode_labels,
        };
        spec.ladder_matrix()?;
        Ok(spec)
    }

    pub fn basis(&self) -> &[ModeOp] {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn mode_labels(&self) -> &[String] {
        &self.mode_labels
    }

    pub fn num_modes(&self) -> usize {
        self.mode_labels.len()
    }

    /// Conjugate-extended equations in the ladder basis `(b1, b1^dag, b2, b2^dag, ...)`.
    pub fn ladder_matrix(&self) -> Result<DMatrix<Complex64>> {
        embed_in_ladder_basis(&self.basis, &self.matrix, self.num_modes())
    }
}

/// Appends the conjugate of every equation and reorders into the ladder basis.
/// A mode listed twice must produce identical rows from both listings.
fn embed_in_ladder_basis(
    basis: &[ModeOp],
    matrix: &DMatrix<Complex64>,
    num_modes: usize,
) -> Result<DMatrix<Complex64>> {
    let dim = 2 * num_modes;
    let mut ladder = DMatrix::<Complex64>::zeros(dim, dim);
    let mut filled = vec![false; dim];
    let scale = matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);

    for (j, &row_op) in basis.iter().enumerate() {
        for (op, conj) in [(row_op, false), (row_op.flipped(), true)] {
            let mut row = DMatrix::<Complex64>::zeros(1, dim);
            for (k, &col_op) in basis.iter().enumerate() {
                let (col, value) = if conj {
                    (col_op.flipped(), matrix[(j, k)].conj())
                } else {
                    (col_op, matrix[(j, k)])
                };
                row[(0, col.ladder_index())] += value;
            }
            let idx = op.ladder_index();
            if filled[idx] {
                let diff = (ladder.row(idx) - row.row(0))
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                if diff > RESIDUE_TOLERANCE * scale {
                    return Err(Error::Inconsistent(format!(
                        "two equations for mode {} disagree by {diff:.3e}",
                        op.mode
                    )));
                }
            } else {
                ladder.row_mut(idx).copy_from(&row.row(0));
                filled[idx] = true;
            }
        }
    }
    if let Some(missing) = filled.iter().position(|f| !f) {
        return Err(Error::Inconsistent(format!("mode {} has no equation", missing / 2)));
    }
    Ok(ladder)
}

/// Maps a mode-space matrix (generator or propagator) acting on `basis` to the
/// real matrix acting on quadratures `(x1, p1, ...)`.
pub fn mode_to_quadrature(basis: &[ModeOp], matrix: &DMatrix<Complex64>, num_modes: usize) -> Result<DMatrix<f64>> {
    let ladder = embed_in_ladder_basis(basis, matrix, num_modes)?;
    let dim = 2 * num_modes;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let mut to_quad = DMatrix::<Complex64>::zeros(dim, dim);
    let mut from_quad = DMatrix::<Complex64>::zeros(dim, dim);
    for m in 0..num_modes {
        let (x, p) = (2 * m, 2 * m + 1);
        // x = (b + b^dag)/sqrt2, p = -i (b - b^dag)/sqrt2
        to_quad[(x, x)] = one * h;
        to_quad[(x, p)] = one * h;
        to_quad[(p, x)] = -i * h;
        to_quad[(p, p)] = i * h;
        // b = (x + i p)/sqrt2, b^dag = (x - i p)/sqrt2
        from_quad[(x, x)] = one * h;
        from_quad[(x, p)] = i * h;
        from_quad[(p, x)] = one * h;
        from_quad[(p, p)] = -i * h;
    }
    let quad = to_quad * ladder * from_quad;
    let residue = quad.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let scale = quad.iter().map(|z| z.re.abs()).fold(1.0, f64::max);
    if residue > RESIDUE_TOLERANCE * scale {
        return Err(Error::NonReal(residue));
    }
    Ok(quad.map(|z| z.re))
}

/// Converts mode-operator equations plus per-mode damping and thermal noise
/// into quadrature moment dynamics.
pub fn quadrature_dynamics(spec: &ModeDriftSpec, decays: &[f64], occupations: &[f64]) -> Result<LinearDynamics> {
    let drift = mode_to_quadrature(&spec.basis, &spec.matrix, spec.num_modes())?;
    let dim = drift.nrows();
    LinearDynamics::new(drift, DMatrix::zeros(dim, dim), spec.mode_labels.clone())?
        .with_damping(decays, occupations)
}
