use nalgebra::{DMatrix, DVector};

use super::dynamics::LinearDynamics;
use super::extended::{self, Wide};
use super::ode::{integrate, OdeOptions};
use super::state::{symmetrize, GaussianState};
use crate::error::{Error, Result};

/// Default relative tolerance of [`evolve`].
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

fn check_duration(duration: f64) -> Result<()> {
    if !duration.is_finite() || duration < 0.0 {
        return Err(Error::InvalidInput(format!("duration {duration} must be finite and >= 0")));
    }
    Ok(())
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if !(tolerance > 0.0 && tolerance <= 1e-3) {
        return Err(Error::InvalidInput(format!("tolerance {tolerance} must lie in (0, 1e-3]")));
    }
    Ok(())
}

/// Matrix exponential `e^{A tau}` of the drift, evaluated in double-double
/// arithmetic and rounded once.
pub fn propagator(dynamics: &LinearDynamics, duration: f64) -> Result<DMatrix<f64>> {
    if !duration.is_finite() {
        return Err(Error::InvalidInput(format!("duration {duration} is not finite")));
    }
    let p = extended::expm(dynamics.drift(), duration);
    if p.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("propagator overflow at tau = {duration}")));
    }
    Ok(p)
}

/// Advances a state by integrating the moment equations with an adaptive
/// Dormand–Prince scheme at relative tolerance `tolerance`.
pub fn evolve(dynamics: &LinearDynamics, state: &GaussianState, duration: f64, tolerance: f64) -> Result<GaussianState> {
    check_duration(duration)?;
    check_tolerance(tolerance)?;
    if state.dim() != dynamics.dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} does not match dynamics dimension {}",
            state.dim(),
            dynamics.dim()
        )));
    }
    if duration == 0.0 {
        return Ok(state.clone());
    }
    let dim = state.dim();
    let mut y: Vec<f64> = state.mean().iter().chain(state.covariance().iter()).copied().collect();
    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| {
        let mean = DVector::from_column_slice(&y[..dim]);
        let cov = DMatrix::from_column_slice(dim, dim, &y[dim..]);
        let mean_rate = dynamics.drift() * mean;
        let cov_rate = dynamics.covariance_rate(&cov);
        dy[..dim].copy_from_slice(mean_rate.as_slice());
        dy[dim..].copy_from_slice(cov_rate.as_slice());
    };
    let project = |y: &mut [f64]| {
        let mut cov = DMatrix::from_column_slice(dim, dim, &y[dim..]);
        symmetrize(&mut cov);
        y[dim..].copy_from_slice(cov.as_slice());
    };
    integrate(rhs, project, 0.0, duration, &mut y, &OdeOptions::with_tolerance(tolerance))?;
    GaussianState::from_parts(
        DVector::from_column_slice(&y[..dim]),
        DMatrix::from_column_slice(dim, dim, &y[dim..]),
    )
}

/// Integrates `dY/dtau = A Y` from `initial`; with `initial = I` this is an
/// ODE route to the propagator, independent of the matrix exponential.
pub fn evolve_matrix(drift: &DMatrix<f64>, initial: &DMatrix<f64>, duration: f64, tolerance: f64) -> Result<DMatrix<f64>> {
    check_duration(duration)?;
    check_tolerance(tolerance)?;
    if drift.ncols() != initial.nrows() || !drift.is_square() {
        return Err(Error::Dimension(format!(
            "drift {:?} incompatible with initial matrix {:?}",
            drift.shape(),
            initial.shape()
        )));
    }
    let (rows, cols) = initial.shape();
    let mut y = initial.as_slice().to_vec();
    integrate(
        |_, y, dy| {
            let m = DMatrix::from_column_slice(rows, cols, y);
            dy.copy_from_slice((drift * m).as_slice());
        },
        |_| {},
        0.0,
        duration,
        &mut y,
        &OdeOptions::with_tolerance(tolerance),
    )?;
    Ok(DMatrix::from_column_slice(rows, cols, &y))
}

/// Exact discretization of linear moment dynamics over a fixed interval:
/// `m -> P m`, `sigma -> P sigma P^T + W`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub propagator: DMatrix<f64>,
    pub noise: DMatrix<f64>,
}

impl Transition {
    /// Computes `P = e^{A tau}` and `W = int_0^tau e^{A s} D e^{A^T s} ds` by
    /// Van Loan's block exponential over `tau / 2^k`, small enough for the
    /// block to stay well scaled, then composes the `2^k` steps. All of it runs
    /// in double-double arithmetic.
    pub fn over(dynamics: &LinearDynamics, duration: f64) -> Result<Self> {
        check_duration(duration)?;
        let n = dynamics.dim();
        let norm = dynamics.drift().abs().column_sum().max() + dynamics.diffusion().abs().column_sum().max();
        let mut halvings = 0u32;
        while norm * duration / 2f64.powi(halvings as i32) > 4.0 && halvings < 60 {
            halvings += 1;
        }
        let h = duration / 2f64.powi(halvings as i32);
        let mut block = DMatrix::zeros(2 * n, 2 * n);
        block.view_mut((0, 0), (n, n)).copy_from(&(-dynamics.drift()));
        block.view_mut((0, n), (n, n)).copy_from(dynamics.diffusion());
        block.view_mut((n, n), (n, n)).copy_from(&dynamics.drift().transpose());
        let e = extended::expm_scaled(&extended::widen(&block), h);
        let p: Wide = e.view((n, n), (n, n)).transpose();
        let w: Wide = extended::mul(&p, &e.view((0, n), (n, n)).into_owned());
        let (mut p, mut w) = (p, w);
        for _ in 0..halvings {
            // (P, W) then (P, W): (P P, P W P^T + W)
            let pw = extended::mul(&p, &w);
            w = extended::mul(&pw, &p.transpose()) + &w;
            p = extended::mul(&p, &p);
        }
        let mut noise = extended::narrow(&w);
        symmetrize(&mut noise);
        let step = Transition {
            propagator: extended::narrow(&p),
            noise,
        };
        if step.propagator.iter().chain(step.noise.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("transition overflow at tau = {duration}")));
        }
        Ok(step)
    }

    /// Composition: apply `self` first, then `next`.
    pub fn then(&self, next: &Transition) -> Transition {
        let mut noise = &next.propagator * &self.noise * next.propagator.transpose() + &next.noise;
        symmetrize(&mut noise);
        Transition {
            propagator: &next.propagator * &self.propagator,
            noise,
        }
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.dim() != self.propagator.nrows() {
            return Err(Error::Dimension(format!(
                "state dimension {} does not match transition dimension {}",
                state.dim(),
                self.propagator.nrows()
            )));
        }
        let mean = &self.propagator * state.mean();
        let cov = &self.propagator * state.covariance() * self.propagator.transpose() + &self.noise;
        GaussianState::from_parts(mean, cov)
    }
}

/// Ordered segments of constant dynamics, each held for a duration.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSchedule {
    segments: Vec<(LinearDynamics, f64)>,
}

impl PiecewiseSchedule {
    pub fn new(segments: Vec<(LinearDynamics, f64)>) -> Result<Self> {
        let Some((first, _)) = segments.first() else {
            return Err(Error::InvalidInput("schedule needs at least one segment".into()));
        };
        let dim = first.dim();
        for (dynamics, duration) in &segments {
            check_duration(*duration)?;
            if dynamics.dim() != dim {
                return Err(Error::Dimension("all segments must act on the same modes".into()));
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[(LinearDynamics, f64)] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|(_, d)| d).sum()
    }

    /// Product of segment propagators, last segment leftmost.
    pub fn propagator(&self) -> Result<DMatrix<f64>> {
        let dim = self.segments[0].0.dim();
        self.segments
            .iter()
            .try_fold(DMatrix::identity(dim, dim), |acc, (dynamics, duration)| {
                Ok(propagator(dynamics, *duration)? * acc)
            })
    }

    /// Integrates the moment equations segment by segment.
    pub fn evolve(&self, state: &GaussianState, tolerance: f64) -> Result<GaussianState> {
        self.segments
            .iter()
            .try_fold(state.clone(), |s, (dynamics, duration)| evolve(dynamics, &s, *duration, tolerance))
    }

    /// Whole-schedule exact discretization.
    pub fn transition(&self) -> Result<Transition> {
        let mut segments = self.segments.iter();
        let (dynamics, duration) = segments.next().expect("non-empty schedule");
        segments.try_fold(Transition::over(dynamics, *duration)?, |acc, (dynamics, duration)| {
            Ok(acc.then(&Transition::over(dynamics, *duration)?))
        })
    }
}
