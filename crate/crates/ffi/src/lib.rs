//! C interface to the `cvsim` Gaussian simulator.
//!
//! Every fallible function returns a [`CvStatus`]; on failure a message is kept
//! per thread and can be copied out with [`cvsim_last_error`]. Objects are
//! opaque handles released with their matching `*_free` function. Matrices
//! are exchanged row-major, `2N x 2N` for `N` modes, in quadrature order
//! `(x1, p1, ..., xN, pN)`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cvsim::experiments::scheme_figure_of_merit;
use cvsim::gaussian::{evolve, hurwitz_check, propagator, steady_state, Transition};
use cvsim::metrics::{epr_variance, photon_number, EprPair};
use cvsim::params::{scheme_rates, PhysicalParams};
use cvsim::schemes::{dissipative_dynamics, dissipative_steady_variance, parallel_dynamics, SchemeConfig, SchemeKind};
use cvsim::{Error, GaussianState, LinearDynamics};
use nalgebra::{DMatrix, DVector};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Dimension = 3,
    Unstable = 4,
    Unphysical = 5,
    Numerical = 6,
    Config = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvScheme {
    Cascaded = 0,
    Parallel = 1,
    Dissipative = 2,
}

/// Dimensionless scheme parameters; `tau1`/`tau2` are used by the cascaded
/// scheme only.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvSchemeParams {
    pub scheme: CvScheme,
    pub r: f64,
    pub k: [f64; 3],
    pub n_th: [f64; 3],
    pub tau1: f64,
    pub tau2: f64,
}

/// Derived rates of a device preset. Frequencies and couplings in rad/s.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CvRates {
    pub resonator_frequencies: [f64; 2],
    pub couplings: [f64; 2],
    pub cavity_photon_numbers: [f64; 2],
    pub effective_couplings: [f64; 2],
    pub r: f64,
    pub k: [f64; 3],
    pub n_th: [f64; 3],
}

/// Opaque Gaussian state.
pub struct CvState(GaussianState);

/// Opaque linear dynamics.
pub struct CvDynamics(LinearDynamics);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn status_of(e: &Error) -> CvStatus {
    match e {
        Error::Dimension(_) => CvStatus::Dimension,
        Error::InvalidInput(_) | Error::Inconsistent(_) | Error::NonReal(_) => CvStatus::InvalidInput,
        Error::Unstable { .. } => CvStatus::Unstable,
        Error::Unphysical(_) => CvStatus::Unphysical,
        Error::Numerical(_) => CvStatus::Numerical,
        Error::Config(_) | Error::Io { .. } => CvStatus::Config,
    }
}

fn set_error(message: String) {
    LAST_ERROR.with(|m| *m.borrow_mut() = message);
}

fn guard(f: impl FnOnce() -> Result<(), (CvStatus, String)>) -> CvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            CvStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CvStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (CvStatus, String)>;
}

impl<T> IntoFfi<T> for cvsim::Result<T> {
    fn ffi(self) -> Result<T, (CvStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (CvStatus, String) {
    (CvStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (CvStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], (CvStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (CvStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_matrix(m: &DMatrix<f64>, out: *mut f64, len: usize) -> Result<(), (CvStatus, String)> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if len < m.len() {
        return Err((CvStatus::Dimension, format!("buffer holds {len} values, {} needed", m.len())));
    }
    let dst = std::slice::from_raw_parts_mut(out, m.len());
    for (i, row) in m.row_iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            dst[i * m.ncols() + j] = *v;
        }
    }
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn scheme_config(p: &CvSchemeParams) -> SchemeConfig {
    let kind = match p.scheme {
        CvScheme::Cascaded => SchemeKind::Cascaded,
        CvScheme::Parallel => SchemeKind::Parallel,
        CvScheme::Dissipative => SchemeKind::Dissipative,
    };
    SchemeConfig::new(kind, p.r)
        .with_decays(p.k[0], p.k[1], p.k[2])
        .with_occupations(p.n_th)
        .with_timing(p.tau1, p.tau2)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cvsim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cvsim_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|m| {
        let m = m.borrow();
        if !buf.is_null() && len > 0 {
            let n = m.len().min(len - 1);
            ptr::copy_nonoverlapping(m.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        m.len()
    })
}

/// Product of thermal states; `occupations` holds `modes` values.
///
/// # Safety
/// `occupations` must point to `modes` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_state_thermal(occupations: *const f64, modes: usize, out: *mut *mut CvState) -> CvStatus {
    guard(|| {
        let occ = slice(occupations, modes, "occupations")?;
        let state = GaussianState::thermal(occ).ffi()?;
        write_out(out, boxed(CvState(state)), "out")
    })
}

/// Vacuum of `modes` modes.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_state_vacuum(modes: usize, out: *mut *mut CvState) -> CvStatus {
    guard(|| {
        if modes == 0 {
            return Err((CvStatus::Dimension, "at least one mode is required".into()));
        }
        write_out(out, boxed(CvState(GaussianState::vacuum(modes))), "out")
    })
}

/// State from a mean (`2N`) and a row-major covariance (`2N x 2N`).
///
/// # Safety
/// `mean` and `covariance` must hold `2 modes` and `4 modes^2` doubles.
#[no_mangle]
pub unsafe extern "C" fn cvsim_state_new(
    mean: *const f64,
    covariance: *const f64,
    modes: usize,
    out: *mut *mut CvState,
) -> CvStatus {
    guard(|| {
        let dim = 2 * modes;
        let m = DVector::from_column_slice(slice(mean, dim, "mean")?);
        let c = DMatrix::from_row_slice(dim, dim, slice(covariance, dim * dim, "covariance")?);
        let state = GaussianState::new(m, c).ffi()?;
        write_out(out, boxed(CvState(state)), "out")
    })
}

/// # Safety
/// `state` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cvsim_state_free(state: *mut CvState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of modes of a state, 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvsim_state_num_modes(state: *const CvState) -> usize {
    state.as_ref().map_or(0, |s| s.0.num_modes())
}

/// Copies the row-major covariance into `out` (`len >= 4 N^2`).
///
/// # Safety
/// `state` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cvsim_state_covariance(state: *const CvState, out: *mut f64, len: usize) -> CvStatus {
    guard(|| write_matrix(deref(state, "state")?.0.covariance(), out, len))
}

/// Copies the mean into `out` (`len >= 2N`).
///
/// # Safety
/// `state` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cvsim_state_mean(state: *const CvState, out: *mut f64, len: usize) -> CvStatus {
    guard(|| {
        let mean = deref(state, "state")?.0.mean();
        write_matrix(&DMatrix::from_column_slice(1, mean.len(), mean.as_slice()), out, len)
    })
}

/// Dynamics from row-major drift and diffusion.
///
/// # Safety
/// `drift` and `diffusion` must hold `4 modes^2` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_dynamics_new(
    drift: *const f64,
    diffusion: *const f64,
    modes: usize,
    out: *mut *mut CvDynamics,
) -> CvStatus {
    guard(|| {
        let dim = 2 * modes;
        let a = DMatrix::from_row_slice(dim, dim, slice(drift, dim * dim, "drift")?);
        let d = DMatrix::from_row_slice(dim, dim, slice(diffusion, dim * dim, "diffusion")?);
        let labels = (0..modes).map(|i| format!("mode{i}")).collect();
        let dynamics = LinearDynamics::new(a, d, labels).ffi()?;
        write_out(out, boxed(CvDynamics(dynamics)), "out")
    })
}

/// Dynamics of the parallel (three modes) or dissipative (four modes) scheme.
/// The cascaded scheme is piecewise and has no single generator.
///
/// # Safety
/// `params` must point to a valid struct; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_dynamics_scheme(params: *const CvSchemeParams, out: *mut *mut CvDynamics) -> CvStatus {
    guard(|| {
        let cfg = scheme_config(deref(params, "params")?);
        let dynamics = match cfg.kind {
            SchemeKind::Parallel => parallel_dynamics(&cfg).ffi()?,
            SchemeKind::Dissipative => dissipative_dynamics(&cfg).ffi()?,
            SchemeKind::Cascaded => {
                return Err((CvStatus::InvalidInput, "the cascaded scheme has no single generator".into()))
            }
        };
        write_out(out, boxed(CvDynamics(dynamics)), "out")
    })
}

/// # Safety
/// `dynamics` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvsim_dynamics_free(dynamics: *mut CvDynamics) {
    if !dynamics.is_null() {
        drop(Box::from_raw(dynamics));
    }
}

/// Number of modes of the dynamics, 0 for a null handle.
///
/// # Safety
/// `dynamics` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvsim_dynamics_num_modes(dynamics: *const CvDynamics) -> usize {
    dynamics.as_ref().map_or(0, |d| d.0.num_modes())
}

/// Adaptive integration of the moment equations for `duration`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_evolve(
    dynamics: *const CvDynamics,
    state: *const CvState,
    duration: f64,
    tolerance: f64,
    out: *mut *mut CvState,
) -> CvStatus {
    guard(|| {
        let d = &deref(dynamics, "dynamics")?.0;
        let s = &deref(state, "state")?.0;
        let next = evolve(d, s, duration, tolerance).ffi()?;
        write_out(out, boxed(CvState(next)), "out")
    })
}

/// Exact discretized step `sigma -> P sigma P^T + W` over `duration`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_transition(
    dynamics: *const CvDynamics,
    state: *const CvState,
    duration: f64,
    out: *mut *mut CvState,
) -> CvStatus {
    guard(|| {
        let d = &deref(dynamics, "dynamics")?.0;
        let s = &deref(state, "state")?.0;
        let next = Transition::over(d, duration).and_then(|t| t.apply(s)).ffi()?;
        write_out(out, boxed(CvState(next)), "out")
    })
}

/// Row-major propagator `e^{A tau}` into `out` (`len >= 4 N^2`).
///
/// # Safety
/// `dynamics` must be live; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cvsim_propagator(dynamics: *const CvDynamics, duration: f64, out: *mut f64, len: usize) -> CvStatus {
    guard(|| {
        let p = propagator(&deref(dynamics, "dynamics")?.0, duration).ffi()?;
        write_matrix(&p, out, len)
    })
}

/// Stationary state; fails with `Unstable` for non-Hurwitz drifts.
///
/// # Safety
/// `dynamics` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_steady_state(dynamics: *const CvDynamics, out: *mut *mut CvState) -> CvStatus {
    guard(|| {
        let s = steady_state(&deref(dynamics, "dynamics")?.0).ffi()?;
        write_out(out, boxed(CvState(s)), "out")
    })
}

/// Writes 1 to `hurwitz` when every drift eigenvalue has negative real part,
/// and the largest real part to `abscissa`.
///
/// # Safety
/// `dynamics` must be live; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_hurwitz(dynamics: *const CvDynamics, hurwitz: *mut i32, abscissa: *mut f64) -> CvStatus {
    guard(|| {
        let s = hurwitz_check(&deref(dynamics, "dynamics")?.0).ffi()?;
        write_out(hurwitz, i32::from(s.hurwitz), "hurwitz")?;
        write_out(abscissa, s.abscissa, "abscissa")
    })
}

/// Total variance `Var(x_a + x_b) + Var(p_a - p_b)` of modes `a` and `b`.
///
/// # Safety
/// `state` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_epr_variance(state: *const CvState, a: usize, b: usize, out: *mut f64) -> CvStatus {
    guard(|| {
        let s = &deref(state, "state")?.0;
        let v = EprPair::new(a, b).and_then(|pair| epr_variance(s, pair)).ffi()?;
        write_out(out, v, "out")
    })
}

/// Mean photon number of one mode.
///
/// # Safety
/// `state` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_photon_number(state: *const CvState, mode: usize, out: *mut f64) -> CvStatus {
    guard(|| {
        let n = photon_number(&deref(state, "state")?.0, mode).ffi()?;
        write_out(out, n, "out")
    })
}

/// Closed-form stable variance of the dissipative scheme.
///
/// # Safety
/// `params` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_dissipative_steady_variance(params: *const CvSchemeParams, out: *mut f64) -> CvStatus {
    guard(|| {
        let cfg = scheme_config(deref(params, "params")?);
        if cfg.kind != SchemeKind::Dissipative {
            return Err((CvStatus::InvalidInput, "parameters describe a different scheme".into()));
        }
        write_out(out, dissipative_steady_variance(&cfg).ffi()?, "out")
    })
}

/// Figure of merit of a scheme: cascaded final variance, parallel minimum
/// over the first period, dissipative steady variance.
///
/// # Safety
/// `params` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_scheme_variance(params: *const CvSchemeParams, out: *mut f64) -> CvStatus {
    guard(|| {
        let cfg = scheme_config(deref(params, "params")?);
        write_out(out, scheme_figure_of_merit(&cfg).ffi()?, "out")
    })
}

/// Rates of a named device preset: `cascaded`, `cascaded-improved`,
/// `parallel` or `dissipative`.
///
/// # Safety
/// `preset` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvsim_device_rates(preset: *const c_char, out: *mut CvRates) -> CvStatus {
    guard(|| {
        if preset.is_null() {
            return Err(null("preset"));
        }
        let name = CStr::from_ptr(preset)
            .to_str()
            .map_err(|_| (CvStatus::InvalidInput, "preset is not UTF-8".to_string()))?;
        let params = match name {
            "cascaded" => PhysicalParams::cascaded(),
            "cascaded-improved" => PhysicalParams::cascaded_improved(),
            "parallel" => PhysicalParams::parallel(),
            "dissipative" => PhysicalParams::dissipative(),
            other => return Err((CvStatus::InvalidInput, format!("unknown device preset '{other}'"))),
        };
        let r = scheme_rates(&params).ffi()?;
        let rates = CvRates {
            resonator_frequencies: r.resonator_frequencies,
            couplings: r.couplings,
            cavity_photon_numbers: r.cavity_photon_numbers,
            effective_couplings: r.effective_couplings,
            r: r.ratio,
            k: r.scaled_decays,
            n_th: r.thermal_occupations,
        };
        write_out(out, rates, "out")
    })
}
