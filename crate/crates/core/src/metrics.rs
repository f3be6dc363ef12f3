//! Entanglement diagnostics on Gaussian states.

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;

/// Duan threshold on the EPR total variance: entangled iff `V < 2`.
pub const DUAN_THRESHOLD: f64 = 2.0;

/// Two distinct modes whose EPR-like operators `u = x_a + x_b`,
/// `v = p_a - p_b` are examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EprPair {
    mode_a: usize,
    mode_b: usize,
}

impl EprPair {
    pub fn new(mode_a: usize, mode_b: usize) -> Result<Self> {
        if mode_a == mode_b {
            return Err(Error::InvalidInput(format!("EPR pair needs two distinct modes, got {mode_a} twice")));
        }
        Ok(Self { mode_a, mode_b })
    }

    pub fn modes(&self) -> (usize, usize) {
        (self.mode_a, self.mode_b)
    }

    fn check(&self, state: &GaussianState) -> Result<()> {
        let n = state.num_modes();
        if self.mode_a >= n || self.mode_b >= n {
            return Err(Error::Dimension(format!(
                "EPR pair ({}, {}) out of range for {n} modes",
                self.mode_a, self.mode_b
            )));
        }
        Ok(())
    }
}

/// `V = Var(x_a + x_b) + Var(p_a - p_b)`.
pub fn epr_variance(state: &GaussianState, pair: EprPair) -> Result<f64> {
    pair.check(state)?;
    let s = state.covariance();
    let (xa, pa) = (2 * pair.mode_a, 2 * pair.mode_a + 1);
    let (xb, pb) = (2 * pair.mode_b, 2 * pair.mode_b + 1);
    let var_u = s[(xa, xa)] + s[(xb, xb)] + 2.0 * s[(xa, xb)];
    let var_v = s[(pa, pa)] + s[(pb, pb)] - 2.0 * s[(pa, pb)];
    Ok((var_u + var_v).max(0.0))
}

pub fn duan_verdict(variance: f64) -> Result<bool> {
    if !(variance >= 0.0) {
        return Err(Error::InvalidInput(format!("total variance {variance} must be non-negative")));
    }
    Ok(variance < DUAN_THRESHOLD)
}

fn check_mode(state: &GaussianState, mode: usize) -> Result<()> {
    if mode >= state.num_modes() {
        return Err(Error::Dimension(format!(
            "mode {mode} out of range for {} modes",
            state.num_modes()
        )));
    }
    Ok(())
}

/// Mean photon number including the coherent part.
pub fn photon_number(state: &GaussianState, mode: usize) -> Result<f64> {
    let fluct = fluctuation_photon_number(state, mode)?;
    let (mx, mp) = (state.mean()[2 * mode], state.mean()[2 * mode + 1]);
    Ok(fluct + 0.5 * (mx * mx + mp * mp))
}

/// Fluctuation part `(s_xx + s_pp - 1)/2` of the photon number.
pub fn fluctuation_photon_number(state: &GaussianState, mode: usize) -> Result<f64> {
    check_mode(state, mode)?;
    let s = state.covariance();
    Ok(0.5 * (s[(2 * mode, 2 * mode)] + s[(2 * mode + 1, 2 * mode + 1)] - 1.0))
}

/// Total variance `2 e^{-2 s}` of an ideal two-mode squeezed vacuum.
pub fn tms_reference_variance(squeezing: f64) -> f64 {
    2.0 * (-2.0 * squeezing).exp()
}
