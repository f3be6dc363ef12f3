//! Gaussian continuous-variable simulator for a hybrid electro-optic system in
//! which two superconducting microwave resonators are entangled through one or
//! two optical cavities.
//!
//! The crate is organised bottom-up:
//!
//! - [`gaussian`]: Gaussian states, linear drift/diffusion dynamics, moment
//!   integration, propagators, Lyapunov steady states.
//! - [`params`]: device-level parameter chain (resonator frequencies,
//!   electro-optic couplings, pump photon numbers, scaled rates).
//! - [`schemes`]: cascaded, parallel and dissipative entanglement schemes.
//! - [`metrics`]: EPR total variance, Duan verdict, photon numbers.
//! - [`experiments`]: configuration files, scenarios, sweeps and CSV output.

pub mod error;
pub mod experiments;
pub mod gaussian;
pub mod metrics;
pub mod params;
pub mod schemes;

pub use error::{ConfigError, Error, Result};
pub use gaussian::{GaussianState, LinearDynamics, ModeDriftSpec, ModeOp, PiecewiseSchedule};
