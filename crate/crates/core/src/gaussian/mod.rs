//! Gaussian states under linear drift/diffusion dynamics.

mod dynamics;
mod extended;
pub mod ode;
mod propagate;
mod state;
mod steady;

pub use dynamics::{mode_to_quadrature, quadrature_dynamics, LinearDynamics, ModeDriftSpec, ModeOp};
pub use propagate::{evolve, evolve_matrix, propagator, PiecewiseSchedule, Transition, DEFAULT_TOLERANCE};
pub use state::{symplectic_form, GaussianState, PHYSICALITY_TOLERANCE};
pub use steady::{hurwitz_check, spectrum, solve_lyapunov, steady_state, Stability, HURWITZ_MARGIN, STEADY_RESIDUAL_TOLERANCE};
