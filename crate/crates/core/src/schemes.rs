//! The three entanglement schemes: cascaded (beam splitter, two-mode
//! squeezing, beam splitter in sequence), parallel (both drives at once on a
//! single cavity) and dissipative (two strongly damped cavities acting as an
//! engineered reservoir).
//!
//! Mode-space matrices are kept only to check the quadrature dynamics against
//! closed forms; every simulation runs through [`LinearDynamics`].
//!
//! Mode order in the quadrature vector: `(a1, b1, b2)` for the cascaded and
//! parallel schemes, `(a1, a2, b1, b2)` for the dissipative scheme.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{
    quadrature_dynamics, GaussianState, LinearDynamics, ModeDriftSpec, ModeOp, PiecewiseSchedule,
};
use crate::metrics::{tms_reference_variance, EprPair};
use crate::params::DerivedRates;

/// Below this `|1 - r^2|` the parallel closed form switches to its series.
pub const SERIES_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Cascaded,
    Parallel,
    Dissipative,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Cascaded, SchemeKind::Parallel, SchemeKind::Dissipative];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Cascaded => "cascaded",
            SchemeKind::Parallel => "parallel",
            SchemeKind::Dissipative => "dissipative",
        }
    }

    pub fn mode_labels(self) -> Vec<String> {
        let labels: &[&str] = match self {
            SchemeKind::Cascaded | SchemeKind::Parallel => &["a1", "b1", "b2"],
            SchemeKind::Dissipative => &["a1", "a2", "b1", "b2"],
        };
        labels.iter().map(|s| s.to_string()).collect()
    }

    /// The two microwave modes whose EPR variance is reported.
    pub fn microwave_pair(self) -> EprPair {
        let (a, b) = match self {
            SchemeKind::Cascaded | SchemeKind::Parallel => (1, 2),
            SchemeKind::Dissipative => (2, 3),
        };
        EprPair::new(a, b).expect("distinct modes")
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown scheme '{s}' (cascaded, parallel, dissipative)")))
    }
}

/// Dimensionless scheme parameters. Time is measured in units of `1/G_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    /// Coupling ratio `r = G_2 / G_1`.
    pub r: f64,
    /// Optical decay (both cavities in the dissipative scheme).
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    /// Thermal occupations `[optical, b1, b2]`.
    pub n_th: [f64; 3],
    /// End of the first beam-splitter segment (cascaded).
    pub tau1: f64,
    /// End of the squeezing segment (cascaded).
    pub tau2: f64,
    pub time_grid: Vec<f64>,
}

impl SchemeConfig {
    /// Lossless, zero-temperature configuration; cascaded timing defaults to
    /// `tau1 = pi/2`, `tau2 = pi/2 + 1`.
    pub fn new(kind: SchemeKind, r: f64) -> Self {
        Self {
            kind,
            r,
            k0: 0.0,
            k1: 0.0,
            k2: 0.0,
            n_th: [0.0; 3],
            tau1: FRAC_PI_2,
            tau2: FRAC_PI_2 + 1.0,
            time_grid: Vec::new(),
        }
    }

    pub fn with_decays(mut self, k0: f64, k1: f64, k2: f64) -> Self {
        self.k0 = k0;
        self.k1 = k1;
        self.k2 = k2;
        self
    }

    pub fn with_occupations(mut self, n_th: [f64; 3]) -> Self {
        self.n_th = n_th;
        self
    }

    pub fn with_timing(mut self, tau1: f64, tau2: f64) -> Self {
        self.tau1 = tau1;
        self.tau2 = tau2;
        self
    }

    /// Scheme parameters implied by a device parameter chain.
    pub fn from_rates(kind: SchemeKind, rates: &DerivedRates) -> Self {
        let [k0, k1, k2] = rates.scaled_decays;
        Self::new(kind, rates.ratio)
            .with_decays(k0, k1, k2)
            .with_occupations(rates.thermal_occupations)
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("r", self.r),
            ("k0", self.k0),
            ("k1", self.k1),
            ("k2", self.k2),
            ("n_th optical", self.n_th[0]),
            ("n_th b1", self.n_th[1]),
            ("n_th b2", self.n_th[2]),
        ];
        for (name, v) in named {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        if self.kind == SchemeKind::Cascaded
            && (!(self.tau1 >= 0.0) || !(self.tau1 < self.tau2) || !self.tau2.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "cascaded timing needs 0 <= tau1 < tau2 (got {}, {})",
                self.tau1, self.tau2
            )));
        }
        if let Some(t) = self.time_grid.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
            return Err(Error::InvalidInput(format!("time grid entry {t} must be finite and >= 0")));
        }
        Ok(())
    }

    fn expect_kind(&self, kind: SchemeKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::InvalidInput(format!("{kind} operation applied to a {} configuration", self.kind)));
        }
        self.validate()
    }

    fn require_subcritical(&self) -> Result<()> {
        if !(self.r < 1.0) {
            return Err(Error::Unstable { re: self.r * self.r - 1.0, im: 0.0 });
        }
        Ok(())
    }

    /// Per-mode occupations in quadrature-vector order.
    pub fn occupations(&self) -> Vec<f64> {
        match self.kind {
            SchemeKind::Cascaded | SchemeKind::Parallel => self.n_th.to_vec(),
            SchemeKind::Dissipative => vec![self.n_th[0], self.n_th[0], self.n_th[1], self.n_th[2]],
        }
    }

    pub fn decays(&self) -> Vec<f64> {
        match self.kind {
            SchemeKind::Cascaded | SchemeKind::Parallel => vec![self.k0, self.k1, self.k2],
            SchemeKind::Dissipative => vec![self.k0, self.k0, self.k1, self.k2],
        }
    }

    /// Every mode starts in equilibrium with its bath.
    pub fn initial_state(&self) -> Result<GaussianState> {
        GaussianState::thermal(&self.occupations())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cmat3(rows: [[Complex64; 3]; 3]) -> DMatrix<Complex64> {
    DMatrix::from_fn(3, 3, |i, j| rows[i][j])
}

/// Operator basis `(a1, b1, b2^dag)` of the single-cavity schemes.
pub fn three_mode_basis() -> Vec<ModeOp> {
    vec![ModeOp::annihilation(0), ModeOp::annihilation(1), ModeOp::creation(2)]
}

/// Operator basis `(a1, a2^dag, b1, b2^dag)` of the dissipative scheme.
pub fn four_mode_basis() -> Vec<ModeOp> {
    vec![
        ModeOp::annihilation(0),
        ModeOp::creation(1),
        ModeOp::annihilation(2),
        ModeOp::creation(3),
    ]
}

/// Red-detuned drive alone: `a1 <-> b1` beam splitter.
pub fn beam_splitter_generator() -> DMatrix<Complex64> {
    let (z, i) = (c(0.0, 0.0), c(0.0, 1.0));
    cmat3([[z, i, z], [i, z, z], [z, z, z]])
}

/// Blue-detuned drive alone: `a1 <-> b2` two-mode squeezing with strength `r`.
pub fn squeezing_generator(r: f64) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    cmat3([[z, z, c(0.0, r)], [z, z, z], [c(0.0, -r), z, z]])
}

/// Both drives at once.
pub fn parallel_generator(r: f64) -> DMatrix<Complex64> {
    beam_splitter_generator() + squeezing_generator(r)
}

/// Two cavities, each driven on both sidebands with the same ratio `r`.
pub fn dissipative_generator(r: f64) -> DMatrix<Complex64> {
    let (z, i, ir) = (c(0.0, 0.0), c(0.0, 1.0), c(0.0, r));
    DMatrix::from_row_slice(
        4,
        4,
        &[
            z, z, i, ir, //
            z, z, -ir, -i, //
            i, ir, z, z, //
            -ir, -i, z, z,
        ],
    )
}

fn three_mode_dynamics(config: &SchemeConfig, generator: DMatrix<Complex64>) -> Result<LinearDynamics> {
    let spec = ModeDriftSpec::new(three_mode_basis(), generator, config.kind.mode_labels())?;
    quadrature_dynamics(&spec, &config.decays(), &config.occupations())
}

/// Lossless mode-space propagators of the cascaded scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadedMatrices {
    /// Beam splitter over `tau1`.
    pub m1: DMatrix<Complex64>,
    /// Two-mode squeezing over `tau2 - tau1`.
    pub m2: DMatrix<Complex64>,
    /// `M1 M2 M1`.
    pub composite: DMatrix<Complex64>,
}

pub fn cascaded_segment_matrices(config: &SchemeConfig) -> Result<CascadedMatrices> {
    config.expect_kind(SchemeKind::Cascaded)?;
    let (z, one) = (c(0.0, 0.0), c(1.0, 0.0));
    let (cs, sn) = (config.tau1.cos(), config.tau1.sin());
    let m1 = cmat3([[c(cs, 0.0), c(0.0, sn), z], [c(0.0, sn), c(cs, 0.0), z], [z, z, one]]);
    let zeta = config.r * (config.tau2 - config.tau1);
    let (ch, sh) = (zeta.cosh(), zeta.sinh());
    let m2 = cmat3([[c(ch, 0.0), z, c(0.0, sh)], [z, one, z], [c(0.0, -sh), z, c(ch, 0.0)]]);
    let composite = &m1 * &m2 * &m1;
    Ok(CascadedMatrices { m1, m2, composite })
}

/// Beam splitter for `tau1`, squeezing for `tau2 - tau1`, beam splitter for
/// `tau1`; decay and thermal noise act on every mode throughout.
pub fn cascaded_schedule(config: &SchemeConfig) -> Result<PiecewiseSchedule> {
    config.expect_kind(SchemeKind::Cascaded)?;
    let bs = three_mode_dynamics(config, beam_splitter_generator())?;
    let sq = three_mode_dynamics(config, squeezing_generator(config.r))?;
    PiecewiseSchedule::new(vec![
        (bs.clone(), config.tau1),
        (sq, config.tau2 - config.tau1),
        (bs, config.tau1),
    ])
}

pub fn parallel_dynamics(config: &SchemeConfig) -> Result<LinearDynamics> {
    config.expect_kind(SchemeKind::Parallel)?;
    three_mode_dynamics(config, parallel_generator(config.r))
}

/// Lossless parallel propagator on `(a1, b1, b2^dag)`.
///
/// With `eps^2 = 1 - r^2` the entries are built from `cos(eps tau)`,
/// `sin(eps tau)/eps` and `(1 - cos(eps tau))/eps^2` (hyperbolic when
/// `r > 1`, a truncated series when `|eps^2|` is tiny).
pub fn parallel_closed_form(tau: f64, r: f64) -> Result<DMatrix<Complex64>> {
    if !(r >= 0.0) || !r.is_finite() || !tau.is_finite() {
        return Err(Error::InvalidInput(format!("need finite tau and r >= 0 (got {tau}, {r})")));
    }
    let e2 = (1.0 - r) * (1.0 + r);
    let (s, q) = if e2.abs() < SERIES_THRESHOLD {
        let t2 = tau * tau;
        (
            tau * (1.0 - e2 * t2 / 6.0 + e2 * e2 * t2 * t2 / 120.0),
            t2 * (0.5 - e2 * t2 / 24.0 + e2 * e2 * t2 * t2 / 720.0),
        )
    } else if e2 > 0.0 {
        let eps = e2.sqrt();
        ((eps * tau).sin() / eps, (1.0 - (eps * tau).cos()) / e2)
    } else {
        let eps = (-e2).sqrt();
        ((eps * tau).sinh() / eps, ((eps * tau).cosh() - 1.0) / (-e2))
    };
    let cs = 1.0 - e2 * q;
    Ok(cmat3([
        [c(cs, 0.0), c(0.0, s), c(0.0, r * s)],
        [c(0.0, s), c(1.0 - q, 0.0), c(-r * q, 0.0)],
        [c(0.0, -r * s), c(r * q, 0.0), c(1.0 + r * r * q, 0.0)],
    ]))
}

/// First time `pi / sqrt(1 - r^2)` at which the optical mode decouples.
pub fn parallel_endpoint_time(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidInput(format!("parallel endpoint needs 0 <= r < 1 (got {r})")));
    }
    Ok(std::f64::consts::PI / ((1.0 - r) * (1.0 + r)).sqrt())
}

/// Both optical modes decay at `k0` into vacuum baths; microwave modes decay at
/// `k1`, `k2` into their thermal baths.
pub fn dissipative_dynamics(config: &SchemeConfig) -> Result<LinearDynamics> {
    config.expect_kind(SchemeKind::Dissipative)?;
    let spec = ModeDriftSpec::new(four_mode_basis(), dissipative_generator(config.r), config.kind.mode_labels())?;
    quadrature_dynamics(&spec, &config.decays(), &config.occupations())
}

/// `gamma = 2 (1 - r^2) / k0`.
pub fn effective_rate(config: &SchemeConfig) -> Result<f64> {
    config.expect_kind(SchemeKind::Dissipative)?;
    config.require_subcritical()?;
    if !(config.k0 > 0.0) {
        return Err(Error::InvalidInput("adiabatic elimination needs k0 > 0".into()));
    }
    Ok(2.0 * (1.0 - config.r * config.r) / config.k0)
}

/// Eliminates the two optical modes: with `A = [[A_mm, A_mo], [A_om, A_oo]]`
/// the microwave dynamics become `A_mm - A_mo A_oo^-1 A_om` with diffusion
/// `D_m + K D_o K^T`, `K = A_mo A_oo^-1`. Returns the reduced dynamics on
/// `(b1, b2)` and `gamma`.
pub fn adiabatic_reduction(config: &SchemeConfig) -> Result<(LinearDynamics, f64)> {
    let gamma = effective_rate(config)?;
    let full = dissipative_dynamics(config)?;
    let a = full.drift();
    let d = full.diffusion();
    let (o, m) = (0..4usize, 4..8usize);
    let block = |mat: &DMatrix<f64>, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| {
        mat.view((rows.start, cols.start), (rows.len(), cols.len())).into_owned()
    };
    let a_oo_inv = block(a, o.clone(), o.clone())
        .try_inverse()
        .ok_or_else(|| Error::Numerical("optical drift block is singular".into()))?;
    let a_mo = block(a, m.clone(), o.clone());
    let k = &a_mo * &a_oo_inv;
    let drift = block(a, m.clone(), m.clone()) - &k * block(a, o.clone(), m.clone());
    let diffusion = block(d, m.clone(), m) + &k * block(d, o.clone(), o) * k.transpose();
    let diffusion = (&diffusion + diffusion.transpose()) * 0.5;
    let reduced = LinearDynamics::new(drift, diffusion, vec!["b1".into(), "b2".into()])?;
    Ok((reduced, gamma))
}

fn require_equal_microwave_decays(config: &SchemeConfig) -> Result<()> {
    if (config.k1 - config.k2).abs() > 1e-12 * config.k1.max(config.k2).max(1e-300) {
        return Err(Error::InvalidInput(format!(
            "variance formula assumes k1 = k2 (got {}, {})",
            config.k1, config.k2
        )));
    }
    Ok(())
}

/// Transient EPR variance of the adiabatically reduced dissipative scheme,
/// with `x = (1 - r^2) tau / k0` the scaled time:
///
/// `V = sum_i e^{-2(x + k_i tau)} (2 n_i + 1)
///      + [(1 - r)^2 + (n_i + 1) k0 k_i] / (1 - r^2 + k0 k_i) [1 - e^{-2(x + k_i tau)}]`.
pub fn dissipative_transient_variance(x: f64, tau: f64, config: &SchemeConfig) -> Result<f64> {
    config.expect_kind(SchemeKind::Dissipative)?;
    config.require_subcritical()?;
    require_equal_microwave_decays(config)?;
    if !(config.k0 > 0.0) {
        return Err(Error::InvalidInput("transient variance needs k0 > 0".into()));
    }
    if !(tau >= 0.0) || !(x >= 0.0) {
        return Err(Error::InvalidInput(format!("x = {x} and tau = {tau} must be >= 0")));
    }
    let r = config.r;
    let expected = (1.0 - r * r) * tau / config.k0;
    if (x - expected).abs() > 1e-9 * expected.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "x = {x} does not equal (1 - r^2) tau / k0 = {expected}"
        )));
    }
    let mut v = 0.0;
    for (k, n) in [(config.k1, config.n_th[1]), (config.k2, config.n_th[2])] {
        let decay = (-2.0 * (x + k * tau)).exp();
        let asymptote = ((1.0 - r) * (1.0 - r) + (n + 1.0) * config.k0 * k) / (1.0 - r * r + config.k0 * k);
        v += decay * (2.0 * n + 1.0) + asymptote * (1.0 - decay);
    }
    Ok(v)
}

/// Convenience wrapper taking the unscaled time only.
pub fn dissipative_variance_at(tau: f64, config: &SchemeConfig) -> Result<f64> {
    if !(config.k0 > 0.0) {
        return Err(Error::InvalidInput("transient variance needs k0 > 0".into()));
    }
    let x = (1.0 - config.r * config.r) * tau / config.k0;
    dissipative_transient_variance(x, tau, config)
}

/// Stable variance `[2(1 - r)/(1 + r) + 2 alpha (n1 + n2 + 2)] / (1 + 2 alpha)`
/// with `alpha = k1 / gamma`.
pub fn dissipative_steady_variance(config: &SchemeConfig) -> Result<f64> {
    let gamma = effective_rate(config)?;
    require_equal_microwave_decays(config)?;
    let r = config.r;
    let alpha = config.k1 / gamma;
    Ok((2.0 * (1.0 - r) / (1.0 + r) + 2.0 * alpha * (config.n_th[1] + config.n_th[2] + 2.0)) / (1.0 + 2.0 * alpha))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingReport {
    pub scheme: SchemeKind,
    pub parameter: f64,
    /// `2 e^{-2 parameter}`.
    pub ideal_variance: f64,
}

/// Cascaded `r (tau2 - tau1)`, parallel `artanh(2r / (1 + r^2))`,
/// dissipative `artanh(r)`.
pub fn squeezing_parameters(config: &SchemeConfig) -> Result<SqueezingReport> {
    config.validate()?;
    let r = config.r;
    let parameter = match config.kind {
        SchemeKind::Cascaded => r * (config.tau2 - config.tau1),
        SchemeKind::Parallel => {
            config.require_subcritical()?;
            (2.0 * r / (1.0 + r * r)).atanh()
        }
        SchemeKind::Dissipative => {
            config.require_subcritical()?;
            r.atanh()
        }
    };
    Ok(SqueezingReport {
        scheme: config.kind,
        parameter,
        ideal_variance: tms_reference_variance(parameter),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{mode_to_quadrature, propagator, steady_state, symplectic_form, Transition};
    use crate::metrics::epr_variance;
    use approx::assert_abs_diff_eq;

    fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).amax()
    }

    fn cmax_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn cascaded_composite_decouples_optical_mode() {
        let cfg = SchemeConfig::new(SchemeKind::Cascaded, 0.5).with_timing(FRAC_PI_2, FRAC_PI_2 + 2.0);
        let m = cascaded_segment_matrices(&cfg).unwrap();
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        let z = c(0.0, 0.0);
        let expected = cmat3([
            [c(-1.0, 0.0), z, z],
            [z, c(-ch, 0.0), c(-sh, 0.0)],
            [z, c(sh, 0.0), c(ch, 0.0)],
        ]);
        assert!(cmax_diff(&m.composite, &expected) < 1e-12);
    }

    #[test]
    fn cascaded_without_squeezing_is_double_beam_splitter() {
        let cfg = SchemeConfig::new(SchemeKind::Cascaded, 0.0).with_timing(0.7, 1.9);
        let m = cascaded_segment_matrices(&cfg).unwrap();
        assert!(cmax_diff(&m.m2, &DMatrix::identity(3, 3)) < 1e-15);
        assert!(cmax_diff(&m.composite, &(&m.m1 * &m.m1)) < 1e-15);
    }

    #[test]
    fn cascaded_schedule_matches_composite() {
        let cfg = SchemeConfig::new(SchemeKind::Cascaded, 0.7).with_timing(0.9, 2.3);
        let numeric = cascaded_schedule(&cfg).unwrap().propagator().unwrap();
        let closed = mode_to_quadrature(&three_mode_basis(), &cascaded_segment_matrices(&cfg).unwrap().composite, 3).unwrap();
        assert!(max_diff(&numeric, &closed) < 1e-10);
    }

    #[test]
    fn cascaded_timing_validation() {
        let cfg = SchemeConfig::new(SchemeKind::Cascaded, 0.5).with_timing(2.0, 1.0);
        assert!(cascaded_schedule(&cfg).is_err());
        assert!(cascaded_schedule(&SchemeConfig::new(SchemeKind::Parallel, 0.5)).is_err());
    }

    #[test]
    fn cascaded_lossless_endpoint_variance() {
        let cfg = SchemeConfig::new(SchemeKind::Cascaded, 0.5).with_timing(FRAC_PI_2, FRAC_PI_2 + 2.0);
        let s = cascaded_schedule(&cfg).unwrap().transition().unwrap().apply(&cfg.initial_state().unwrap()).unwrap();
        let v = epr_variance(&s, SchemeKind::Cascaded.microwave_pair()).unwrap();
        assert_abs_diff_eq!(v, 2.0 * (-2.0f64).exp(), epsilon = 1e-10);
        let opt = s.covariance().view((0, 0), (2, 2)).into_owned();
        assert_abs_diff_eq!(opt, DMatrix::identity(2, 2) * 0.5, epsilon = 1e-10);
    }

    #[test]
    fn parallel_propagator_matches_closed_form() {
        for (tau, r) in [(0.3, 0.5), (2.0, 0.5), (5.0, 0.9), (1.0, 1.3), (4.0, 0.0)] {
            let cfg = SchemeConfig::new(SchemeKind::Parallel, r);
            let numeric = propagator(&parallel_dynamics(&cfg).unwrap(), tau).unwrap();
            let closed = mode_to_quadrature(&three_mode_basis(), &parallel_closed_form(tau, r).unwrap(), 3).unwrap();
            assert!(max_diff(&numeric, &closed) < 1e-9, "tau={tau} r={r}");
        }
    }

    #[test]
    fn parallel_closed_form_at_zero_and_endpoint() {
        assert!(cmax_diff(&parallel_closed_form(0.0, 0.5).unwrap(), &DMatrix::identity(3, 3)) < 1e-15);
        let m = parallel_closed_form(parallel_endpoint_time(0.5).unwrap(), 0.5).unwrap();
        let z = c(0.0, 0.0);
        let expected = cmat3([
            [c(-1.0, 0.0), z, z],
            [z, c(-5.0 / 3.0, 0.0), c(-4.0 / 3.0, 0.0)],
            [z, c(4.0 / 3.0, 0.0), c(5.0 / 3.0, 0.0)],
        ]);
        assert!(cmax_diff(&m, &expected) < 1e-12);
    }

    #[test]
    fn parallel_closed_form_near_unit_ratio() {
        // analytic r -> 1 limit: C = 1, S = tau, Q = tau^2 / 2
        let tau: f64 = 1.0;
        let limit = {
            let (s, q) = (tau, tau * tau / 2.0);
            cmat3([
                [c(1.0, 0.0), c(0.0, s), c(0.0, s)],
                [c(0.0, s), c(1.0 - q, 0.0), c(-q, 0.0)],
                [c(0.0, -s), c(q, 0.0), c(1.0 + q, 0.0)],
            ])
        };
        let m = parallel_closed_form(tau, 1.0 - 1e-9).unwrap();
        assert!(cmax_diff(&m, &limit) < 1e-6);
        assert!(m.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        assert!(cmax_diff(&parallel_closed_form(tau, 1.0).unwrap(), &limit) < 1e-15);
    }

    #[test]
    fn series_branch_is_continuous() {
        // eps^2 just either side of the switch
        let tau = 3.0;
        let r_in = (1.0 - 0.5 * SERIES_THRESHOLD).sqrt();
        let r_out = (1.0 - 2.0 * SERIES_THRESHOLD).sqrt();
        let a = parallel_closed_form(tau, r_in).unwrap();
        let b = parallel_closed_form(tau, r_out).unwrap();
        assert!(cmax_diff(&a, &b) < 1e-6);
    }

    #[test]
    fn parallel_lossless_endpoint_variance() {
        let r = 0.5;
        let cfg = SchemeConfig::new(SchemeKind::Parallel, r).with_occupations([0.0, 0.2, 0.1]);
        let t = Transition::over(&parallel_dynamics(&cfg).unwrap(), parallel_endpoint_time(r).unwrap()).unwrap();
        let s = t.apply(&cfg.initial_state().unwrap()).unwrap();
        let v = epr_variance(&s, SchemeKind::Parallel.microwave_pair()).unwrap();
        assert_abs_diff_eq!(v, 2.0 * 1.3 / 9.0, epsilon = 1e-9);
    }

    #[test]
    fn parallel_without_blue_drive_leaves_b2_alone() {
        let cfg = SchemeConfig::new(SchemeKind::Parallel, 0.0).with_decays(0.0, 0.0, 0.3);
        let p = propagator(&parallel_dynamics(&cfg).unwrap(), 2.0).unwrap();
        let b2 = p.view((4, 4), (2, 2)).into_owned();
        assert_abs_diff_eq!(b2, DMatrix::identity(2, 2) * (-0.6f64).exp(), epsilon = 1e-14);
        assert_eq!(p.view((0, 4), (4, 2)).amax(), 0.0);
    }

    #[test]
    fn dissipative_lossless_flow_is_symplectic() {
        let omega = symplectic_form(4);
        let basis = four_mode_basis();
        let symplectic_defect = |g: &DMatrix<Complex64>| {
            let a = mode_to_quadrature(&basis, g, 4).unwrap();
            let p = (a * 0.8).exp();
            (&p * &omega * p.transpose() - &omega).amax()
        };
        assert!(symplectic_defect(&dissipative_generator(0.5)) < 1e-12);
        // the alternative reading with a real "-r" entry does not generate a unitary flow
        let mut alt = dissipative_generator(0.5);
        alt[(1, 2)] = c(-0.5, 0.0);
        assert!(symplectic_defect(&alt) > 1e-3);
    }

    #[test]
    fn dissipative_steady_state() {
        let cfg = SchemeConfig::new(SchemeKind::Dissipative, 0.5).with_decays(10.0, 0.0, 0.0);
        let s = steady_state(&dissipative_dynamics(&cfg).unwrap()).unwrap();
        let v = epr_variance(&s, SchemeKind::Dissipative.microwave_pair()).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 0.05, "V = {v}");

        let critical = SchemeConfig::new(SchemeKind::Dissipative, 1.0).with_decays(10.0, 0.0, 0.0);
        assert!(matches!(
            steady_state(&dissipative_dynamics(&critical).unwrap()),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn dissipative_without_drive_keeps_microwave_vacuum() {
        let cfg = SchemeConfig::new(SchemeKind::Dissipative, 0.0).with_decays(2.0, 0.0, 0.0);
        let p = propagator(&dissipative_dynamics(&cfg).unwrap(), 0.0).unwrap();
        assert_eq!(p, DMatrix::identity(8, 8));
        let (reduced, gamma) = adiabatic_reduction(&cfg).unwrap();
        assert_abs_diff_eq!(gamma, 1.0, epsilon = 1e-15);
        let s = steady_state(&reduced).unwrap();
        assert_abs_diff_eq!(s.covariance(), &(DMatrix::identity(4, 4) * 0.5), epsilon = 1e-12);
    }

    #[test]
    fn adiabatic_reduction_rate_and_steady_variance() {
        let cfg = SchemeConfig::new(SchemeKind::Dissipative, 0.5).with_decays(10.0, 0.0, 0.0);
        let (reduced, gamma) = adiabatic_reduction(&cfg).unwrap();
        assert_abs_diff_eq!(gamma, 0.15, epsilon = 1e-15);
        assert_abs_diff_eq!(reduced.drift(), &(DMatrix::identity(4, 4) * (-0.075)), epsilon = 1e-15);
        let s = steady_state(&reduced).unwrap();
        let v = epr_variance(&s, EprPair::new(0, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(v, 2.0 / 3.0, epsilon = 1e-12);

        let unstable = SchemeConfig::new(SchemeKind::Dissipative, 1.0).with_decays(10.0, 0.0, 0.0);
        assert!(matches!(adiabatic_reduction(&unstable), Err(Error::Unstable { .. })));
    }

    #[test]
    fn transient_variance_limits() {
        let n = 0.3;
        let cfg = SchemeConfig::new(SchemeKind::Dissipative, 0.5)
            .with_decays(10.0, 0.0, 0.0)
            .with_occupations([0.0, n, n]);
        assert_abs_diff_eq!(dissipative_transient_variance(0.0, 0.0, &cfg).unwrap(), 2.0 * (2.0 * n + 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(dissipative_variance_at(1e4, &cfg).unwrap(), 2.0 / 3.0, epsilon = 1e-12);
        assert!(matches!(
            dissipative_transient_variance(1.0, 1.0, &cfg),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn transient_asymptote_matches_stable_formula() {
        let cfg = SchemeConfig::new(SchemeKind::Dissipative, 0.5)
            .with_decays(10.0, 0.0075, 0.0075)
            .with_occupations([0.0, 0.01, 0.01]);
        let asymptote = dissipative_variance_at(1e5, &cfg).unwrap();
        assert_abs_diff_eq!(asymptote, dissipative_steady_variance(&cfg).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn stable_formula_limits() {
        let base = SchemeConfig::new(SchemeKind::Dissipative, 0.4).with_occupations([0.0, 0.2, 0.7]);
        let lossless = base.clone().with_decays(5.0, 0.0, 0.0);
        assert_abs_diff_eq!(dissipative_steady_variance(&lossless).unwrap(), 2.0 * 0.6 / 1.4, epsilon = 1e-15);
        let lossy = base.clone().with_decays(5.0, 1e9, 1e9);
        assert_abs_diff_eq!(dissipative_steady_variance(&lossy).unwrap(), 2.9, epsilon = 1e-6);
        let unequal = base.with_decays(5.0, 0.1, 0.2);
        assert!(dissipative_steady_variance(&unequal).is_err());
    }

    #[test]
    fn squeezing_parameter_examples() {
        let p = squeezing_parameters(&SchemeConfig::new(SchemeKind::Parallel, 0.5)).unwrap();
        assert_abs_diff_eq!(p.parameter, 0.8f64.atanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.parameter.cosh(), 5.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.ideal_variance, 2.0 / 9.0, epsilon = 1e-14);

        let d = squeezing_parameters(&SchemeConfig::new(SchemeKind::Dissipative, 0.5)).unwrap();
        assert_abs_diff_eq!(d.ideal_variance, 2.0 / 3.0, epsilon = 1e-14);

        let cz = squeezing_parameters(&SchemeConfig::new(SchemeKind::Cascaded, 0.0).with_timing(0.1, 7.0)).unwrap();
        assert_eq!(cz.parameter, 0.0);
        assert_eq!(cz.ideal_variance, 2.0);

        assert!(squeezing_parameters(&SchemeConfig::new(SchemeKind::Parallel, 1.0)).is_err());
    }

    #[test]
    fn scheme_names_round_trip() {
        for k in SchemeKind::ALL {
            assert_eq!(k.name().parse::<SchemeKind>().unwrap(), k);
        }
        assert!("serial".parse::<SchemeKind>().is_err());
    }
}
