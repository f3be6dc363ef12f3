//! Device-level parameter chain: resonator frequencies, electro-optic
//! couplings, pump photon numbers, effective couplings and scaled rates.
//!
//! All angular frequencies and loss rates are in rad/s; conversion to Hz
//! happens only at the reporting boundary.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::schemes::SchemeKind;

/// Physical constants (CODATA, 12 significant digits).
pub mod constants {
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817_65e-34;
    /// Boltzmann constant, J/K.
    pub const K_B: f64 = 1.380_649_000_00e-23;
}

use constants::{HBAR, K_B};

/// Weak-drive parameter `E_j / Delta_j` above which a warning is reported.
pub const WEAK_DRIVE_WARNING: f64 = 0.1;

fn two_pi(hz: f64) -> f64 {
    2.0 * PI * hz
}

/// Device parameters of the resonators, the electro-optic medium, the optical
/// cavity and the pump.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    /// `n^3 r_0`, m/V.
    pub eo_coefficient: f64,
    /// Electrode gap `d`, m.
    pub gap: f64,
    /// Resonator capacitances, F.
    pub capacitance: [f64; 2],
    /// Resonator inductances, H.
    pub inductance: [f64; 2],
    /// Optical cavity frequency, rad/s.
    pub cavity_frequency: f64,
    /// Pump power, W.
    pub pump_power: f64,
    /// Optical energy decay rate `Gamma_0` entering the dynamics, rad/s.
    pub cavity_loss: f64,
    /// Total optical linewidth in the pump photon-number formula; defaults to
    /// `cavity_loss` when unset.
    pub pump_linewidth: Option<f64>,
    /// Resonator energy decay rates, rad/s.
    pub resonator_loss: [f64; 2],
    /// Bath temperature, K.
    pub temperature: f64,
    /// Pump detunings, rad/s; default to the resonator frequencies.
    pub detunings: Option<[f64; 2]>,
}

impl PhysicalParams {
    /// Cascaded-scheme device: 40 fF / 70 nH / 25 nH resonators, 10 um gap,
    /// 200 THz cavity pumped with 10 mW.
    pub fn cascaded() -> Self {
        Self {
            eo_coefficient: 300e-12,
            gap: 10e-6,
            capacitance: [40e-15, 40e-15],
            inductance: [70e-9, 25e-9],
            cavity_frequency: two_pi(200e12),
            pump_power: 10e-3,
            cavity_loss: two_pi(0.3e6),
            pump_linewidth: None,
            resonator_loss: [two_pi(1e3), two_pi(1e3)],
            temperature: 0.1,
            detunings: None,
        }
    }

    /// Cascaded device with 1 fF capacitors and 360 nH / 350 nH inductors.
    pub fn cascaded_improved() -> Self {
        Self {
            capacitance: [1e-15, 1e-15],
            inductance: [360e-9, 350e-9],
            ..Self::cascaded()
        }
    }

    /// Parallel-scheme device: weak 10 uW pump, 5 um gap, 4 fF capacitors,
    /// 700 nH / 250 nH inductors and a 1500 THz cavity.
    pub fn parallel() -> Self {
        Self {
            eo_coefficient: 300e-12,
            gap: 5e-6,
            capacitance: [4e-15, 4e-15],
            inductance: [700e-9, 250e-9],
            cavity_frequency: two_pi(1500e12),
            pump_power: 10e-6,
            cavity_loss: two_pi(0.3e6),
            pump_linewidth: None,
            resonator_loss: [two_pi(1e3), two_pi(1e3)],
            temperature: 0.1,
            detunings: None,
        }
    }

    /// Parallel device with a bad optical cavity (30 MHz) and 1.44 kHz resonators.
    pub fn dissipative() -> Self {
        Self {
            cavity_loss: two_pi(30e6),
            resonator_loss: [two_pi(1.44e3), two_pi(1.44e3)],
            ..Self::parallel()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("eo_coefficient", self.eo_coefficient),
            ("gap", self.gap),
            ("C1", self.capacitance[0]),
            ("C2", self.capacitance[1]),
            ("L1", self.inductance[0]),
            ("L2", self.inductance[1]),
            ("cavity_frequency", self.cavity_frequency),
            ("pump_power", self.pump_power),
            ("cavity_loss", self.cavity_loss),
            ("resonator_loss1", self.resonator_loss[0]),
            ("resonator_loss2", self.resonator_loss[1]),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} = {v} must be finite and positive")));
            }
        }
        if let Some(g) = self.pump_linewidth {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::InvalidInput(format!("pump_linewidth = {g} must be finite and positive")));
            }
        }
        if let Some(d) = self.detunings {
            if d.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                return Err(Error::InvalidInput(format!("detunings {d:?} must be finite and positive")));
            }
        }
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return Err(Error::InvalidInput(format!("temperature {} must be >= 0", self.temperature)));
        }
        Ok(())
    }

    pub fn resonator_frequency(&self, i: usize) -> Result<f64> {
        lc_frequency(self.inductance[i], self.capacitance[i])
    }
}

/// `1 / sqrt(L C)` in rad/s.
pub fn lc_frequency(inductance: f64, capacitance: f64) -> Result<f64> {
    if !(inductance > 0.0) || !(capacitance > 0.0) {
        return Err(Error::InvalidInput(format!(
            "inductance {inductance} and capacitance {capacitance} must be positive"
        )));
    }
    Ok(1.0 / (inductance * capacitance).sqrt())
}

/// Single-photon electro-optic coupling of resonator `i` (0 or 1):
/// `g = (omega_a n^3 r_0 / 2 d) sqrt(hbar omega_b / 2 C)`.
pub fn eo_coupling(params: &PhysicalParams, i: usize) -> Result<f64> {
    if i > 1 {
        return Err(Error::InvalidInput(format!("resonator index {i} must be 0 or 1")));
    }
    params.validate()?;
    let omega_b = params.resonator_frequency(i)?;
    Ok(params.cavity_frequency * params.eo_coefficient / (2.0 * params.gap)
        * (HBAR * omega_b / (2.0 * params.capacitance[i])).sqrt())
}

/// Intracavity photon number of a pumped cavity with linewidth `gamma` and
/// detuning `delta`: `gamma / (delta^2 + gamma^2/4) * P / (hbar omega_a)`.
pub fn cavity_photon_number(gamma: f64, delta: f64, power: f64, cavity_frequency: f64) -> Result<f64> {
    if !(gamma > 0.0) || !(power >= 0.0) || !(cavity_frequency > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need gamma > 0, P >= 0, omega_a > 0 (got {gamma}, {power}, {cavity_frequency})"
        )));
    }
    Ok(gamma / (delta * delta + 0.25 * gamma * gamma) * power / (HBAR * cavity_frequency))
}

/// Bose–Einstein occupation; zero at zero temperature.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !(temperature >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "need omega > 0 and T >= 0 (got {omega}, {temperature})"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (HBAR * omega / (K_B * temperature)).exp_m1())
}

/// Quantities derived from [`PhysicalParams`]. Index 0 of the three-element
/// arrays is the optical mode, indices 1 and 2 the resonators.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedRates {
    pub resonator_frequencies: [f64; 2],
    pub couplings: [f64; 2],
    pub cavity_photon_numbers: [f64; 2],
    /// `G_i = sqrt(n_cav,i) g_i`, rad/s.
    pub effective_couplings: [f64; 2],
    /// `r = G_2 / G_1`.
    pub ratio: f64,
    /// `k_j = Gamma_j / (2 G_1)`.
    pub scaled_decays: [f64; 3],
    pub thermal_occupations: [f64; 3],
    /// Optical decay `Gamma_0`, rad/s.
    pub cavity_loss: f64,
    /// `E_j / Delta_j` of each pump, i.e. the coherent intracavity amplitude
    /// `sqrt(n_cav,j)`.
    pub weak_drive: [f64; 2],
}

impl DerivedRates {
    pub fn warnings(&self) -> Vec<String> {
        self.weak_drive
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > WEAK_DRIVE_WARNING)
            .map(|(j, w)| {
                format!(
                    "weak-drive parameter E{0}/Delta{0} = {w:.3} exceeds {WEAK_DRIVE_WARNING}",
                    j + 1
                )
            })
            .collect()
    }
}

pub fn scheme_rates(params: &PhysicalParams) -> Result<DerivedRates> {
    params.validate()?;
    let omega_b = [params.resonator_frequency(0)?, params.resonator_frequency(1)?];
    let couplings = [eo_coupling(params, 0)?, eo_coupling(params, 1)?];
    let detunings = params.detunings.unwrap_or(omega_b);
    let linewidth = params.pump_linewidth.unwrap_or(params.cavity_loss);
    let mut n_cav = [0.0; 2];
    for i in 0..2 {
        n_cav[i] = cavity_photon_number(linewidth, detunings[i], params.pump_power, params.cavity_frequency)?;
    }
    let g_eff = [n_cav[0].sqrt() * couplings[0], n_cav[1].sqrt() * couplings[1]];
    if !(g_eff[0] > 0.0) {
        return Err(Error::InvalidInput("effective coupling G1 vanishes".into()));
    }
    let losses = [params.cavity_loss, params.resonator_loss[0], params.resonator_loss[1]];
    let scaled_decays = losses.map(|gamma| gamma / (2.0 * g_eff[0]));
    let thermal_occupations = [
        0.0,
        thermal_occupation(omega_b[0], params.temperature)?,
        thermal_occupation(omega_b[1], params.temperature)?,
    ];
    let weak_drive = n_cav.map(f64::sqrt);
    Ok(DerivedRates {
        resonator_frequencies: omega_b,
        couplings,
        cavity_photon_numbers: n_cav,
        effective_couplings: g_eff,
        ratio: g_eff[1] / g_eff[0],
        scaled_decays,
        thermal_occupations,
        cavity_loss: params.cavity_loss,
        weak_drive,
    })
}

/// Wall-clock time (s) needed by each scheme to produce its target state.
///
/// Cascaded: `pi / G_1 + T_2` with `T_2 = segment_two`. Parallel:
/// `pi / (g_1 sqrt(n_cav,1 - n_cav,2))`. Dissipative:
/// `Gamma_0 / (2 g_1^2 (n_cav,1 - n_cav,2))`.
pub fn operation_time(rates: &DerivedRates, scheme: SchemeKind, segment_two: Option<f64>) -> Result<f64> {
    let g1 = rates.couplings[0];
    let [n1, n2] = rates.cavity_photon_numbers;
    match scheme {
        SchemeKind::Cascaded => {
            let t2 = segment_two
                .ok_or_else(|| Error::InvalidInput("cascaded operation time needs the squeezing time T2".into()))?;
            if !(t2 >= 0.0) {
                return Err(Error::InvalidInput(format!("T2 = {t2} must be >= 0")));
            }
            Ok(PI / rates.effective_couplings[0] + t2)
        }
        SchemeKind::Parallel | SchemeKind::Dissipative => {
            if !(n1 > n2) {
                return Err(Error::InvalidInput(format!(
                    "operation time undefined: red-detuned drive (n_cav,1 = {n1:.4e}) must exceed blue-detuned drive (n_cav,2 = {n2:.4e})"
                )));
            }
            Ok(if scheme == SchemeKind::Parallel {
                PI / (g1 * (n1 - n2).sqrt())
            } else {
                rates.cavity_loss / (2.0 * g1 * g1 * (n1 - n2))
            })
        }
    }
}
