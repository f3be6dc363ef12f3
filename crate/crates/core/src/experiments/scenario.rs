use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use super::config::{ConfigMap, Value};
use super::csv::{format_number, CsvTable, ROUND_TRIP_DIGITS};
use super::sweep::{linspace, scan, SweepResult};
use crate::error::{Error, Result};
use crate::gaussian::{steady_state, GaussianState, LinearDynamics, PiecewiseSchedule, Transition};
use crate::metrics::{epr_variance, photon_number};
use crate::params::{operation_time, scheme_rates, DerivedRates, PhysicalParams};
use crate::schemes::{
    cascaded_schedule, dissipative_dynamics, dissipative_variance_at, effective_rate, parallel_dynamics,
    squeezing_parameters, SchemeConfig, SchemeKind,
};

/// Photon numbers this far below zero are treated as a numerical failure;
/// smaller negative values are clamped to zero.
pub const PHOTON_NUMBER_FLOOR: f64 = -1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioName {
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig6,
    Fig7,
    ParamsReport,
    Custom,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 8] = [
        ScenarioName::Fig3a,
        ScenarioName::Fig3b,
        ScenarioName::Fig4a,
        ScenarioName::Fig4b,
        ScenarioName::Fig6,
        ScenarioName::Fig7,
        ScenarioName::ParamsReport,
        ScenarioName::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioName::Fig3a => "fig3a",
            ScenarioName::Fig3b => "fig3b",
            ScenarioName::Fig4a => "fig4a",
            ScenarioName::Fig4b => "fig4b",
            ScenarioName::Fig6 => "fig6",
            ScenarioName::Fig7 => "fig7",
            ScenarioName::ParamsReport => "params-report",
            ScenarioName::Custom => "custom",
        }
    }

    /// Scheme a scenario is tied to, if any.
    pub fn fixed_scheme(self) -> Option<SchemeKind> {
        match self {
            ScenarioName::Fig3a | ScenarioName::Fig3b | ScenarioName::Fig4a | ScenarioName::Fig4b => {
                Some(SchemeKind::Parallel)
            }
            ScenarioName::Fig6 => Some(SchemeKind::Dissipative),
            ScenarioName::Fig7 => Some(SchemeKind::Cascaded),
            ScenarioName::ParamsReport | ScenarioName::Custom => None,
        }
    }

    /// What the grid samples.
    pub fn grid_axis(self) -> &'static str {
        match self {
            ScenarioName::Fig4a | ScenarioName::Fig4b => "phase",
            ScenarioName::Fig6 => "x",
            ScenarioName::Fig7 => "tau2",
            _ => "tau",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioName::ALL.into_iter().find(|n| n.name() == s).ok_or_else(|| {
            let names: Vec<_> = ScenarioName::ALL.iter().map(|n| n.name()).collect();
            Error::InvalidInput(format!("unknown scenario '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

/// A fully resolved scenario: scheme parameters, optional device, sampling
/// grid and per-curve values.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: ScenarioName,
    pub scheme: SchemeConfig,
    pub device: Option<PhysicalParams>,
    /// Physical duration of the squeezing segment, s (cascaded reports).
    pub segment_time: Option<f64>,
    pub grid: Vec<f64>,
    /// Scenario-specific curve parameter: `n_th` (fig4a), `k` (fig4b), `k1`
    /// (fig6).
    pub curves: Vec<f64>,
    pub output: Option<PathBuf>,
    source: ConfigMap,
}

const PHYSICAL_KEYS: &[&str] = &[
    "eo_coefficient",
    "gap",
    "C1",
    "C2",
    "L1",
    "L2",
    "cavity_frequency",
    "pump_power",
    "cavity_loss",
    "pump_linewidth",
    "resonator_loss",
    "resonator_loss1",
    "resonator_loss2",
    "detuning1",
    "detuning2",
    "temperature",
];

fn device_preset(name: &str) -> Option<PhysicalParams> {
    match name {
        "cascaded" => Some(PhysicalParams::cascaded()),
        "cascaded-improved" => Some(PhysicalParams::cascaded_improved()),
        "parallel" => Some(PhysicalParams::parallel()),
        "dissipative" => Some(PhysicalParams::dissipative()),
        _ => None,
    }
}

/// Names accepted by the `device` key.
pub const DEVICE_PRESETS: [&str; 4] = ["cascaded", "cascaded-improved", "parallel", "dissipative"];

fn build_device(map: &ConfigMap, default: Option<&str>) -> Result<Option<PhysicalParams>> {
    let has_physical = PHYSICAL_KEYS.iter().any(|k| map.contains(k));
    let preset = match (map.text("device"), default) {
        (Some(name), _) => Some(
            device_preset(name)
                .ok_or_else(|| map.error_at("device", format!("unknown device '{name}' (expected one of {})", DEVICE_PRESETS.join(", "))))?,
        ),
        (None, Some(name)) => device_preset(name),
        (None, None) if has_physical => {
            return Err(Error::config(0, 0, "physical parameters need a `device` preset to start from"));
        }
        (None, None) => None,
    };
    let Some(mut p) = preset else { return Ok(None) };
    let num = |k: &str| map.number(k);
    if let Some(v) = num("eo_coefficient") {
        p.eo_coefficient = v;
    }
    if let Some(v) = num("gap") {
        p.gap = v;
    }
    for (i, (c, l)) in [("C1", "L1"), ("C2", "L2")].into_iter().enumerate() {
        if let Some(v) = num(c) {
            p.capacitance[i] = v;
        }
        if let Some(v) = num(l) {
            p.inductance[i] = v;
        }
    }
    if let Some(v) = num("cavity_frequency") {
        p.cavity_frequency = v;
    }
    if let Some(v) = num("pump_power") {
        p.pump_power = v;
    }
    if let Some(v) = num("cavity_loss") {
        p.cavity_loss = v;
    }
    if let Some(v) = num("pump_linewidth") {
        p.pump_linewidth = Some(v);
    }
    if let Some(v) = num("resonator_loss") {
        p.resonator_loss = [v, v];
    }
    if let Some(v) = num("resonator_loss1") {
        p.resonator_loss[0] = v;
    }
    if let Some(v) = num("resonator_loss2") {
        p.resonator_loss[1] = v;
    }
    match (num("detuning1"), num("detuning2")) {
        (None, None) => {}
        (d1, d2) => {
            let base = p.detunings.unwrap_or([p.resonator_frequency(0)?, p.resonator_frequency(1)?]);
            p.detunings = Some([d1.unwrap_or(base[0]), d2.unwrap_or(base[1])]);
        }
    }
    if let Some(v) = num("temperature") {
        p.temperature = v;
    }
    p.validate().map_err(|e| Error::config(0, 0, e.to_string()))?;
    Ok(Some(p))
}

struct Defaults {
    scheme: Option<SchemeKind>,
    device: Option<&'static str>,
    r: Option<f64>,
    k: [f64; 3],
    n_th: [f64; 3],
    curves: &'static [f64],
}

fn defaults(name: ScenarioName) -> Defaults {
    let base = Defaults {
        scheme: name.fixed_scheme(),
        device: None,
        r: None,
        k: [0.0; 3],
        n_th: [0.0; 3],
        curves: &[],
    };
    match name {
        ScenarioName::Fig3a => Defaults { r: Some(0.5), n_th: [0.0, 0.1, 0.1], ..base },
        ScenarioName::Fig3b => Defaults { r: Some(0.5), k: [0.1; 3], n_th: [0.0, 0.1, 0.1], ..base },
        ScenarioName::Fig4a => Defaults { r: Some(1.0 - 1e-3), curves: &[0.0, 0.1, 1.0], ..base },
        ScenarioName::Fig4b => Defaults { r: Some(1.0 - 1e-3), curves: &[0.001, 0.01, 0.1], ..base },
        ScenarioName::Fig6 => Defaults {
            r: Some(0.5),
            k: [10.0, 0.0, 0.0],
            n_th: [0.0, 0.01, 0.01],
            curves: &[0.0, 0.0015, 0.0075, 0.015],
            ..base
        },
        ScenarioName::Fig7 => Defaults { device: Some("cascaded"), ..base },
        ScenarioName::ParamsReport => Defaults { device: Some("cascaded"), ..base },
        ScenarioName::Custom => base,
    }
}

impl ScenarioSpec {
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_config(&ConfigMap::load(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_config(&ConfigMap::parse(text)?)
    }

    /// Built-in defaults of a named scenario.
    pub fn builtin(name: ScenarioName) -> Result<Self> {
        let mut map = ConfigMap::default();
        map.set("scenario", Value::Text(name.name().into()))?;
        Self::from_config(&map)
    }

    pub fn source(&self) -> &ConfigMap {
        &self.source
    }

    /// Re-resolves the scenario with one key replaced.
    pub fn with_override(&self, key: &str, value: f64) -> Result<Self> {
        let mut map = self.source.clone();
        map.set(key, Value::Number(value))?;
        Self::from_config(&map)
    }

    pub fn from_config(map: &ConfigMap) -> Result<Self> {
        let name = match map.text("scenario") {
            Some(s) => s.parse::<ScenarioName>().map_err(|e| map.error_at("scenario", e.to_string()))?,
            None => ScenarioName::Custom,
        };
        let d = defaults(name);

        let requested = map
            .text("scheme")
            .map(|s| s.parse::<SchemeKind>().map_err(|e| map.error_at("scheme", e.to_string())))
            .transpose()?;
        let kind = match (name.fixed_scheme(), requested) {
            (Some(fixed), Some(req)) if fixed != req => {
                return Err(map.error_at("scheme", format!("scenario {name} uses the {fixed} scheme, not {req}")));
            }
            (_, Some(req)) => req,
            (Some(fixed), None) => fixed,
            (None, None) if name == ScenarioName::ParamsReport => match map.text("device") {
                Some("parallel") => SchemeKind::Parallel,
                Some("dissipative") => SchemeKind::Dissipative,
                _ => SchemeKind::Cascaded,
            },
            (None, None) => d
                .scheme
                .ok_or_else(|| Error::config(0, 0, format!("scenario {name} needs a `scheme`")))?,
        };

        let device = build_device(map, d.device)?;
        let rates = device.as_ref().map(scheme_rates).transpose()?;
        let mut scheme = match &rates {
            Some(rates) => SchemeConfig::from_rates(kind, rates),
            None => {
                let r = map
                    .number("r")
                    .or(d.r)
                    .ok_or_else(|| Error::config(0, 0, format!("scenario {name} needs `r` or a `device`")))?;
                SchemeConfig::new(kind, r).with_decays(d.k[0], d.k[1], d.k[2]).with_occupations(d.n_th)
            }
        };
        let segment_time = map.number("t2");
        if let (Some(t2), Some(rates)) = (segment_time, &rates) {
            // tau = G1 t
            scheme.tau2 = t2 * rates.effective_couplings[0];
        }

        let num = |k: &str| map.number(k);
        if let Some(v) = num("r") {
            scheme.r = v;
        }
        if let Some(v) = num("k") {
            scheme = scheme.with_decays(v, v, v);
        }
        for (key, slot) in [("k0", 0usize), ("k1", 1), ("k2", 2)] {
            if let Some(v) = num(key) {
                match slot {
                    0 => scheme.k0 = v,
                    1 => scheme.k1 = v,
                    _ => scheme.k2 = v,
                }
            }
        }
        if let Some(v) = num("n_th") {
            scheme.n_th[1] = v;
            scheme.n_th[2] = v;
        }
        for (key, slot) in [("n_th0", 0usize), ("n_th1", 1), ("n_th2", 2)] {
            if let Some(v) = num(key) {
                scheme.n_th[slot] = v;
            }
        }
        if let Some(v) = num("tau1") {
            scheme.tau1 = v;
        }
        if let Some(v) = num("tau2") {
            scheme.tau2 = v;
        }
        if name == ScenarioName::Fig7 {
            scheme.tau1 = num("tau1").unwrap_or(FRAC_PI_2);
        }

        let curves = map.list("curves").map(<[f64]>::to_vec).unwrap_or_else(|| d.curves.to_vec());
        if matches!(name, ScenarioName::Fig4a | ScenarioName::Fig4b | ScenarioName::Fig6) {
            if curves.is_empty() {
                return Err(map.error_at("curves", "at least one curve value is required"));
            }
            if let Some(c) = curves.iter().find(|c| !(**c >= 0.0)) {
                return Err(map.error_at("curves", format!("curve value {c} must be >= 0")));
            }
        }

        let (from, to, points) = default_grid(name, &scheme)?;
        let grid = match num("grid_points") {
            Some(n) => linspace(num("grid_from").unwrap_or(from), num("grid_to").unwrap_or(to), n as usize),
            None => linspace(num("grid_from").unwrap_or(from), num("grid_to").unwrap_or(to), points),
        }
        .map_err(|e| map.error_at("grid_points", e.to_string()))?;
        if name == ScenarioName::Fig7 {
            if let Some(bad) = grid.iter().find(|t| **t <= scheme.tau1) {
                return Err(map.error_at("grid_from", format!("tau2 grid value {bad} must exceed tau1 = {}", scheme.tau1)));
            }
        }

        scheme.validate().map_err(|e| Error::config(0, 0, e.to_string()))?;
        Ok(Self {
            name,
            scheme,
            device,
            segment_time,
            grid,
            curves,
            output: map.text("output").map(PathBuf::from),
            source: map.clone(),
        })
    }

    pub fn rates(&self) -> Result<Option<DerivedRates>> {
        self.device.as_ref().map(scheme_rates).transpose()
    }

    /// The scheme's scalar figure of merit: final EPR variance (cascaded),
    /// minimum over the first oscillation period (parallel) or steady-state
    /// variance (dissipative).
    pub fn figure_of_merit(&self) -> Result<f64> {
        scheme_figure_of_merit(&self.scheme)
    }
}

fn default_grid(name: ScenarioName, scheme: &SchemeConfig) -> Result<(f64, f64, usize)> {
    let period = |r: f64| {
        if r < 1.0 {
            Ok(PI / ((1.0 - r) * (1.0 + r)).sqrt())
        } else {
            Err(Error::config(0, 0, format!("r = {r} must be < 1 for this scenario")))
        }
    };
    Ok(match name {
        ScenarioName::Fig3a | ScenarioName::Fig3b => (0.0, 3.0 * period(scheme.r)?, 301),
        ScenarioName::Fig4a | ScenarioName::Fig4b => (0.0, 2.0, 401),
        ScenarioName::Fig6 => (0.0, 5.0, 101),
        ScenarioName::Fig7 => (1.6, 4.0, 49),
        ScenarioName::ParamsReport => (0.0, 1.0, 1),
        ScenarioName::Custom => match scheme.kind {
            SchemeKind::Cascaded => (0.0, 2.0 * scheme.tau1 + (scheme.tau2 - scheme.tau1), 201),
            SchemeKind::Parallel if scheme.r < 1.0 => (0.0, 2.0 * period(scheme.r)?, 201),
            _ => (0.0, 10.0, 201),
        },
    })
}

fn scheme_dynamics(config: &SchemeConfig) -> Result<LinearDynamics> {
    match config.kind {
        SchemeKind::Parallel => parallel_dynamics(config),
        SchemeKind::Dissipative => dissipative_dynamics(config),
        SchemeKind::Cascaded => Err(Error::InvalidInput("cascaded dynamics are piecewise; use the schedule".into())),
    }
}

/// State after time `tau` of a constant-dynamics scheme, by exact discretization.
pub fn state_at(dynamics: &LinearDynamics, initial: &GaussianState, tau: f64) -> Result<GaussianState> {
    Transition::over(dynamics, tau)?.apply(initial)
}

/// State after time `t` into a piecewise schedule (held in its last segment
/// beyond the total duration).
pub fn schedule_state_at(schedule: &PiecewiseSchedule, initial: &GaussianState, t: f64) -> Result<GaussianState> {
    let mut state = initial.clone();
    let mut remaining = t;
    let n = schedule.segments().len();
    for (i, (dynamics, duration)) in schedule.segments().iter().enumerate() {
        let step = if i + 1 == n { remaining } else { remaining.min(*duration) };
        if step <= 0.0 {
            break;
        }
        state = Transition::over(dynamics, step)?.apply(&state)?;
        remaining -= step;
    }
    Ok(state)
}

/// State of a scheme at time `tau` from its thermal initial state.
pub fn scheme_state_at(config: &SchemeConfig, tau: f64) -> Result<GaussianState> {
    let initial = config.initial_state()?;
    match config.kind {
        SchemeKind::Cascaded => schedule_state_at(&cascaded_schedule(config)?, &initial, tau),
        _ => state_at(&scheme_dynamics(config)?, &initial, tau),
    }
}

/// EPR variance of the microwave pair at the end of the cascaded sequence.
pub fn cascaded_final_variance(config: &SchemeConfig) -> Result<f64> {
    let schedule = cascaded_schedule(config)?;
    let state = schedule.transition()?.apply(&config.initial_state()?)?;
    epr_variance(&state, SchemeKind::Cascaded.microwave_pair())
}

/// Minimum EPR variance of the parallel scheme over its first oscillation
/// period `[0, 2 pi / sqrt(1 - r^2)]`; returns `(tau*, V_min)`.
pub fn parallel_minimum_variance(config: &SchemeConfig) -> Result<(f64, f64)> {
    if config.kind != SchemeKind::Parallel {
        return Err(Error::InvalidInput("parallel_minimum_variance needs a parallel configuration".into()));
    }
    if !(config.r < 1.0) {
        return Err(Error::InvalidInput(format!("r = {} must be < 1", config.r)));
    }
    let dynamics = parallel_dynamics(config)?;
    let initial = config.initial_state()?;
    let period = 2.0 * PI / ((1.0 - config.r) * (1.0 + config.r)).sqrt();
    let pair = SchemeKind::Parallel.microwave_pair();
    let grid = linspace(0.0, period, 401)?;
    let result = scan("tau", &grid, |tau| epr_variance(&state_at(&dynamics, &initial, tau)?, pair))?;
    Ok(result.optimum)
}

/// Steady-state EPR variance of the full dissipative model.
pub fn dissipative_full_steady_variance(config: &SchemeConfig) -> Result<f64> {
    let state = steady_state(&dissipative_dynamics(config)?)?;
    epr_variance(&state, SchemeKind::Dissipative.microwave_pair())
}

pub fn scheme_figure_of_merit(config: &SchemeConfig) -> Result<f64> {
    match config.kind {
        SchemeKind::Cascaded => cascaded_final_variance(config),
        SchemeKind::Parallel => parallel_minimum_variance(config).map(|(_, v)| v),
        SchemeKind::Dissipative => dissipative_full_steady_variance(config),
    }
}

/// Sweeps one configuration key over `[from, to]` (in the key's SI unit),
/// recording the scenario's figure of merit.
pub fn sweep(spec: &ScenarioSpec, parameter: &str, from: f64, to: f64, points: usize) -> Result<SweepResult> {
    if points == 0 {
        return Err(Error::InvalidInput("sweep range is empty".into()));
    }
    let grid = linspace(from, to, points)?;
    // resolve once up front so configuration errors surface as such
    spec.with_override(parameter, from)?;
    scan(parameter, &grid, |v| spec.with_override(parameter, v)?.figure_of_merit())
}

fn clamp_photon_number(n: f64) -> Result<f64> {
    if n < PHOTON_NUMBER_FLOOR {
        return Err(Error::Numerical(format!("negative photon number {n:.3e}")));
    }
    Ok(n.max(0.0))
}

fn curve_label(prefix: &str, v: f64) -> String {
    format!("V({prefix}={v})")
}

fn scheme_metadata(table: &mut CsvTable, spec: &ScenarioSpec) {
    let s = &spec.scheme;
    table.meta("cvsim", env!("CARGO_PKG_VERSION"));
    table.meta("scenario", spec.name);
    table.meta("scheme", s.kind);
    table.meta("r", format_number(s.r));
    table.meta("k0,k1,k2", [s.k0, s.k1, s.k2].map(format_number).join(","));
    table.meta("n_th", s.n_th.map(format_number).join(","));
    if s.kind == SchemeKind::Cascaded {
        table.meta("tau1,tau2", [s.tau1, s.tau2].map(format_number).join(","));
    }
}

fn time_series<F>(grid: &[f64], f: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    grid.par_iter()
        .map(|&t| {
            let mut row = vec![t];
            row.extend(f(t)?);
            Ok(row)
        })
        .collect()
}

fn photon_numbers(state: &GaussianState) -> Result<Vec<f64>> {
    (0..state.num_modes())
        .map(|m| photon_number(state, m).and_then(clamp_photon_number))
        .collect()
}

fn run_fig3(spec: &ScenarioSpec) -> Result<CsvTable> {
    let dynamics = parallel_dynamics(&spec.scheme)?;
    let initial = spec.scheme.initial_state()?;
    let mut table = CsvTable::new(&["tau", "N_a1", "N_b1", "N_b2"]);
    scheme_metadata(&mut table, spec);
    table.rows = time_series(&spec.grid, |tau| photon_numbers(&state_at(&dynamics, &initial, tau)?))?;
    Ok(table)
}

fn run_fig4(spec: &ScenarioSpec) -> Result<CsvTable> {
    let by_occupation = spec.name == ScenarioName::Fig4a;
    let configs: Vec<SchemeConfig> = spec
        .curves
        .iter()
        .map(|&c| {
            let mut cfg = spec.scheme.clone();
            if by_occupation {
                cfg.n_th = [c; 3];
            } else {
                cfg = cfg.with_decays(c, c, c);
            }
            cfg
        })
        .collect();
    let prepared: Vec<(LinearDynamics, GaussianState)> = configs
        .iter()
        .map(|cfg| Ok((parallel_dynamics(cfg)?, cfg.initial_state()?)))
        .collect::<Result<_>>()?;
    let eps = ((1.0 - spec.scheme.r) * (1.0 + spec.scheme.r)).sqrt();
    let prefix = if by_occupation { "n_th" } else { "k" };
    let mut header = vec!["phase".to_string()];
    header.extend(spec.curves.iter().map(|&c| curve_label(prefix, c)));
    let mut table = CsvTable { header, ..CsvTable::default() };
    scheme_metadata(&mut table, spec);
    table.meta("phase", "sqrt(1-r^2) tau / pi");
    table.rows = time_series(&spec.grid, |phase| {
        let tau = phase * PI / eps;
        prepared
            .iter()
            .map(|(d, s)| epr_variance(&state_at(d, s, tau)?, SchemeKind::Parallel.microwave_pair()))
            .collect()
    })?;
    Ok(table)
}

fn run_fig6(spec: &ScenarioSpec) -> Result<CsvTable> {
    let base = &spec.scheme;
    let configs: Vec<SchemeConfig> = spec
        .curves
        .iter()
        .map(|&k| base.clone().with_decays(base.k0, k, k))
        .collect();
    let prepared: Vec<(LinearDynamics, GaussianState)> = configs
        .iter()
        .map(|cfg| Ok((dissipative_dynamics(cfg)?, cfg.initial_state()?)))
        .collect::<Result<_>>()?;
    let ideal = squeezing_parameters(base)?.ideal_variance;
    let gamma = effective_rate(base)?;
    let mut header = vec!["x".to_string()];
    for &k in &spec.curves {
        header.push(format!("V_sim(k1={k})"));
        header.push(format!("V_formula(k1={k})"));
    }
    header.push("V_ideal".into());
    let mut table = CsvTable { header, ..CsvTable::default() };
    scheme_metadata(&mut table, spec);
    table.meta("gamma", format_number(gamma));
    table.meta("x", "(1-r^2) tau / k0");
    let scale = base.k0 / ((1.0 - base.r) * (1.0 + base.r));
    table.rows = time_series(&spec.grid, |x| {
        let tau = x * scale;
        let mut row = Vec::with_capacity(2 * configs.len() + 1);
        for (cfg, (d, s)) in configs.iter().zip(&prepared) {
            row.push(epr_variance(&state_at(d, s, tau)?, SchemeKind::Dissipative.microwave_pair())?);
            row.push(dissipative_variance_at(tau, cfg)?);
        }
        row.push(ideal);
        Ok(row)
    })?;
    Ok(table)
}

fn run_fig7(spec: &ScenarioSpec) -> Result<CsvTable> {
    let result = scan("tau2", &spec.grid, |tau2| {
        let mut cfg = spec.scheme.clone();
        cfg.tau2 = tau2;
        cascaded_final_variance(&cfg)
    })?;
    let mut table = CsvTable::new(&["tau2", "V"]);
    scheme_metadata(&mut table, spec);
    table.rows = result.samples.iter().map(|&(t, v)| vec![t, v]).collect();
    let (t_opt, v_opt) = result.optimum;
    let mut footer = format!("tau2 = {}, V = {}", format_number(t_opt), format_number(v_opt));
    if let Some(rates) = spec.rates()? {
        footer.push_str(&format!(", T2 = {} s", format_number(t_opt / rates.effective_couplings[0])));
    }
    table.footer.push(("optimum".into(), footer));
    table.footer.push(("interior minima".into(), result.interior_minima().to_string()));
    Ok(table)
}

fn run_params_report(spec: &ScenarioSpec) -> Result<CsvTable> {
    let device = spec
        .device
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("params-report needs a device".into()))?;
    let rates = scheme_rates(device)?;
    let two_pi = 2.0 * PI;
    let mut table = CsvTable::new(&["quantity", "value"]);
    table.digits = ROUND_TRIP_DIGITS;
    table.meta("cvsim", env!("CARGO_PKG_VERSION"));
    table.meta("scenario", spec.name);
    table.meta("scheme", spec.scheme.kind);
    table.meta("frequencies", "ordinary frequencies in Hz (angular / 2 pi)");
    // only the simultaneous-drive schemes rely on weak pumps
    if spec.scheme.kind != SchemeKind::Cascaded {
        for w in rates.warnings() {
            table.meta("warning", w);
        }
    }
    let mut push = |label: &str, v: f64| {
        table.row_labels.push(label.to_string());
        table.rows.push(vec![v]);
    };
    for i in 0..2 {
        push(&format!("f_b{}_Hz", i + 1), rates.resonator_frequencies[i] / two_pi);
    }
    for i in 0..2 {
        push(&format!("g{}_Hz", i + 1), rates.couplings[i] / two_pi);
    }
    for i in 0..2 {
        push(&format!("n_cav{}", i + 1), rates.cavity_photon_numbers[i]);
    }
    for i in 0..2 {
        push(&format!("G{}_Hz", i + 1), rates.effective_couplings[i] / two_pi);
    }
    push("r", rates.ratio);
    for (i, k) in rates.scaled_decays.iter().enumerate() {
        push(&format!("k{i}"), *k);
    }
    for (i, n) in rates.thermal_occupations.iter().enumerate() {
        push(&format!("n_th{i}"), *n);
    }
    for i in 0..2 {
        push(&format!("E{0}_over_Delta{0}", i + 1), rates.weak_drive[i]);
    }
    let t2 = spec.segment_time.unwrap_or(spec.scheme.tau2 / rates.effective_couplings[0]);
    push("T2_s", t2);
    push("T_c_s", operation_time(&rates, SchemeKind::Cascaded, Some(t2))?);
    let mut notes = Vec::new();
    for (label, kind) in [("T_p_s", SchemeKind::Parallel), ("T_d_s", SchemeKind::Dissipative)] {
        match operation_time(&rates, kind, None) {
            Ok(t) => push(label, t),
            Err(e) => notes.push(format!("{label}: {e}")),
        }
    }
    for n in notes {
        table.footer.push(("note".into(), n));
    }
    Ok(table)
}

fn run_custom(spec: &ScenarioSpec) -> Result<CsvTable> {
    let cfg = &spec.scheme;
    let labels = cfg.kind.mode_labels();
    let mut header = vec!["tau".to_string()];
    header.extend(labels.iter().map(|l| format!("N_{l}")));
    header.push("V".into());
    let mut table = CsvTable { header, ..CsvTable::default() };
    scheme_metadata(&mut table, spec);
    let pair = cfg.kind.microwave_pair();
    let initial = cfg.initial_state()?;
    let schedule = match cfg.kind {
        SchemeKind::Cascaded => Some(cascaded_schedule(cfg)?),
        _ => None,
    };
    let dynamics = match cfg.kind {
        SchemeKind::Cascaded => None,
        _ => Some(scheme_dynamics(cfg)?),
    };
    table.rows = time_series(&spec.grid, |tau| {
        let state = match (&schedule, &dynamics) {
            (Some(s), _) => schedule_state_at(s, &initial, tau)?,
            (_, Some(d)) => state_at(d, &initial, tau)?,
            _ => unreachable!("one of schedule or dynamics is set"),
        };
        let mut row = photon_numbers(&state)?;
        row.push(epr_variance(&state, pair)?);
        Ok(row)
    })?;
    Ok(table)
}

/// Runs a scenario and returns its table.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<CsvTable> {
    match spec.name {
        ScenarioName::Fig3a | ScenarioName::Fig3b => run_fig3(spec),
        ScenarioName::Fig4a | ScenarioName::Fig4b => run_fig4(spec),
        ScenarioName::Fig6 => run_fig6(spec),
        ScenarioName::Fig7 => run_fig7(spec),
        ScenarioName::ParamsReport => run_params_report(spec),
        ScenarioName::Custom => run_custom(spec),
    }
}
