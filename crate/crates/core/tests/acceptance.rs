//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Sub-check details are printed under each line.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use cvsim::experiments::{
    cascaded_final_variance, dissipative_full_steady_variance, parallel_minimum_variance, run_scenario, scan,
    linspace, ScenarioName, ScenarioSpec,
};
use cvsim::gaussian::{
    evolve, mode_to_quadrature, propagator, solve_lyapunov, steady_state, symplectic_form, GaussianState,
    Transition,
};
use cvsim::metrics::{duan_verdict, epr_variance, EprPair};
use cvsim::params::{
    cavity_photon_number, eo_coupling, lc_frequency, scheme_rates, thermal_occupation, PhysicalParams,
};
use cvsim::schemes::{
    cascaded_schedule, dissipative_dynamics, dissipative_steady_variance, dissipative_variance_at,
    effective_rate, parallel_dynamics, three_mode_basis, SchemeConfig, SchemeKind,
};

struct Criterion {
    checks: Vec<(bool, String)>,
}

impl Criterion {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.checks.push((ok, detail.into()));
    }

    fn within(&mut self, label: &str, value: f64, target: f64, tol: f64) {
        let ok = (value - target).abs() <= tol;
        self.check(ok, format!("{label} = {value:.6} (target {target} +/- {tol})"));
    }

    fn relative(&mut self, label: &str, value: f64, target: f64, rel: f64) {
        let ok = ((value - target) / target).abs() <= rel;
        self.check(ok, format!("{label} = {value:.6e} (target {target:e} +/- {:.0}%)", rel * 100.0));
    }

    fn error(&mut self, label: &str, e: impl std::fmt::Display) {
        self.check(false, format!("{label}: error {e}"));
    }

    fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|(ok, _)| *ok)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cmat(rows: [[Complex64; 3]; 3]) -> DMatrix<Complex64> {
    DMatrix::from_fn(3, 3, |i, j| rows[i][j])
}

fn hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

fn criterion_parameter_chain() -> Criterion {
    let mut cr = Criterion::new();
    let p = PhysicalParams::cascaded();
    match (eo_coupling(&p, 0), eo_coupling(&p, 1)) {
        (Ok(g1), Ok(g2)) => {
            cr.relative("g1/2pi [Hz]", hz(g1), 15e3, 0.05);
            cr.relative("g2/2pi [Hz]", hz(g2), 19e3, 0.05);
        }
        (Err(e), _) | (_, Err(e)) => cr.error("eo_coupling", e),
    }
    let gamma = p.cavity_loss;
    for (delta_hz, target) in [(3e9, 400.0), (5e9, 144.0)] {
        match cavity_photon_number(gamma, 2.0 * PI * delta_hz, p.pump_power, p.cavity_frequency) {
            Ok(n) => cr.relative(&format!("n_cav at {:.0} GHz detuning", delta_hz / 1e9), n, target, 0.05),
            Err(e) => cr.error("cavity_photon_number", e),
        }
    }
    for (l, target) in [(70e-9, 3e9), (25e-9, 5e9)] {
        match lc_frequency(l, 40e-15) {
            Ok(w) => cr.relative(&format!("f_b for L = {:.0} nH", l * 1e9), hz(w), target, 0.02),
            Err(e) => cr.error("lc_frequency", e),
        }
    }
    for (f, target) in [(3e9, 0.3), (5e9, 0.1)] {
        match thermal_occupation(2.0 * PI * f, 0.1) {
            Ok(n) => cr.relative(&format!("n_th at {:.0} GHz, 100 mK", f / 1e9), n, target, 0.15),
            Err(e) => cr.error("thermal_occupation", e),
        }
    }
    cr
}

/// Closed forms written out independently of the library.
fn beam_splitter_closed(t: f64) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    cmat([
        [c(t.cos(), 0.0), c(0.0, t.sin()), z],
        [c(0.0, t.sin()), c(t.cos(), 0.0), z],
        [z, z, c(1.0, 0.0)],
    ])
}

fn decoupled_cascaded_closed(zeta: f64) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    cmat([
        [c(-1.0, 0.0), z, z],
        [z, c(-zeta.cosh(), 0.0), c(-zeta.sinh(), 0.0)],
        [z, c(zeta.sinh(), 0.0), c(zeta.cosh(), 0.0)],
    ])
}

fn parallel_closed(tau: f64, r: f64) -> DMatrix<Complex64> {
    let eps = (1.0 - r * r).sqrt();
    let (cs, s, q) = ((eps * tau).cos(), (eps * tau).sin() / eps, (1.0 - (eps * tau).cos()) / (eps * eps));
    cmat([
        [c(cs, 0.0), c(0.0, s), c(0.0, r * s)],
        [c(0.0, s), c(1.0 - q, 0.0), c(-r * q, 0.0)],
        [c(0.0, -r * s), c(r * q, 0.0), c(1.0 + r * r * q, 0.0)],
    ])
}

fn parallel_endpoint_closed(r: f64) -> DMatrix<Complex64> {
    let (a, b) = ((1.0 + r * r) / (1.0 - r * r), 2.0 * r / (1.0 - r * r));
    let z = c(0.0, 0.0);
    cmat([
        [c(-1.0, 0.0), z, z],
        [z, c(-a, 0.0), c(-b, 0.0)],
        [z, c(b, 0.0), c(a, 0.0)],
    ])
}

fn criterion_closed_forms() -> Criterion {
    let mut cr = Criterion::new();
    let basis = three_mode_basis();
    let quad = |m: &DMatrix<Complex64>| mode_to_quadrature(&basis, m, 3);
    let worst = std::cell::Cell::new([0.0f64; 4]);
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 100, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let strategy = (0.0..10.0f64, 0.0..0.95f64, 0.0..3.0f64);
    let outcome = runner.run(&strategy, |(tau, r, dt)| {
        let eval = || -> cvsim::Result<[f64; 4]> {
            // beam-splitter segment
            let bs_cfg = SchemeConfig::new(SchemeKind::Cascaded, r).with_timing(tau, tau + dt);
            let bs_schedule = cascaded_schedule(&bs_cfg)?;
            let d10 = (propagator(&bs_schedule.segments()[0].0, tau)? - quad(&beam_splitter_closed(tau))?).amax();
            // decoupled cascaded sequence
            let cfg = SchemeConfig::new(SchemeKind::Cascaded, r).with_timing(FRAC_PI_2, FRAC_PI_2 + dt);
            let d14 = (cascaded_schedule(&cfg)?.propagator()? - quad(&decoupled_cascaded_closed(r * dt))?).amax();
            // parallel, arbitrary time and at the decoupling time
            let par = parallel_dynamics(&SchemeConfig::new(SchemeKind::Parallel, r))?;
            let d20 = (propagator(&par, tau)? - quad(&parallel_closed(tau, r))?).amax();
            let t_pi = PI / (1.0 - r * r).sqrt();
            let d21 = (propagator(&par, t_pi)? - quad(&parallel_endpoint_closed(r))?).amax();
            Ok([d10, d14, d20, d21])
        };
        let d = eval().map_err(|e| TestCaseError::fail(e.to_string()))?;
        let mut w = worst.get();
        for (w, v) in w.iter_mut().zip(d) {
            *w = w.max(v);
        }
        worst.set(w);
        prop_assert!(d.iter().all(|v| *v < 1e-9), "tau={tau} r={r} dt={dt}: {d:?}");
        Ok(())
    });
    let names = ["beam splitter", "decoupled cascaded", "parallel", "parallel endpoint"];
    for (name, w) in names.iter().zip(worst.get()) {
        cr.check(w < 1e-9, format!("{name}: worst entrywise deviation {w:.2e} (< 1e-9)"));
    }
    if let Err(e) = outcome {
        cr.check(false, format!("randomized draws: {e}"));
    }
    cr
}

fn criterion_endpoints() -> Criterion {
    let mut cr = Criterion::new();
    for (r, dt) in [(0.5, 2.0), (0.3, 1.5), (0.9, 0.7)] {
        let cfg = SchemeConfig::new(SchemeKind::Cascaded, r).with_timing(FRAC_PI_2, FRAC_PI_2 + dt);
        let ideal = 2.0 * (-2.0 * r * dt).exp();
        match cascaded_schedule(&cfg).and_then(|s| s.transition()).and_then(|t| t.apply(&GaussianState::vacuum(3))) {
            Ok(s) => {
                let v = epr_variance(&s, SchemeKind::Cascaded.microwave_pair()).unwrap();
                cr.within(&format!("cascaded r={r} tau2-tau1={dt}"), v, ideal, 1e-8);
            }
            Err(e) => cr.error("cascaded", e),
        }
        match cascaded_schedule(&cfg).and_then(|s| s.evolve(&GaussianState::vacuum(3), 1e-12)) {
            Ok(s) => {
                let v = epr_variance(&s, SchemeKind::Cascaded.microwave_pair()).unwrap();
                cr.within(&format!("cascaded r={r} (integrated)"), v, ideal, 1e-8);
            }
            Err(e) => cr.error("cascaded integrated", e),
        }
    }
    for r in [0.5f64, 0.2, 0.8] {
        let xi = (2.0 * r / (1.0 + r * r)).atanh();
        let ideal = 2.0 * (-2.0 * xi).exp();
        let t_pi = PI / (1.0 - r * r).sqrt();
        let d = parallel_dynamics(&SchemeConfig::new(SchemeKind::Parallel, r)).unwrap();
        match Transition::over(&d, t_pi).and_then(|t| t.apply(&GaussianState::vacuum(3))) {
            Ok(s) => {
                let v = epr_variance(&s, SchemeKind::Parallel.microwave_pair()).unwrap();
                cr.within(&format!("parallel r={r}"), v, ideal, 1e-8);
            }
            Err(e) => cr.error("parallel", e),
        }
        match evolve(&d, &GaussianState::vacuum(3), t_pi, 1e-12) {
            Ok(s) => {
                let v = epr_variance(&s, SchemeKind::Parallel.microwave_pair()).unwrap();
                cr.within(&format!("parallel r={r} (integrated)"), v, ideal, 1e-8);
            }
            Err(e) => cr.error("parallel integrated", e),
        }
    }
    cr.within("parallel r=0.5 ideal value", 2.0 * (-2.0 * 0.8f64.atanh()).exp(), 2.0 / 9.0, 1e-12);
    cr
}

fn criterion_dissipative_steady() -> Criterion {
    let mut cr = Criterion::new();
    let mut worst_ratio = 0.0f64;
    for n_th in [0.0, 0.01] {
        for k0 in [10.0, 30.0, 100.0] {
            for r in [0.3, 0.5, 0.8] {
                for alpha in [0.0, 0.05, 0.1] {
                    let k1 = alpha * 2.0 * (1.0 - r * r) / k0;
                    let cfg = SchemeConfig::new(SchemeKind::Dissipative, r)
                        .with_decays(k0, k1, k1)
                        .with_occupations([0.0, n_th, n_th]);
                    match (dissipative_full_steady_variance(&cfg), dissipative_steady_variance(&cfg)) {
                        (Ok(full), Ok(formula)) => {
                            let dev = (full - formula).abs();
                            worst_ratio = worst_ratio.max(dev * k0 / 5.0);
                            if dev > 5.0 / k0 {
                                cr.check(
                                    false,
                                    format!("k0={k0} r={r} alpha={alpha} n_th={n_th}: |{full:.5} - {formula:.5}| > {:.3}", 5.0 / k0),
                                );
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => cr.error(&format!("k0={k0} r={r} alpha={alpha}"), e),
                    }
                }
            }
        }
    }
    cr.check(
        worst_ratio <= 1.0,
        format!("54 grid points, n_th in {{0, 0.01}}: worst |V_full - V_formula| = {worst_ratio:.3} x (5/k0)"),
    );
    for r in [0.3, 0.5, 0.8] {
        let cfg = SchemeConfig::new(SchemeKind::Dissipative, r).with_decays(1000.0, 0.0, 0.0);
        match dissipative_full_steady_variance(&cfg) {
            Ok(v) => cr.within(&format!("k0=1000 r={r} ideal limit"), v, 2.0 * (1.0 - r) / (1.0 + r), 1e-3),
            Err(e) => cr.error("ideal limit", e),
        }
    }
    cr
}

fn criterion_figures() -> Criterion {
    let mut cr = Criterion::new();
    let start = Instant::now();

    // fig3a: decoupling instants sit at grid indices 100, 200, 300
    match ScenarioSpec::builtin(ScenarioName::Fig3a).and_then(|s| run_scenario(&s)) {
        Ok(t) => {
            let (na, nb1, nb2) = (t.column("N_a1").unwrap(), t.column("N_b1").unwrap(), t.column("N_b2").unwrap());
            let worst_a = [100, 200, 300].iter().map(|&i| na[i]).fold(0.0, f64::max);
            let worst_b = [100, 200, 300].iter().map(|&i| (nb1[i] - nb2[i]).abs()).fold(0.0, f64::max);
            cr.check(worst_a < 1e-6, format!("fig3a: N_a1 at phase n pi = {worst_a:.2e} (< 1e-6)"));
            cr.check(worst_b < 1e-6, format!("fig3a: |N_b1 - N_b2| at phase n pi = {worst_b:.2e} (< 1e-6)"));
        }
        Err(e) => cr.error("fig3a", e),
    }
    match ScenarioSpec::builtin(ScenarioName::Fig3b).and_then(|s| run_scenario(&s)) {
        Ok(t) => {
            let min = t.column("N_a1").unwrap()[1..].iter().copied().fold(f64::INFINITY, f64::min);
            cr.check(min > 0.0, format!("fig3b: min N_a1 over tau > 0 = {min:.3e} (> 0)"));
        }
        Err(e) => cr.error("fig3b", e),
    }

    // fig4a: phase pi is grid index 200
    match ScenarioSpec::builtin(ScenarioName::Fig4a).and_then(|s| run_scenario(&s)) {
        Ok(t) => {
            let at_pi: Vec<f64> = t.header[1..].iter().map(|h| t.column(h).unwrap()[200]).collect();
            let spread = at_pi.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                - at_pi.iter().copied().fold(f64::INFINITY, f64::min);
            cr.check(spread < 1e-2, format!("fig4a: V at phase pi {at_pi:.5?}, spread {spread:.2e} (< 1e-2)"));
        }
        Err(e) => cr.error("fig4a", e),
    }

    let fig6 = SchemeConfig::new(SchemeKind::Dissipative, 0.5)
        .with_decays(10.0, 0.0075, 0.0075)
        .with_occupations([0.0, 0.01, 0.01]);
    match effective_rate(&fig6) {
        Ok(g) => cr.check((g - 0.15).abs() <= 1e-15, format!("fig6: gamma = {g} (exactly 0.15)")),
        Err(e) => cr.error("fig6 gamma", e),
    }
    match (dissipative_variance_at(1e6, &fig6), dissipative_steady_variance(&fig6)) {
        (Ok(a), Ok(b)) => cr.within("fig6: transient asymptote minus stable formula", a - b, 0.0, 1e-9),
        (Err(e), _) | (_, Err(e)) => cr.error("fig6 asymptote", e),
    }

    match ScenarioSpec::builtin(ScenarioName::Fig7) {
        Ok(spec) => {
            let result = scan("tau2", &spec.grid, |tau2| {
                let mut cfg = spec.scheme.clone();
                cfg.tau2 = tau2;
                cascaded_final_variance(&cfg)
            });
            match result {
                Ok(res) => {
                    let unique = res.interior_minima() == 1 && !res.at_boundary();
                    cr.check(unique, format!("fig7: unique interior minimum ({} found)", res.interior_minima()));
                    cr.within("fig7: optimal tau2", res.optimum.0, 2.43, 0.25);
                    cr.within("fig7: minimal V", res.optimum.1, 1.56, 0.20);
                }
                Err(e) => cr.error("fig7", e),
            }
        }
        Err(e) => cr.error("fig7", e),
    }
    let elapsed = start.elapsed().as_secs_f64();
    cr.check(elapsed < 30.0, format!("runtime {elapsed:.2} s (< 30 s)"));
    cr
}

fn criterion_headlines() -> Criterion {
    let mut cr = Criterion::new();
    match scheme_rates(&PhysicalParams::dissipative()) {
        Ok(rates) => {
            let cfg = SchemeConfig::from_rates(SchemeKind::Dissipative, &rates);
            match dissipative_steady_variance(&cfg) {
                Ok(v) => cr.within("dissipative stable variance", v, 0.3, 0.05),
                Err(e) => cr.error("dissipative", e),
            }
        }
        Err(e) => cr.error("dissipative chain", e),
    }

    for (temperature, label) in [(0.1, "100 mK"), (1.0, "1 K")] {
        let device = PhysicalParams { temperature, ..PhysicalParams::parallel() };
        let result = scheme_rates(&device)
            .map(|rates| SchemeConfig::from_rates(SchemeKind::Parallel, &rates))
            .and_then(|cfg| parallel_minimum_variance(&cfg));
        match result {
            Ok((tau, v)) if temperature < 0.5 => {
                cr.within(&format!("parallel minimum at {label} (tau* = {tau:.3})"), v, 0.66, 0.10)
            }
            Ok((tau, v)) => cr.check(v >= 2.0, format!("parallel minimum at {label} = {v:.4} at tau* = {tau:.3} (>= 2)")),
            Err(e) => cr.error(&format!("parallel at {label}"), e),
        }
    }

    let improved = scheme_rates(&PhysicalParams::cascaded_improved())
        .map(|rates| SchemeConfig::from_rates(SchemeKind::Cascaded, &rates))
        .and_then(|cfg| {
            let grid = linspace(1.6, 8.0, 129)?;
            scan("tau2", &grid, |tau2| {
                let mut c = cfg.clone();
                c.tau2 = tau2;
                cascaded_final_variance(&c)
            })
        });
    match improved {
        Ok(res) => cr.within(
            &format!("improved cascaded minimum (tau2* = {:.3})", res.optimum.0),
            res.optimum.1,
            0.77,
            0.10,
        ),
        Err(e) => cr.error("improved cascaded", e),
    }
    cr
}

fn random_stable_config() -> impl Strategy<Value = SchemeConfig> {
    (0usize..3, 0.0..0.95f64, 0.0..0.5f64, 0.0..0.2f64, 0.0..0.2f64, 0.0..1.0f64, 0.0..1.0f64).prop_map(
        |(kind, r, k0, k1, k2, n1, n2)| {
            let kind = SchemeKind::ALL[kind];
            let k0 = if kind == SchemeKind::Dissipative { 2.0 + 10.0 * k0 } else { k0 };
            SchemeConfig::new(kind, r).with_decays(k0, k1, k2).with_occupations([0.0, n1, n2])
        },
    )
}

fn scheme_dynamics(cfg: &SchemeConfig) -> cvsim::Result<cvsim::LinearDynamics> {
    match cfg.kind {
        SchemeKind::Parallel => parallel_dynamics(cfg),
        SchemeKind::Dissipative => dissipative_dynamics(cfg),
        SchemeKind::Cascaded => Ok(cascaded_schedule(cfg)?.segments()[1].0.clone()),
    }
}

fn outcome<T: std::fmt::Debug>(result: &Result<(), proptest::test_runner::TestError<T>>) -> String {
    match result {
        Ok(()) => "64 cases".into(),
        Err(e) => e.to_string(),
    }
}

fn criterion_properties() -> Criterion {
    let mut cr = Criterion::new();
    let runner = || {
        TestRunner::new_with_rng(
            Config { cases: 64, failure_persistence: None, ..Config::default() },
            proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
        )
    };

    let symplectic = runner().run(&(random_stable_config(), 0.0..8.0f64), |(cfg, tau)| {
        let lossless = cfg.clone().with_decays(0.0, 0.0, 0.0);
        let d = scheme_dynamics(&lossless).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let p = propagator(&d, tau).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let omega = symplectic_form(d.num_modes());
        let defect = (&p * &omega * p.transpose() - &omega).amax();
        prop_assert!(defect < 1e-9, "symplectic defect {defect:.2e}");
        Ok(())
    });
    cr.check(symplectic.is_ok(), format!("symplectic preservation (lossless): {}", outcome(&symplectic)));

    let physical = runner().run(&(random_stable_config(), 0.0..8.0f64), |(cfg, tau)| {
        let d = scheme_dynamics(&cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let s0 = cfg.initial_state().map_err(|e| TestCaseError::fail(e.to_string()))?;
        let exact = Transition::over(&d, tau)
            .and_then(|t| t.apply(&s0))
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let integrated = evolve(&d, &s0, tau, 1e-9).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(exact.uncertainty_min_eigenvalue() >= -1e-9);
        prop_assert!(integrated.uncertainty_min_eigenvalue() >= -1e-9);
        Ok(())
    });
    cr.check(physical.is_ok(), format!("physicality after every evolution: {}", outcome(&physical)));

    let residual = runner().run(&random_stable_config(), |cfg| {
        let k0 = if cfg.kind == SchemeKind::Dissipative { cfg.k0 } else { cfg.k0 + 0.05 };
        let (k1, k2) = (cfg.k1 + 0.05, cfg.k2 + 0.05);
        let cfg = cfg.with_decays(k0, k1, k2);
        let d = scheme_dynamics(&cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
        match steady_state(&d) {
            Ok(s) => {
                let res = (d.drift() * s.covariance() + s.covariance() * d.drift().transpose() + d.diffusion()).amax();
                prop_assert!(res < 1e-10 * d.diffusion().amax().max(1.0), "residual {res:.2e}");
            }
            Err(cvsim::Error::Unstable { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
        Ok(())
    });
    cr.check(residual.is_ok(), format!("steady-state residual < 1e-10: {}", outcome(&residual)));
    let lyap = solve_lyapunov(&(DMatrix::identity(2, 2) * -1.0), &DMatrix::identity(2, 2));
    cr.check(lyap.is_ok(), "Lyapunov solver on a scalar damping test");

    let duan = runner().run(&(0.0..20.0f64, 0.0..20.0f64), |(n1, n2)| {
        let s = GaussianState::thermal(&[n1, n2]).unwrap();
        let v = epr_variance(&s, EprPair::new(0, 1).unwrap()).unwrap();
        prop_assert!(!duan_verdict(v).unwrap());
        Ok(())
    });
    cr.check(duan.is_ok(), format!("Duan verdict never positive on product thermal states: {}", outcome(&duan)));

    let deterministic = [ScenarioName::Fig3b, ScenarioName::Fig6, ScenarioName::Fig7].iter().all(|&name| {
        let once = ScenarioSpec::builtin(name).and_then(|s| run_scenario(&s)).map(|t| t.render());
        let twice = ScenarioSpec::builtin(name).and_then(|s| run_scenario(&s)).map(|t| t.render());
        matches!((once, twice), (Ok(a), Ok(b)) if a == b)
    });
    cr.check(deterministic, "CSV output byte-identical across runs (fig3b, fig6, fig7)");
    cr
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Criterion); 7] = [
        ("parameter chain", criterion_parameter_chain),
        ("closed-form oracle equivalence", criterion_closed_forms),
        ("ideal endpoint variances", criterion_endpoints),
        ("dissipative steady state", criterion_dissipative_steady),
        ("figure reproduction", criterion_figures),
        ("headline variances", criterion_headlines),
        ("property suites", criterion_properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let cr = run();
        let status = if cr.passed() { "PASS" } else { "FAIL" };
        println!("{status} [{}] {name} ({:.2} s)", i + 1, start.elapsed().as_secs_f64());
        for (ok, detail) in &cr.checks {
            println!("    {} {detail}", if *ok { "ok  " } else { "FAIL" });
        }
        if !cr.passed() {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
