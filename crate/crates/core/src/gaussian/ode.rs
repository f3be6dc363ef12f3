//! Dormand–Prince 5(4) embedded Runge–Kutta integrator with adaptive step size.

use crate::error::{Error, Result};

/// Step-size controls for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: u64,
}

impl OdeOptions {
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-9,
            max_steps: 10_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// error coefficients: fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `dy/dt = f(t, y)` from `t0` to `t1`, overwriting `y`.
///
/// `project` is applied to every accepted step (e.g. to symmetrize a
/// flattened covariance). Returns the number of accepted steps.
pub fn integrate<F, P>(
    mut rhs: F,
    mut project: P,
    t0: f64,
    t1: f64,
    y: &mut [f64],
    opts: &OdeOptions,
) -> Result<u64>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    P: FnMut(&mut [f64]),
{
    if !(t1 >= t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidInput(format!("invalid integration interval [{t0}, {t1}]")));
    }
    if !(opts.rtol > 0.0) || !(opts.atol > 0.0) {
        return Err(Error::InvalidInput("tolerances must be positive".into()));
    }
    if t1 == t0 {
        return Ok(0);
    }
    let n = y.len();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    let mut t = t0;
    rhs(t, y, &mut k[0]);
    let mut h = initial_step(&mut rhs, t0, y, &k[0], t1 - t0, opts);
    let mut accepted = 0u64;
    let mut attempts = 0u64;
    let h_floor = 16.0 * f64::EPSILON * t1.abs().max(t0.abs()).max(1.0);

    while t < t1 {
        attempts += 1;
        if attempts > opts.max_steps {
            return Err(Error::Numerical(format!(
                "step budget of {} exhausted at t = {t}",
                opts.max_steps
            )));
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }

        combine(&mut stage, y, h, &[(A21, &k[0])]);
        rhs(t + C2 * h, &stage, &mut k[1]);
        combine(&mut stage, y, h, &[(A31, &k[0]), (A32, &k[1])]);
        rhs(t + C3 * h, &stage, &mut k[2]);
        combine(&mut stage, y, h, &[(A41, &k[0]), (A42, &k[1]), (A43, &k[2])]);
        rhs(t + C4 * h, &stage, &mut k[3]);
        combine(&mut stage, y, h, &[(A51, &k[0]), (A52, &k[1]), (A53, &k[2]), (A54, &k[3])]);
        rhs(t + C5 * h, &stage, &mut k[4]);
        combine(
            &mut stage,
            y,
            h,
            &[(A61, &k[0]), (A62, &k[1]), (A63, &k[2]), (A64, &k[3]), (A65, &k[4])],
        );
        rhs(t + h, &stage, &mut k[5]);
        combine(
            &mut y_new,
            y,
            h,
            &[(A71, &k[0]), (A73, &k[2]), (A74, &k[3]), (A75, &k[4]), (A76, &k[5])],
        );
        rhs(t + h, &y_new, &mut k[6]);

        let mut err_sq = 0.0;
        for i in 0..n {
            let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale).powi(2);
        }
        let err = (err_sq / n.max(1) as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::Numerical(format!("non-finite error estimate at t = {t}")));
        }

        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            project(&mut y_new);
            y.copy_from_slice(&y_new);
            // projection may move y, so the last stage cannot be reused
            rhs(t, y, &mut k[0]);
            accepted += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= if err <= 1.0 { factor } else { factor.min(1.0) };
        if h < h_floor && t < t1 {
            return Err(Error::Numerical(format!("step size underflow (h = {h:.3e}) at t = {t}")));
        }
    }
    Ok(accepted)
}

fn combine(out: &mut [f64], y: &[f64], h: f64, terms: &[(f64, &Vec<f64>)]) {
    for i in 0..out.len() {
        let mut acc = 0.0;
        for (a, k) in terms {
            acc += a * k[i];
        }
        out[i] = y[i] + h * acc;
    }
}

// Starting step heuristic from Hairer, Norsett & Wanner (Solving ODEs I, II.4).
fn initial_step<F>(rhs: &mut F, t0: f64, y0: &[f64], f0: &[f64], span: f64, opts: &OdeOptions) -> f64
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y0.len().max(1) as f64;
    let scale: Vec<f64> = y0.iter().map(|v| opts.atol + opts.rtol * v.abs()).collect();
    let norm = |v: &[f64]| (v.iter().zip(&scale).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n).sqrt();
    let d0 = norm(y0);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + h0 * f).collect();
    let mut f1 = vec![0.0; y0.len()];
    rhs(t0 + h0, &y1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}
