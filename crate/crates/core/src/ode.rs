//! Embedded Runge–Kutta 5(4) integrator (Dormand–Prince) with adaptive step
//! control, exact landing on requested output times and forward or backward
//! integration.

use crate::error::{Error, Result};

/// Step-control settings. The local error estimate is measured in the mixed
/// norm `sqrt(mean((e_i / (atol + rtol·|y_i|))²))` and steps are accepted when
/// it is at most one.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step magnitude; chosen automatically when `None`.
    pub h_init: Option<f64>,
    /// Smallest step magnitude allowed relative to `max(1, |t|)`.
    pub h_min_rel: f64,
    /// Largest step magnitude (absolute).
    pub h_max: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    /// Same relative and absolute tolerance.
    pub fn with_tol(tol: f64) -> Self {
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
            rtol: 1e-10,
            atol: 1e-10,
            h_init: None,
            h_min_rel: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 5_000_000,
        }
    }
}

/// Integration counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// Samples of a solution at the requested output times.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub stats: OdeStats,
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `y' = f(t, y)` from `t0` to `t1`, returning the state at every
/// time in `outputs` (which must lie between `t0` and `t1` and be ordered in
/// the direction of integration). The callback `on_step` is invoked after
/// every accepted step and may abort the integration by returning an error.
pub fn integrate<F, C>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    t1: f64,
    outputs: &[f64],
    opts: &OdeOptions,
    mut on_step: C,
) -> Result<OdeSolution>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    C: FnMut(f64, &[f64]) -> Result<()>,
{
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    for w in outputs.windows(2) {
        if (w[1] - w[0]) * dir < 0.0 {
            return Err(Error::invalid("output times are not ordered along the integration"));
        }
    }
    for &s in outputs {
        if (s - t0) * dir < -1e-12 * t0.abs().max(1.0) || (t1 - s) * dir < -1e-12 * t1.abs().max(1.0) {
            return Err(Error::invalid(format!("output time {s} outside [{t0}, {t1}]")));
        }
    }
    let n = y0.len();
    let mut stats = OdeStats::default();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut sol = OdeSolution {
        t: Vec::with_capacity(outputs.len()),
        y: Vec::with_capacity(outputs.len()),
        stats,
    };
    let mut next_out = 0;
    while next_out < outputs.len() && (outputs[next_out] - t0) * dir <= 0.0 {
        sol.t.push(outputs[next_out]);
        sol.y.push(y.clone());
        next_out += 1;
    }
    if t0 == t1 {
        sol.stats = stats;
        return Ok(sol);
    }

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];

    f(t, &y, &mut k1);
    stats.rhs_evals += 1;

    let scale = |y: &[f64], i: usize, yn: &[f64]| opts.atol + opts.rtol * y[i].abs().max(yn[i].abs());

    let mut h = match opts.h_init {
        Some(h) => h.abs(),
        None => {
            let d0 = (0..n).map(|i| (y[i] / scale(&y, i, &y)).powi(2)).sum::<f64>().sqrt() / (n as f64).sqrt();
            let d1 = (0..n).map(|i| (k1[i] / scale(&y, i, &y)).powi(2)).sum::<f64>().sqrt() / (n as f64).sqrt();
            let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
            h0.min((t1 - t0).abs())
        }
    }
    .min(opts.h_max);

    let mut last_rejected = false;
    loop {
        if (t1 - t) * dir <= 0.0 {
            break;
        }
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::NonConvergence {
                what: format!("ODE integration (step budget exhausted at t = {t})"),
                last: h,
                history: vec![],
            });
        }
        let h_min = opts.h_min_rel * t.abs().max(1.0);
        if h < h_min {
            return Err(Error::StepUnderflow { t, h });
        }
        // Land exactly on the next output time or on t1.
        let mut target = t1;
        if next_out < outputs.len() && (outputs[next_out] - t) * dir < (target - t) * dir {
            target = outputs[next_out];
        }
        let mut hs = h;
        let mut landing = false;
        if hs >= (target - t).abs() {
            hs = (target - t).abs();
            landing = true;
        }
        let hd = hs * dir;

        for i in 0..n {
            tmp[i] = y[i] + hd * A21 * k1[i];
        }
        f(t + C2 * hd, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + hd * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * hd, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + hd * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * hd, &tmp, &mut k4);
        for i in 0..n {
            tmp[i] = y[i] + hd * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * hd, &tmp, &mut k5);
        for i in 0..n {
            tmp[i] = y[i] + hd * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + hd, &tmp, &mut k6);
        for i in 0..n {
            ynew[i] = y[i] + hd * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let t_new = if landing { target } else { t + hd };
        f(t_new, &ynew, &mut k7);
        stats.rhs_evals += 6;

        let mut err = 0.0;
        let mut finite = true;
        for i in 0..n {
            let e = hd * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            if !ynew[i].is_finite() {
                finite = false;
            }
            err += (e / scale(&y, i, &ynew)).powi(2);
        }
        let err = (err / n as f64).sqrt();

        if finite && err <= 1.0 {
            stats.accepted += 1;
            t = t_new;
            std::mem::swap(&mut y, &mut ynew);
            std::mem::swap(&mut k1, &mut k7);
            on_step(t, &y)?;
            while next_out < outputs.len() && (outputs[next_out] - t) * dir <= 0.0 {
                sol.t.push(outputs[next_out]);
                sol.y.push(y.clone());
                next_out += 1;
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            let fac = if last_rejected { fac.min(1.0) } else { fac };
            // Do not let a short landing step shrink the controller's step.
            h = (if landing { h.max(hs) } else { hs } * fac).min(opts.h_max);
            last_rejected = false;
        } else {
            stats.rejected += 1;
            let fac = if finite {
                (0.9 * err.powf(-0.2)).clamp(0.1, 1.0)
            } else {
                0.25
            };
            h = hs * fac;
            last_rejected = true;
        }
    }
    while next_out < outputs.len() {
        sol.t.push(outputs[next_out]);
        sol.y.push(y.clone());
        next_out += 1;
    }
    sol.stats = stats;
    Ok(sol)
}

/// Convenience wrapper without a step callback.
pub fn solve<F>(f: F, t0: f64, y0: &[f64], t1: f64, outputs: &[f64], opts: &OdeOptions) -> Result<OdeSolution>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    integrate(f, t0, y0, t1, outputs, opts, |_, _| Ok(()))
}

/// `m` equally spaced times from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![b];
    }
    (0..m)
        .map(|i| {
            if i + 1 == m {
                b
            } else {
                a + (b - a) * i as f64 / (m - 1) as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let sol = solve(
            |_, y, dy| dy[0] = -y[0],
            0.0,
            &[1.0],
            5.0,
            &[1.0, 5.0],
            &OdeOptions::with_tol(1e-12),
        )
        .unwrap();
        assert!((sol.y[0][0] - (-1.0f64).exp()).abs() < 1e-11);
        assert!((sol.y[1][0] - (-5.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn backward_harmonic_oscillator() {
        let outs = linspace(10.0, 0.0, 11);
        let sol = solve(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            10.0,
            &[10f64.cos(), -10f64.sin()],
            0.0,
            &outs,
            &OdeOptions::with_tol(1e-12),
        )
        .unwrap();
        for (t, y) in sol.t.iter().zip(&sol.y) {
            assert!((y[0] - t.cos()).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn callback_can_abort() {
        let r = integrate(
            |_, _, dy| dy[0] = 1.0,
            0.0,
            &[0.0],
            1.0,
            &[],
            &OdeOptions::default(),
            |t, _| {
                if t > 0.5 {
                    Err(Error::Consistency("stop".into()))
                } else {
                    Ok(())
                }
            },
        );
        assert!(r.is_err());
    }
}
