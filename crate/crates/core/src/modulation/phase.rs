//! The linear phase subsystem of the turbulent window,
//! `Γ_t = v`, `v_t = 2v/t − 2Γ/t² + η/t`, with terminal data
//! `Γ(T⁻) = v(T⁻) = 0`.
//!
//! The homogeneous system has the fundamental matrix
//! `Φ(t) = [[t, t²], [1, 2t]]` with Wronskian `t²`, so variation of
//! parameters gives
//! `(Γ, v)(t) = Φ(t) (I₁(t), −I₂(t))` with `I₁ = ∫_t^{T⁻} η/τ dτ` and
//! `I₂ = ∫_t^{T⁻} η/τ² dτ`.

use crate::error::{Error, Result};
use crate::modulation::params::RegimeConfig;
use crate::ode::{solve, OdeOptions};
use crate::quad::{integrate_real, QuadOptions};

/// `(Γ, v)` at time `t` from the variation-of-parameters integrals,
/// evaluated by adaptive quadrature.
pub fn phase_subsystem_closed_form(cfg: &RegimeConfig, t: f64) -> Result<(f64, f64)> {
    let tm = cfg.t_minus();
    if !(t > 0.0) {
        return Err(Error::invalid("time must be positive"));
    }
    let eta = cfg.eta;
    let opts = QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        ..QuadOptions::default()
    };
    // Both integrals are oriented from t to T⁻.
    let i1 = integrate_real(|s| eta / s, t, tm, opts)?;
    let i2 = integrate_real(|s| eta / (s * s), t, tm, opts)?;
    // Φ(t)·Φ(τ)^{-1}·(0, η/τ) integrated and negated for terminal data.
    let gamma = t * i1 - t * t * i2;
    let v = i1 - 2.0 * t * i2;
    Ok((gamma, v))
}

/// The same solution in elementary functions:
/// `Γ = ηt ln(T⁻/t) − ηt + ηt²/T⁻`, `v = η ln(T⁻/t) − 2η + 2ηt/T⁻`.
pub fn phase_subsystem_elementary(cfg: &RegimeConfig, t: f64) -> (f64, f64) {
    let tm = cfg.t_minus();
    let eta = cfg.eta;
    let lg = (tm / t).ln();
    (
        eta * t * lg - eta * t + eta * t * t / tm,
        eta * lg - 2.0 * eta + 2.0 * eta * t / tm,
    )
}

/// Integrates the phase subsystem from `T⁻` (zero data) to each of `times`
/// (which must be ordered away from `T⁻`) with the adaptive Runge–Kutta pair.
pub fn phase_subsystem_rk(cfg: &RegimeConfig, times: &[f64], tol: f64) -> Result<Vec<(f64, f64)>> {
    let tm = cfg.t_minus();
    let eta = cfg.eta;
    let t_end = times.iter().cloned().fold(tm, f64::min);
    let sol = solve(
        |t, y, dy| {
            dy[0] = y[1];
            dy[1] = 2.0 * y[1] / t - 2.0 * y[0] / (t * t) + eta / t;
        },
        tm,
        &[0.0, 0.0],
        t_end,
        times,
        &OdeOptions::with_tol(tol),
    )?;
    Ok(sol.y.iter().map(|y| (y[0], y[1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_basis() {
        // (t, 1) and (t², 2t) solve the homogeneous system.
        for &t in &[0.5f64, 2.0, 7.0] {
            assert!((2.0 * 1.0 / t - 2.0 * t / (t * t)).abs() < 1e-15);
            assert!((2.0 * (2.0 * t) / t - 2.0 * t * t / (t * t) - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn quadrature_matches_elementary_form() {
        let cfg = RegimeConfig::new(0.01, 0.1).unwrap();
        for &t in &[2.6, 4.0, 9.99, 10.0] {
            let (g, v) = phase_subsystem_closed_form(&cfg, t).unwrap();
            let (ge, ve) = phase_subsystem_elementary(&cfg, t);
            assert!((g - ge).abs() < 1e-14 && (v - ve).abs() < 1e-14);
        }
    }
}
