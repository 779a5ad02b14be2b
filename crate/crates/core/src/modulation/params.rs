//! Modulation parameters, regime configuration and the admissibility flags.

use serde::Serialize;

use crate::error::{Error, Result};

/// The modulation state of a two-bubble configuration: scales `λ_j`, speeds
/// `β_j`, centers `x_j` and phases `γ_j`, together with the phase shift
/// `Γ = γ₂ − γ₁` and the renormalized distance `R = (x₂ − x₁)/(λ₁(1−β₁))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// `Γ`, carried alongside the phases.
    pub gamma_shift: f64,
    /// `R`, carried alongside the centers.
    pub r: f64,
    pub x1: f64,
    pub x2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl ModParams {
    /// Builds a state from its primitive variables, deriving `Γ` and `R`.
    pub fn from_primitives(x: [f64; 2], gamma: [f64; 2], lambda: [f64; 2], beta: [f64; 2]) -> Self {
        let mut p = Self {
            lambda1: lambda[0],
            lambda2: lambda[1],
            beta1: beta[0],
            beta2: beta[1],
            gamma_shift: 0.0,
            r: 0.0,
            x1: x[0],
            x2: x[1],
            gamma1: gamma[0],
            gamma2: gamma[1],
        };
        p.gamma_shift = p.derived_gamma_shift();
        p.r = p.derived_r();
        p
    }

    /// `μ = λ₂/λ₁`.
    pub fn mu(&self) -> f64 {
        self.lambda2 / self.lambda1
    }

    /// `b = (1−β₂)/(1−β₁)`.
    pub fn b(&self) -> f64 {
        (1.0 - self.beta2) / (1.0 - self.beta1)
    }

    pub fn derived_gamma_shift(&self) -> f64 {
        self.gamma2 - self.gamma1
    }

    pub fn derived_r(&self) -> f64 {
        (self.x2 - self.x1) / (self.lambda1 * (1.0 - self.beta1))
    }

    /// Largest discrepancy between the carried and derived `(Γ, R)`, the
    /// latter measured relative to `max(1, |R|)`.
    pub fn consistency_error(&self) -> f64 {
        let dg = (self.gamma_shift - self.derived_gamma_shift()).abs();
        let dr = (self.r - self.derived_r()).abs() / self.r.abs().max(1.0);
        dg.max(dr)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.lambda1,
            self.lambda2,
            self.beta1,
            self.beta2,
            self.gamma_shift,
            self.r,
            self.x1,
            self.x2,
            self.gamma1,
            self.gamma2,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("modulation parameters must be finite"));
        }
        if !(self.lambda1 > 0.0 && self.lambda2 > 0.0) {
            return Err(Error::invalid("scales must be positive"));
        }
        if !(self.beta1 < 1.0 && self.beta2 < 1.0) {
            return Err(Error::invalid("speeds must be below 1"));
        }
        Ok(())
    }

    /// Evaluates the soft-validity conditions of the admissible set.
    pub fn flags(&self, cfg: Option<&RegimeConfig>) -> AdmissibilityFlags {
        let om1 = 1.0 - self.beta1;
        let om2 = 1.0 - self.beta2;
        let b = self.b();
        AdmissibilityFlags {
            r_above_threshold: self.r > R_STAR,
            beta1_in_window: cfg.map(|c| 0.5 * c.eta < om1 && om1 < 2.0 * c.eta),
            beta2_above_floor: om2 >= (-self.r).exp(),
            b_in_window: b > 0.0 && cfg.is_none_or(|c| b < c.delta),
        }
    }
}

/// Operational stand-in for the unquantified distance threshold `R*`.
pub const R_STAR: f64 = 1.0;

/// Soft-validity flags of a modulation state. `beta1_in_window` is `None`
/// when no regime is declared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdmissibilityFlags {
    pub r_above_threshold: bool,
    pub beta1_in_window: Option<bool>,
    pub beta2_above_floor: bool,
    pub b_in_window: bool,
}

impl AdmissibilityFlags {
    pub fn all_ok(&self) -> bool {
        self.r_above_threshold && self.beta1_in_window.unwrap_or(true) && self.beta2_above_floor && self.b_in_window
    }
}

/// The regime parameters `η`, `δ` with the times `T_in = η^{−2δ}` and
/// `T⁻ = δ/η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeConfig {
    pub eta: f64,
    pub delta: f64,
}

/// Upper ends of the parameter ranges accepted without `force`.
pub const ETA_MAX: f64 = 0.2;
pub const DELTA_MAX: f64 = 0.3;

impl RegimeConfig {
    /// Validated constructor: `0 < η ≤ 0.2`, `0 < δ ≤ 0.3`, `T_in < T⁻`.
    pub fn new(eta: f64, delta: f64) -> Result<Self> {
        Self::with_force(eta, delta, false)
    }

    /// Like [`RegimeConfig::new`]; with `force` the range bounds only produce
    /// a warning (positivity and `T_in < T⁻` are always required).
    pub fn with_force(eta: f64, delta: f64, force: bool) -> Result<Self> {
        if !(eta > 0.0 && delta > 0.0 && eta.is_finite() && delta.is_finite()) {
            return Err(Error::invalid("eta and delta must be positive"));
        }
        let cfg = Self { eta, delta };
        if eta > ETA_MAX || delta > DELTA_MAX {
            if force {
                log::warn!("eta = {eta}, delta = {delta} lie outside the small-parameter regime");
            } else {
                return Err(Error::invalid(format!(
                    "eta = {eta} (max {ETA_MAX}) and delta = {delta} (max {DELTA_MAX}) out of range; use force to override"
                )));
            }
        }
        if cfg.t_in() >= cfg.t_minus() {
            return Err(Error::invalid(format!(
                "T_in = {} must be smaller than T- = {}",
                cfg.t_in(),
                cfg.t_minus()
            )));
        }
        Ok(cfg)
    }

    pub fn t_in(&self) -> f64 {
        self.eta.powf(-2.0 * self.delta)
    }

    pub fn t_minus(&self) -> f64 {
        self.delta / self.eta
    }
}

/// The state at `t = T⁻`: `λ₁ = λ₂ = 1`, `γ₁ = γ₂ = 0`, `1−β₁ = η`,
/// `1−β₂ = η/(T⁻)²`, `x₁ = 0`, `x₂ = ηT⁻ = δ` (so `R = T⁻`).
pub fn initial_data_t_minus(cfg: &RegimeConfig) -> ModParams {
    let tm = cfg.t_minus();
    ModParams::from_primitives(
        [0.0, cfg.eta * tm],
        [0.0, 0.0],
        [1.0, 1.0],
        [1.0 - cfg.eta, 1.0 - cfg.eta / (tm * tm)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_regime_times() {
        let c = RegimeConfig::new(0.01, 0.1).unwrap();
        assert!((c.t_minus() - 10.0).abs() < 1e-12);
        assert!((c.t_in() - 0.01f64.powf(-0.2)).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_regime_needs_force() {
        assert!(RegimeConfig::new(0.001, 0.35).unwrap_err().is_validation());
        assert!(RegimeConfig::with_force(0.001, 0.35, true).is_ok());
        // T_in < T⁻ fails here regardless of force.
        assert!(RegimeConfig::with_force(0.5, 0.01, true).is_err());
    }

    #[test]
    fn initial_state_matches_definition() {
        let c = RegimeConfig::new(0.01, 0.1).unwrap();
        let p = initial_data_t_minus(&c);
        assert!((1.0 - p.beta2 - 1e-4).abs() < 1e-15);
        assert!((p.x2 - 0.1).abs() < 1e-15);
        assert_eq!(p.gamma_shift, 0.0);
        assert!((p.b() * 100.0 - 1.0).abs() < 1e-9);
        assert!((p.r - 10.0).abs() < 1e-9);
        assert!(p.consistency_error() < 1e-15);
        assert!(p.flags(Some(&c)).all_ok());
    }
}
