//! Right-hand sides `(B₁, B₂, M₁, M₂)` of the modulation equations: the sharp
//! main terms built from the profiles, and the reduced closed-form laws of
//! the turbulent window.

use num_complex::Complex64;
use serde::Serialize;

use crate::modulation::params::{AdmissibilityFlags, ModParams, RegimeConfig};
use crate::profiles::{eval_q_plus, ConstantDerivatives, FamilyMember, ProfileConstants, ProfileQBeta};
use crate::special::{eval_f, eval_f_prime};

/// Source of profile values and constants for the sharp right-hand side.
pub trait ProfileSource: Send + Sync {
    fn constants(&self, beta: f64) -> ProfileConstants;
    /// `Λ̃N_β` and `Λ̃P_β`.
    fn derivatives(&self, beta: f64) -> ConstantDerivatives;
    /// `Q_β(y)` on the line.
    fn eval(&self, beta: f64, y: f64) -> Complex64;
    /// `∂_yQ_β(y)` on the line.
    fn eval_derivative(&self, beta: f64, y: f64) -> Complex64;
}

/// Profile-free surrogate: the `β → 1` limits `N = P = c = 1`, `Λ̃N = Λ̃P = 0`,
/// and `Q_β(y) ≈ Q⁺(y)F(−(1−β)y/(1+β))`, which reduces to `Q⁺` near the
/// origin and to the far-field law `F(−ay)/y` for large `|y|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AsymptoticProfiles;

impl ProfileSource for AsymptoticProfiles {
    fn constants(&self, _beta: f64) -> ProfileConstants {
        ProfileConstants::limit()
    }

    fn derivatives(&self, _beta: f64) -> ConstantDerivatives {
        ConstantDerivatives { lt_n: 0.0, lt_p: 0.0 }
    }

    fn eval(&self, beta: f64, y: f64) -> Complex64 {
        let a = (1.0 - beta) / (1.0 + beta);
        eval_q_plus(y) * eval_f(-a * y)
    }

    fn eval_derivative(&self, beta: f64, y: f64) -> Complex64 {
        let a = (1.0 - beta) / (1.0 + beta);
        let q = eval_q_plus(y);
        -q * q * eval_f(-a * y) - q * a * eval_f_prime(-a * y)
    }
}

/// Solved profiles keyed by `β`. A query is answered by the cached profile
/// whose `ln(1−β)` is within `match_tol` of the requested one; other speeds
/// fall back to [`AsymptoticProfiles`]. Profiles inserted without their
/// `β`-neighbors carry no `Λ̃`-derivatives; those queries fall back too.
#[derive(Debug, Clone, Default)]
pub struct SolvedProfiles {
    entries: Vec<(ProfileQBeta, Option<ConstantDerivatives>)>,
    pub match_tol: f64,
}

impl SolvedProfiles {
    pub fn new(match_tol: f64) -> Self {
        Self {
            entries: Vec::new(),
            match_tol,
        }
    }

    pub fn insert(&mut self, member: &FamilyMember) {
        self.entries.push((member.center.clone(), Some(member.derivatives())));
    }

    /// Adds a single profile (enough for field evaluation and constants).
    pub fn insert_profile(&mut self, profile: ProfileQBeta) {
        self.entries.push((profile, None));
    }

    pub fn from_family(members: &[FamilyMember], match_tol: f64) -> Self {
        let mut s = Self::new(match_tol);
        for m in members {
            s.insert(m);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn lookup(&self, beta: f64) -> Option<&(ProfileQBeta, Option<ConstantDerivatives>)> {
        let key = (1.0 - beta).ln();
        self.entries
            .iter()
            .map(|e| (((1.0 - e.0.beta).ln() - key).abs(), e))
            .filter(|(d, _)| *d <= self.match_tol)
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, e)| e)
    }
}

impl ProfileSource for SolvedProfiles {
    fn constants(&self, beta: f64) -> ProfileConstants {
        self.lookup(beta)
            .map(|e| e.0.constants)
            .unwrap_or_else(|| AsymptoticProfiles.constants(beta))
    }

    fn derivatives(&self, beta: f64) -> ConstantDerivatives {
        self.lookup(beta)
            .and_then(|e| e.1)
            .unwrap_or_else(|| AsymptoticProfiles.derivatives(beta))
    }

    fn eval(&self, beta: f64, y: f64) -> Complex64 {
        match self.lookup(beta) {
            Some(e) => e.0.eval_line(y),
            None => AsymptoticProfiles.eval(beta, y),
        }
    }

    fn eval_derivative(&self, beta: f64, y: f64) -> Complex64 {
        match self.lookup(beta) {
            Some(e) => e.0.eval_line_derivative(y),
            None => AsymptoticProfiles.eval_derivative(beta, y),
        }
    }
}

/// The four modulation right-hand sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhsValues {
    pub b1: f64,
    pub b2: f64,
    pub m1: f64,
    pub m2: f64,
}

/// Sharp right-hand side with its admissibility flags (evaluation is
/// returned even for states outside the admissible set).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SharpRhs {
    pub values: RhsValues,
    pub flags: AdmissibilityFlags,
}

/// Main terms of the sharp modulation equations:
///
/// * `B₁ = 2Re(Q_{β₂}(−R/(bμ)) conj(c_{β₁}) e^{iΓ}) / (N_{β₁} − Λ̃N_{β₁})`
/// * `B₂ = 2Re(Q_{β₁}(R) conj(c_{β₂}) e^{−iΓ}) / (N_{β₂} − Λ̃N_{β₂})`
/// * `M₁ = (Λ̃P_{β₁}/P_{β₁}) B₁`
/// * `M₂ = (Λ̃P_{β₂}/P_{β₂}) B₂ − 2(1−μ)Re(e^{iΓ}conj(Q_{β₁}(R)))
///   − 2Im(e^{iΓ}conj(∂_yQ_{β₁}(R)))`
pub fn eval_sharp_rhs(p: &ModParams, profiles: &dyn ProfileSource, cfg: Option<&RegimeConfig>) -> SharpRhs {
    let mu = p.mu();
    let b = p.b();
    let r = p.r;
    let phase = Complex64::from_polar(1.0, p.gamma_shift);
    let k1 = profiles.constants(p.beta1);
    let k2 = profiles.constants(p.beta2);
    let d1 = profiles.derivatives(p.beta1);
    let d2 = profiles.derivatives(p.beta2);
    let q2_far = profiles.eval(p.beta2, -r / (b * mu));
    let q1_r = profiles.eval(p.beta1, r);
    let dq1_r = profiles.eval_derivative(p.beta1, r);
    let b1 = 2.0 * (q2_far * k1.c.conj() * phase).re / (k1.n - d1.lt_n);
    let b2 = 2.0 * (q1_r * k2.c.conj() * phase.conj()).re / (k2.n - d2.lt_n);
    let m1 = d1.lt_p / k1.p * b1;
    let m2 = d2.lt_p / k2.p * b2 - 2.0 * (1.0 - mu) * (phase * q1_r.conj()).re - 2.0 * (phase * dq1_r.conj()).im;
    SharpRhs {
        values: RhsValues { b1, b2, m1, m2 },
        flags: p.flags(cfg),
    }
}

/// Reduced laws of the turbulent window, with `t` standing in for `R`:
/// `B₁ = 0`, `B₂ = 2cosΓ/t`, `M₁ = 0`, `M₂ = −2(1−μ)/t + 2Γ/t² − η/t`.
pub fn eval_turbulent_rhs(p: &ModParams, cfg: &RegimeConfig, t: f64) -> RhsValues {
    let mu = p.mu();
    let g = p.gamma_shift;
    RhsValues {
        b1: 0.0,
        b2: 2.0 * g.cos() / t,
        m1: 0.0,
        m2: -2.0 * (1.0 - mu) / t + 2.0 * g / (t * t) - cfg.eta / t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(r: f64, gamma: f64) -> ModParams {
        let mut p = ModParams::from_primitives([0.0, r * 1e-4], [0.0, gamma], [1.0, 1.0], [1.0 - 1e-4, 1.0 - 1e-8]);
        p.r = r;
        p
    }

    #[test]
    fn sharp_b2_is_two_over_r_in_the_limit() {
        let p = state(20.0, 0.0);
        let v = eval_sharp_rhs(&p, &AsymptoticProfiles, None).values;
        assert!((v.b2 * 20.0 / 2.0 - 1.0).abs() < 5e-3, "{}", v.b2);
    }

    #[test]
    fn sharp_b2_vanishes_at_quarter_phase() {
        let p = state(20.0, std::f64::consts::FRAC_PI_2);
        let v = eval_sharp_rhs(&p, &AsymptoticProfiles, None).values;
        // Only the O(1/R²) imaginary part of the profile survives.
        assert!(v.b2.abs() < 0.05 * 2.0 / 20.0, "{}", v.b2);
    }

    #[test]
    fn turbulent_laws() {
        let cfg = RegimeConfig::new(0.01, 0.1).unwrap();
        let p = state(5.0, 0.0);
        let v = eval_turbulent_rhs(&p, &cfg, 5.0);
        assert!((v.b2 - 0.4).abs() < 1e-15);
        assert!((v.m2 + 0.01 / 5.0).abs() < 1e-15);
        assert_eq!((v.b1, v.m1), (0.0, 0.0));
    }

    #[test]
    fn asymptotic_derivative_matches_finite_difference() {
        let beta = 0.99;
        for &y in &[-30.0, -2.0, 0.3, 4.0, 70.0] {
            let h = 1e-5;
            let fd = (AsymptoticProfiles.eval(beta, y + h) - AsymptoticProfiles.eval(beta, y - h)) / (2.0 * h);
            let d = AsymptoticProfiles.eval_derivative(beta, y);
            assert!((fd - d).norm() < 1e-7 * (1.0 + d.norm()), "y = {y}");
        }
    }
}
