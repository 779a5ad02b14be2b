//! The conserved quantities of the two-soliton Szegő dynamics.
//!
//! With `X = x₁ − x₂`, `K = (κ₁+κ₂)/2` and `w = X − iK`:
//!
//! * `K` — the mean width;
//! * `C = κ₁|α₁|² + κ₂|α₂|² + 2κ₁κ₂ Im(α₁ᾱ₂/w)`, equal to `‖u‖²_{L²}/2π`;
//! * `M = |α₁|² + |α₂|² − 2κ₁κ₂ Re(α₁ᾱ₂/w²)`, the trace invariant;
//! * `D = |α₁|²|α₂|²(1 − κ₁κ₂/|w|²)²`, the determinant invariant;
//! * `H = ‖u‖⁴_{L⁴}/2π`, the Hamiltonian,
//!
//! which satisfy the algebraic identity `4KD = 2MC − H`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::quad::{integrate, integrate_from_minus_infinity, integrate_to_infinity, QuadOptions};
use crate::spectral::Grid1D;
use crate::szego::state::SzegoTwoSolitonState;

/// The invariants of a two-soliton state; `h` is the closed-form expansion
/// and `h_quadrature` the adaptive quadrature of `(2π)^{-1}∫|u|⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SzegoConserved {
    pub k: f64,
    pub c: f64,
    pub m: f64,
    pub d: f64,
    pub h: f64,
    pub h_quadrature: f64,
}

impl SzegoConserved {
    /// `|4KD − (2MC − H)|` with the closed-form `H`.
    pub fn identity_residual(&self) -> f64 {
        (4.0 * self.k * self.d - (2.0 * self.m * self.c - self.h)).abs()
    }

    /// `M² − 4D`, which vanishes exactly on resonant states.
    pub fn resonance_defect(&self) -> f64 {
        self.m * self.m - 4.0 * self.d
    }

    /// Largest relative change of `(K, C, M, D)` with respect to `reference`
    /// (`D` is measured relative to `max(D_ref, M_ref²)` since it may vanish).
    pub fn max_relative_drift(&self, reference: &SzegoConserved) -> f64 {
        let rel = |a: f64, b: f64, scale: f64| (a - b).abs() / scale.max(f64::MIN_POSITIVE);
        rel(self.k, reference.k, reference.k.abs())
            .max(rel(self.c, reference.c, reference.c.abs()))
            .max(rel(self.m, reference.m, reference.m.abs()))
            .max(rel(self.d, reference.d, reference.d.max(reference.m * reference.m)))
    }
}

/// `(K, C, M, D, H)` from the closed forms; `h_quadrature` is left as NaN.
pub fn conserved_closed_form(s: &SzegoTwoSolitonState) -> SzegoConserved {
    let i = Complex64::i();
    let (a1, a2) = (s.alpha1, s.alpha2);
    let (k1, k2) = (s.kappa1, s.kappa2);
    let x = s.x1 - s.x2;
    let k = 0.5 * (k1 + k2);
    let w = Complex64::new(x, -k);
    let n1 = a1.norm_sqr();
    let n2 = a2.norm_sqr();
    let cross = a1 * a2.conj();
    let c = k1 * n1 + k2 * n2 + 2.0 * k1 * k2 * (cross / w).im;
    let m = n1 + n2 - 2.0 * k1 * k2 * (cross / (w * w)).re;
    let q = 1.0 - k1 * k2 / w.norm_sqr();
    let d = n1 * n2 * q * q;
    let h = 2.0 * k1 * n1 * n1
        + 2.0 * k2 * n2 * n2
        + n1 * n2 * 8.0 * k * k1 * k2 / w.norm_sqr()
        + 4.0 * (cross * cross * i * k1 * k1 * k2 * k2 / (w * w * w)).re
        + 4.0 * (a1 * a1 * a1.conj() * a2.conj() * (-i * k1 * k2 / w - k1 * k1 * k2 / (w * w))).re
        + 4.0 * (a1 * a2 * a2.conj() * a2.conj() * (-i * k1 * k2 / w - k1 * k2 * k2 / (w * w))).re;
    SzegoConserved {
        k,
        c,
        m,
        d,
        h,
        h_quadrature: f64::NAN,
    }
}

/// All invariants, including the quadrature value of `H`.
pub fn conserved_quantities(s: &SzegoTwoSolitonState) -> Result<SzegoConserved> {
    s.validate()?;
    let mut c = conserved_closed_form(s);
    c.h_quadrature = quartic_integral(s)? / (2.0 * std::f64::consts::PI);
    Ok(c)
}

/// `∫|u|⁴` over the line by adaptive quadrature, split at the two centers.
fn quartic_integral(s: &SzegoTwoSolitonState) -> Result<f64> {
    let f = |x: f64| Complex64::new(s.eval(x).norm_sqr().powi(2), 0.0);
    let opts = QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-12,
        ..QuadOptions::default()
    };
    let (lo, hi) = (s.x1.min(s.x2), s.x1.max(s.x2));
    let width = s.kappa1.min(s.kappa2);
    let left = integrate_from_minus_infinity(f, lo, width, opts)?.value.re;
    let middle = integrate(f, lo, hi, opts)?.value.re;
    let right = integrate_to_infinity(f, hi, width, opts)?.value.re;
    Ok(left + middle + right)
}

/// `(2π)^{-1} Σ|u|⁴ dx` over the samples of the ansatz on `grid`.
pub fn hamiltonian_on_grid(s: &SzegoTwoSolitonState, grid: &Grid1D) -> f64 {
    let dx = grid.dx();
    grid.xs().iter().map(|&x| s.eval(x).norm_sqr().powi(2)).sum::<f64>() * dx / (2.0 * std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_holds_on_random_states() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s = SzegoTwoSolitonState {
                alpha1: Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)),
                alpha2: Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)),
                kappa1: rng.gen_range(0.1..2.0),
                kappa2: rng.gen_range(0.1..2.0),
                x1: rng.gen_range(-5.0..5.0),
                x2: rng.gen_range(-5.0..5.0),
            };
            let c = conserved_closed_form(&s);
            assert!(c.identity_residual() < 1e-10, "residual {}", c.identity_residual());
            assert!(c.d >= 0.0);
        }
    }

    #[test]
    fn hamiltonian_expansion_matches_quadrature() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let s = SzegoTwoSolitonState {
                alpha1: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                alpha2: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                kappa1: rng.gen_range(0.3..2.0),
                kappa2: rng.gen_range(0.3..2.0),
                x1: rng.gen_range(-3.0..3.0),
                x2: rng.gen_range(-3.0..3.0),
            };
            let c = conserved_quantities(&s).unwrap();
            assert!(
                (c.h - c.h_quadrature).abs() < 1e-9 * c.h.abs().max(1e-3),
                "{} vs {}",
                c.h,
                c.h_quadrature
            );
            let g = Grid1D::new(1 << 15, 400.0).unwrap();
            let hg = hamiltonian_on_grid(&s, &g);
            assert!((c.h - hg).abs() < 1e-6 * c.h.abs().max(1e-3), "{} vs grid {}", c.h, hg);
        }
    }

    #[test]
    fn single_soliton_invariants() {
        let s = SzegoTwoSolitonState {
            alpha1: Complex64::new(0.6, -0.8) * 1.3,
            alpha2: Complex64::new(0.0, 0.0),
            kappa1: 0.7,
            kappa2: 1.1,
            x1: 2.0,
            x2: -1.0,
        };
        let c = conserved_closed_form(&s);
        let n = 1.3f64 * 1.3;
        assert_eq!(c.d, 0.0);
        assert!((c.c - n * 0.7).abs() < 1e-14);
        assert!((c.m - n).abs() < 1e-14);
    }
}
