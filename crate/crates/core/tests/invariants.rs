//! Property-based invariants of the spectral layer and the time steppers.

use hwlab::evolution::{step_halfwave, step_szego};
use hwlab::spectral::{conserved_triple, project_minus, project_plus};
use hwlab::szego::{conserved_closed_form, SzegoTwoSolitonState};
use hwlab::{Grid1D, SpectralField};
use num_complex::Complex64;
use proptest::prelude::*;

fn bump(grid: Grid1D, a: f64, b: f64, c: f64) -> SpectralField {
    SpectralField::from_fn(grid, |x| {
        Complex64::new(a * (-x * x).exp(), b * x * (-(x - c) * (x - c)).exp())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projectors_split_the_field(a in -2.0..2.0f64, b in -2.0..2.0f64, c in -3.0..3.0f64) {
        let g = Grid1D::new(256, 30.0).unwrap();
        let u = bump(g, a, b, c);
        let sum = project_plus(&u).add(&project_minus(&u)).unwrap();
        let err = sum.sub(&u).unwrap().l2_norm();
        prop_assert!(err < 1e-12 * (1.0 + u.l2_norm()));
    }

    /// A plane wave `a e^{ikx}` solves the half-wave equation exactly with
    /// frequency `|k| − |a|²`, and the splitting reproduces it.
    #[test]
    fn halfwave_plane_wave_is_exact(amp in 0.0..2.0f64, k in -8i32..8, dt in 1e-4..1e-2f64) {
        let g = Grid1D::new(64, 2.0 * std::f64::consts::PI).unwrap();
        let kf = k as f64;
        let u = SpectralField::from_fn(g, |x| Complex64::from_polar(amp, kf * x));
        let v = step_halfwave(&u, dt).unwrap();
        let phase = Complex64::from_polar(1.0, -(kf.abs() - amp * amp) * dt);
        for (a, b) in u.values().iter().zip(v.values()) {
            prop_assert!((a * phase - b).norm() < 1e-12);
        }
    }

    /// For a nonnegative plane wave the Szegő flow reduces to the phase
    /// rotation `e^{i|a|²t}`.
    #[test]
    fn szego_plane_wave_rotates(amp in 0.0..1.5f64, k in 0i32..8, dt in 1e-4..1e-2f64) {
        let g = Grid1D::new(64, 2.0 * std::f64::consts::PI).unwrap();
        let kf = k as f64;
        let u = SpectralField::from_fn(g, |x| Complex64::from_polar(amp, kf * x));
        let v = step_szego(&u, dt, false).unwrap();
        let phase = Complex64::from_polar(1.0, -amp * amp * dt);
        for (a, b) in u.values().iter().zip(v.values()) {
            prop_assert!((a * phase - b).norm() < 1e-9 * (1.0 + amp));
        }
    }

    #[test]
    fn halfwave_step_conserves_mass(a in 0.1..2.0f64, b in -1.0..1.0f64, c in -2.0..2.0f64) {
        let g = Grid1D::new(256, 30.0).unwrap();
        let u = bump(g, a, b, c);
        let v = step_halfwave(&u, 1e-2).unwrap();
        let (m0, m1) = (conserved_triple(&u).mass, conserved_triple(&v).mass);
        prop_assert!((m0 - m1).abs() < 1e-12 * m0);
    }

    /// The invariants of the two-soliton system obey `4KD = 2MC − H`.
    #[test]
    fn szego_invariant_identity(
        a1re in -2.0..2.0f64, a1im in -2.0..2.0f64, a2re in -2.0..2.0f64, a2im in -2.0..2.0f64,
        k1 in 0.1..3.0f64, k2 in 0.1..3.0f64, x1 in -5.0..5.0f64, x2 in -5.0..5.0f64,
    ) {
        let s = SzegoTwoSolitonState {
            alpha1: Complex64::new(a1re, a1im),
            alpha2: Complex64::new(a2re, a2im),
            kappa1: k1,
            kappa2: k2,
            x1,
            x2,
        };
        let c = conserved_closed_form(&s);
        let scale = 1.0 + (4.0 * c.k * c.d).abs() + (2.0 * c.m * c.c).abs() + c.h.abs();
        prop_assert!(c.identity_residual() < 1e-12 * scale);
    }
}
