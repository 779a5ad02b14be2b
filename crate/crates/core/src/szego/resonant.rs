//! Reduced variables and the resonant two-soliton dynamics.
//!
//! With `X = x₁ − x₂`, `ν = (κ₁−κ₂)/2`, `ζ₁ = α₁/(X − iK)` and
//! `ζ₂ = α₂/(X + iK)` the relative motion reads
//!
//! * `Ẋ = (X²+K²)[(K−ν)|ζ₂|² − (K+ν)|ζ₁|²]`,
//! * `ν̇ = −2(K²−ν²) Re[ζ₁ζ̄₂(X−iK)]`.
//!
//! On the resonant set `ζ₁ = ζ₂` (equivalently `M² = 4D`) the invariant
//! `M` fixes `|ζ|²(X²+ν²) = M/2`, and the motion closes:
//!
//! * `Ẋ = −Mν(X²+K²)/(X²+ν²)`, `ν̇ = −MX(K²−ν²)/(X²+ν²)`,
//!
//! so that `d(Xν)/dt = −MK²` exactly. The relative phase `Γ`, defined by
//! `e^{iΓ} = α₁/α₂ = (X−iK)/(X+iK)`, obeys `Γ̇ = −2KMν/(X²+ν²)`.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{integrate, linspace, OdeOptions, OdeStats};
use crate::szego::state::{full_rhs_unchecked, SzegoTwoSolitonState};

/// The reduced variables of a two-soliton state, `K` carried as parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedState {
    pub x: f64,
    pub nu: f64,
    pub zeta1: Complex64,
    pub zeta2: Complex64,
    pub k: f64,
}

impl ReducedState {
    pub fn from_full(s: &SzegoTwoSolitonState) -> Self {
        let x = s.x1 - s.x2;
        let k = 0.5 * (s.kappa1 + s.kappa2);
        Self {
            x,
            nu: 0.5 * (s.kappa1 - s.kappa2),
            zeta1: s.alpha1 / Complex64::new(x, -k),
            zeta2: s.alpha2 / Complex64::new(x, k),
            k,
        }
    }

    /// The full state with `x₂ = 0` that maps to these reduced variables.
    pub fn to_full(&self) -> SzegoTwoSolitonState {
        SzegoTwoSolitonState {
            alpha1: self.zeta1 * Complex64::new(self.x, -self.k),
            alpha2: self.zeta2 * Complex64::new(self.x, self.k),
            kappa1: self.k + self.nu,
            kappa2: self.k - self.nu,
            x1: self.x,
            x2: 0.0,
        }
    }

    /// `|ζ₁ − ζ₂|`, which vanishes on the resonant set.
    pub fn resonance_gap(&self) -> f64 {
        (self.zeta1 - self.zeta2).norm()
    }
}

/// `(Ẋ, ν̇)` of the reduced system.
pub fn reduced_rhs(r: &ReducedState) -> Result<(f64, f64)> {
    if !(r.k > 0.0 && r.nu.abs() < r.k) {
        return Err(Error::invalid(format!(
            "reduced state needs |nu| < K (nu = {}, K = {})",
            r.nu, r.k
        )));
    }
    let (x, k, nu) = (r.x, r.k, r.nu);
    let dx = (x * x + k * k) * ((k - nu) * r.zeta2.norm_sqr() - (k + nu) * r.zeta1.norm_sqr());
    let dnu = -2.0 * (k * k - nu * nu) * (r.zeta1 * r.zeta2.conj() * Complex64::new(x, -k)).re;
    Ok((dx, dnu))
}

/// Time derivatives of all reduced variables, `(Ẋ, ν̇, ζ̇₁, ζ̇₂)`.
///
/// `(Ẋ, ν̇)` come from [`reduced_rhs`]. Since `K` is conserved,
/// `ζ̇₁ = (α̇₁ − ζ₁Ẋ)/(X − iK)` and `ζ̇₂ = (α̇₂ − ζ₂Ẋ)/(X + iK)`, where the
/// amplitude derivatives depend on the state only through the reduced
/// variables.
pub fn reduced_full_rhs(r: &ReducedState) -> Result<(f64, f64, Complex64, Complex64)> {
    let (dx, dnu) = reduced_rhs(r)?;
    let d = full_rhs_unchecked(&r.to_full());
    let dz1 = (d.dalpha1 - r.zeta1 * dx) / Complex64::new(r.x, -r.k);
    let dz2 = (d.dalpha2 - r.zeta2 * dx) / Complex64::new(r.x, r.k);
    Ok((dx, dnu, dz1, dz2))
}

/// Trajectory of the reduced system.
#[derive(Debug, Clone, Serialize)]
pub struct ReducedTrajectory {
    pub t: Vec<f64>,
    pub states: Vec<ReducedState>,
    pub stats: OdeStats,
}

impl ReducedTrajectory {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv_to(&mut f)?;
        f.flush()?;
        Ok(())
    }

    /// CSV with columns `t, X, nu, K, re_z1, im_z1, re_z2, im_z2, resonance_gap`.
    pub fn write_csv_to(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "t,X,nu,K,re_z1,im_z1,re_z2,im_z2,resonance_gap")?;
        for (t, r) in self.t.iter().zip(&self.states) {
            let row = [
                *t,
                r.x,
                r.nu,
                r.k,
                r.zeta1.re,
                r.zeta1.im,
                r.zeta2.re,
                r.zeta2.im,
                r.resonance_gap(),
            ];
            let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Integrates the reduced system `(X, ν, ζ₁, ζ₂)` (with `K` fixed) on
/// `[t0, t1]` with `samples` equally spaced outputs.
pub fn integrate_reduced(r0: &ReducedState, t0: f64, t1: f64, tol: f64, samples: usize) -> Result<ReducedTrajectory> {
    reduced_rhs(r0)?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let k = r0.k;
    let unpack = |y: &[f64]| ReducedState {
        x: y[0],
        nu: y[1],
        zeta1: Complex64::new(y[2], y[3]),
        zeta2: Complex64::new(y[4], y[5]),
        k,
    };
    let outputs = linspace(t0, t1, samples.max(2));
    let y0 = [r0.x, r0.nu, r0.zeta1.re, r0.zeta1.im, r0.zeta2.re, r0.zeta2.im];
    let sol = integrate(
        |_, y, dy| {
            let r = unpack(y);
            // |ν| < K is enforced after every accepted step; trial stages
            // that leave the domain produce NaN and are rejected.
            let (dx, dnu, dz1, dz2) = reduced_full_rhs(&r).unwrap_or((
                f64::NAN,
                f64::NAN,
                Complex64::new(f64::NAN, 0.0),
                Complex64::new(f64::NAN, 0.0),
            ));
            dy.copy_from_slice(&[dx, dnu, dz1.re, dz1.im, dz2.re, dz2.im]);
        },
        t0,
        &y0,
        t1,
        &outputs,
        &OdeOptions::with_tol(tol),
        |t, y| {
            if y.iter().any(|v| !v.is_finite()) {
                Err(Error::NonFinite { t })
            } else if !(y[1].abs() < k) {
                Err(Error::Consistency(format!("|nu| reached K at t = {t}")))
            } else {
                Ok(())
            }
        },
    )?;
    Ok(ReducedTrajectory {
        t: sol.t,
        states: sol.y.iter().map(|y| unpack(y)).collect(),
        stats: sol.stats,
    })
}

/// `(Ẋ, ν̇, Γ̇)` of the resonant system with invariants `(M, K)`.
pub fn resonant_rhs(x: f64, nu: f64, m: f64, k: f64) -> (f64, f64, f64) {
    let den = x * x + nu * nu;
    (
        -m * nu * (x * x + k * k) / den,
        -m * x * (k * k - nu * nu) / den,
        -2.0 * k * m * nu / den,
    )
}

/// Parameters of a resonant run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonantParams {
    pub x0: f64,
    pub nu0: f64,
    pub m: f64,
    pub k: f64,
}

impl ResonantParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.x0, self.nu0, self.m, self.k];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("resonant parameters must be finite"));
        }
        if !(self.k > 0.0 && self.m > 0.0) {
            return Err(Error::invalid("K and M must be positive"));
        }
        if !(self.nu0.abs() < self.k) {
            return Err(Error::invalid(format!(
                "|nu0| = {} must be below K = {}",
                self.nu0.abs(),
                self.k
            )));
        }
        if self.x0 == 0.0 && self.nu0 == 0.0 {
            return Err(Error::invalid("X0 and nu0 cannot both vanish"));
        }
        Ok(())
    }

    /// The full state with `ζ₁ = ζ₂ = ζ > 0`, `x₂ = 0`.
    pub fn initial_state(&self) -> Result<SzegoTwoSolitonState> {
        self.validate()?;
        Ok(resonant_state(self.x0, self.nu0, self.m, self.k))
    }
}

/// Resonant two-soliton with relative position `X`, width asymmetry `ν`,
/// real common `ζ` and `x₂ = 0` (the free translation and phase are fixed).
pub fn resonant_state(x: f64, nu: f64, m: f64, k: f64) -> SzegoTwoSolitonState {
    let zeta = (0.5 * m / (x * x + nu * nu)).sqrt();
    SzegoTwoSolitonState {
        alpha1: zeta * Complex64::new(x, -k),
        alpha2: zeta * Complex64::new(x, k),
        kappa1: k + nu,
        kappa2: k - nu,
        x1: x,
        x2: 0.0,
    }
}

/// One output sample of a resonant run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonantSample {
    pub t: f64,
    pub x: f64,
    pub nu: f64,
    /// Relative phase, continuous in time.
    pub gamma: f64,
    pub gamma_dot: f64,
}

/// Trajectory of the resonant system.
#[derive(Debug, Clone, Serialize)]
pub struct ResonantTrajectory {
    pub params: ResonantParams,
    pub t0: f64,
    pub samples: Vec<ResonantSample>,
    /// Largest `|X(t)ν(t) − X₀ν₀ + MK²(t−t₀)|` over the samples.
    pub max_linear_law_error: f64,
    pub stats: OdeStats,
}

impl ResonantTrajectory {
    /// Full state at sample `i` (with `x₂ = 0` and real `ζ`).
    pub fn state(&self, i: usize) -> SzegoTwoSolitonState {
        let s = &self.samples[i];
        resonant_state(s.x, s.nu, self.params.m, self.params.k)
    }

    /// Least-squares slope of `Xν` against `t`.
    pub fn x_nu_slope(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self.samples.iter().map(|s| (s.t, s.x * s.nu)).collect();
        least_squares_slope(&pts)
    }

    /// `sup |Γ̇(t)|t²` over samples with `t ≥ t_from`.
    pub fn gamma_dot_bound(&self, t_from: f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.t >= t_from)
            .map(|s| s.gamma_dot.abs() * s.t * s.t)
            .fold(0.0, f64::max)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv_to(&mut f)?;
        f.flush()?;
        Ok(())
    }

    /// CSV with columns `t, X, nu, Gamma, Gamma_dot, X_times_nu, kappa1, kappa2`.
    pub fn write_csv_to(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "t,X,nu,Gamma,Gamma_dot,X_times_nu,kappa1,kappa2")?;
        let k = self.params.k;
        for s in &self.samples {
            let row = [s.t, s.x, s.nu, s.gamma, s.gamma_dot, s.x * s.nu, k + s.nu, k - s.nu];
            let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Integrates the resonant system on `[t0, t1]` with `samples` equally
/// spaced outputs. The phase starts from `Γ(t₀) = arg((X₀−iK)/(X₀+iK))` and
/// is integrated continuously. The exact law `Xν = X₀ν₀ − MK²(t−t₀)` is
/// checked at every output and the run fails if it is violated by more than
/// `max(10·tol, 1e-12)·max(1, |Xν|)`.
pub fn integrate_resonant(
    p: &ResonantParams,
    t0: f64,
    t1: f64,
    tol: f64,
    samples: usize,
) -> Result<ResonantTrajectory> {
    p.validate()?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let (m, k) = (p.m, p.k);
    let gamma0 = (Complex64::new(p.x0, -k) / Complex64::new(p.x0, k)).arg();
    let outputs = linspace(t0, t1, samples.max(2));
    let sol = integrate(
        |_, y, dy| {
            let (a, b, c) = resonant_rhs(y[0], y[1], m, k);
            dy[0] = a;
            dy[1] = b;
            dy[2] = c;
        },
        t0,
        &[p.x0, p.nu0, gamma0],
        t1,
        &outputs,
        &OdeOptions::with_tol(tol),
        |t, y| {
            if y.iter().any(|v| !v.is_finite()) {
                Err(Error::NonFinite { t })
            } else if !(y[1].abs() < k) {
                Err(Error::Consistency(format!("|nu| reached K at t = {t}")))
            } else {
                Ok(())
            }
        },
    )?;
    let x_nu0 = p.x0 * p.nu0;
    let mut max_err = 0.0f64;
    let mut out = Vec::with_capacity(sol.t.len());
    for (&t, y) in sol.t.iter().zip(&sol.y) {
        let exact = x_nu0 - m * k * k * (t - t0);
        let err = (y[0] * y[1] - exact).abs();
        if err > (10.0 * tol).max(1e-12) * exact.abs().max(1.0) {
            return Err(Error::Consistency(format!(
                "X nu deviates from its linear law by {err:.3e} at t = {t}"
            )));
        }
        max_err = max_err.max(err);
        out.push(ResonantSample {
            t,
            x: y[0],
            nu: y[1],
            gamma: y[2],
            gamma_dot: resonant_rhs(y[0], y[1], m, k).2,
        });
    }
    Ok(ResonantTrajectory {
        params: *p,
        t0,
        samples: out,
        max_linear_law_error: max_err,
        stats: sol.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::szego::conserved::conserved_closed_form;
    use crate::szego::state::full_rhs;
    use crate::szego::trajectory::integrate_full;

    #[test]
    fn resonant_state_is_resonant() {
        let s = resonant_state(0.7, 0.3, 2.0, 1.0);
        let c = conserved_closed_form(&s);
        assert!(c.resonance_defect().abs() < 1e-12);
        assert!((c.m - 2.0).abs() < 1e-12 && (c.k - 1.0).abs() < 1e-15);
        assert!((c.c - c.k * c.m).abs() < 1e-12);
        assert!(ReducedState::from_full(&s).resonance_gap() < 1e-15);
    }

    #[test]
    fn reduced_rhs_matches_full_and_resonant_forms() {
        let s = SzegoTwoSolitonState {
            alpha1: Complex64::new(0.4, 0.9),
            alpha2: Complex64::new(-0.6, 0.2),
            kappa1: 1.3,
            kappa2: 0.5,
            x1: 0.8,
            x2: -1.1,
        };
        let d = full_rhs(&s).unwrap();
        let (dx, dnu) = reduced_rhs(&ReducedState::from_full(&s)).unwrap();
        assert!((dx - (d.dx1 - d.dx2)).abs() < 1e-12);
        assert!((dnu - 0.5 * (d.dkappa1 - d.dkappa2)).abs() < 1e-12);
        let (x, nu, m, k) = (0.9, -0.2, 1.5, 0.8);
        let (dx, dnu) = reduced_rhs(&ReducedState::from_full(&resonant_state(x, nu, m, k))).unwrap();
        let (ex, enu, _) = resonant_rhs(x, nu, m, k);
        assert!((dx - ex).abs() < 1e-12 && (dnu - enu).abs() < 1e-12);
    }

    #[test]
    fn reduced_integration_matches_full_flow() {
        let s = SzegoTwoSolitonState {
            alpha1: Complex64::new(0.9, 0.2),
            alpha2: Complex64::new(-0.3, 0.7),
            kappa1: 1.2,
            kappa2: 0.8,
            x1: 2.0,
            x2: -2.0,
        };
        let full = integrate_full(&s, 0.0, 20.0, 1e-12, 21).unwrap();
        let red = integrate_reduced(&ReducedState::from_full(&s), 0.0, 20.0, 1e-12, 21).unwrap();
        for (a, b) in full.states.iter().zip(&red.states) {
            let m = ReducedState::from_full(a);
            let err = (m.x - b.x)
                .abs()
                .max((m.nu - b.nu).abs())
                .max((m.zeta1 - b.zeta1).norm())
                .max((m.zeta2 - b.zeta2).norm());
            assert!(err < 1e-6, "reduced vs full {err:.3e}");
        }
    }

    #[test]
    fn degenerate_factors() {
        let (dx, _, _) = resonant_rhs(1.3, 0.0, 2.0, 1.0);
        assert_eq!(dx, 0.0);
        let (_, dnu, _) = resonant_rhs(0.0, 0.4, 2.0, 1.0);
        assert_eq!(dnu, 0.0);
        let bad = ReducedState {
            x: 0.0,
            nu: 1.0,
            zeta1: Complex64::new(1.0, 0.0),
            zeta2: Complex64::new(1.0, 0.0),
            k: 1.0,
        };
        assert!(reduced_rhs(&bad).unwrap_err().is_validation());
    }

    #[test]
    fn linear_law_and_phase() {
        let p = ResonantParams {
            x0: 0.0,
            nu0: 0.5,
            m: 2.0,
            k: 1.0,
        };
        let tr = integrate_resonant(&p, 0.0, 20.0, 1e-12, 201).unwrap();
        for s in &tr.samples {
            assert!((s.x * s.nu + 2.0 * s.t).abs() < 1e-9);
            // e^{iΓ} = (X−iK)/(X+iK) along the flow.
            let e = Complex64::new(s.x, -1.0) / Complex64::new(s.x, 1.0);
            assert!((Complex64::from_polar(1.0, s.gamma) - e).norm() < 1e-9);
        }
        assert!((tr.x_nu_slope() + 2.0).abs() < 1e-9);
    }

    #[test]
    fn full_flow_matches_resonant_flow() {
        let p = ResonantParams {
            x0: 0.0,
            nu0: 0.5,
            m: 2.0,
            k: 1.0,
        };
        let tr = integrate_resonant(&p, 0.0, 20.0, 1e-12, 41).unwrap();
        let full = integrate_full(&p.initial_state().unwrap(), 0.0, 20.0, 1e-12, 41).unwrap();
        for (s, f) in tr.samples.iter().zip(&full.states) {
            let r = ReducedState::from_full(f);
            assert!((r.x - s.x).abs() < 1e-6 && (r.nu - s.nu).abs() < 1e-6);
            assert!(r.resonance_gap() < 1e-8);
        }
        assert!(full.max_resonance_defect() < 1e-9);
        for c in &full.conserved {
            assert!((c.c - c.k * c.m).abs() < 1e-9);
        }
    }
}
