//! The explicit Szegő soliton profile `Q⁺(x) = 2/(2x + i)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::spectral::{project_plus, Grid1D, SpectralField};

/// `Q⁺(x) = 2/(2x + i)`.
pub fn eval_q_plus(x: f64) -> Complex64 {
    Complex64::new(2.0, 0.0) / Complex64::new(2.0 * x, 1.0)
}

/// `∂_x Q⁺(x) = −Q⁺(x)²`.
pub fn eval_dq_plus(x: f64) -> Complex64 {
    let q = eval_q_plus(x);
    -q * q
}

/// Lattice sum `Σ_k Q⁺(x + kL) = (π/L) cot(π(x + i/2)/L)`: the `L`-periodic
/// function whose Fourier coefficients coincide with those of `Q⁺` on the
/// nonzero frequencies of the grid.
pub fn eval_q_plus_periodized(x: f64, length: f64) -> Complex64 {
    let z = Complex64::new(x, 0.5) * (PI / length);
    z.tan().inv() * (PI / length)
}

/// The Szegő profile, optionally carrying a sampled field.
#[derive(Debug, Clone, Default)]
pub struct SzegoProfileQPlus {
    pub field: Option<SpectralField>,
}

impl SzegoProfileQPlus {
    pub fn eval(&self, x: f64) -> Complex64 {
        eval_q_plus(x)
    }

    /// Point samples of the closed form on the grid (not periodic: the
    /// `1/x` tails leave a jump of size `≈ 4/L` across the boundary).
    pub fn sample(grid: Grid1D) -> SpectralField {
        SpectralField::from_fn(grid, eval_q_plus)
    }

    /// Point samples of `∂_x Q⁺`.
    pub fn sample_derivative(grid: Grid1D) -> SpectralField {
        SpectralField::from_fn(grid, eval_dq_plus)
    }

    /// Periodic samples (lattice sum), suitable as spectral data on the grid.
    pub fn sample_periodized(grid: Grid1D) -> SpectralField {
        let l = grid.length();
        SpectralField::from_fn(grid, |x| eval_q_plus_periodized(x, l))
    }

    /// The exact Szegő soliton of the periodic box: the function whose
    /// Fourier coefficients equal those of `Q⁺` on every nonnegative grid
    /// frequency (including zero), `(−2πi/L)/(1 − e^{−π/L}e^{2πix/L})`.
    /// It travels without change of shape, see [`torus_soliton_motion`].
    pub fn sample_torus_soliton(grid: Grid1D) -> SpectralField {
        let l = grid.length();
        let p = (-PI / l).exp();
        let b = Complex64::new(0.0, -2.0 * PI / l);
        SpectralField::from_fn(grid, |x| {
            b / (Complex64::new(1.0, 0.0) - Complex64::from_polar(p, 2.0 * PI * x / l))
        })
    }

    pub fn with_samples(grid: Grid1D) -> Self {
        Self {
            field: Some(Self::sample_periodized(grid)),
        }
    }
}

/// Speed `c` and frequency `ω` of the periodic Szegő soliton on a box of
/// length `L`: `u(t,x) = u₀(x − ct)e^{−iωt}` solves `i∂_tu = Π⁺(|u|²u)` with
/// `c = ε/(1 − e^{−ε})`, `ω = c²`, `ε = 2π/L`; both tend to 1 as `L → ∞`.
///
/// For `u₀ = b/(1 − pe^{iθ})` one finds
/// `Π⁺(|u₀|²u₀) = |b|²b(s w² + |p|²w)/s²` with `w = 1/(1 − pe^{iθ})` and
/// `s = 1 − |p|²`, while `∂_θw = i(w² − w)`; matching coefficients gives the
/// angular speed `|b|²/s` and frequency `|b|²/s²`.
pub fn torus_soliton_motion(length: f64) -> (f64, f64) {
    let eps = 2.0 * PI / length;
    let c = eps / -(-eps).exp_m1();
    (c, c * c)
}

/// `L²` norm of `DQ + Q − Π⁺(|Q|²Q)` on the grid.
pub fn szego_profile_residual(q: &SpectralField) -> f64 {
    let grid = *q.grid();
    let dq = crate::spectral::apply_multiplier(q, &crate::spectral::MultiplierSymbol::d())
        .expect("D is finite on every grid");
    let cubic = q.map(|_, v| v * v.norm_sqr());
    let pc = project_plus(&cubic);
    let r: Vec<Complex64> = (0..grid.n()).map(|j| dq.at(j) + q.at(j) - pc.at(j)).collect();
    SpectralField::new(grid, r).expect("same grid").l2_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{apply_multiplier, MultiplierSymbol};

    #[test]
    fn torus_soliton_solves_the_periodic_profile_equation() {
        let grid = Grid1D::new(1 << 12, 100.0).unwrap();
        let q = SzegoProfileQPlus::sample_torus_soliton(grid);
        let (c, omega) = torus_soliton_motion(grid.length());
        let dq = apply_multiplier(&q, &MultiplierSymbol::d()).unwrap();
        let pc = project_plus(&q.map(|_, v| v * v.norm_sqr()));
        let res: f64 = (0..grid.n())
            .map(|j| (dq.at(j) * c + q.at(j) * omega - pc.at(j)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(res * grid.dx().sqrt() < 1e-12, "residual {res}");
        // The modes agree with those of Q⁺ on ξ ≥ 0.
        let m = q.modes();
        for k in [0usize, 1, 5, 40] {
            let expect = Complex64::new(0.0, -2.0 * PI) * (-0.5 * grid.xi(k)).exp();
            assert!((m[k] - expect).norm() < 1e-10);
        }
    }
}
