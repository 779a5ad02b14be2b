//! Two-soliton states of the cubic Szegő equation and the exact parameter
//! dynamics of the ansatz `u = α₁Q((x−x₁)/κ₁) + α₂Q((x−x₂)/κ₂)`,
//! `Q(x) = 1/(x + i/2)`.
//!
//! The ansatz is invariant under the flow of
//! `i∂_tu = Du − Π⁺(|u|²u)` (the Szegő equation written in a frame moving
//! with unit speed; see [`crate::evolution`] for the map to the plain form).
//! Matching the coefficients of `Q_j` and `Q_j²` in that equation gives, per
//! soliton,
//!
//! * `i(1−ẋ₁)/κ₁ − κ̇₁/(2κ₁) = A₁`,
//!   `A₁ = i|α₁|² + κ₂α₁ᾱ₂/(X − iK)`,
//! * `−i(α̇₁/α₁ + κ̇₁/κ₁) = B₁`,
//!   `B₁ = |α₁|² − κ₁κ₂α₁ᾱ₂/(X−iK)² + 2iκ₂α₂ᾱ₁/(X−iν) + 2κ₂²|α₂|²/((X−iν)(X−iK))`,
//!
//! with `X = x₁ − x₂`, `K = (κ₁+κ₂)/2`, `ν = (κ₁−κ₂)/2`, and the symmetric
//! relations for the second soliton.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters `(α₁, α₂, κ₁, κ₂, x₁, x₂)` of a two-soliton.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SzegoTwoSolitonState {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub x1: f64,
    pub x2: f64,
}

/// Time derivative of a [`SzegoTwoSolitonState`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SzegoDerivative {
    pub dx1: f64,
    pub dx2: f64,
    pub dkappa1: f64,
    pub dkappa2: f64,
    pub dalpha1: Complex64,
    pub dalpha2: Complex64,
}

pub(crate) const DIM: usize = 8;

impl SzegoTwoSolitonState {
    pub fn validate(&self) -> Result<()> {
        let v = self.pack();
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("Szego state must be finite"));
        }
        if !(self.kappa1 > 0.0 && self.kappa2 > 0.0) {
            return Err(Error::invalid(format!(
                "widths must be positive (kappa1 = {}, kappa2 = {})",
                self.kappa1, self.kappa2
            )));
        }
        Ok(())
    }

    /// Exchanges the two solitons.
    pub fn swapped(&self) -> Self {
        Self {
            alpha1: self.alpha2,
            alpha2: self.alpha1,
            kappa1: self.kappa2,
            kappa2: self.kappa1,
            x1: self.x2,
            x2: self.x1,
        }
    }

    pub(crate) fn pack(&self) -> [f64; DIM] {
        [
            self.x1,
            self.x2,
            self.kappa1,
            self.kappa2,
            self.alpha1.re,
            self.alpha1.im,
            self.alpha2.re,
            self.alpha2.im,
        ]
    }

    pub(crate) fn unpack(y: &[f64]) -> Self {
        Self {
            x1: y[0],
            x2: y[1],
            kappa1: y[2],
            kappa2: y[3],
            alpha1: Complex64::new(y[4], y[5]),
            alpha2: Complex64::new(y[6], y[7]),
        }
    }

    /// Value of the ansatz at `x`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let q = |y: f64| Complex64::new(1.0, 0.0) / Complex64::new(y, 0.5);
        self.alpha1 * q((x - self.x1) / self.kappa1) + self.alpha2 * q((x - self.x2) / self.kappa2)
    }
}

/// Coefficients `(A_j, B_j)` of soliton `j` given its partner, with
/// `X = x_j − x_partner`.
fn coefficients(a: Complex64, ka: f64, xa: f64, b: Complex64, kb: f64, xb: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let x = xa - xb;
    let k = 0.5 * (ka + kb);
    let nu = 0.5 * (ka - kb);
    let dk = Complex64::new(x, -k);
    let dn = Complex64::new(x, -nu);
    let cross = a * b.conj();
    let big_a = i * a.norm_sqr() + kb * cross / dk;
    let big_b = Complex64::new(a.norm_sqr(), 0.0) - ka * kb * cross / (dk * dk)
        + 2.0 * i * kb * b * a.conj() / dn
        + 2.0 * kb * kb * b.norm_sqr() / (dn * dk);
    (big_a, big_b)
}

fn soliton_derivative(a: Complex64, ka: f64, xa: f64, b: Complex64, kb: f64, xb: f64) -> (f64, f64, Complex64) {
    let (big_a, big_b) = coefficients(a, ka, xa, b, kb, xb);
    let dk = -2.0 * ka * big_a.re;
    let dx = 1.0 - ka * big_a.im;
    let da = Complex64::i() * a * big_b - a * dk / ka;
    (dx, dk, da)
}

/// Time derivative of the two-soliton parameters.
pub fn full_rhs(s: &SzegoTwoSolitonState) -> Result<SzegoDerivative> {
    s.validate()?;
    Ok(full_rhs_unchecked(s))
}

pub(crate) fn full_rhs_unchecked(s: &SzegoTwoSolitonState) -> SzegoDerivative {
    let (dx1, dk1, da1) = soliton_derivative(s.alpha1, s.kappa1, s.x1, s.alpha2, s.kappa2, s.x2);
    let (dx2, dk2, da2) = soliton_derivative(s.alpha2, s.kappa2, s.x2, s.alpha1, s.kappa1, s.x1);
    SzegoDerivative {
        dx1,
        dx2,
        dkappa1: dk1,
        dkappa2: dk2,
        dalpha1: da1,
        dalpha2: da2,
    }
}

pub(crate) fn packed_rhs(y: &[f64], dy: &mut [f64]) {
    let d = full_rhs_unchecked(&SzegoTwoSolitonState::unpack(y));
    dy[0] = d.dx1;
    dy[1] = d.dx2;
    dy[2] = d.dkappa1;
    dy[3] = d.dkappa2;
    dy[4] = d.dalpha1.re;
    dy[5] = d.dalpha1.im;
    dy[6] = d.dalpha2.re;
    dy[7] = d.dalpha2.im;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_state(rng: &mut impl Rng) -> SzegoTwoSolitonState {
        SzegoTwoSolitonState {
            alpha1: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            alpha2: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            kappa1: rng.gen_range(0.2..2.0),
            kappa2: rng.gen_range(0.2..2.0),
            x1: rng.gen_range(-3.0..3.0),
            x2: rng.gen_range(-3.0..3.0),
        }
    }

    /// `Π⁺(|u|²u)` for a sum of simple poles in the lower half-plane:
    /// subtract the principal parts at the poles of `ū` (upper half-plane).
    fn projected_cubic(s: &SzegoTwoSolitonState, x: f64) -> Complex64 {
        let amps = [s.alpha1 * s.kappa1, s.alpha2 * s.kappa2];
        let poles = [
            Complex64::new(s.x1, -0.5 * s.kappa1),
            Complex64::new(s.x2, -0.5 * s.kappa2),
        ];
        let u_at = |z: Complex64| amps[0] / (z - poles[0]) + amps[1] / (z - poles[1]);
        let u = u_at(Complex64::new(x, 0.0));
        let mut v = u * u * u.conj();
        for l in 0..2 {
            let p = poles[l].conj();
            let up = u_at(p);
            v -= up * up * amps[l].conj() / (Complex64::new(x, 0.0) - p);
        }
        v
    }

    #[test]
    fn rhs_solves_the_transport_szego_equation_pointwise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let i = Complex64::i();
        for _ in 0..20 {
            let s = random_state(&mut rng);
            let d = full_rhs(&s).unwrap();
            let parts = [
                (s.alpha1, s.kappa1, s.x1, d.dalpha1, d.dkappa1, d.dx1),
                (s.alpha2, s.kappa2, s.x2, d.dalpha2, d.dkappa2, d.dx2),
            ];
            for &x in &[-4.0, -0.7, 0.0, 0.3, 2.5, 9.0] {
                let mut ut = Complex64::new(0.0, 0.0);
                let mut du = Complex64::new(0.0, 0.0);
                for &(a, k, xc, da, dk, dx) in &parts {
                    // u_j = (aκ)·q, q = 1/(x − x_j + iκ/2).
                    let q = Complex64::new(1.0, 0.0) / Complex64::new(x - xc, 0.5 * k);
                    let amp = a * k;
                    let damp = da * k + a * dk;
                    ut += damp * q + amp * q * q * Complex64::new(dx, -0.5 * dk);
                    du += i * amp * q * q;
                }
                let res = i * ut - (du - projected_cubic(&s, x));
                assert!(res.norm() < 1e-11 * (1.0 + du.norm()), "residual {res} at x = {x}");
            }
        }
    }

    #[test]
    fn single_soliton_is_stationary() {
        let s = SzegoTwoSolitonState {
            alpha1: Complex64::from_polar(1.0, 0.3),
            alpha2: Complex64::new(0.0, 0.0),
            kappa1: 1.0,
            kappa2: 1.0,
            x1: 0.0,
            x2: 5.0,
        };
        let d = full_rhs(&s).unwrap();
        assert!(d.dx1.abs() < 1e-15 && d.dkappa1.abs() < 1e-15);
        assert!((d.dalpha1 - Complex64::i() * s.alpha1).norm() < 1e-15);
    }

    #[test]
    fn swap_symmetry_and_width_conservation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let s = random_state(&mut rng);
            let d = full_rhs(&s).unwrap();
            let e = full_rhs(&s.swapped()).unwrap();
            assert!((d.dx1 - e.dx2).abs() < 1e-12 && (d.dkappa1 - e.dkappa2).abs() < 1e-12);
            assert!((d.dalpha1 - e.dalpha2).norm() < 1e-12);
            assert!((d.dkappa1 + d.dkappa2).abs() < 1e-12);
        }
    }

    #[test]
    fn nonpositive_width_is_rejected() {
        let s = SzegoTwoSolitonState {
            alpha1: Complex64::new(1.0, 0.0),
            alpha2: Complex64::new(1.0, 0.0),
            kappa1: 0.0,
            kappa2: 1.0,
            x1: 0.0,
            x2: 1.0,
        };
        assert!(full_rhs(&s).unwrap_err().is_validation());
    }
}
