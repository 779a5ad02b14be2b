//! The special functions controlling the far field of the traveling waves:
//!
//! ```text
//!     G(x) = ∫_0^∞ e^{-α} / (α − ix) dα = ∫_0^∞ e^{ixξ} / (1 + ξ) dξ,
//!     F(x) = ∫_0^∞ α e^{-α} / (α − ix) dα = 1 + ix G(x).
//! ```
//!
//! Both are evaluated through the exponential integral,
//! `G(x) = e^{-ix} E₁(-ix)`, using the power series near the origin and a
//! continued fraction further out. Accuracy is checked against adaptive
//! quadrature of the defining integrals in the test suite.

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// Exponential integral `E₁(z)` on the principal branch (`|arg z| < π`).
pub fn expint_e1(z: Complex64) -> Complex64 {
    if z.norm() <= 4.0 {
        // E₁(z) = −γ − ln z − Σ_{k≥1} (−z)^k / (k·k!)
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..200 {
            term *= -z / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.norm() < 1e-17 * sum.norm().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - z.ln() - sum
    } else {
        // Modified Lentz evaluation of
        // E₁(z) = e^{-z} / (z + 1 − 1²/(z + 3 − 2²/(z + 5 − …))).
        let tiny = 1e-300;
        let mut b = z + 1.0;
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = b.inv();
        let mut h = d;
        for i in 1..10_000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = (d * an + b).inv();
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        h * (-z).exp()
    }
}

/// `G(x) = ∫_0^∞ e^{-α}/(α − ix) dα` for `x ≠ 0` (logarithmic singularity
/// at the origin).
pub fn eval_g(x: f64) -> Complex64 {
    let z = Complex64::new(0.0, -x);
    Complex64::from_polar(1.0, -x) * expint_e1(z)
}

/// `F(x) = ∫_0^∞ α e^{-α}/(α − ix) dα`, with `F(0) = 1`.
pub fn eval_f(x: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::new(1.0, 0.0) + Complex64::new(0.0, x) * eval_g(x)
}

/// `F'(x) = (1/x − i) F(x) − 1/x`, evaluated in the cancellation-free form
/// `F' = i(G − F)` (which follows from `F − 1 = ixG`).
///
/// `F'` has a logarithmic singularity at the origin; `x = 0` returns 0 (the
/// derivative is only ever multiplied by a vanishing factor there).
pub fn eval_f_prime(x: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, 1.0) * (eval_g(x) - eval_f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e1_real_reference_values() {
        // E₁(1) = 0.219383934395520..., E₁(5) = 0.001148295591275...
        assert!((expint_e1(Complex64::new(1.0, 0.0)).re - 0.219_383_934_395_520_3).abs() < 1e-14);
        assert!((expint_e1(Complex64::new(5.0, 0.0)).re - 0.001_148_295_591_275_325_8).abs() < 1e-15);
    }

    #[test]
    fn f_at_origin_is_one() {
        assert_eq!(eval_f(0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn series_and_fraction_agree_near_switch() {
        for &x in &[3.99, 4.01, -3.99, -4.01] {
            let a = eval_g(x);
            // Shifting slightly must change G smoothly.
            let b = eval_g(x * (1.0 + 1e-9));
            assert!((a - b).norm() < 1e-7 * a.norm());
        }
    }
}
