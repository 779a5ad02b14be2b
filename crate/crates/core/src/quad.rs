//! Adaptive Gauss–Kronrod quadrature (7/15-point pair) for complex-valued
//! integrands on finite and semi-infinite intervals.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_intervals: 20_000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    let k = kron * h;
    let g = gauss * h;
    (k, (k - g).norm())
}

/// Integrates `f` over `[a, b]` by globally adaptive bisection.
pub fn integrate(f: impl Fn(f64) -> Complex64, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            intervals: 0,
        });
    }
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: Complex64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= target {
            return Ok(QuadResult {
                value: total,
                error: err,
                intervals: parts.len(),
            });
        }
        if parts.len() >= opts.max_intervals {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature".into(),
                last: err,
                history: vec![],
            });
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty interval list");
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo.min(hi) && mid < lo.max(hi)) {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature (interval underflow)".into(),
                last: err,
                history: vec![],
            });
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Integrates `f` over `[a, ∞)` through the map `x = a + scale·t/(1−t)`.
pub fn integrate_to_infinity(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    scale: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    let g = |t: f64| {
        if t >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let om = 1.0 - t;
        let x = a + scale * t / om;
        let jac = scale / (om * om);
        let v = f(x) * jac;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    integrate(g, 0.0, 1.0, opts)
}

/// Integrates `f` over `(-∞, a]` through the reflection `x ↦ -x`.
pub fn integrate_from_minus_infinity(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    scale: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    integrate_to_infinity(|x| f(-x), -a, scale, opts)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Result<f64> {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, opts).map(|r| r.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_real(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, QuadOptions::default()).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0) + 3.0;
        assert!((r - exact).abs() < 1e-12);
    }

    #[test]
    fn lorentzian_on_half_line() {
        let r = integrate_to_infinity(
            |x| Complex64::new(1.0 / (1.0 + x * x), 0.0),
            0.0,
            1.0,
            QuadOptions::default(),
        )
        .unwrap();
        assert!((r.value.re - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    }

    #[test]
    fn oscillatory_exponential() {
        // ∫_0^∞ e^{-(1+5i)x} dx = 1/(1+5i)
        let r =
            integrate_to_infinity(|x| Complex64::new(-x, -5.0 * x).exp(), 0.0, 1.0, QuadOptions::default()).unwrap();
        let exact = Complex64::new(1.0, 5.0).inv();
        assert!((r.value - exact).norm() < 1e-11);
    }
}
