//! Restarted GMRES for real-linear operators acting on complex sample
//! vectors. The vectors are treated as elements of `R^{2n}` with the inner
//! product `Re Σ a conj(b)`, so operators involving complex conjugation
//! (such as the linearized traveling-wave operator) are handled directly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::real_dot;

/// Settings for [`gmres`].
#[derive(Debug, Clone, Copy)]
pub struct GmresOptions {
    /// Stop when the (preconditioned) residual drops below `rel_tol·‖b‖`.
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            restart: 80,
            max_iter: 2000,
        }
    }
}

/// Outcome of a GMRES solve.
#[derive(Debug, Clone)]
pub struct GmresResult {
    pub x: Vec<Complex64>,
    pub iterations: usize,
    pub residual: f64,
    pub history: Vec<f64>,
}

fn norm(v: &[Complex64]) -> f64 {
    real_dot(v, v).sqrt()
}

fn axpy(y: &mut [Complex64], a: f64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += xi * a;
    }
}

/// Solves `A x = b` where `a` applies the (already preconditioned, if
/// desired) operator. Returns an error when the iteration budget is spent
/// before reaching the tolerance.
pub fn gmres(
    mut a: impl FnMut(&[Complex64]) -> Vec<Complex64>,
    b: &[Complex64],
    x0: Option<&[Complex64]>,
    opts: &GmresOptions,
) -> Result<GmresResult> {
    let n = b.len();
    let mut x = x0
        .map(|v| v.to_vec())
        .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); n]);
    let bnorm = norm(b);
    let target = (opts.rel_tol * bnorm).max(opts.abs_tol);
    let mut history = Vec::new();
    if bnorm == 0.0 {
        return Ok(GmresResult {
            x: vec![Complex64::new(0.0, 0.0); n],
            iterations: 0,
            residual: 0.0,
            history,
        });
    }
    let m = opts.restart.max(1);
    let mut total = 0;
    loop {
        let ax = a(&x);
        let r: Vec<Complex64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm(&r);
        history.push(beta);
        if beta <= target {
            return Ok(GmresResult {
                x,
                iterations: total,
                residual: beta,
                history,
            });
        }
        if total >= opts.max_iter {
            return Err(Error::NonConvergence {
                what: "GMRES".into(),
                last: beta / bnorm,
                history,
            });
        }
        let mut v: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1);
        v.push(r.iter().map(|z| z / beta).collect());
        let mut h = vec![vec![0.0f64; m]; m + 1];
        let mut cs = vec![0.0f64; m];
        let mut sn = vec![0.0f64; m];
        let mut g = vec![0.0f64; m + 1];
        g[0] = beta;
        let mut k_used = 0;
        for j in 0..m {
            total += 1;
            let mut w = a(&v[j]);
            for i in 0..=j {
                let hij = real_dot(&w, &v[i]);
                h[i][j] = hij;
                axpy(&mut w, -hij, &v[i]);
            }
            // One reorthogonalization pass keeps the basis orthogonal in
            // long cycles.
            for i in 0..=j {
                let c = real_dot(&w, &v[i]);
                h[i][j] += c;
                axpy(&mut w, -c, &v[i]);
            }
            let wn = norm(&w);
            h[j + 1][j] = wn;
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let denom = (h[j][j] * h[j][j] + h[j + 1][j] * h[j + 1][j]).sqrt();
            if denom == 0.0 {
                k_used = j;
                break;
            }
            cs[j] = h[j][j] / denom;
            sn[j] = h[j + 1][j] / denom;
            h[j][j] = denom;
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            k_used = j + 1;
            let res = g[j + 1].abs();
            history.push(res);
            if res <= target || wn == 0.0 || total >= opts.max_iter {
                break;
            }
            v.push(w.iter().map(|z| z / wn).collect());
        }
        // Back substitution for the least-squares coefficients.
        let mut yk = vec![0.0f64; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for l in (i + 1)..k_used {
                s -= h[i][l] * yk[l];
            }
            yk[i] = s / h[i][i];
        }
        for (i, c) in yk.iter().enumerate() {
            axpy(&mut x, *c, &v[i]);
        }
    }
}

/// Orthonormalizes a small set of vectors in the real inner product
/// (modified Gram–Schmidt), dropping numerically dependent ones.
pub fn orthonormalize(vs: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = real_dot(&w, u);
                axpy(&mut w, -c, u);
            }
        }
        let nw = norm(&w);
        if nw > 1e-12 * norm(v).max(1e-300) {
            out.push(w.iter().map(|z| z / nw).collect());
        }
    }
    out
}

/// Removes from `v` its components along an orthonormal set.
pub fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for u in basis {
        let c = real_dot(v, u);
        axpy(v, -c, u);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_conjugation_operator() {
        // A x = 2x + conj(x) is real-linear but not complex-linear.
        let b: Vec<Complex64> = (0..10).map(|k| Complex64::new(k as f64, 1.0 - k as f64)).collect();
        let res = gmres(
            |x| x.iter().map(|z| z * 2.0 + z.conj()).collect(),
            &b,
            None,
            &GmresOptions::default(),
        )
        .unwrap();
        for (xi, bi) in res.x.iter().zip(&b) {
            let ax = xi * 2.0 + xi.conj();
            assert!((ax - bi).norm() < 1e-9);
        }
    }
}
