//! Real-linear operators of the form `f ↦ σ(D) f − a f − b conj(f)` with a
//! positive Fourier symbol `σ`, together with the preconditioned Krylov solve
//! used for Newton steps and for the auxiliary profile `ρ_β`.

use num_complex::Complex64;

use crate::error::Result;
use crate::krylov::{gmres, orthonormalize, project_out, GmresOptions};
use crate::spectral::Grid1D;

/// `f ↦ σ(D)f − a·f − b·conj(f)` on a fixed grid.
#[derive(Debug, Clone)]
pub struct RealLinearOperator {
    pub grid: Grid1D,
    /// Positive symbol `σ(ξ_k)` in FFT order.
    pub symbol: Vec<f64>,
    /// Multiplicative potential acting on `f`.
    pub a: Vec<f64>,
    /// Multiplicative potential acting on `conj(f)`.
    pub b: Vec<Complex64>,
}

impl RealLinearOperator {
    /// The linearization of `σ(D)Q − |Q|²Q` at `Q`:
    /// `σ(D)f − 2|Q|²f − Q²conj(f)`.
    pub fn linearization(grid: Grid1D, symbol: Vec<f64>, q: &[Complex64]) -> Self {
        Self {
            grid,
            symbol,
            a: q.iter().map(|v| 2.0 * v.norm_sqr()).collect(),
            b: q.iter().map(|v| v * v).collect(),
        }
    }

    fn potential(&self, f: &[Complex64]) -> Vec<Complex64> {
        f.iter()
            .zip(self.a.iter().zip(&self.b))
            .map(|(fj, (aj, bj))| fj * aj + bj * fj.conj())
            .collect()
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let lin = self.grid.apply_real_table(f, &self.symbol);
        let pot = self.potential(f);
        lin.iter().zip(&pot).map(|(l, p)| l - p).collect()
    }

    /// `σ(D)^{-1}` applied to `f`.
    pub fn inverse_symbol(&self, f: &[Complex64]) -> Vec<Complex64> {
        let inv: Vec<f64> = self.symbol.iter().map(|s| 1.0 / s).collect();
        self.grid.apply_real_table(f, &inv)
    }

    /// `σ(D)^{-1} ∘ self`, i.e. identity minus a compact perturbation.
    pub fn apply_preconditioned(&self, f: &[Complex64]) -> Vec<Complex64> {
        let pot = self.potential(f);
        let sp = self.inverse_symbol(&pot);
        f.iter().zip(&sp).map(|(fj, s)| fj - s).collect()
    }

    /// Solves `self·x = rhs` with `x` orthogonal to `kernel` (in the real
    /// inner product). `rhs` must be compatible (orthogonal to the kernel).
    pub fn solve(&self, rhs: &[Complex64], kernel: &[Vec<Complex64>], opts: &GmresOptions) -> Result<LinearSolve> {
        let basis = orthonormalize(kernel);
        let prhs = self.inverse_symbol(rhs);
        let res = gmres(|v| self.apply_preconditioned(v), &prhs, None, opts)?;
        let mut x = res.x;
        project_out(&mut x, &basis);
        let ax = self.apply(&x);
        let r: Vec<Complex64> = ax.iter().zip(rhs).map(|(a, b)| a - b).collect();
        let residual = (crate::spectral::real_dot(&r, &r) * self.grid.dx()).sqrt();
        Ok(LinearSolve {
            x,
            residual,
            iterations: res.iterations,
        })
    }
}

/// Solution of a linearized problem with its true residual `‖A x − b‖_{L²}`.
#[derive(Debug, Clone)]
pub struct LinearSolve {
    pub x: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
}
