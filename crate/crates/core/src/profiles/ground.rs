//! The positive even ground state `Q` of `|D|Q + Q − Q³ = 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::krylov::GmresOptions;
use crate::profiles::operator::RealLinearOperator;
use crate::spectral::{Grid1D, SpectralField};

/// A solved ground state.
#[derive(Debug, Clone)]
pub struct GroundStateQ {
    pub field: SpectralField,
    pub residual: f64,
    /// `∫ Q²`, the mass threshold for global existence.
    pub mass: f64,
    pub history: Vec<f64>,
}

/// Summary written next to the field by the command-line tool.
#[derive(Debug, Clone, Serialize)]
pub struct GroundStateSummary {
    pub residual: f64,
    pub mass: f64,
    pub peak: f64,
    pub tail_mass: f64,
}

impl GroundStateQ {
    pub fn summary(&self) -> GroundStateSummary {
        GroundStateSummary {
            residual: self.residual,
            mass: self.mass,
            peak: self.field.values().iter().map(|v| v.re).fold(f64::MIN, f64::max),
            tail_mass: self.field.tail_mass(),
        }
    }
}

fn symmetrize_even_real(grid: &Grid1D, v: &mut [Complex64]) {
    let n = grid.n();
    let copy: Vec<f64> = v.iter().map(|z| z.re).collect();
    for j in 0..n {
        let mirror = (n - j) % n;
        v[j] = Complex64::new(0.5 * (copy[j] + copy[mirror]), 0.0);
    }
}

fn residual_of(grid: &Grid1D, symbol: &[f64], q: &[Complex64]) -> (Vec<Complex64>, f64) {
    let lin = grid.apply_real_table(q, symbol);
    let r: Vec<Complex64> = lin.iter().zip(q).map(|(l, v)| l - v * v.norm_sqr()).collect();
    let norm = grid.inner(&r, &r).sqrt();
    (r, norm)
}

/// Solves `|D|Q + Q = Q³` by a Petviashvili-normalized fixed-point iteration
/// `Q ← M^{3/2}(|D|+1)^{-1}Q³`, `M = (Q,(|D|+1)Q)/(Q,Q³)`, followed by Newton
/// polish on the even subspace (where the linearization is invertible).
pub fn solve_ground_state(grid: Grid1D, tol: f64) -> Result<GroundStateQ> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let symbol: Vec<f64> = grid.xis().iter().map(|xi| xi.abs() + 1.0).collect();
    let inv: Vec<f64> = symbol.iter().map(|s| 1.0 / s).collect();
    let mut q: Vec<Complex64> = grid
        .xs()
        .iter()
        .map(|x| Complex64::new(1.5 / (1.0 + x * x), 0.0))
        .collect();
    let mut history = Vec::new();
    let fp_target = (1e3 * tol).max(1e-7);
    for _ in 0..3000 {
        let cubic: Vec<Complex64> = q.iter().map(|v| v * v.norm_sqr()).collect();
        let lin = grid.apply_real_table(&q, &symbol);
        let m = grid.inner(&q, &lin) / grid.inner(&q, &cubic);
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::NonConvergence {
                what: "ground state fixed point (collapse)".into(),
                last: f64::NAN,
                history,
            });
        }
        let mut next = grid.apply_real_table(&cubic, &inv);
        let f = m.powf(1.5);
        for v in next.iter_mut() {
            *v *= f;
        }
        symmetrize_even_real(&grid, &mut next);
        q = next;
        let (_, res) = residual_of(&grid, &symbol, &q);
        history.push(res);
        if res < fp_target {
            break;
        }
    }
    let opts = GmresOptions {
        rel_tol: 1e-12,
        ..GmresOptions::default()
    };
    for _ in 0..30 {
        let (r, res) = residual_of(&grid, &symbol, &q);
        if res < tol {
            break;
        }
        let op = RealLinearOperator::linearization(grid, symbol.clone(), &q);
        let rhs: Vec<Complex64> = r.iter().map(|v| -v).collect();
        let mut step = op.solve(&rhs, &[], &opts)?.x;
        symmetrize_even_real(&grid, &mut step);
        for (qj, s) in q.iter_mut().zip(&step) {
            *qj += s;
        }
        let (_, res2) = residual_of(&grid, &symbol, &q);
        history.push(res2);
    }
    let (_, residual) = residual_of(&grid, &symbol, &q);
    if residual >= tol {
        return Err(Error::NonConvergence {
            what: "ground state Newton polish".into(),
            last: residual,
            history,
        });
    }
    let field = SpectralField::new(grid, q)?;
    let mass = field.l2_norm().powi(2);
    Ok(GroundStateQ {
        field,
        residual,
        mass,
        history,
    })
}
