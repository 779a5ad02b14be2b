//! Profiles together with their `β`-neighbors: `∂_βQ_β`, the derivatives of
//! the scalar constants, the auxiliary profile `ρ_β` and the 4×4
//! nondegeneracy matrix.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::krylov::GmresOptions;
use crate::profiles::qbeta::{
    beta_step, constant_derivatives, linearized_operator, solve_q_beta_continuation, ConstantDerivatives, ProfileQBeta,
    QBetaOptions,
};
use crate::spectral::{Grid1D, SpectralField};

/// A profile with the neighbors `β ± h` used for `β`-derivatives.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub center: ProfileQBeta,
    pub lower: ProfileQBeta,
    pub upper: ProfileQBeta,
}

/// Solves the profiles at every `β` in `betas` and at `β ± h`,
/// `h = min(1e-3, (1−β)/10)`, by continuation from `Q⁺`.
pub fn solve_family(betas: &[f64], grid: Grid1D, opts: &QBetaOptions) -> Result<Vec<FamilyMember>> {
    let mut all = Vec::with_capacity(3 * betas.len());
    for &b in betas {
        let h = beta_step(b);
        all.extend_from_slice(&[b - h, b, b + h]);
    }
    let solved = solve_q_beta_continuation(&all, grid, opts, 0.01)?;
    let mut it = solved.into_iter();
    let mut out = Vec::with_capacity(betas.len());
    for _ in betas {
        let lower = it.next().expect("three profiles per beta");
        let center = it.next().expect("three profiles per beta");
        let upper = it.next().expect("three profiles per beta");
        out.push(FamilyMember { center, lower, upper });
    }
    Ok(out)
}

/// Output of the `ρ_β` solve.
#[derive(Debug, Clone)]
pub struct RhoSolution {
    /// `ρ_β` itself (the solved unknown is `iρ_β`).
    pub rho: SpectralField,
    /// `‖L_β(iρ_β) − i∂_yQ_β‖_{L²}`.
    pub residual: f64,
    /// `(iρ_β, iQ_β)` and `(iρ_β, ∂_yQ_β)`.
    pub orthogonality: (f64, f64),
    pub iterations: usize,
}

/// Solves `L_β(iρ) = i∂_yQ_β` with `(iρ, iQ_β) = (iρ, ∂_yQ_β) = 0`.
pub fn solve_rho_beta(p: &ProfileQBeta, tol: f64) -> Result<SpectralField> {
    let sol = solve_rho_beta_detailed(p, tol)?;
    Ok(sol.rho)
}

/// [`solve_rho_beta`] with diagnostics.
///
/// The real-linear system is solved by GMRES preconditioned with the inverse
/// of the positive symbol `(|D|−βD)/(1−β) + 1`; the kernel directions are
/// projected out of the result.
pub fn solve_rho_beta_detailed(p: &ProfileQBeta, tol: f64) -> Result<RhoSolution> {
    let grid = *p.grid();
    let op = linearized_operator(p);
    let q = p.field.values();
    let dq = p.dfield.values();
    let iq: Vec<Complex64> = q.iter().map(|v| v * Complex64::i()).collect();
    let rhs: Vec<Complex64> = dq.iter().map(|v| v * Complex64::i()).collect();
    let opts = GmresOptions {
        rel_tol: 1e-12,
        ..GmresOptions::default()
    };
    let sol = op.solve(&rhs, &[iq.clone(), dq.to_vec()], &opts)?;
    if sol.residual > tol {
        return Err(Error::NonConvergence {
            what: format!("rho_beta solve at beta = {}", p.beta),
            last: sol.residual,
            history: vec![],
        });
    }
    let orth = (grid.inner(&sol.x, &iq), grid.inner(&sol.x, dq));
    let rho: Vec<Complex64> = sol.x.iter().map(|v| v * Complex64::new(0.0, -1.0)).collect();
    Ok(RhoSolution {
        rho: SpectralField::new(grid, rho)?,
        residual: sol.residual,
        orthogonality: orth,
        iterations: sol.iterations,
    })
}

/// The assembled 4×4 matrix and its determinant.
#[derive(Debug, Clone, Serialize)]
pub struct NondegeneracyReport {
    pub beta: f64,
    pub matrix: [[f64; 4]; 4],
    pub det: f64,
}

impl FamilyMember {
    pub fn beta(&self) -> f64 {
        self.center.beta
    }

    /// Central difference `∂_βQ_β`.
    pub fn dq_dbeta(&self) -> SpectralField {
        let h2 = self.upper.beta - self.lower.beta;
        let grid = *self.center.grid();
        let v: Vec<Complex64> = self
            .upper
            .field
            .values()
            .iter()
            .zip(self.lower.field.values())
            .map(|(u, l)| (u - l) / h2)
            .collect();
        SpectralField::new(grid, v).expect("same grid")
    }

    pub fn derivatives(&self) -> ConstantDerivatives {
        constant_derivatives(&self.center, &self.lower, &self.upper).expect("neighbors bracket the center")
    }

    /// `ΛQ_β = ½Q_β + y∂_yQ_β`.
    pub fn lambda_q(&self) -> SpectralField {
        let q = &self.center.field;
        let ydq = self.center.dfield.times_x();
        q.scale(Complex64::new(0.5, 0.0)).add(&ydq).expect("same grid")
    }

    /// Assembles the matrix of inner products of
    /// `{ΛQ, iQ, ∂_yQ, Σ}` (rows) against `{Q, i∂_yQ, iΛQ, ρ}` (columns), with
    /// `Σ = y∂_yQ + (1−β)∂_βQ`.
    pub fn nondegeneracy(&self, rho: &SpectralField) -> Result<NondegeneracyReport> {
        let c = &self.center;
        let grid = *c.grid();
        grid.check_same(rho.grid())?;
        let i = Complex64::i();
        let q = c.field.clone();
        let dq = c.dfield.clone();
        let lq = self.lambda_q();
        let sigma = dq
            .times_x()
            .add(&self.dq_dbeta().scale(Complex64::new(1.0 - c.beta, 0.0)))?;
        let rows = [lq.clone(), q.scale(i), dq.clone(), sigma];
        let cols = [q, dq.scale(i), lq.scale(i), rho.clone()];
        let mut m = [[0.0; 4]; 4];
        for (a, r) in rows.iter().enumerate() {
            for (b, col) in cols.iter().enumerate() {
                m[a][b] = grid.inner(r.values(), col.values());
            }
        }
        Ok(NondegeneracyReport {
            beta: c.beta,
            matrix: m,
            det: det4(&m),
        })
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("nonempty range");
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in (col + 1)..4 {
            let f = a[r][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
        }
    }
    det
}

/// Determinant of the nondegeneracy matrix for a family member, solving
/// `ρ_β` on the way.
pub fn nondegeneracy_det(member: &FamilyMember, tol: f64) -> Result<f64> {
    let rho = solve_rho_beta(&member.center, tol)?;
    Ok(member.nondegeneracy(&rho)?.det)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_limit_matrix() {
        let p = std::f64::consts::PI;
        let m = [
            [0.0, -p, 0.0, 0.0],
            [0.0, 0.0, 0.0, -p],
            [0.0, 0.0, p, 0.0],
            [-p, 0.0, 0.0, 0.0],
        ];
        assert!((det4(&m) + p.powi(4)).abs() < 1e-10);
    }
}
