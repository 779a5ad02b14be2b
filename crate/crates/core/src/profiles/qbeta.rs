//! The traveling-wave family `Q_β`, solving
//! `(|D| − βD)/(1−β) Q + Q − |Q|²Q = 0`, normalized by
//! `(Q_β, iQ⁺) = (Q_β, ∂_xQ⁺) = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krylov::GmresOptions;
use crate::profiles::operator::RealLinearOperator;
use crate::profiles::qplus::{eval_dq_plus, eval_q_plus, SzegoProfileQPlus};
use crate::special::eval_f;
use crate::spectral::{Grid1D, MultiplierSymbol, SpectralField};

/// Symbol of `(|D| − βD)/(1−β) + 1`.
pub fn traveling_symbol(beta: f64, xi: f64) -> f64 {
    (xi.abs() - beta * xi) / (1.0 - beta) + 1.0
}

/// `m̂_β(ξ) = 1/(1 + (|ξ| − βξ)/(1−β))`, the kernel of the fixed-point form
/// `Q_β = m_β ∗ (|Q_β|²Q_β)`.
pub fn multiplier_m_beta(beta: f64) -> Result<MultiplierSymbol> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::invalid(format!("beta = {beta} must lie in [0, 1)")));
    }
    Ok(MultiplierSymbol::real(format!("m_beta({beta})"), move |xi| {
        1.0 / traveling_symbol(beta, xi)
    }))
}

/// Scalar constants attached to a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileConstants {
    /// `N_β = ‖Q_β‖²/2π`.
    pub n: f64,
    /// `P_β = (DQ_β, Q_β)/2π`.
    pub p: f64,
    /// `c_β = (i/2π) ∫ |Q_β|² Q_β`.
    pub c: Complex64,
}

impl ProfileConstants {
    /// The `β → 1` limits `N = P = c = 1`.
    pub fn limit() -> Self {
        Self {
            n: 1.0,
            p: 1.0,
            c: Complex64::new(1.0, 0.0),
        }
    }
}

/// Finite-difference derivatives `Λ̃N = (1−β)∂_βN`, `Λ̃P = (1−β)∂_βP`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantDerivatives {
    pub lt_n: f64,
    pub lt_p: f64,
}

/// A solved traveling-wave profile.
#[derive(Debug, Clone)]
pub struct ProfileQBeta {
    pub beta: f64,
    pub field: SpectralField,
    /// Spectral derivative `∂_yQ_β`.
    pub dfield: SpectralField,
    /// `L²` norm of the traveling-wave equation at the returned samples.
    pub residual: f64,
    pub constants: ProfileConstants,
    pub tail_mass: f64,
    pub fixed_point_iterations: usize,
    pub newton_iterations: usize,
    pub history: Vec<f64>,
}

/// JSON sidecar written next to profile fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileSidecar {
    pub beta: f64,
    pub residual: f64,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "P")]
    pub p: f64,
    pub c_re: f64,
    pub c_im: f64,
    pub tail_mass: f64,
}

impl ProfileQBeta {
    pub fn grid(&self) -> &Grid1D {
        self.field.grid()
    }

    pub fn sidecar(&self) -> ProfileSidecar {
        ProfileSidecar {
            beta: self.beta,
            residual: self.residual,
            n: self.constants.n,
            p: self.constants.p,
            c_re: self.constants.c.re,
            c_im: self.constants.c.im,
            tail_mass: self.tail_mass,
        }
    }

    /// Value of the profile on the line at `y`. Inside the grid the periodic
    /// samples are interpolated and the contributions of the periodic images
    /// are removed using the far-field law; outside the grid the far-field
    /// law is used directly.
    pub fn eval_line(&self, y: f64) -> Complex64 {
        self.eval_line_impl(y, false)
    }

    /// Derivative `∂_yQ_β` on the line, with the same strategy as
    /// [`ProfileQBeta::eval_line`].
    pub fn eval_line_derivative(&self, y: f64) -> Complex64 {
        self.eval_line_impl(y, true)
    }

    fn eval_line_impl(&self, y: f64, derivative: bool) -> Complex64 {
        let l = self.grid().length();
        let pick = |x: f64| {
            let (q, dq) = far_field(self.beta, self.constants.c, x);
            if derivative {
                dq
            } else {
                q
            }
        };
        if y.abs() > 0.45 * l {
            return pick(y);
        }
        let samples = if derivative { &self.dfield } else { &self.field };
        let mut v = interpolate(samples, y);
        for k in 1..=IMAGE_TERMS {
            let s = k as f64 * l;
            v -= pick(y + s) + pick(y - s);
        }
        v
    }
}

const IMAGE_TERMS: usize = 16;

/// Six-point Lagrange interpolation of periodic samples.
pub fn interpolate(field: &SpectralField, x: f64) -> Complex64 {
    let grid = field.grid();
    let n = grid.n() as i64;
    let dx = grid.dx();
    let s = (x + 0.5 * grid.length()) / dx;
    let j0 = s.floor() as i64;
    let frac = s - j0 as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in -2..=3i64 {
        let mut w = 1.0;
        for l in -2..=3i64 {
            if l != m {
                w *= (frac - l as f64) / (m - l) as f64;
            }
        }
        let idx = (j0 + m).rem_euclid(n) as usize;
        acc += field.at(idx) * w;
    }
    acc
}

/// Leading far-field law `Q_β(x) ≈ (c/x)F(−(1−β)x/(1+β))` and its derivative
/// `(ic/x)((1−β)/(1+β))F(·) − c/x²`.
pub fn far_field(beta: f64, c: Complex64, x: f64) -> (Complex64, Complex64) {
    let a = (1.0 - beta) / (1.0 + beta);
    let f = eval_f(-a * x);
    let q = c * f / x;
    let dq = Complex64::new(0.0, 1.0) * c * a * f / x - c / (x * x);
    (q, dq)
}

/// [`far_field`] for a solved profile, restricted to `|x| ≥ 10`.
pub fn tail_prediction(p: &ProfileQBeta, x: f64) -> Result<(Complex64, Complex64)> {
    if x.abs() < 10.0 {
        return Err(Error::invalid(format!("tail prediction needs |x| >= 10, got {x}")));
    }
    Ok(far_field(p.beta, p.constants.c, x))
}

/// Settings of the profile solver.
#[derive(Debug, Clone, Copy)]
pub struct QBetaOptions {
    /// Target `L²` residual.
    pub tol: f64,
    pub max_fixed_point: usize,
    /// Residual at which the fixed-point phase hands over to Newton.
    pub fixed_point_target: f64,
    pub max_newton: usize,
    pub gmres: GmresOptions,
}

impl Default for QBetaOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_fixed_point: 4000,
            fixed_point_target: 1e-5,
            max_newton: 25,
            gmres: GmresOptions {
                rel_tol: 1e-11,
                ..GmresOptions::default()
            },
        }
    }
}

pub(crate) struct TravelingProblem {
    pub grid: Grid1D,
    pub symbol: Vec<f64>,
}

impl TravelingProblem {
    pub fn new(beta: f64, grid: Grid1D) -> Self {
        Self {
            grid,
            symbol: grid.xis().iter().map(|&xi| traveling_symbol(beta, xi)).collect(),
        }
    }

    pub fn residual(&self, q: &[Complex64]) -> (Vec<Complex64>, f64) {
        let lin = self.grid.apply_real_table(q, &self.symbol);
        let r: Vec<Complex64> = lin.iter().zip(q).map(|(l, v)| l - v * v.norm_sqr()).collect();
        let norm = self.grid.inner(&r, &r).sqrt();
        (r, norm)
    }
}

/// Applies `L_β f = (|D|−βD)/(1−β) f + f − 2|Q_β|²f − Q_β² conj(f)`.
pub fn apply_l_beta(p: &ProfileQBeta, f: &SpectralField) -> Result<SpectralField> {
    p.grid().check_same(f.grid())?;
    let op = linearized_operator(p);
    SpectralField::new(*p.grid(), op.apply(f.values()))
}

pub(crate) fn linearized_operator(p: &ProfileQBeta) -> RealLinearOperator {
    let grid = *p.grid();
    let prob = TravelingProblem::new(p.beta, grid);
    RealLinearOperator::linearization(grid, prob.symbol, p.field.values())
}

/// Fits a phase `γ` and translation `x₀` so that `e^{iγ}Q(· − x₀)` satisfies
/// `(·, iQ⁺) = (·, ∂_xQ⁺) = 0`, by a two-dimensional Newton iteration.
pub fn gauge_fix(grid: &Grid1D, q: &[Complex64]) -> Result<Vec<Complex64>> {
    let qp: Vec<Complex64> = grid.xs().iter().map(|&x| eval_q_plus(x)).collect();
    let iqp: Vec<Complex64> = qp.iter().map(|v| v * Complex64::i()).collect();
    let dqp: Vec<Complex64> = grid.xs().iter().map(|&x| eval_dq_plus(x)).collect();
    let (mut gamma, mut x0) = (0.0f64, 0.0f64);
    let mut current = q.to_vec();
    for _ in 0..50 {
        let shifted = grid.translate(q, x0);
        let rot = Complex64::from_polar(1.0, gamma);
        current = shifted.iter().map(|v| v * rot).collect();
        let g1 = grid.inner(&current, &iqp);
        let g2 = grid.inner(&current, &dqp);
        let scale = grid.inner(&current, &current).sqrt().max(1e-300);
        if g1.abs().max(g2.abs()) < 1e-14 * scale {
            return Ok(current);
        }
        let i_cur: Vec<Complex64> = current.iter().map(|v| v * Complex64::i()).collect();
        let d_cur: Vec<Complex64> = grid.derivative(&current).iter().map(|v| -v).collect();
        let j11 = grid.inner(&i_cur, &iqp);
        let j12 = grid.inner(&d_cur, &iqp);
        let j21 = grid.inner(&i_cur, &dqp);
        let j22 = grid.inner(&d_cur, &dqp);
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-14 {
            return Err(Error::NonConvergence {
                what: "gauge fit (singular Jacobian)".into(),
                last: g1.abs().max(g2.abs()),
                history: vec![],
            });
        }
        let dg = (j22 * g1 - j12 * g2) / det;
        let dx0 = (-j21 * g1 + j11 * g2) / det;
        gamma -= dg;
        x0 -= dx0;
        if !(gamma.is_finite() && x0.is_finite()) || x0.abs() > 0.25 * grid.length() {
            return Err(Error::NonConvergence {
                what: "gauge fit (diverged)".into(),
                last: f64::NAN,
                history: vec![],
            });
        }
    }
    let g1 = grid.inner(&current, &iqp);
    let g2 = grid.inner(&current, &dqp);
    if g1.abs().max(g2.abs()) < 1e-10 {
        Ok(current)
    } else {
        Err(Error::NonConvergence {
            what: "gauge fit".into(),
            last: g1.abs().max(g2.abs()),
            history: vec![],
        })
    }
}

/// Solves for `Q_β` with the default options and residual tolerance `tol`.
pub fn solve_q_beta(beta: f64, grid: Grid1D, tol: f64, init: &SpectralField) -> Result<ProfileQBeta> {
    solve_q_beta_with(
        beta,
        init,
        &QBetaOptions {
            tol,
            ..QBetaOptions::default()
        },
    )
    .and_then(|p| {
        grid.check_same(p.grid())?;
        Ok(p)
    })
}

/// Profile solver: Petviashvili-normalized fixed point
/// `Q ← M^{3/2} m_β∗(|Q|²Q)`, then Newton on the real-linearized system with
/// corrections orthogonal to the symmetry directions `iQ`, `∂Q`, then gauge
/// fixing.
pub fn solve_q_beta_with(beta: f64, init: &SpectralField, opts: &QBetaOptions) -> Result<ProfileQBeta> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::invalid(format!("beta = {beta} must lie in (0, 1)")));
    }
    let grid = *init.grid();
    if init.l2_norm() == 0.0 {
        return Err(Error::invalid("initial guess is the zero field"));
    }
    let prob = TravelingProblem::new(beta, grid);
    let inv: Vec<f64> = prob.symbol.iter().map(|s| 1.0 / s).collect();
    let mut q = init.values().to_vec();
    let mut history = Vec::new();
    let (_, mut res) = prob.residual(&q);
    history.push(res);
    let fp_target = opts.fixed_point_target.max(opts.tol);
    let mut fp_iters = 0;
    let mut best = res;
    let mut since_best = 0;
    while res > fp_target && fp_iters < opts.max_fixed_point {
        fp_iters += 1;
        let cubic: Vec<Complex64> = q.iter().map(|v| v * v.norm_sqr()).collect();
        let lin = grid.apply_real_table(&q, &prob.symbol);
        let m = grid.inner(&q, &lin) / grid.inner(&q, &cubic);
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::NonConvergence {
                what: format!("Q_beta fixed point at beta = {beta} (collapse)"),
                last: res,
                history,
            });
        }
        let f = m.powf(1.5);
        q = grid.apply_real_table(&cubic, &inv).iter().map(|v| v * f).collect();
        let norm = grid.inner(&q, &q).sqrt();
        if !norm.is_finite() || norm > 1e6 {
            return Err(Error::NonConvergence {
                what: format!("Q_beta fixed point at beta = {beta} (divergence)"),
                last: res,
                history,
            });
        }
        if norm < 1e-8 {
            return Err(Error::NonConvergence {
                what: format!("Q_beta fixed point at beta = {beta} (collapse to zero)"),
                last: res,
                history,
            });
        }
        res = prob.residual(&q).1;
        history.push(res);
        if res < 0.999 * best {
            best = res;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best > 200 {
                break;
            }
        }
    }
    q = gauge_fix(&grid, &q)?;
    let mut newton_iters = 0;
    loop {
        let (r, rn) = prob.residual(&q);
        res = rn;
        if res < opts.tol {
            break;
        }
        if newton_iters >= opts.max_newton {
            return Err(Error::NonConvergence {
                what: format!("Q_beta Newton polish at beta = {beta}"),
                last: res,
                history,
            });
        }
        newton_iters += 1;
        let op = RealLinearOperator::linearization(grid, prob.symbol.clone(), &q);
        let iq: Vec<Complex64> = q.iter().map(|v| v * Complex64::i()).collect();
        let dq = grid.derivative(&q);
        let rhs: Vec<Complex64> = r.iter().map(|v| -v).collect();
        let step = op.solve(&rhs, &[iq, dq], &opts.gmres)?;
        for (qj, s) in q.iter_mut().zip(&step.x) {
            *qj += s;
        }
        history.push(prob.residual(&q).1);
    }
    q = gauge_fix(&grid, &q)?;
    let residual = prob.residual(&q).1;
    let field = SpectralField::new(grid, q)?;
    let dfield = field.derivative();
    let tail_mass = field.tail_mass();
    let mut p = ProfileQBeta {
        beta,
        field,
        dfield,
        residual,
        constants: ProfileConstants::limit(),
        tail_mass,
        fixed_point_iterations: fp_iters,
        newton_iterations: newton_iters,
        history,
    };
    p.constants = profile_constants(&p);
    Ok(p)
}

/// Solves the profiles for every `β` in `betas` by continuation from `Q⁺`,
/// walking down in `β` with steps no larger than `max_step`. The returned
/// profiles are in the order of `betas`.
pub fn solve_q_beta_continuation(
    betas: &[f64],
    grid: Grid1D,
    opts: &QBetaOptions,
    max_step: f64,
) -> Result<Vec<ProfileQBeta>> {
    for &b in betas {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::invalid(format!("beta = {b} must lie in (0, 1)")));
        }
    }
    let mut order: Vec<usize> = (0..betas.len()).collect();
    order.sort_by(|&i, &j| betas[j].total_cmp(&betas[i]));
    let mut out: Vec<Option<ProfileQBeta>> = vec![None; betas.len()];
    let mut current = SzegoProfileQPlus::sample_periodized(grid);
    let mut current_beta = 1.0f64;
    for idx in order {
        let target = betas[idx];
        if let Some(prev) = out.iter().flatten().find(|p| p.beta == target) {
            out[idx] = Some(prev.clone());
            continue;
        }
        // Intermediate continuation stops.
        while current_beta - target > max_step + 1e-12 {
            let stop = current_beta - max_step;
            let p = solve_q_beta_with(stop, &current, opts)?;
            current = p.field.clone();
            current_beta = stop;
        }
        let p = solve_q_beta_with(target, &current, opts)?;
        current = p.field.clone();
        current_beta = target;
        out[idx] = Some(p);
    }
    Ok(out.into_iter().map(|p| p.expect("every beta solved")).collect())
}

/// `N_β`, `P_β`, `c_β` of a profile by grid quadrature.
pub fn profile_constants(p: &ProfileQBeta) -> ProfileConstants {
    let grid = p.grid();
    let q = p.field.values();
    let n = grid.inner(q, q) / (2.0 * PI);
    let modes = p.field.modes();
    let pm: f64 = modes
        .iter()
        .enumerate()
        .map(|(i, m)| grid.xi(i) * m.norm_sqr())
        .sum::<f64>()
        / grid.length();
    let cubic: Complex64 = q.iter().map(|v| v * v.norm_sqr()).sum::<Complex64>() * grid.dx();
    ProfileConstants {
        n,
        p: pm / (2.0 * PI),
        c: Complex64::i() * cubic / (2.0 * PI),
    }
}

/// `N_β` evaluated through Parseval in mode space.
pub fn mass_constant_from_modes(p: &ProfileQBeta) -> f64 {
    let modes = p.field.modes();
    modes.iter().map(|m| m.norm_sqr()).sum::<f64>() / p.grid().length() / (2.0 * PI)
}

/// Central finite-difference estimates of `Λ̃N_β` and `Λ̃P_β` from the two
/// neighbor profiles at `β ± h`.
pub fn constant_derivatives(
    center: &ProfileQBeta,
    lower: &ProfileQBeta,
    upper: &ProfileQBeta,
) -> Result<ConstantDerivatives> {
    let h2 = upper.beta - lower.beta;
    if !(h2 > 0.0) || !(lower.beta < center.beta && center.beta < upper.beta) {
        return Err(Error::invalid("neighbor profiles must bracket the center profile"));
    }
    let om = 1.0 - center.beta;
    Ok(ConstantDerivatives {
        lt_n: om * (upper.constants.n - lower.constants.n) / h2,
        lt_p: om * (upper.constants.p - lower.constants.p) / h2,
    })
}

/// Finite-difference step used for `β`-derivatives: `min(1e-3, (1−β)/10)`.
pub fn beta_step(beta: f64) -> f64 {
    (1e-3f64).min((1.0 - beta) / 10.0)
}
