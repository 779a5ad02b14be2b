//! End-to-end acceptance checks.
//!
//! Each check runs a complete computation at pinned settings and compares
//! the outcome against a fixed tolerance. A check that cannot be completed
//! (a solver error) is reported as an `Err`; a completed check that misses
//! its tolerance is reported with `pass == false`.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{run_with_diagnostics, synth_two_soliton, Equation, EvolutionConfig, Stepper};
use crate::modulation::{
    phase_subsystem_closed_form, phase_subsystem_rk, regime_report, run_regime, ModIntegrationOptions, RegimeConfig,
    RhsKind, SolvedProfiles,
};
use crate::profiles::{
    qplus_integral_identities, solve_family, solve_q_beta_continuation, solve_rho_beta_detailed, tail_prediction,
    torus_soliton_motion, FamilyMember, QBetaOptions, SzegoProfileQPlus,
};
use crate::spectral::{sobolev_norm, Grid1D, SpectralField};
use crate::szego::{integrate_full, integrate_resonant, sobolev_growth, ResonantParams, SzegoTwoSolitonState};

/// Number of acceptance checks.
pub const CRITERIA: usize = 12;

/// Outcome of one check.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    /// The headline measured quantity.
    pub measured: String,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:2}] {}: {} ({}; {:.2} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.detail,
            self.seconds
        )
    }
}

fn result(id: usize, name: &str, pass: bool, measured: String, detail: String, start: Instant) -> CriterionResult {
    CriterionResult {
        id,
        name: name.to_string(),
        pass,
        measured,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// `(1−β)^{1/2}|ln(1−β)|^{1/2}`, the convergence envelope of the profiles.
pub fn profile_envelope(beta: f64) -> f64 {
    let om = 1.0 - beta;
    (om * om.ln().abs()).sqrt()
}

/// The speeds at which the profile family is examined.
pub const FAMILY_BETAS: [f64; 4] = [0.9, 0.95, 0.99, 0.999];

/// Profile-family measurements shared by checks 2–4.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyBench {
    pub betas: Vec<f64>,
    pub det: Vec<f64>,
    /// `‖Q_β − Q⁺‖_{H^{1/2}}`.
    pub qplus_distance: Vec<f64>,
    /// `‖iρ_β − Q_β − (i/2)∂_yQ_β‖_{H^{1/2}}`.
    pub rho_deviation: Vec<f64>,
    pub seconds: f64,
}

/// Solves the family at [`FAMILY_BETAS`] on `L = 400`, `n = 2^15` and
/// measures determinants and distances.
pub fn family_bench() -> Result<FamilyBench> {
    let start = Instant::now();
    let grid = Grid1D::new(1 << 15, 400.0)?;
    let fam = solve_family(&FAMILY_BETAS, grid, &QBetaOptions::default())?;
    let qplus = SzegoProfileQPlus::sample_periodized(grid);
    let mut bench = FamilyBench {
        betas: FAMILY_BETAS.to_vec(),
        det: Vec::new(),
        qplus_distance: Vec::new(),
        rho_deviation: Vec::new(),
        seconds: 0.0,
    };
    for m in &fam {
        bench
            .qplus_distance
            .push(sobolev_norm(&m.center.field.sub(&qplus)?, 0.5)?);
        let (det, dev) = rho_measurements(m)?;
        bench.det.push(det);
        bench.rho_deviation.push(dev);
    }
    bench.seconds = start.elapsed().as_secs_f64();
    Ok(bench)
}

fn rho_measurements(m: &FamilyMember) -> Result<(f64, f64)> {
    let p = &m.center;
    let sol = solve_rho_beta_detailed(p, 1e-7)?;
    let i = Complex64::i();
    let target = p.field.add(&p.dfield.scale(0.5 * i))?;
    let dev = sobolev_norm(&sol.rho.scale(i).sub(&target)?, 0.5)?;
    Ok((m.nondegeneracy(&sol.rho)?.det, dev))
}

/// 1. The six integral identities of `Q⁺` by grid quadrature.
pub fn criterion_1() -> Result<CriterionResult> {
    let start = Instant::now();
    let grid = Grid1D::new(1 << 15, 400.0)?;
    let entries = qplus_integral_identities(&grid)?;
    let worst = entries.iter().map(|e| e.abs_error).fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    let pass = entries.len() == 6 && worst < 1e-5 && secs < 5.0;
    Ok(result(
        1,
        "Q+ integral identities",
        pass,
        format!("max abs error {worst:.2e}"),
        "6 identities at L = 400, n = 2^15; tolerance 1e-5, runtime limit 5 s".to_string(),
        start,
    ))
}

/// 2. Sign and limit of the nondegeneracy determinant.
pub fn criterion_2(bench: &FamilyBench) -> Result<CriterionResult> {
    let start = Instant::now();
    let limit = -PI.powi(4);
    let rel = |b: f64| {
        let j = bench.betas.iter().position(|x| *x == b).expect("beta in bench");
        ((bench.det[j] - limit) / limit).abs()
    };
    let (r999, r99) = (rel(0.999), rel(0.99));
    let negative = bench.det.iter().all(|d| *d < 0.0);
    let pass = negative && r999 < 0.10 && r99 < 0.25 && bench.seconds < 120.0;
    let dets: Vec<String> = bench.det.iter().map(|d| format!("{d:.3}")).collect();
    Ok(CriterionResult {
        seconds: bench.seconds + start.elapsed().as_secs_f64(),
        ..result(
            2,
            "nondegeneracy determinant",
            pass,
            format!("det = [{}] for beta = {:?}", dets.join(", "), bench.betas),
            format!(
                "relative distance to -pi^4: {:.1}% at 0.999 (limit 10%), {:.1}% at 0.99 (limit 25%); all negative: {negative}",
                100.0 * r999,
                100.0 * r99
            ),
            start,
        )
    })
}

/// 3. Convergence of `Q_β` to `Q⁺` in `H^{1/2}`.
pub fn criterion_3(bench: &FamilyBench) -> Result<CriterionResult> {
    let start = Instant::now();
    let ratios: Vec<f64> = bench
        .betas
        .iter()
        .zip(&bench.qplus_distance)
        .map(|(b, d)| d / profile_envelope(*b))
        .collect();
    let c = ratios.iter().cloned().fold(0.0, f64::max);
    let decreasing = bench.qplus_distance.windows(2).all(|w| w[1] < w[0]);
    Ok(result(
        3,
        "profile convergence to Q+",
        c <= 10.0 && decreasing,
        format!("fitted constant {c:.3}"),
        format!(
            "|Q_b - Q+|_H1/2 = {:?}; decreasing: {decreasing}; limit 10",
            bench
                .qplus_distance
                .iter()
                .map(|d| format!("{d:.4}"))
                .collect::<Vec<_>>()
        ),
        start,
    ))
}

/// 4. Structure of `ρ_β`.
pub fn criterion_4(bench: &FamilyBench) -> Result<CriterionResult> {
    let start = Instant::now();
    let ratios: Vec<f64> = bench
        .betas
        .iter()
        .zip(&bench.rho_deviation)
        .map(|(b, d)| d / profile_envelope(*b))
        .collect();
    let c = ratios.iter().cloned().fold(0.0, f64::max);
    let shrinking = bench.rho_deviation.windows(2).all(|w| w[1] < w[0]);
    Ok(result(
        4,
        "rho structure",
        c <= 10.0 && shrinking,
        format!("fitted constant {c:.3}"),
        format!(
            "|i rho - Q - (i/2) dQ|_H1/2 = {:?}; shrinking: {shrinking}; limit 10",
            bench
                .rho_deviation
                .iter()
                .map(|d| format!("{d:.4}"))
                .collect::<Vec<_>>()
        ),
        start,
    ))
}

/// 5. Far-field law and boundary-layer bound at `β = 0.999`.
///
/// Runs on `L = 4000`, `n = 2^16`: on a shorter box the periodic images
/// distort the `1/x` tail well before `x = 200`.
pub fn criterion_5() -> Result<CriterionResult> {
    let start = Instant::now();
    let grid = Grid1D::new(1 << 16, 4000.0)?;
    let p = solve_q_beta_continuation(&[0.999], grid, &QBetaOptions::default(), 0.01)?
        .pop()
        .ok_or_else(|| Error::invalid("empty continuation"))?;
    let mut worst = 0.0f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..=100 {
        let x = 20.0 * 10f64.powf(k as f64 / 100.0);
        let ratio = p.eval_line(x) / tail_prediction(&p, x)?.0;
        worst = worst.max((ratio - 1.0).norm());
        lo = lo.min(ratio.re);
        hi = hi.max(ratio.re);
    }
    // Near the box edge the periodic image of the `1/x²` tail adds a
    // comparable contribution, so the bound is checked on the interior
    // `20 ≤ x ≤ 0.45L`; the maximum over the whole half-box is reported too.
    let interior = 0.45 * grid.length();
    let (mut layer, mut layer_box) = (0.0f64, 0.0f64);
    for (j, v) in p.field.values().iter().enumerate() {
        let x = grid.x(j);
        if x >= 20.0 {
            let scaled = v.norm() * (1.0 - p.beta) * x * x;
            layer_box = layer_box.max(scaled);
            if x <= interior {
                layer = layer.max(scaled);
            }
        }
    }
    Ok(result(
        5,
        "tail law",
        worst <= 0.2 && layer <= 2.0,
        format!("max |ratio - 1| {worst:.3e}; max |Q|(1-b)x^2 {layer:.4}"),
        format!(
            "Re ratio in [{lo:.4}, {hi:.4}] on x in [20, 200] (band [0.8, 1.2]); boundary-layer limit 2 on [20, {interior}] (up to the box edge: {layer_box:.4})"
        ),
        start,
    ))
}

/// The generic two-soliton state used by the conservation check.
pub fn generic_szego_state() -> SzegoTwoSolitonState {
    SzegoTwoSolitonState {
        alpha1: Complex64::new(0.9, 0.2),
        alpha2: Complex64::new(-0.3, 0.7),
        kappa1: 1.2,
        kappa2: 0.8,
        x1: 2.0,
        x2: -2.0,
    }
}

/// 6. Invariants of the full two-soliton ODE.
pub fn criterion_6() -> Result<CriterionResult> {
    let start = Instant::now();
    let tr = integrate_full(&generic_szego_state(), 0.0, 50.0, 1e-12, 501)?;
    let drift = tr.max_conservation_drift();
    let identity = tr.max_identity_residual();
    let secs = start.elapsed().as_secs_f64();
    Ok(result(
        6,
        "Szego conservation",
        drift < 1e-8 && identity < 1e-9 && secs < 10.0,
        format!("relative drift {drift:.2e}; identity residual {identity:.2e}"),
        "501 outputs on [0, 50] at tol 1e-12; limits 1e-8, 1e-9 and 10 s".to_string(),
        start,
    ))
}

/// The `(K, M)` pairs of the resonant checks.
pub const RESONANT_CASES: [(f64, f64); 2] = [(1.0, 2.0), (0.5, 1.0)];

fn resonant_params(k: f64, m: f64) -> ResonantParams {
    ResonantParams {
        x0: 0.0,
        nu0: 0.5 * k,
        m,
        k,
    }
}

/// 7. Exact laws of the resonant subsystem.
pub fn criterion_7() -> Result<CriterionResult> {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut headline = Vec::new();
    for &(k, m) in &RESONANT_CASES {
        let p = resonant_params(k, m);
        let tr = integrate_resonant(&p, 0.0, 100.0, 1e-12, 501)?;
        let c0 = p.x0 * p.nu0;
        let law = tr
            .samples
            .iter()
            .filter(|s| s.t <= 20.0 + 1e-9)
            .map(|s| (s.x * s.nu - (c0 - m * k * k * s.t)).abs())
            .fold(0.0, f64::max);
        let end = tr.samples.last().expect("nonempty trajectory");
        let speed = end.x.abs() / (k * m * end.t);
        let scaled = |lo: f64, hi: f64| {
            tr.samples
                .iter()
                .filter(|s| s.t >= lo && s.t <= hi)
                .map(|s| s.gamma_dot.abs() * s.t * s.t)
                .fold(0.0, f64::max)
        };
        let (early, late) = (scaled(10.0, 50.0), scaled(50.0, 100.0));
        let bounded = late.is_finite() && late <= 1.1 * early;
        pass &= law < 1e-8 && (0.9..=1.1).contains(&speed) && bounded;
        headline.push(format!("(K,M)=({k},{m}): law err {law:.1e}, |X|/(KMt) {speed:.5}"));
        parts.push(format!(
            "(K,M)=({k},{m}): max |Gdot| t^2 {early:.4} on [10,50], {late:.4} on [50,100] (2/M = {:.4})",
            2.0 / m
        ));
    }
    Ok(result(
        7,
        "resonant exactness",
        pass,
        headline.join("; "),
        parts.join("; "),
        start,
    ))
}

/// 8. Sobolev growth of the resonant reconstruction over `t ∈ [10, 100]`.
pub fn criterion_8() -> Result<CriterionResult> {
    let start = Instant::now();
    let (t_lo, t_hi) = (10.0, 100.0);
    let mut pass = true;
    let mut headline = Vec::new();
    for &(k, m) in &RESONANT_CASES {
        let tr = integrate_resonant(&resonant_params(k, m), 0.0, t_hi, 1e-12, 201)?;
        let mut fits = Vec::new();
        for &s in &[0.75, 1.0] {
            let g = sobolev_growth(&tr, s)?;
            let e = g.fitted_exponent(t_lo, t_hi)?;
            pass &= (e - (2.0 * s - 1.0)).abs() <= 0.15;
            fits.push(format!("s={s}: {e:.4}"));
        }
        let half = sobolev_growth(&tr, 0.5)?.relative_variation(t_lo, t_hi);
        pass &= half < 0.2;
        headline.push(format!("(K,M)=({k},{m}) {} H1/2 variation {half:.2e}", fits.join(", ")));
    }
    Ok(result(
        8,
        "Szego growth law",
        pass,
        headline.join("; "),
        "fitted exponent of |u|_Hs on t in [10, 100] vs 2s-1 within 0.15; H1/2 variation below 20%".into(),
        start,
    ))
}

/// 9. The turbulent modulation regime at `η = 0.01`, `δ = 0.1`.
pub fn criterion_9() -> Result<CriterionResult> {
    let start = Instant::now();
    let cfg = RegimeConfig::new(0.01, 0.1)?;
    let tm = cfg.t_minus();
    let tr = run_regime(&cfg, RhsKind::Turbulent, 10.0 * tm, &ModIntegrationOptions::default())?;
    let report = regime_report(&tr, &cfg);
    let claim = |p: &str| {
        report
            .claim(p)
            .ok_or_else(|| Error::invalid(format!("missing claim {p}")))
    };
    let speed = claim("(i) ")?;
    let b = claim("(i')")?;
    let plateau = claim("(iii)")?;
    let eps = 1e-9 * tm;
    let (rlo, rhi) = tr
        .samples
        .iter()
        .filter(|(t, _)| *t >= cfg.t_in() - eps && *t <= tm + eps)
        .map(|(t, p)| p.r / t)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let r_ok = rlo >= 0.9 && rhi <= 1.1;
    let pass = speed.pass && b.pass && r_ok && plateau.pass;
    Ok(result(
        9,
        "turbulent modulation regime",
        pass,
        format!(
            "(1-b2)t^2/eta constant {:.4} (<= 3): {}; t^2 b: {}; R/t in [{rlo:.4}, {rhi:.4}] (band [0.9, 1.1]): {r_ok}; plateau variation {:.3} (< 0.5): {}",
            speed.fitted, speed.pass, b.pass, plateau.fitted, plateau.pass
        ),
        format!("{}; {}", b.detail, plateau.detail),
        start,
    ))
}

/// 10. Closed-form phase subsystem against Runge–Kutta integration.
pub fn criterion_10() -> Result<CriterionResult> {
    let start = Instant::now();
    let cfg = RegimeConfig::new(0.01, 0.1)?;
    let (tin, tm) = (cfg.t_in(), cfg.t_minus());
    // Twenty times ordered away from T⁻.
    let times: Vec<f64> = (1..=20).map(|k| tm - (tm - tin) * k as f64 / 20.0).collect();
    let rk = phase_subsystem_rk(&cfg, &times, 1e-12)?;
    let mut err = 0.0f64;
    let mut bound_ratio = 0.0f64;
    for (t, (g, v)) in times.iter().zip(&rk) {
        let (gc, vc) = phase_subsystem_closed_form(&cfg, *t)?;
        err = err.max((g - gc).abs()).max((v - vc).abs());
        let et = cfg.eta * t;
        bound_ratio = bound_ratio.max(gc.abs() / (5.0 * et * et.ln().abs()));
    }
    Ok(result(
        10,
        "phase subsystem",
        err < 1e-8 && bound_ratio <= 1.0,
        format!("max deviation {err:.2e}; max |Gamma|/(5 eta t |ln eta t|) {bound_ratio:.4}"),
        format!("20 times in [T_in, T-) = [{tin:.3}, {tm:.3}); limits 1e-8 and 1"),
        start,
    ))
}

fn l2_distance(a: &[Complex64], b: &[Complex64], dx: f64) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>() * dx).sqrt()
}

/// 11. Persistence of the exact solitons under the PDE steppers.
///
/// The Szegő soliton is the exact periodic one on `L = 400`. The half-wave
/// traveling wave at `β = 0.9` is solved on a grid of length 400 in the
/// profile variable `y = x/(1−β)` and evolved on the same samples read as a
/// grid of length 40 in `x`.
pub fn criterion_11() -> Result<CriterionResult> {
    let start = Instant::now();
    let dt = 1e-3;
    let mut pass = true;
    let mut parts = Vec::new();

    let g = Grid1D::new(1 << 14, 400.0)?;
    let u0 = SzegoProfileQPlus::sample_torus_soliton(g);
    let (c, om) = torus_soliton_motion(g.length());
    let run = run_with_diagnostics(&quiet(EvolutionConfig::new(Equation::Szego, g, dt, 1.0)), &u0, None)?;
    let exact: Vec<Complex64> = g
        .translate(u0.values(), c)
        .iter()
        .map(|v| v * Complex64::from_polar(1.0, -om))
        .collect();
    let err = l2_distance(run.final_field.values(), &exact, g.dx());
    let (dm, dp, de) = run.max_conservation_drift();
    let drift = dm.max(dp).max(de);
    pass &= err < 1e-3 && drift < 1e-8;
    parts.push(format!("Szego: L2 error {err:.2e}, drift {drift:.1e}"));

    let beta = 0.9;
    let gy = Grid1D::new(1 << 14, 400.0)?;
    let opts = QBetaOptions {
        tol: 1e-11,
        ..Default::default()
    };
    let p = solve_q_beta_continuation(&[beta], gy, &opts, 0.02)?
        .pop()
        .ok_or_else(|| Error::invalid("empty continuation"))?;
    let gx = Grid1D::new(1 << 14, 400.0 * (1.0 - beta))?;
    let u0 = SpectralField::new(gx, p.field.values().to_vec())?;
    let run = run_with_diagnostics(&quiet(EvolutionConfig::new(Equation::Halfwave, gx, dt, 1.0)), &u0, None)?;
    let exact: Vec<Complex64> = gx
        .translate(u0.values(), beta)
        .iter()
        .map(|v| v * Complex64::from_polar(1.0, 1.0))
        .collect();
    let err = l2_distance(run.final_field.values(), &exact, gx.dx());
    let (dm, dp, de) = run.max_conservation_drift();
    let drift = dm.max(dp).max(de);
    let back = Stepper::new(Equation::Halfwave, gx, -run.dt)?;
    let mut v = run.final_field.values().to_vec();
    for k in 0..run.steps {
        back.step(&mut v, 1.0 - k as f64 * run.dt)?;
    }
    let rev = l2_distance(&v, u0.values(), gx.dx()) / u0.l2_norm();
    pass &= err < 1e-3 && drift < 1e-8 && rev < 1e-12;
    parts.push(format!(
        "half-wave b=0.9: L2 error {err:.2e}, drift {drift:.1e}, reversibility {rev:.1e}"
    ));

    Ok(result(
        11,
        "PDE soliton persistence",
        pass,
        parts.join("; "),
        "t = 1 at dt = 1e-3; limits: L2 error 1e-3, relative drift 1e-8, relative L2 reversibility 1e-12".into(),
        start,
    ))
}

fn quiet(mut cfg: EvolutionConfig) -> EvolutionConfig {
    cfg.stride = 100;
    cfg.sobolev_exponents = vec![];
    cfg
}

/// 12. `H¹` growth of the half-wave two-bubble evolution at `η = 0.05`,
///     `δ = 0.15` over `[T_in, T⁻]`.
pub fn criterion_12() -> Result<CriterionResult> {
    let start = Instant::now();
    let cfg = RegimeConfig::new(0.05, 0.15)?;
    let (tin, tm) = (cfg.t_in(), cfg.t_minus());
    let tr = run_regime(&cfg, RhsKind::Turbulent, tm, &ModIntegrationOptions::default())?;
    let mut p = tr.first().1;
    let gy = Grid1D::new(1 << 14, 400.0)?;
    let opts = QBetaOptions {
        tol: 1e-10,
        ..Default::default()
    };
    let mut profiles = SolvedProfiles::new(1e-9);
    for q in solve_q_beta_continuation(&[p.beta1, p.beta2], gy, &opts, 0.02)? {
        profiles.insert_profile(q);
    }
    // Center the pair in the box.
    let shift = -0.5 * (p.x1 + p.x2);
    p.x1 += shift;
    p.x2 += shift;
    let g = Grid1D::new(1 << 15, 20.0)?;
    let u0 = synth_two_soliton(&p, &profiles, &g)?;
    let mut ec = EvolutionConfig::new(Equation::Halfwave, g, 0.45 * g.dx(), tm);
    ec.t_start = tin;
    ec.stride = 100;
    ec.sobolev_exponents = vec![1.0];
    let run = run_with_diagnostics(&ec, &u0, None)?;
    let h1sq: Vec<(f64, f64)> = run
        .records
        .iter()
        .map(|r| (r.t, r.hs_norm(1.0).map(|h| h * h).unwrap_or(f64::NAN)))
        .collect();
    let monotone = h1sq.windows(2).all(|w| w[1].1 >= w[0].1);
    let ratios: Vec<f64> = h1sq.iter().map(|(t, h)| h * cfg.eta / (t * t)).collect();
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (_, _, de) = run.max_conservation_drift();
    let pass = run.halted.is_none() && monotone && lo >= 0.25 && hi <= 4.0;
    Ok(result(
        12,
        "half-wave turbulent growth",
        pass,
        format!("monotone H1: {monotone}; eta |u|_H1^2 / t^2 in [{lo:.3}, {hi:.3}] (band [0.25, 4])"),
        format!(
            "t in [{tin:.3}, {tm:.3}], |u|_H1^2 {:.1} -> {:.1}; divided by 4 pi: [{:.3}, {:.3}]; energy drift {de:.1e}",
            h1sq.first().map(|x| x.1).unwrap_or(f64::NAN),
            h1sq.last().map(|x| x.1).unwrap_or(f64::NAN),
            lo / (4.0 * PI),
            hi / (4.0 * PI)
        ),
        start,
    ))
}

/// Runs check `id` (1–12) on its own.
pub fn run_criterion(id: usize) -> Result<CriterionResult> {
    match id {
        1 => criterion_1(),
        2 => criterion_2(&family_bench()?),
        3 => criterion_3(&family_bench()?),
        4 => criterion_4(&family_bench()?),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(),
        _ => Err(Error::invalid(format!(
            "no acceptance check numbered {id} (expected 1..={CRITERIA})"
        ))),
    }
}

/// Runs every check in order, sharing the profile-family solve between
/// checks 2–4.
pub fn run_all() -> Vec<(usize, Result<CriterionResult>)> {
    let mut out = Vec::with_capacity(CRITERIA);
    out.push((1, criterion_1()));
    match family_bench() {
        Ok(bench) => {
            out.push((2, criterion_2(&bench)));
            out.push((3, criterion_3(&bench)));
            out.push((4, criterion_4(&bench)));
        }
        Err(e) => {
            let msg = e.to_string();
            for id in 2..=4 {
                out.push((id, Err(Error::invalid(format!("profile family solve failed: {msg}")))));
            }
        }
    }
    for id in 5..=CRITERIA {
        out.push((id, run_criterion(id)));
    }
    out
}
