//! Simulation driver: configuration, diagnostics, soliton tracking and
//! output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::stepper::{pi_minus_content, Equation, Stepper};
use crate::modulation::ModTrajectory;
use crate::spectral::{conserved_triple, sobolev_norm_modes, Grid1D, SpectralField};

/// Settings of a simulation.
#[derive(Debug, Clone, Serialize)]
pub struct EvolutionConfig {
    pub equation: Equation,
    /// Requested time step; the run uses the largest step not above it that
    /// divides the window evenly.
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
    #[serde(skip)]
    pub grid: Grid1D,
    /// A diagnostics record is emitted every `stride` steps.
    pub stride: usize,
    /// Exponents `s` of the recorded `H^s` norms.
    pub sobolev_exponents: Vec<f64>,
    /// Accept `dt > dx/2` with a warning instead of an error.
    pub force: bool,
}

impl EvolutionConfig {
    pub fn new(equation: Equation, grid: Grid1D, dt: f64, t_end: f64) -> Self {
        Self {
            equation,
            dt,
            t_start: 0.0,
            t_end,
            grid,
            stride: 100,
            sobolev_exponents: vec![0.5, 1.0],
            force: false,
        }
    }

    /// Checks `0 < dt ≤ dx/2` (unless `force`), `t_end ≥ t_start`, `stride ≥ 1`.
    pub fn validate(&self) -> Result<()> {
        let dx = self.grid.dx();
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid(format!("dt = {} must be positive", self.dt)));
        }
        if self.dt > 0.5 * dx {
            let msg = format!("dt = {} exceeds half the grid spacing ({})", self.dt, 0.5 * dx);
            if !self.force {
                return Err(Error::invalid(msg));
            }
            log::warn!("{msg}");
        }
        if !(self.t_end >= self.t_start && self.t_end.is_finite() && self.t_start.is_finite()) {
            return Err(Error::invalid("t_end must be finite and not before t_start"));
        }
        if self.stride == 0 {
            return Err(Error::invalid("diagnostic stride must be positive"));
        }
        if self.sobolev_exponents.iter().any(|s| !(*s >= 0.0)) {
            return Err(Error::invalid("Sobolev exponents must be nonnegative"));
        }
        Ok(())
    }

    /// `(number of steps, effective dt)`.
    pub fn schedule(&self) -> (usize, f64) {
        let span = self.t_end - self.t_start;
        if span == 0.0 {
            return (0, self.dt);
        }
        let steps = (span / self.dt - 1e-9).ceil().max(1.0) as usize;
        (steps, span / steps as f64)
    }
}

/// Positions and half-maximum widths of the (at most two) tallest peaks of
/// `|u|`; missing peaks are NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrackedPeaks {
    pub x: [f64; 2],
    pub width: [f64; 2],
    pub height: [f64; 2],
}

/// One diagnostics sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub momentum: f64,
    /// The Hamiltonian of the evolved equation: `½∫||D|^{1/2}u|² − ¼∫|u|⁴`
    /// for the half-wave and transport Szegő flows, `¼∫|u|⁴` for the plain
    /// Szegő flow.
    pub energy: f64,
    /// `(s, ‖u‖_{H^s})` for each configured exponent.
    pub hs: Vec<(f64, f64)>,
    pub peaks: TrackedPeaks,
    /// Relative `Π⁻` content (Szegő runs; zero for the half-wave).
    pub pi_minus: f64,
    /// Bubble centers predicted by a supplied modulation trajectory.
    pub predicted: Option<[f64; 2]>,
    /// Largest distance between tracked and predicted centers.
    pub tracking_deviation: Option<f64>,
}

impl DiagnosticsRecord {
    pub fn hs_norm(&self, s: f64) -> Option<f64> {
        self.hs.iter().find(|(e, _)| (*e - s).abs() < 1e-12).map(|(_, v)| *v)
    }
}

/// Result of a simulation.
#[derive(Debug, Clone)]
pub struct EvolutionRun {
    pub records: Vec<DiagnosticsRecord>,
    /// Last finite state.
    pub final_field: SpectralField,
    pub t_final: f64,
    pub steps: usize,
    pub dt: f64,
    /// Why the run stopped early, if it did.
    pub halted: Option<String>,
}

impl EvolutionRun {
    /// Largest relative change of mass, momentum and energy over the records.
    pub fn max_conservation_drift(&self) -> (f64, f64, f64) {
        let r0 = &self.records[0];
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        self.records.iter().fold((0.0, 0.0, 0.0), |acc, r| {
            (
                acc.0.max(rel(r.mass, r0.mass)),
                acc.1.max(rel(r.momentum, r0.momentum)),
                acc.2.max(rel(r.energy, r0.energy)),
            )
        })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv_to(&mut f)?;
        f.flush()?;
        Ok(())
    }

    /// CSV with columns `t, mass, momentum, energy, hs_{s}…, peak1_x,
    /// peak2_x, width1, width2`.
    pub fn write_csv_to(&self, w: &mut impl Write) -> Result<()> {
        let exps: Vec<f64> = self
            .records
            .first()
            .map(|r| r.hs.iter().map(|h| h.0).collect())
            .unwrap_or_default();
        let mut header = vec!["t".to_string(), "mass".into(), "momentum".into(), "energy".into()];
        header.extend(exps.iter().map(|s| format!("hs_{s}")));
        header.extend(["peak1_x", "peak2_x", "width1", "width2"].iter().map(|s| s.to_string()));
        writeln!(w, "{}", header.join(","))?;
        for r in &self.records {
            let mut row = vec![r.t, r.mass, r.momentum, r.energy];
            row.extend(r.hs.iter().map(|h| h.1));
            row.extend([r.peaks.x[0], r.peaks.x[1], r.peaks.width[0], r.peaks.width[1]]);
            let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// JSON header written next to a binary checkpoint.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct CheckpointHeader {
    pub t: f64,
    pub equation: Equation,
    pub n: usize,
    pub length: f64,
}

/// Writes `field` to `<stem>.bin` and its header to `<stem>.json`.
pub fn write_checkpoint(stem: &Path, field: &SpectralField, t: f64, equation: Equation) -> Result<()> {
    field.write_binary(&stem.with_extension("bin"))?;
    let header = CheckpointHeader {
        t,
        equation,
        n: field.grid().n(),
        length: field.grid().length(),
    };
    std::fs::write(stem.with_extension("json"), serde_json::to_string_pretty(&header)?)?;
    Ok(())
}

/// Reads a checkpoint written by [`write_checkpoint`].
pub fn read_checkpoint(stem: &Path) -> Result<(CheckpointHeader, SpectralField)> {
    let header: CheckpointHeader = serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json"))?)?;
    let field = SpectralField::read_binary(&stem.with_extension("bin"))?;
    if field.grid().n() != header.n || field.grid().length() != header.length {
        return Err(Error::Parse("checkpoint header does not match the field".into()));
    }
    Ok((header, field))
}

/// Finds the two tallest separated peaks of `|u|`. When `seeds` are given,
/// each peak is searched in a window of half-width `radius` around its seed;
/// otherwise the second peak is the tallest maximum outside the half-maximum
/// region of the first.
pub fn track_peaks(field: &SpectralField, seeds: Option<([f64; 2], f64)>) -> TrackedPeaks {
    let grid = field.grid();
    let amp: Vec<f64> = field.values().iter().map(|v| v.norm()).collect();
    let n = amp.len();
    let argmax = |pred: &dyn Fn(usize) -> bool| -> Option<usize> {
        (0..n).filter(|&i| pred(i)).max_by(|&a, &b| amp[a].total_cmp(&amp[b]))
    };
    let mut found: Vec<usize> = Vec::new();
    match seeds {
        Some((centers, radius)) => {
            for c in centers {
                if let Some(i) = argmax(&|i| (grid.x(i) - c).abs() <= radius) {
                    found.push(i);
                }
            }
        }
        None => {
            if let Some(i0) = argmax(&|_| true) {
                found.push(i0);
                let (lo, hi) = half_max_bounds(&amp, i0);
                // Exclude the first peak's half-maximum region (periodically).
                let inside = |i: usize| {
                    if lo <= hi {
                        i >= lo && i <= hi
                    } else {
                        i >= lo || i <= hi
                    }
                };
                if let Some(i1) = argmax(&|i| !inside(i) && is_local_max(&amp, i)) {
                    if amp[i1] > 1e-3 * amp[i0] {
                        found.push(i1);
                    }
                }
            }
        }
    }
    let mut peaks: Vec<(f64, f64, f64)> = found
        .iter()
        .map(|&i| {
            let (x, h) = refine(&amp, i, grid);
            let (lo, hi) = half_max_bounds(&amp, i);
            let width = ((hi as f64 - lo as f64).rem_euclid(n as f64) + 1.0) * grid.dx();
            (x, width, h)
        })
        .collect();
    peaks.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = TrackedPeaks {
        x: [f64::NAN; 2],
        width: [f64::NAN; 2],
        height: [f64::NAN; 2],
    };
    for (k, p) in peaks.iter().take(2).enumerate() {
        out.x[k] = p.0;
        out.width[k] = p.1;
        out.height[k] = p.2;
    }
    out
}

fn is_local_max(amp: &[f64], i: usize) -> bool {
    let n = amp.len();
    amp[i] >= amp[(i + n - 1) % n] && amp[i] >= amp[(i + 1) % n]
}

/// Indices of the last samples above half maximum on either side of `i`.
fn half_max_bounds(amp: &[f64], i: usize) -> (usize, usize) {
    let n = amp.len();
    let half = 0.5 * amp[i];
    let mut lo = i;
    let mut steps = 0;
    while amp[(lo + n - 1) % n] >= half && steps < n {
        lo = (lo + n - 1) % n;
        steps += 1;
    }
    let mut hi = i;
    steps = 0;
    while amp[(hi + 1) % n] >= half && steps < n {
        hi = (hi + 1) % n;
        steps += 1;
    }
    (lo, hi)
}

/// Parabolic refinement of a discrete maximum.
fn refine(amp: &[f64], i: usize, grid: &Grid1D) -> (f64, f64) {
    let n = amp.len();
    let (a, b, c) = (amp[(i + n - 1) % n], amp[i], amp[(i + 1) % n]);
    let den = a - 2.0 * b + c;
    let off = if den < 0.0 { 0.5 * (a - c) / den } else { 0.0 };
    (grid.x(i) + off * grid.dx(), b - 0.25 * (a - c) * off)
}

fn predicted_centers(traj: &ModTrajectory, t: f64) -> Option<[f64; 2]> {
    let s = traj.sorted();
    let first = s.first()?;
    let last = s.last()?;
    if t < first.0 || t > last.0 {
        return None;
    }
    let k = s.partition_point(|p| p.0 < t).max(1).min(s.len() - 1);
    let (ta, pa) = &s[k - 1];
    let (tb, pb) = &s[k];
    let w = if tb > ta { (t - ta) / (tb - ta) } else { 0.0 };
    Some([pa.x1 + w * (pb.x1 - pa.x1), pa.x2 + w * (pb.x2 - pa.x2)])
}

fn record(cfg: &EvolutionConfig, field: &SpectralField, t: f64, traj: Option<&ModTrajectory>) -> DiagnosticsRecord {
    let grid = field.grid();
    let modes = field.modes();
    let triple = conserved_triple(field);
    let energy = match cfg.equation {
        // ¼∫|u|⁴ = ½∫||D|^{1/2}u|² − (half-wave energy).
        Equation::Szego => 0.5 * crate::spectral::half_derivative_norm_sqr(field) - triple.energy,
        _ => triple.energy,
    };
    let predicted = traj.and_then(|tr| predicted_centers(tr, t));
    let peaks = match predicted {
        Some(c) => {
            let radius = (0.25 * (c[1] - c[0]).abs()).max(8.0 * grid.dx());
            track_peaks(field, Some((c, radius)))
        }
        None => track_peaks(field, None),
    };
    let tracking_deviation = predicted.map(|c| (peaks.x[0] - c[0]).abs().max((peaks.x[1] - c[1]).abs()));
    DiagnosticsRecord {
        t,
        mass: triple.mass,
        momentum: triple.momentum,
        energy,
        hs: cfg
            .sobolev_exponents
            .iter()
            .map(|&s| (s, sobolev_norm_modes(grid, &modes, s)))
            .collect(),
        peaks,
        pi_minus: if cfg.equation.is_szego() {
            pi_minus_content(grid, &modes)
        } else {
            0.0
        },
        predicted,
        tracking_deviation,
    }
}

/// Runs the configured simulation from `u0`, recording diagnostics every
/// `stride` steps and at the end. A non-finite state halts the run; the
/// last finite state is returned with `halted` set.
pub fn run_with_diagnostics(
    cfg: &EvolutionConfig,
    u0: &SpectralField,
    traj: Option<&ModTrajectory>,
) -> Result<EvolutionRun> {
    cfg.validate()?;
    if *u0.grid() != cfg.grid {
        return Err(Error::invalid("initial field grid differs from the configured grid"));
    }
    let (steps, dt) = cfg.schedule();
    let mut records = vec![record(cfg, u0, cfg.t_start, traj)];
    let mut u = u0.values().to_vec();
    let mut halted = None;
    let mut done = 0;
    if steps > 0 {
        let stepper = Stepper::new(cfg.equation, cfg.grid, dt)?;
        for k in 0..steps {
            let t = cfg.t_start + k as f64 * dt;
            match stepper.step(&mut u, t) {
                Ok(()) => {}
                Err(Error::NonFinite { t }) => {
                    log::warn!("non-finite field at t = {t}; halting with the last finite state");
                    halted = Some(format!("non-finite field after t = {t}"));
                    break;
                }
                Err(e) => return Err(e),
            }
            done = k + 1;
            if done % cfg.stride == 0 || done == steps {
                let field = SpectralField::new(cfg.grid, u.clone())?;
                records.push(record(cfg, &field, cfg.t_start + done as f64 * dt, traj));
            }
        }
    }
    let t_final = cfg.t_start + done as f64 * dt;
    Ok(EvolutionRun {
        records,
        final_field: SpectralField::new(cfg.grid, u)?,
        t_final,
        steps: done,
        dt,
        halted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn tracker_finds_two_peaks() {
        let g = Grid1D::new(2048, 40.0).unwrap();
        let f = SpectralField::from_fn(g, |x| {
            Complex64::new(
                2.0 / (1.0 + ((x + 5.0) / 0.5).powi(2)) + 1.0 / (1.0 + ((x - 7.0) / 0.2).powi(2)),
                0.0,
            )
        });
        let p = track_peaks(&f, None);
        assert!((p.x[0] + 5.0).abs() < 1e-2 && (p.x[1] - 7.0).abs() < 1e-2);
        assert!((p.width[0] - 1.0).abs() < 0.05 && (p.width[1] - 0.4).abs() < 0.05);
        let s = track_peaks(&f, Some(([-4.0, 6.5], 2.0)));
        assert!((s.x[0] + 5.0).abs() < 1e-2 && (s.x[1] - 7.0).abs() < 1e-2);
    }

    #[test]
    fn schedule_divides_window() {
        let g = Grid1D::new(1024, 100.0).unwrap();
        let mut c = EvolutionConfig::new(Equation::Halfwave, g, 0.03, 1.0);
        c.t_start = 0.0;
        let (n, dt) = c.schedule();
        assert_eq!(n, 34);
        assert!((dt * n as f64 - 1.0).abs() < 1e-15 && dt <= 0.03);
        c.dt = 0.1;
        assert!(c.validate().unwrap_err().is_validation());
    }

    #[test]
    fn checkpoint_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid1D::new(64, 10.0).unwrap();
        let f = SpectralField::from_fn(g, |x| Complex64::new(x.sin(), x.cos()));
        let stem = dir.path().join("ck");
        write_checkpoint(&stem, &f, 1.5, Equation::Szego).unwrap();
        let (h, r) = read_checkpoint(&stem).unwrap();
        assert_eq!(h.t, 1.5);
        assert_eq!(h.equation, Equation::Szego);
        assert_eq!(r.values(), f.values());
    }
}
