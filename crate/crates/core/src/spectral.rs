//! Uniform periodic grids, Fourier transforms with a continuum-consistent
//! normalization, Fourier multipliers, the Szegő projectors, real inner
//! products, Sobolev norms and the conserved functionals of the half-wave flow.
//!
//! Transform convention: for samples `u_j = u(x_j)` with
//! `x_j = -L/2 + j dx`, the mode attached to `ξ_k = 2πk/L` is
//!
//! ```text
//!     û_k = dx · Σ_j u_j e^{-i ξ_k x_j}   ≈   ∫ u(x) e^{-i x ξ_k} dx
//! ```
//!
//! and the inverse is `u_j = (1/L) Σ_k û_k e^{i ξ_k x_j}`. With this scaling
//! Parseval reads `Σ_j |u_j|² dx = (1/L) Σ_k |û_k|²`, which is the discrete
//! form of `∫|u|² = (2π)^{-1} ∫|û|²`.
//!
//! Modes are stored in FFT order: index `k < n/2` carries mode `k`, index
//! `k ≥ n/2` carries mode `k - n`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

type Plans = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

/// A uniform periodic grid on `[-L/2, L/2)` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    length: f64,
}

impl Grid1D {
    /// Creates a grid; `n` must be a power of two with `n ≥ 16` and `length`
    /// must be positive and finite.
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two and at least 16"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "length = {length} must be positive and finite"
            )));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Spacing of the frequency lattice, `2π/L`.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Position of sample `j`.
    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Integer mode number `k ∈ [-n/2, n/2)` stored at FFT index `idx`.
    pub fn mode_number(&self, idx: usize) -> i64 {
        let n = self.n as i64;
        let i = idx as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// FFT index holding mode number `k`; `None` if `k` is out of range.
    pub fn index_of_mode(&self, k: i64) -> Option<usize> {
        let n = self.n as i64;
        if k < -n / 2 || k >= n / 2 {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + n) as usize)
        }
    }

    /// Frequency `ξ = 2πk/L` stored at FFT index `idx`.
    pub fn xi(&self, idx: usize) -> f64 {
        self.mode_number(idx) as f64 * self.dxi()
    }

    pub fn xis(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.xi(i)).collect()
    }

    /// Largest resolved frequency `π/dx`.
    pub fn xi_max(&self) -> f64 {
        PI / self.dx()
    }

    pub(crate) fn check_same(&self, other: &Grid1D) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                n1: self.n,
                l1: self.length,
                n2: other.n,
                l2: other.length,
            })
        }
    }

    /// Forward transform of raw samples with the continuum normalization.
    pub fn forward(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.n, "sample count does not match grid");
        let mut buf = values.to_vec();
        plans(self.n).0.process(&mut buf);
        let dx = self.dx();
        for (k, m) in buf.iter_mut().enumerate() {
            // e^{-iξ_k x_0} with x_0 = -L/2 equals (-1)^k.
            let s = if k % 2 == 0 { dx } else { -dx };
            *m *= s;
        }
        buf
    }

    /// Inverse of [`Grid1D::forward`].
    pub fn inverse(&self, modes: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(modes.len(), self.n, "mode count does not match grid");
        let inv_l = 1.0 / self.length;
        let mut buf: Vec<Complex64> = modes
            .iter()
            .enumerate()
            .map(|(k, m)| if k % 2 == 0 { *m * inv_l } else { -*m * inv_l })
            .collect();
        plans(self.n).1.process(&mut buf);
        buf
    }

    /// Applies a tabulated symbol (FFT order) to raw samples.
    pub fn apply_table(&self, values: &[Complex64], table: &[Complex64]) -> Vec<Complex64> {
        let mut modes = self.forward(values);
        for (m, s) in modes.iter_mut().zip(table) {
            *m *= *s;
        }
        self.inverse(&modes)
    }

    /// Applies a real tabulated symbol (FFT order) to raw samples.
    pub fn apply_real_table(&self, values: &[Complex64], table: &[f64]) -> Vec<Complex64> {
        let mut modes = self.forward(values);
        for (m, s) in modes.iter_mut().zip(table) {
            *m *= *s;
        }
        self.inverse(&modes)
    }

    /// Real inner product `Re Σ a conj(b) dx` of raw sample vectors.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> f64 {
        real_dot(a, b) * self.dx()
    }

    /// Spectral derivative `∂_x` of raw samples.
    pub fn derivative(&self, values: &[Complex64]) -> Vec<Complex64> {
        let table: Vec<Complex64> = self.xis().into_iter().map(|xi| Complex64::new(0.0, xi)).collect();
        self.apply_table(values, &table)
    }

    /// Translates samples by `shift` (the result samples `u(x - shift)`),
    /// exactly for band-limited periodic data.
    pub fn translate(&self, values: &[Complex64], shift: f64) -> Vec<Complex64> {
        let table: Vec<Complex64> = self
            .xis()
            .into_iter()
            .map(|xi| Complex64::from_polar(1.0, -xi * shift))
            .collect();
        self.apply_table(values, &table)
    }
}

/// `Re Σ a_j conj(b_j)` without the quadrature weight.
pub fn real_dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

/// A Fourier multiplier `ξ ↦ σ(ξ)` with a descriptive tag.
#[derive(Clone)]
pub struct MultiplierSymbol {
    tag: String,
    f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol").field("tag", &self.tag).finish()
    }
}

impl MultiplierSymbol {
    pub fn new(tag: impl Into<String>, f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            tag: tag.into(),
            f: Arc::new(f),
        }
    }

    pub fn real(tag: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(tag, move |xi| Complex64::new(f(xi), 0.0))
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        (self.f)(xi)
    }

    pub fn identity() -> Self {
        Self::real("1", |_| 1.0)
    }

    /// `|D|^s`, symbol `|ξ|^s` (value 0 at the origin for `s > 0`).
    pub fn abs_d_pow(s: f64) -> Self {
        Self::real(format!("|D|^{s}"), move |xi| {
            if xi == 0.0 {
                if s == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                xi.abs().powf(s)
            }
        })
    }

    /// `|D|`, symbol `|ξ|`.
    pub fn abs_d() -> Self {
        Self::real("|D|", f64::abs)
    }

    /// `D = -i∂_x`, symbol `ξ`.
    pub fn d() -> Self {
        Self::real("D", |xi| xi)
    }

    /// Indicator of `ξ ≥ 0` (the zero mode belongs to the positive part).
    pub fn plus_indicator() -> Self {
        Self::real("1[xi>=0]", |xi| if xi >= 0.0 { 1.0 } else { 0.0 })
    }

    /// Indicator of `ξ < 0`.
    pub fn minus_indicator() -> Self {
        Self::real("1[xi<0]", |xi| if xi < 0.0 { 1.0 } else { 0.0 })
    }

    /// Free half-wave propagator `e^{-i|ξ|t}`.
    pub fn halfwave_propagator(t: f64) -> Self {
        Self::new(format!("exp(-i|xi|{t})"), move |xi| {
            Complex64::from_polar(1.0, -xi.abs() * t)
        })
    }

    /// Tabulates the symbol on the grid modes (FFT order), rejecting
    /// non-finite values.
    pub fn table(&self, grid: &Grid1D) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(grid.n());
        for idx in 0..grid.n() {
            let xi = grid.xi(idx);
            let v = self.eval(xi);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFiniteSymbol {
                    tag: self.tag.clone(),
                    xi,
                });
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// A complex field sampled on a uniform periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid1D,
    values: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::invalid(format!(
                "{} samples supplied for a grid of {} points",
                values.len(),
                grid.n()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.xs().into_iter().map(f).collect();
        Self { grid, values }
    }

    /// Builds a field from its modes (FFT order, continuum normalization).
    pub fn from_modes(grid: Grid1D, modes: &[Complex64]) -> Result<Self> {
        if modes.len() != grid.n() {
            return Err(Error::invalid("mode count does not match grid"));
        }
        Ok(Self {
            grid,
            values: grid.inverse(modes),
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Fourier modes in FFT order, `û_k ≈ ∫u e^{-ixξ_k}dx`.
    pub fn modes(&self) -> Vec<Complex64> {
        self.grid.forward(&self.values)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &SpectralField) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &SpectralField) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Pointwise map of the samples.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(j, v)| f(self.grid.x(j), *v))
                .collect(),
        }
    }

    /// Spectral derivative `∂_x u`.
    pub fn derivative(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.grid.derivative(&self.values),
        }
    }

    /// `x · u(x)` evaluated pointwise on the grid.
    pub fn times_x(&self) -> Self {
        self.map(|x, v| v * x)
    }

    /// Plain `L²` norm by grid quadrature.
    pub fn l2_norm(&self) -> f64 {
        (real_dot(&self.values, &self.values) * self.grid.dx()).sqrt()
    }

    /// `∫_{|x| > L/4} |u|²`, the truncation-quality metric for slowly
    /// decaying profiles.
    pub fn tail_mass(&self) -> f64 {
        let quarter = 0.25 * self.grid.length();
        let dx = self.grid.dx();
        self.values
            .iter()
            .enumerate()
            .filter(|(j, _)| self.grid.x(*j).abs() > quarter)
            .map(|(_, v)| v.norm_sqr() * dx)
            .sum()
    }

    /// Mass carried by the `ξ = 0` mode, `|û_0|²/L`.
    pub fn zero_mode_mass(&self) -> f64 {
        self.modes()[0].norm_sqr() / self.grid.length()
    }

    /// Sample at grid index `j`.
    pub fn at(&self, j: usize) -> Complex64 {
        self.values[j]
    }

    /// Writes the field as CSV with columns `x,re,im`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        self.write_csv_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_to(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "x,re,im")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(w, "{:.17e},{:.17e},{:.17e}", self.grid.x(j), v.re, v.im)?;
        }
        Ok(())
    }

    /// Reads a CSV written by [`SpectralField::write_csv`]; the grid is
    /// reconstructed from the sample count and spacing.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let r = BufReader::new(std::fs::File::open(path)?);
        let mut xs = Vec::new();
        let mut vals = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            if lineno == 0 {
                if line.trim() != "x,re,im" {
                    return Err(Error::Parse(format!("unexpected CSV header `{line}`")));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 columns", lineno + 1)));
            }
            let p = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            xs.push(p(cols[0])?);
            vals.push(Complex64::new(p(cols[1])?, p(cols[2])?));
        }
        let n = vals.len();
        if n < 2 {
            return Err(Error::Parse("too few samples".into()));
        }
        let length = -2.0 * xs[0];
        let grid = Grid1D::new(n, length)?;
        let expected_dx = grid.dx();
        if ((xs[1] - xs[0]) - expected_dx).abs() > 1e-9 * expected_dx.max(1.0) {
            return Err(Error::Parse("samples are not on a centered uniform grid".into()));
        }
        Self::new(grid, vals)
    }

    /// Writes the binary dump: `n`, `L` as little-endian `f64`, followed by
    /// `(re, im)` pairs.
    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        self.write_binary_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_binary_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(&(self.grid.n() as f64).to_le_bytes())?;
        w.write_all(&self.grid.length().to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(std::fs::File::open(path)?);
        Self::read_binary_from(&mut r)
    }

    pub fn read_binary_from(r: &mut impl Read) -> Result<Self> {
        let mut buf = [0u8; 8];
        let mut next = |r: &mut dyn Read| -> Result<f64> {
            r.read_exact(&mut buf)?;
            Ok(f64::from_le_bytes(buf))
        };
        let n = next(r)?;
        let length = next(r)?;
        if !(n.is_finite() && n >= 0.0 && n.fract() == 0.0) {
            return Err(Error::Parse(format!("invalid sample count {n}")));
        }
        let grid = Grid1D::new(n as usize, length)?;
        let mut values = Vec::with_capacity(grid.n());
        for _ in 0..grid.n() {
            let re = next(r)?;
            let im = next(r)?;
            values.push(Complex64::new(re, im));
        }
        Self::new(grid, values)
    }
}

/// Returns the field whose modes are `sym(ξ_k)·û_k`.
pub fn apply_multiplier(field: &SpectralField, sym: &MultiplierSymbol) -> Result<SpectralField> {
    let table = sym.table(&field.grid)?;
    Ok(SpectralField {
        grid: field.grid,
        values: field.grid.apply_table(&field.values, &table),
    })
}

fn mask_modes(field: &SpectralField, keep: impl Fn(f64) -> bool) -> SpectralField {
    let grid = field.grid;
    let mut modes = field.modes();
    for (idx, m) in modes.iter_mut().enumerate() {
        if !keep(grid.xi(idx)) {
            *m = Complex64::new(0.0, 0.0);
        }
    }
    SpectralField {
        grid,
        values: grid.inverse(&modes),
    }
}

/// Szegő projector `Π⁺`: keeps modes with `ξ ≥ 0` (the zero mode included).
pub fn project_plus(field: &SpectralField) -> SpectralField {
    mask_modes(field, |xi| xi >= 0.0)
}

/// Complementary projector `Π⁻`: keeps modes with `ξ < 0`.
pub fn project_minus(field: &SpectralField) -> SpectralField {
    mask_modes(field, |xi| xi < 0.0)
}

/// Real inner product `(u, v) = Re ∫ u conj(v)` by grid quadrature.
pub fn real_inner(u: &SpectralField, v: &SpectralField) -> Result<f64> {
    u.grid.check_same(&v.grid)?;
    Ok(u.grid.inner(&u.values, &v.values))
}

/// Discrete `H^s` norm `((2π)^{-1} ∫ ⟨ξ⟩^{2s} |û|² dξ)^{1/2}`.
pub fn sobolev_norm(field: &SpectralField, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::invalid(format!("Sobolev exponent s = {s} must be nonnegative")));
    }
    Ok(sobolev_norm_modes(&field.grid, &field.modes(), s))
}

/// Same as [`sobolev_norm`] starting from precomputed modes.
pub fn sobolev_norm_modes(grid: &Grid1D, modes: &[Complex64], s: f64) -> f64 {
    let sum: f64 = modes
        .iter()
        .enumerate()
        .map(|(idx, m)| {
            let xi = grid.xi(idx);
            (1.0 + xi * xi).powf(s) * m.norm_sqr()
        })
        .sum();
    (sum / grid.length()).sqrt()
}

/// Mass, momentum and energy of the half-wave flow.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ConservedTriple {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
}

/// `mass = ∫|u|²`, `momentum = Re ∫ Du·conj(u)`,
/// `energy = ½∫||D|^{1/2}u|² − ¼∫|u|⁴`.
pub fn conserved_triple(field: &SpectralField) -> ConservedTriple {
    let grid = field.grid;
    let modes = field.modes();
    let inv_l = 1.0 / grid.length();
    let mut momentum = 0.0;
    let mut kinetic = 0.0;
    for (idx, m) in modes.iter().enumerate() {
        let xi = grid.xi(idx);
        momentum += xi * m.norm_sqr();
        kinetic += xi.abs() * m.norm_sqr();
    }
    let dx = grid.dx();
    let mass: f64 = field.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx;
    let quartic: f64 = field.values.iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>() * dx;
    ConservedTriple {
        mass,
        momentum: momentum * inv_l,
        energy: 0.5 * kinetic * inv_l - 0.25 * quartic,
    }
}

/// `∫ ||D|^{1/2} u|²`, the kinetic part of the energy.
pub fn half_derivative_norm_sqr(field: &SpectralField) -> f64 {
    let grid = field.grid;
    field
        .modes()
        .iter()
        .enumerate()
        .map(|(idx, m)| grid.xi(idx).abs() * m.norm_sqr())
        .sum::<f64>()
        / grid.length()
}

/// 2/3-rule de-aliasing mask: keeps `|k| < n/3`.
pub fn dealias_mask(grid: &Grid1D) -> Vec<f64> {
    let cutoff = grid.n() as i64 / 3;
    (0..grid.n())
        .map(|idx| if grid.mode_number(idx).abs() < cutoff { 1.0 } else { 0.0 })
        .collect()
}
