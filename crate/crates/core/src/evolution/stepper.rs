//! Time steppers for the half-wave and Szegő equations on a periodic grid.
//!
//! * Half-wave, `i∂_tu = |D|u − |u|²u`: Strang splitting. The nonlinear flow
//!   `u ↦ u·e^{i|u|²τ}` preserves `|u|` pointwise and is exact; the linear
//!   flow `û ↦ e^{−i|ξ|τ}û` is exact mode by mode.
//! * Szegő, `i∂_tu = Π⁺(|u|²u)`: classical RK4 in Fourier space, with the
//!   cubic term de-aliased by the 2/3 rule and projected by `Π⁺`.
//! * Szegő with transport, `i∂_tu = Du − Π⁺(|u|²u)`: the same with the
//!   linear term added. This is the convention in which the two-soliton
//!   parameter ODEs of [`crate::szego`] are exact; `w(t,x) = u(−t, x−t)`
//!   maps its solutions to solutions of the plain equation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{dealias_mask, Grid1D, SpectralField};

/// The evolution equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Halfwave,
    Szego,
    SzegoWithTransport,
}

impl Equation {
    pub fn name(&self) -> &'static str {
        match self {
            Equation::Halfwave => "halfwave",
            Equation::Szego => "szego",
            Equation::SzegoWithTransport => "szego_with_transport",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "halfwave" => Ok(Equation::Halfwave),
            "szego" => Ok(Equation::Szego),
            "szego_with_transport" => Ok(Equation::SzegoWithTransport),
            other => Err(Error::invalid(format!(
                "unknown equation `{other}` (expected halfwave, szego or szego_with_transport)"
            ))),
        }
    }

    pub fn is_szego(&self) -> bool {
        !matches!(self, Equation::Halfwave)
    }
}

/// Largest relative `Π⁻` content accepted by the Szegő steppers.
pub const PI_MINUS_TOL: f64 = 1e-8;

/// A stepper with precomputed symbol tables for a fixed grid and time step.
#[derive(Debug, Clone)]
pub struct Stepper {
    equation: Equation,
    grid: Grid1D,
    dt: f64,
    /// Half-wave: `e^{−i|ξ|dt}`.
    linear: Vec<Complex64>,
    /// Szegő: de-aliased `Π⁺` mask.
    plus_mask: Vec<f64>,
    xis: Vec<f64>,
}

impl Stepper {
    /// Builds a stepper; `dt` may be negative (backward stepping).
    pub fn new(equation: Equation, grid: Grid1D, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::invalid(format!(
                "time step dt = {dt} must be finite and nonzero"
            )));
        }
        let xis = grid.xis();
        let linear = xis
            .iter()
            .map(|xi| Complex64::from_polar(1.0, -xi.abs() * dt))
            .collect();
        let plus_mask = dealias_mask(&grid)
            .into_iter()
            .zip(&xis)
            .map(|(m, xi)| if *xi >= 0.0 { m } else { 0.0 })
            .collect();
        Ok(Self {
            equation,
            grid,
            dt,
            linear,
            plus_mask,
            xis,
        })
    }

    pub fn equation(&self) -> Equation {
        self.equation
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Advances the samples `u` by one step. `t` is only used in error
    /// reports. On error `u` is left unchanged.
    pub fn step(&self, u: &mut Vec<Complex64>, t: f64) -> Result<()> {
        assert_eq!(u.len(), self.grid.n(), "sample count does not match grid");
        let next = match self.equation {
            Equation::Halfwave => self.strang(u),
            Equation::Szego => self.rk4(u, false)?,
            Equation::SzegoWithTransport => self.rk4(u, true)?,
        };
        if next.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { t });
        }
        *u = next;
        Ok(())
    }

    fn strang(&self, u: &[Complex64]) -> Vec<Complex64> {
        let half = 0.5 * self.dt;
        let rotate = |v: &mut [Complex64]| {
            for z in v.iter_mut() {
                *z *= Complex64::from_polar(1.0, z.norm_sqr() * half);
            }
        };
        let mut v = u.to_vec();
        rotate(&mut v);
        let mut v = self.grid.apply_table(&v, &self.linear);
        rotate(&mut v);
        v
    }

    /// `d/dt û` for the Szegő equations, evaluated on modes.
    fn szego_rhs(&self, modes: &[Complex64], transport: bool) -> Vec<Complex64> {
        let u = self.grid.inverse(modes);
        let cubic: Vec<Complex64> = u.iter().map(|z| z * z.norm_sqr()).collect();
        let mut out = self.grid.forward(&cubic);
        let i = Complex64::i();
        for (k, o) in out.iter_mut().enumerate() {
            // i∂_tû = ± mask·(|u|²u)^ (+ ξû with transport).
            let nl = *o * self.plus_mask[k];
            *o = if transport {
                -i * (self.xis[k] * modes[k] - nl)
            } else {
                -i * nl
            };
        }
        out
    }

    fn rk4(&self, u: &[Complex64], transport: bool) -> Result<Vec<Complex64>> {
        let mut m0 = self.grid.forward(u);
        let content = pi_minus_content(&self.grid, &m0);
        if content > PI_MINUS_TOL {
            return Err(Error::invalid(format!(
                "Szego stepper input has relative Pi- content {content:.3e} (limit {PI_MINUS_TOL:.0e})"
            )));
        }
        for (k, m) in m0.iter_mut().enumerate() {
            if self.xis[k] < 0.0 {
                *m = Complex64::new(0.0, 0.0);
            }
        }
        let h = self.dt;
        let axpy = |a: &[Complex64], b: &[Complex64], s: f64| -> Vec<Complex64> {
            a.iter().zip(b).map(|(x, y)| x + y * s).collect()
        };
        let k1 = self.szego_rhs(&m0, transport);
        let k2 = self.szego_rhs(&axpy(&m0, &k1, 0.5 * h), transport);
        let k3 = self.szego_rhs(&axpy(&m0, &k2, 0.5 * h), transport);
        let k4 = self.szego_rhs(&axpy(&m0, &k3, h), transport);
        let next: Vec<Complex64> = (0..m0.len())
            .map(|k| {
                if self.xis[k] < 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    m0[k] + (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]) * (h / 6.0)
                }
            })
            .collect();
        Ok(self.grid.inverse(&next))
    }
}

/// `‖Π⁻u‖/‖u‖` computed from modes (zero for the zero field).
pub fn pi_minus_content(grid: &Grid1D, modes: &[Complex64]) -> f64 {
    let mut neg = 0.0;
    let mut total = 0.0;
    for (k, m) in modes.iter().enumerate() {
        let a = m.norm_sqr();
        total += a;
        if grid.xi(k) < 0.0 {
            neg += a;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        (neg / total).sqrt()
    }
}

/// One Strang step of the half-wave equation.
pub fn step_halfwave(u: &SpectralField, dt: f64) -> Result<SpectralField> {
    let stepper = Stepper::new(Equation::Halfwave, *u.grid(), dt)?;
    let mut v = u.values().to_vec();
    stepper.step(&mut v, 0.0)?;
    SpectralField::new(*u.grid(), v)
}

/// One RK4 step of the Szegő equation (with the transport term when
/// `transport` is set).
pub fn step_szego(u: &SpectralField, dt: f64, transport: bool) -> Result<SpectralField> {
    let eq = if transport {
        Equation::SzegoWithTransport
    } else {
        Equation::Szego
    };
    let stepper = Stepper::new(eq, *u.grid(), dt)?;
    let mut v = u.values().to_vec();
    stepper.step(&mut v, 0.0)?;
    SpectralField::new(*u.grid(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::project_plus;

    #[test]
    fn linear_limit_plane_wave() {
        let g = Grid1D::new(64, 2.0 * std::f64::consts::PI).unwrap();
        let k = -3.0;
        let u = SpectralField::from_fn(g, |x| Complex64::from_polar(1e-8, k * x));
        let v = step_halfwave(&u, 0.01).unwrap();
        let phase = Complex64::from_polar(1.0, -k.abs() * 0.01);
        for (a, b) in u.values().iter().zip(v.values()) {
            assert!((a * phase - b).norm() < 1e-20);
        }
    }

    #[test]
    fn nonlinear_substep_preserves_modulus_and_reverses() {
        let g = Grid1D::new(256, 20.0).unwrap();
        let u = SpectralField::from_fn(g, |x| Complex64::new((-x * x).exp(), 0.3 * x * (-x * x).exp()));
        let v = step_halfwave(&u, 0.05).unwrap();
        let w = step_halfwave(&v, -0.05).unwrap();
        let err: f64 = u
            .values()
            .iter()
            .zip(w.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-14);
    }

    #[test]
    fn szego_rejects_negative_frequencies() {
        let g = Grid1D::new(128, 20.0).unwrap();
        let u = SpectralField::from_fn(g, |x| Complex64::new((-x * x).exp(), 0.0));
        assert!(step_szego(&u, 1e-3, false).unwrap_err().is_validation());
        let p = project_plus(&u);
        let v = step_szego(&p, 1e-3, true).unwrap();
        assert!(pi_minus_content(&g, &v.modes()) < 1e-14);
    }

    #[test]
    fn equation_names_round_trip() {
        for e in [Equation::Halfwave, Equation::Szego, Equation::SzegoWithTransport] {
            assert_eq!(Equation::parse(e.name()).unwrap(), e);
        }
        assert!(Equation::parse("nls").is_err());
    }
}
