//! Two-bubble initial data from modulation parameters.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modulation::{ModParams, ProfileSource};
use crate::spectral::{Grid1D, SpectralField};

/// Width `λ_j(1−β_j)` of bubble `j` (0 or 1).
pub fn bubble_width(p: &ModParams, j: usize) -> f64 {
    if j == 0 {
        p.lambda1 * (1.0 - p.beta1)
    } else {
        p.lambda2 * (1.0 - p.beta2)
    }
}

/// Samples of the leading-order two-bubble ansatz
/// `u = Σ_j λ_j^{−1/2} Q_{β_j}((x−x_j)/(λ_j(1−β_j))) e^{iγ_j}`
/// (bubbles with `include[j] == false` are left out).
///
/// The phase enters as `e^{+iγ_j}`, matching `γ_j' = 1/λ_j` and the
/// single-bubble solution `Q_β((x−βt)/(1−β))e^{it}` of
/// `i∂_tu = |D|u − |u|²u`.
pub fn synth_bubbles(
    p: &ModParams,
    profiles: &dyn ProfileSource,
    grid: &Grid1D,
    include: [bool; 2],
) -> Result<SpectralField> {
    p.validate()?;
    let half = 0.5 * grid.length();
    let bubbles = [
        (p.lambda1, p.beta1, p.x1, p.gamma1),
        (p.lambda2, p.beta2, p.x2, p.gamma2),
    ];
    for (j, &(_, _, x, _)) in bubbles.iter().enumerate() {
        if !include[j] {
            continue;
        }
        let w = bubble_width(p, j);
        if x - 4.0 * w < -half || x + 4.0 * w > half {
            return Err(Error::invalid(format!(
                "bubble {} (center {x}, width {w:.3e}) is not covered by the grid [-{half}, {half})",
                j + 1
            )));
        }
        if w < 2.0 * grid.dx() {
            log::warn!("bubble {} width {w:.3e} is below two grid spacings", j + 1);
        }
    }
    let mut values = vec![Complex64::new(0.0, 0.0); grid.n()];
    for (j, &(lambda, beta, x0, gamma)) in bubbles.iter().enumerate() {
        if !include[j] {
            continue;
        }
        let scale = lambda * (1.0 - beta);
        let amp = Complex64::from_polar(lambda.powf(-0.5), gamma);
        for (idx, v) in values.iter_mut().enumerate() {
            *v += amp * profiles.eval(beta, (grid.x(idx) - x0) / scale);
        }
    }
    SpectralField::new(*grid, values)
}

/// Both bubbles of [`synth_bubbles`].
pub fn synth_two_soliton(p: &ModParams, profiles: &dyn ProfileSource, grid: &Grid1D) -> Result<SpectralField> {
    synth_bubbles(p, profiles, grid, [true, true])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::AsymptoticProfiles;

    #[test]
    fn single_bubble_is_rescaled_profile() {
        let p = ModParams::from_primitives([0.0, 1.0], [0.4, 0.0], [2.0, 1.0], [0.9, 0.99]);
        let g = Grid1D::new(512, 20.0).unwrap();
        let u = synth_bubbles(&p, &AsymptoticProfiles, &g, [true, false]).unwrap();
        let w = 2.0 * 0.1;
        for (idx, v) in u.values().iter().enumerate() {
            let expect = Complex64::from_polar(0.5f64.sqrt(), 0.4) * AsymptoticProfiles.eval(0.9, g.x(idx) / w);
            assert!((v - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn uncovered_bubble_is_rejected() {
        let p = ModParams::from_primitives([0.0, 9.9], [0.0, 0.0], [1.0, 1.0], [0.9, 0.9]);
        let g = Grid1D::new(512, 20.0).unwrap();
        assert!(synth_two_soliton(&p, &AsymptoticProfiles, &g)
            .unwrap_err()
            .is_validation());
    }
}
