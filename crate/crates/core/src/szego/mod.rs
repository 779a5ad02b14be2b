//! Exact two-soliton dynamics of the cubic Szegő equation: the parameter
//! ODEs, their invariants, the reduced and resonant subsystems, and
//! reconstruction of the field with Sobolev-norm growth measurement.

pub mod conserved;
pub mod growth;
pub mod resonant;
pub mod state;
pub mod trajectory;

pub use conserved::{conserved_closed_form, conserved_quantities, hamiltonian_on_grid, SzegoConserved};
pub use growth::{
    reconstruct_field, reconstruct_spectral, sobolev_growth, sobolev_norm_exact, GrowthSeries, ReconstructedField,
};
pub use resonant::{
    integrate_reduced, integrate_resonant, reduced_full_rhs, reduced_rhs, resonant_rhs, resonant_state, ReducedState,
    ReducedTrajectory, ResonantParams, ResonantSample, ResonantTrajectory,
};
pub use state::{full_rhs, SzegoDerivative, SzegoTwoSolitonState};
pub use trajectory::{integrate_full, SzegoTrajectory};
