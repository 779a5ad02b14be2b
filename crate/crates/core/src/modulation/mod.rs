//! Two-bubble modulation dynamics of the half-wave equation: the sharp and
//! turbulent right-hand sides, integration of the idealized system, the
//! closed-form phase subsystem and regime diagnostics.

pub mod params;
pub mod phase;
pub mod report;
pub mod rhs;
pub mod system;

pub use params::{initial_data_t_minus, AdmissibilityFlags, ModParams, RegimeConfig, R_STAR};
pub use phase::{phase_subsystem_closed_form, phase_subsystem_elementary, phase_subsystem_rk};
pub use report::{h1_proxy, regime_report, run_regime, Claim, RegimeReport};
pub use rhs::{
    eval_sharp_rhs, eval_turbulent_rhs, AsymptoticProfiles, ProfileSource, RhsValues, SharpRhs, SolvedProfiles,
};
pub use system::{integrate_system, ModIntegrationOptions, ModTrajectory, RhsKind};
