//! Solitary-wave profiles: the Szegő profile `Q⁺`, the ground state `Q`, the
//! traveling-wave family `Q_β` and its derived objects.

pub mod family;
pub mod ground;
pub mod operator;
pub mod oracle;
pub mod qbeta;
pub mod qplus;

pub use family::{
    det4, nondegeneracy_det, solve_family, solve_rho_beta, solve_rho_beta_detailed, FamilyMember, NondegeneracyReport,
    RhoSolution,
};
pub use ground::{solve_ground_state, GroundStateQ, GroundStateSummary};
pub use operator::{LinearSolve, RealLinearOperator};
pub use oracle::{qplus_integral_identities, scaling_orthogonality, OracleEntry};
pub use qbeta::{
    apply_l_beta, beta_step, constant_derivatives, far_field, gauge_fix, interpolate, mass_constant_from_modes,
    multiplier_m_beta, profile_constants, solve_q_beta, solve_q_beta_continuation, solve_q_beta_with, tail_prediction,
    traveling_symbol, ConstantDerivatives, ProfileConstants, ProfileQBeta, ProfileSidecar, QBetaOptions,
};
pub use qplus::{
    eval_dq_plus, eval_q_plus, eval_q_plus_periodized, szego_profile_residual, torus_soliton_motion, SzegoProfileQPlus,
};
