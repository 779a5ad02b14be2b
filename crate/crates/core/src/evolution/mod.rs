//! Pseudo-spectral time integration of the half-wave and Szegő equations,
//! two-bubble initial data, and trajectory diagnostics.

pub mod run;
pub mod stepper;
pub mod synth;

pub use run::{
    read_checkpoint, run_with_diagnostics, track_peaks, write_checkpoint, CheckpointHeader, DiagnosticsRecord,
    EvolutionConfig, EvolutionRun, TrackedPeaks,
};
pub use stepper::{pi_minus_content, step_halfwave, step_szego, Equation, Stepper, PI_MINUS_TOL};
pub use synth::{bubble_width, synth_bubbles, synth_two_soliton};
