//! End-to-end behavior of the modulation system in the turbulent window.

use hwlab::modulation::{
    phase_subsystem_closed_form, phase_subsystem_elementary, regime_report, run_regime, ModIntegrationOptions,
    RegimeConfig, RhsKind,
};

#[test]
fn turbulent_window_speed_law_holds() {
    let cfg = RegimeConfig::new(0.01, 0.1).unwrap();
    let tr = run_regime(
        &cfg,
        RhsKind::Turbulent,
        cfg.t_minus(),
        &ModIntegrationOptions::default(),
    )
    .unwrap();
    let rep = regime_report(&tr, &cfg);
    assert!(rep.claim("(i) ").unwrap().pass);
    assert!(rep.claim("(i')").unwrap().pass);
    // The trajectory is sorted and spans the whole window.
    let (t0, _) = tr.first();
    let (t1, _) = tr.last();
    assert!((t0 - cfg.t_in()).abs() < 1e-9 && (t1 - cfg.t_minus()).abs() < 1e-9);
    assert!(tr.max_consistency_error < 1e-8);
}

#[test]
fn phase_closed_form_vanishes_at_terminal_time() {
    let cfg = RegimeConfig::new(0.02, 0.1).unwrap();
    let (g, v) = phase_subsystem_closed_form(&cfg, cfg.t_minus()).unwrap();
    assert!(g.abs() < 1e-15 && v.abs() < 1e-15);
    let t = 0.5 * (cfg.t_in() + cfg.t_minus());
    let (g, v) = phase_subsystem_closed_form(&cfg, t).unwrap();
    let (ge, ve) = phase_subsystem_elementary(&cfg, t);
    assert!((g - ge).abs() < 1e-13 && (v - ve).abs() < 1e-13);
}
