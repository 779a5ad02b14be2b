//! Runs the acceptance checks and prints one PASS/FAIL line per check.
//!
//! A check that misses its tolerance is reported but does not fail the run;
//! only a check that cannot be carried out (a solver error) does. The target
//! uses its own `main` so the report is printed even when nothing fails.

use hwlab::acceptance::{run_all, CRITERIA};

fn main() {
    let results = run_all();
    assert_eq!(results.len(), CRITERIA);
    let mut errors = Vec::new();
    let mut passed = 0;
    for (id, r) in &results {
        match r {
            Ok(c) => {
                if c.pass {
                    passed += 1;
                }
                println!("{c}");
            }
            Err(e) => {
                println!("FAIL [{id:2}] error: {e}");
                errors.push(*id);
            }
        }
    }
    println!("acceptance: {passed}/{CRITERIA} passed");
    if !errors.is_empty() {
        eprintln!("checks {errors:?} could not be completed");
        std::process::exit(1);
    }
}
