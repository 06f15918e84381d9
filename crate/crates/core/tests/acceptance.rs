//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line with the battery detail.
//!
//! Criterion 4 (proximity-peak tracking through the energy-filtered sweep)
//! is implemented exactly as stated and currently runs red; the battery
//! rustdoc and the passing partner-selectivity companion test document the
//! structural reason (the equilibrium filtered correlator keeps a
//! factorized single-particle exchange channel that transport filtering
//! would suppress).

use std::time::Instant;

use entanglab::verify::batteries::{proximity_partner_selectivity, run_battery, BatteryId};
use entanglab::verify::ToleranceSet;

fn criterion(number: usize, id: BatteryId) {
    let tol = ToleranceSet::default();
    let result = run_battery(id, &tol);
    println!("criterion {number:>2}: {}", result.line());
    assert!(result.passed, "criterion {number}: {}", result.detail);
}

#[test]
fn criterion_01_noninteracting_nullity() {
    criterion(1, BatteryId::NoninteractingNullity);
}

#[test]
fn criterion_02_pairing_toy_exactness() {
    criterion(2, BatteryId::PairingToyExactness);
}

#[test]
fn criterion_03_bogoliubov_battery() {
    criterion(3, BatteryId::Bogoliubov);
}

#[test]
fn criterion_04_proximity_peak() {
    criterion(4, BatteryId::ProximityPeak);
}

#[test]
fn criterion_04_companion_partner_selectivity() {
    // The occupation-number realization of the same physics: proximity
    // pairing correlates the +eps/-eps eigenmode partners and nothing else
    // at the innermost level pair.
    let outcome = proximity_partner_selectivity();
    println!(
        "criterion  4 companion: {}",
        match &outcome {
            Ok(()) => "PASS partner selectivity in the mode flavor".to_string(),
            Err(e) => format!("FAIL {e}"),
        }
    );
    outcome.unwrap();
}

#[test]
fn criterion_05_closed_form_properties() {
    criterion(5, BatteryId::ClosedFormProperties);
}

#[test]
fn criterion_06_open_dot_formula() {
    criterion(6, BatteryId::OpenDotFormula);
}

#[test]
fn criterion_07_kernel_quadrature() {
    criterion(7, BatteryId::KernelQuadrature);
}

#[test]
fn criterion_08_perturbation_agreement() {
    criterion(8, BatteryId::PerturbationAgreement);
}

#[test]
fn criterion_09_cone_functional_identity() {
    criterion(9, BatteryId::ConeFunctionalIdentity);
}

#[test]
fn criterion_10_solver_integrity() {
    criterion(10, BatteryId::SolverIntegrity);
}

#[test]
fn criterion_11_cone_solver_oracle() {
    criterion(11, BatteryId::ConeSolverOracle);
}

#[test]
fn verify_suite_completes_in_time() {
    let start = Instant::now();
    let tol = ToleranceSet::default();
    for result in entanglab::verify::run_all(&tol) {
        println!("verify: {}", result.line());
        assert!(result.passed, "{}", result.line());
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("verify suite wall time {elapsed:.1}s");
    assert!(elapsed < 300.0, "verify suite took {elapsed:.0}s");
}
