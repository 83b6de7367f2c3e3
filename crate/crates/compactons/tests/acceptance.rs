//! Acceptance suite: one test per criterion, with a pass/fail line printed
//! for each. Run with `cargo test --test acceptance -- --nocapture` to see
//! the full report including measured values.

use compactons::selftest::{run_one, CriterionOutcome};

fn assert_criterion(id: usize) {
    let outcome: CriterionOutcome = run_one(id).expect("criterion id");
    println!(
        "{} criterion {:2}: {}",
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.id,
        outcome.name
    );
    for check in &outcome.checks {
        println!(
            "    [{}] {}",
            if check.passed { "ok" } else { "FAIL" },
            check.label
        );
    }
    assert!(
        outcome.passed,
        "criterion {} ({}) failed:\n{}",
        outcome.id,
        outcome.name,
        outcome
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("  {}", c.label))
            .collect::<Vec<_>>()
            .join("\n")
    );
}

#[test]
fn criterion_01_closed_form_p4_compacton() {
    assert_criterion(1);
}

#[test]
fn criterion_02_pohozaev_identity_suite() {
    assert_criterion(2);
}

#[test]
fn criterion_03_amplitude_and_support_formulas() {
    assert_criterion(3);
}

#[test]
fn criterion_04_linearized_operator_spectra() {
    assert_criterion(4);
}

#[test]
fn criterion_05_rayleigh_quotient_identity() {
    assert_criterion(5);
}

#[test]
fn criterion_06_slope_route_agreement() {
    assert_criterion(6);
}

#[test]
fn criterion_07_stability_threshold_at_p8() {
    assert_criterion(7);
}

#[test]
fn criterion_08_frame_asymptotic_rates() {
    assert_criterion(8);
}

#[test]
fn criterion_09_conjugation_form_isometry() {
    assert_criterion(9);
}

#[test]
fn criterion_10_variational_minimizer_oracle() {
    assert_criterion(10);
}

#[test]
fn criterion_11_scaling_laws() {
    assert_criterion(11);
}
