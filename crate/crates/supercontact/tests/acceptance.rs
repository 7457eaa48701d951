//! Acceptance gate: the eleven primary checks of the verification suite,
//! one test per check. Each test prints exactly one `PASS`/`FAIL` line
//! (visible with `--nocapture`); a failure panics with the witness.

use supercontact::verify::{self, CaseResult};

fn gate(case: CaseResult) {
    if case.pass {
        println!("PASS {}: {}", case.id, case.certificate.unwrap_or_default());
    } else {
        let witness = case.witness.unwrap_or_default();
        println!("FAIL {}: {witness}", case.id);
        panic!("{}: {witness}", case.id);
    }
}

#[test]
fn criterion_01_bracket_action_compatibility() {
    gate(verify::check_bracket_action_compatibility());
}

#[test]
fn criterion_02_odd_derivation_relations() {
    gate(verify::check_odd_derivation_relations());
}

#[test]
fn criterion_03_module_axioms_and_square_zero() {
    gate(verify::check_module_axioms_and_square_zero());
}

#[test]
fn criterion_04_density_split_equivariance() {
    gate(verify::check_density_split_equivariance());
}

#[test]
fn criterion_05_absolute_dimension_table() {
    gate(verify::check_absolute_dimension_table());
}

#[test]
fn criterion_06_relative_dimension_table() {
    gate(verify::check_relative_dimension_table());
}

#[test]
fn criterion_07_resonant_twisted_values() {
    gate(verify::check_resonant_twisted_values());
}

#[test]
fn criterion_08_relative_coboundary_span() {
    gate(verify::check_relative_coboundary_span());
}

#[test]
fn criterion_09_invariant_operator_variety() {
    gate(verify::check_invariant_operator_variety());
}

#[test]
fn criterion_10_one_theta_classes_and_lifts() {
    gate(verify::check_one_theta_classes_and_lifts());
}

#[test]
fn criterion_11_translation_equivariance() {
    gate(verify::check_translation_equivariance());
}
