//! One test per acceptance criterion. Each prints a PASS/FAIL line.

use greedylab_core::verify::{run, DEFAULT_SEED};

fn check(id: u32) {
    let outcome = run(id, DEFAULT_SEED).expect("criterion runs");
    println!("{}", outcome.line());
    assert!(outcome.pass, "{}", outcome.line());
}

#[test]
fn criterion_01_summing_democracy() {
    check(1);
}

#[test]
fn criterion_02_difference_restricted_democracy() {
    check(2);
}

#[test]
fn criterion_03_schreier_block_norms() {
    check(3);
}

#[test]
fn criterion_04_mixnorm_non_conservative() {
    check(4);
}

#[test]
fn criterion_05_error_chain() {
    check(5);
}

#[test]
fn criterion_06_solver_oracle() {
    check(6);
}

#[test]
fn criterion_07_remark_ratio() {
    check(7);
}

#[test]
fn criterion_08_imp1_blow_up() {
    check(8);
}

#[test]
fn criterion_09_kppg_blow_up() {
    check(9);
}

#[test]
fn criterion_10_weight_indices() {
    check(10);
}

#[test]
fn criterion_11_eta_p() {
    check(11);
}

#[test]
fn criterion_12_property_suite() {
    check(12);
}

#[test]
fn criterion_13_truncation_bounded() {
    check(13);
}
