//! One test per acceptance criterion. Each prints a PASS/FAIL line and the
//! individual checks, then asserts.

use qentropy::entropy::Evaluator;
use qentropy::verify::run_criterion;

fn criterion(id: u32) {
    let report = run_criterion(&Evaluator::default(), id).expect("cataloged criterion");
    println!("{report}");
    assert!(report.passed(), "{}", report.summary_line());
}

#[test]
fn criterion_01_ho_ground_constants() {
    criterion(1);
}

#[test]
fn criterion_02_ho_excited_constants() {
    criterion(2);
}

#[test]
fn criterion_03_ho_ground_saturation() {
    criterion(3);
}

#[test]
fn criterion_04_ho_excited_sum_endpoints() {
    criterion(4);
}

#[test]
fn criterion_05_ho_excited_tsallis_sides() {
    criterion(5);
}

#[test]
fn criterion_06_robin_wall() {
    criterion(6);
}

#[test]
fn criterion_07_q1d_hydrogen() {
    criterion(7);
}

#[test]
fn criterion_08_q1d_tsallis_sides() {
    criterion(8);
}

#[test]
fn criterion_09_neumann_well() {
    criterion(9);
}

#[test]
fn criterion_10_dirichlet_conjecture() {
    criterion(10);
}

#[test]
fn criterion_11_dual_path() {
    criterion(11);
}

#[test]
fn criterion_12_expansions() {
    criterion(12);
}

#[test]
fn criterion_13_thermo() {
    criterion(13);
}
