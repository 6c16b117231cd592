//! One test per acceptance criterion; each prints a pass/fail line.

use std::sync::OnceLock;

use patchasym::acceptance::*;

fn sweeps() -> &'static Sweeps {
    static S: OnceLock<Sweeps> = OnceLock::new();
    S.get_or_init(|| Sweeps::run(0, 0).expect("default sweeps run"))
}

fn report(r: CriterionResult) {
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_equilibrium_densities() {
    report(criterion_1());
}

#[test]
fn criterion_02_forward_application() {
    report(criterion_2());
}

#[test]
fn criterion_03_jump_relations() {
    report(criterion_3(0));
}

#[test]
fn criterion_04_half_space_kernels() {
    report(criterion_4(0));
}

#[test]
fn criterion_05_dirichlet_patch_log_law() {
    report(criterion_5(sweeps()));
}

#[test]
fn criterion_06_neumann_patch_square_law() {
    report(criterion_6(sweeps()));
}

#[test]
fn criterion_07_capacity_scaling() {
    report(criterion_7(sweeps()));
}

#[test]
fn criterion_08_energy_equivalences() {
    report(criterion_8(sweeps()));
}

#[test]
fn criterion_09_compliance() {
    report(criterion_9(sweeps()));
}

#[test]
fn criterion_10_veps_identities() {
    report(criterion_10(sweeps()));
}

#[test]
fn criterion_11_teps_residuals() {
    report(criterion_11(sweeps()));
}

#[test]
fn criterion_12_cross_checks() {
    report(criterion_12());
}
