//! The acceptance suite: one test per verification row, each printing its
//! pass/fail line. `cargo test -p bk-core --test acceptance -- --nocapture`
//! shows the full table.

use bk_core::verify;

fn check(result: verify::RowResult) {
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_01_ray_rips_thresholds() {
    check(verify::row_01_ray_rips_thresholds());
}

#[test]
fn criterion_02_hellinger_dim2() {
    check(verify::row_02_hellinger_dim2());
}

#[test]
fn criterion_03_k22_loop() {
    check(verify::row_03_k22_loop());
}

#[test]
fn criterion_04_kmn_rank_formula() {
    check(verify::row_04_kmn_rank_formula());
}

#[test]
fn criterion_05_rips_decomposition() {
    check(verify::row_05_rips_decomposition());
}

#[test]
fn criterion_06_cech_intrinsic_vs_ambient() {
    check(verify::row_06_cech_intrinsic_vs_ambient());
}

#[test]
fn criterion_07_cone_effect() {
    check(verify::row_07_cone_effect());
}

#[test]
fn criterion_08_sandwich() {
    check(verify::row_08_sandwich());
}

#[test]
fn criterion_09_ksw_grid() {
    check(verify::row_09_ksw_grid());
}

#[test]
fn criterion_10_anchor_geometry() {
    check(verify::row_10_anchor_geometry());
}

#[test]
fn criterion_11_attachment() {
    check(verify::row_11_attachment());
}

#[test]
fn criterion_12_metric_axioms() {
    check(verify::row_12_metric_axioms());
}

#[test]
fn criterion_13_orthant_solver() {
    check(verify::row_13_orthant_solver());
}
