//! Identity suites as seed-fixed property tests, 64 trials per suite and algebra.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use weilmc::identities::{self, Identity};
use weilmc::LieAlgebra;

const ALGEBRAS: &[&str] = &["abelian:3", "su2", "sl2", "su2+su2", "sl3"];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config::with_cases(cases), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn suite(id: Identity, algebras: &[&str], cases: u32) {
    for name in algebras {
        let g = LieAlgebra::builtin(name).unwrap();
        runner(cases)
            .run(&any::<u64>(), |seed| {
                identities::run(&g, id, seed, 1).map_err(|e| TestCaseError::fail(format!("{name}: {e}")))
            })
            .unwrap();
    }
}

#[test]
fn squares_vanish() {
    suite(identities::squares_vanish, ALGEBRAS, 64);
}

#[test]
fn generalized_cartan_formula() {
    suite(identities::cartan_formula, ALGEBRAS, 64);
}

#[test]
fn conjugated_coboundary() {
    suite(identities::conjugated_coboundary, ALGEBRAS, 64);
}

#[test]
fn exponential_boundary() {
    suite(identities::exponential_boundary, ALGEBRAS, 64);
}

#[test]
fn boundary_of_product() {
    suite(identities::boundary_of_product, ALGEBRAS, 64);
}

#[test]
fn schouten_graded_jacobi() {
    suite(identities::schouten_jacobi, ALGEBRAS, 64);
}

#[test]
fn weil_conjugation() {
    suite(identities::weil_conjugation, ALGEBRAS, 64);
}

#[test]
fn gauge_curvature_equivariance() {
    suite(identities::gauge_curvature, ALGEBRAS, 64);
}

#[test]
fn every_suite_is_listed() {
    assert_eq!(identities::SUITES.len(), 8);
}
