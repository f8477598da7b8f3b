//! Seed-fixed property tests for the algebraic invariants of elements,
//! serialization and the gauge action.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use weilmc::element::{ExtElt, MixedElt, Side};
use weilmc::exterior as ex;
use weilmc::hodge::{mixed_invariants, HodgePackage};
use weilmc::mc::{canonical_x, gauge_transform, solve_mc};
use weilmc::random;
use weilmc::rational::sign;
use weilmc::serial::{self, Element};
use weilmc::LieAlgebra;

fn check<F>(cases: u32, f: F)
where
    F: Fn(u64) -> Result<(), TestCaseError>,
{
    TestRunner::new_with_rng(Config::with_cases(cases), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
        .run(&any::<u64>(), f)
        .unwrap();
}

fn degree(x: &ExtElt) -> usize {
    x.blade_sizes().first().copied().unwrap_or(0)
}

#[test]
fn wedge_is_graded_commutative() {
    check(64, |seed| {
        let mut r = random::rng(seed);
        let (kx, ky) = (seed as usize % 4, (seed >> 8) as usize % 4);
        let x = random::ext(&mut r, Side::GDual, 6, &[kx], 3);
        let y = random::ext(&mut r, Side::GDual, 6, &[ky], 3);
        let s = sign(degree(&x) * degree(&y) % 2 == 1);
        prop_assert_eq!(x.wedge(&y), y.wedge(&x).scale(&s));
        Ok(())
    });
}

#[test]
fn contraction_matches_pairing_up_to_reversal() {
    check(64, |seed| {
        let mut r = random::rng(seed);
        let k = 1 + seed as usize % 4;
        let x = random::ext(&mut r, Side::G, 5, &[k], 3);
        let y = random::ext(&mut r, Side::GDual, 5, &[k], 3);
        let by_iota = ex::contract_unchecked(&x, &y).scalar_part();
        let reversal = sign((k * (k - 1) / 2) % 2 == 1);
        prop_assert_eq!(by_iota, ex::pairing(&x, &y).unwrap() * reversal);
        Ok(())
    });
}

#[test]
fn elements_round_trip_through_json() {
    check(64, |seed| {
        let mut r = random::rng(seed);
        let n = 3 + seed as usize % 4;
        for side in [Side::G, Side::GDual] {
            let x = Element::Ext(random::ext(&mut r, side, n, &random::all_sizes(n), 5));
            let m = Element::Mixed(random::mixed(&mut r, side, n, &random::all_sizes(n), 3, 5));
            for e in [x, m] {
                let text = serde_json::to_string(&serial::to_json(&e)).unwrap();
                let back = serial::from_json(&serde_json::from_str(&text).unwrap(), None).unwrap();
                prop_assert_eq!(back, e);
            }
        }
        Ok(())
    });
}

#[test]
fn delta_is_transported_coboundary() {
    let g = LieAlgebra::sl3();
    check(64, |seed| {
        let mut r = random::rng(seed);
        let x = random::ext(&mut r, Side::G, 8, &random::all_sizes(8), 4);
        let lhs = ex::delta(&g, &x).unwrap();
        let rhs = ex::sharp(&g, &ex::d_coboundary(&g, &ex::flat(&g, &x).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ex::flat(&g, &ex::sharp(&g, &ex::flat(&g, &x).unwrap()).unwrap()).unwrap(), ex::flat(&g, &x).unwrap());
        Ok(())
    });
}

#[test]
fn gauge_by_minus_s_undoes_s() {
    let g = LieAlgebra::builtin("su2+su2").unwrap();
    let pkg = HodgePackage::build(&g).unwrap();
    let f = solve_mc(&pkg).unwrap().f;
    check(50, |seed| {
        let mut r = random::rng(seed);
        let s = random::mixed(&mut r, Side::G, 6, &[3, 5], 2, 3);
        let there = gauge_transform(&g, &f, &s).unwrap();
        prop_assert_eq!(gauge_transform(&g, &there, &s.neg()).unwrap(), f.clone());
        Ok(())
    });
}

#[test]
fn canonical_x_is_central_on_invariants() {
    let g = LieAlgebra::su2();
    let x = canonical_x(3);
    assert!(ex::boundary(&g, &x).unwrap().is_zero());
    let basis: Vec<MixedElt> = (0..=2).flat_map(|s| (0..=3).flat_map(move |k| mixed_invariants(&LieAlgebra::su2(), Side::G, s, k))).collect();
    check(50, |seed| {
        let mut r = random::rng(seed);
        let mut phi = MixedElt::zero(Side::G, 3);
        for b in &basis {
            phi.add_assign_scaled(b, &random::small_q(&mut r));
        }
        prop_assert!(ex::schouten(&g, &x, &phi).unwrap().is_zero());
        Ok(())
    });
}
