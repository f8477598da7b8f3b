//! Seeded identity suites over random elements, shared by `weilmc selftest`
//! and the property tests.

use crate::element::{ExtElt, MixedElt, Side};
use crate::exterior as ex;
use crate::hodge::mixed_invariants;
use crate::lie::LieAlgebra;
use crate::mc::{curvature, exp_ad, gauge_transform};
use crate::random::{self, TestRng};
use crate::rational::{half, sign};
use crate::weil;

use rand::Rng;

pub type Outcome = std::result::Result<(), String>;
pub type Identity = fn(&LieAlgebra, &mut TestRng) -> Outcome;

fn expect<T: PartialEq>(lhs: T, rhs: T, what: &str) -> Outcome {
    if lhs == rhs {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn homogeneous(r: &mut TestRng, side: Side, n: usize, k: usize) -> ExtElt {
    random::ext(r, side, n, &[k], 3)
}

fn any_size(r: &mut TestRng, n: usize) -> usize {
    r.gen_range(0..=n)
}

/// d² = 0 on ∧g*, ∂² = 0 and δ² = 0 on ∧g.
pub fn squares_vanish(g: &LieAlgebra, r: &mut TestRng) -> Outcome {
    let n = g.dim();
    let y = random::ext(r, Side::GDual, n, &random::all_sizes(n), 5);
    let x = random::ext(r, Side::G, n, &random::all_sizes(n), 5);
    let dd = ex::d_coboundary(g, &ex::d_coboundary(g, &y).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    expect(dd.is_zero(), true, "d^2 != 0")?;
    let bb = ex::boundary(g, &ex::boundary(g, &x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    expect(bb.is_zero(), true, "del^2 != 0")?;
    let tt = ex::delta(g, &ex::delta(g, &x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    expect(tt.is_zero(), true, "delta^2 != 0")
}

/// [d, ι(f)] = −ι(∂f) + Σ_a ι(ι*(e^a)f) L(e_a) on ∧g*.
pub fn cartan_formula(g: &LieAlgebra, r: &mut TestRng) -> Outcome {
    let n = g.dim();
    let k = any_size(r, n);
    let f = homogeneous(r, Side::G, n, k);
    let y = random::ext(r, Side::GDual, n, &random::all_sizes(n), 4);
    let d = |x: &ExtElt| ex::d_coboundary(g, x).expect("dual side");
    let lhs = d(&ex::contract_unchecked(&f, &y)).sub(&ex::contract_unchecked(&f, &d(&y)).scale(&sign(k % 2 == 1)));
    let df = ex::boundary(g, &f).map_err(|e| e.to_string())?;
    let mut rhs = ex::contract_unchecked(&df, &y).neg();
    for a in 0..n {
        rhs = rhs.add(&ex::contract_unchecked(&ex::contract_index(a, &f), &ex::lie_derivative(g, a, &y)));
    }
    expect(lhs, rhs, "generalized Cartan formula")
}

fn even_f(r: &mut TestRng, n: usize) -> ExtElt {
    random::ext(r, Side::G, n, &random::even_negative_sizes(n), 3)
}

fn curvature_ext(g: &LieAlgebra, f: &ExtElt) -> ExtElt {
    ex::boundary(g, f).expect("side G").add(&ex::schouten_unchecked(g, f, f).scale(&half()))
}

/// e^{−ι(f)} d e^{ι(f)} = d − ι(∂f + ½[f,f]) + Σ_a ι(ι*(e^a)f) L(e_a).
pub fn conjugated_coboundary(g: &LieAlgebra, r: &mut TestRng) -> Outcome {
    let n = g.dim();
    let f = even_f(r, n);
    let y = random::ext(r, Side::GDual, n, &random::all_sizes(n), 4);
    let ef = f.exp_nilpotent().map_err(|e| e.to_string())?;
    let emf = f.neg().exp_nilpotent().map_err(|e| e.to_string())?;
    let d = |x: &ExtElt| ex::d_coboundary(g, x).expect("dual side");
    let lhs = ex::contract_unchecked(&emf, &d(&ex::contract_unchecked(&ef, &y)));
    let mut rhs = d(&y).sub(&ex::contract_unchecked(&curvature_ext(g, &f), &y));
    for a in 0..n {
        rhs = rhs.add(&ex::contract_unchecked(&ex::contract_index(a, &f), &ex::lie_derivative(g, a, &y)));
    }
    expect(lhs, rhs, "conjugated coboundary")
}

/// e^{−f} ∂(e^f) = ∂f + ½[f,f].
pub fn exponential_boundary(g: &LieAlgebra, r: &mut TestRng) -> Outcome {
    let f = even_f(r, g.dim());
    let ef = f.exp_nilpotent().map_err(|e| e.to_string())?;
    let emf = f.neg().exp_nilpotent().map_err(|e| e.to_string())?;
    let lhs = emf.wedge(&ex::boundary(g, &ef).map_err(|e| e.to_string())?);
    expect(lhs, curvature_ext(g, &f), "exponential boundary")
}

/// ∂(f∧h) = ∂f∧h + (−1)^{|f|} f∧∂h + (−1)^{|f|}[f,h].
pub fn boundary_of_product(g: &LieAlgebra, r: &mut TestRng) -> Outcome {
    let n = g.dim();
    let k = any_size(r, n);
    let f = homogeneous(r, Side::G, n, k);
    let h = random::ext(r, Side::G, n, &random::all_sizes(n), 3);
    let b = |x: &ExtElt| ex::boundary(g, x).expect("side G");
    let s = sign(k % 2 == 1);
    let rhs = b(&f).wedge(&h).add(&f.wedge(&b(&h)).scale(&s)).add(&ex::schouten_unchecked(g, &f, &h).scale(&s));
    expect(b(&f.wedge(&h)), rhs, "boundary of a product")
}

/// Graded antisymmetry and Jacobi for the Schouten bracket, degrees shifted by one.
pub fn schouten_jacobi(g: &LieAlgebra, r: &mut TestRng) -> Outcome {
    let n = g.dim();
    let ks: Vec<usize> = (0..3).map(|_| r.gen_range(1..=n)).collect();
    let x = homogeneous(r, Side::G, n, ks[0]);
    let y = homogeneous(r, Side::G, n, ks[1]);
    let z = homogeneous(r, Side::G, n, ks[2]);
    let sh = |k: usize| k as i64 - 1;
    let br = |a: &ExtElt, b: &ExtElt| ex::schouten_unchecked(g, a, b);
    let sxy = sign((sh(ks[0]) * sh(ks[1])).rem_euclid(2) == 1);
    expect(br(&x, &y), br(&y, &x).scale(&sxy).neg(), "graded antisymmetry")?;
    let lhs = br(&x, &br(&y, &z));
    let rhs = br(&br(&x, &y), &z).add(&br(&y, &br(&x, &z)).scale(&sxy));
    expect(lhs, rhs, "graded Jacobi")
}

fn even_mixed(r: &mut TestRng, n: usize) -> MixedElt {
    random::mixed(r, Side::G, n, &random::even_negative_sizes(n), 2, 3)
}

/// Random combination of invariants in S^{≤1}g*⊗∧^{even ≥ 2}g.
fn invariant_even_mixed(g: &LieAlgebra, r: &mut TestRng) -> MixedElt {
    let n = g.dim();
    let mut f = MixedElt::zero(Side::G, n);
    for s in 0..=1 {
        for k in random::even_negative_sizes(n.min(4)) {
            for x in mixed_invariants(g, Side::G, s, k) {
                if r.gen_bool(0.7) {
                    f.add_assign_scaled(&x, &random::small_q(r));
                }
            }
        }
    }
    f
}

/// e^{−ι(f)} d^W e^{ι(f)} = d^W + ι(∂f + ½[f,f]) + Σ_a ι(ι*(e^a)f) L^S(e_a) on Wg, f invariant.
pub fn weil_conjugation(g: &LieAlgebra, r: &mut TestRng) -> Outcome {
    let n = g.dim();
    let f = invariant_even_mixed(g, r);
    let w = random::mixed(r, Side::GDual, n, &random::all_sizes(n), 2, 4);
    let lhs = weil::conjugated_differential(g, &f, &w).map_err(|e| e.to_string())?;
    expect(lhs, weil::conjugation_rhs(g, &f, &w), "Weil conjugation")
}

/// Curvature of exp(s).f equals e^{ad_s} applied to the curvature of f.
pub fn gauge_curvature(g: &LieAlgebra, r: &mut TestRng) -> Outcome {
    let n = g.dim();
    let f = even_mixed(r, n);
    let sizes: Vec<usize> = (3..=n).step_by(2).collect();
    if sizes.is_empty() {
        return Ok(());
    }
    let s = random::mixed(r, Side::G, n, &sizes, 2, 2);
    let gf = gauge_transform(g, &f, &s).map_err(|e| e.to_string())?;
    let rhs = exp_ad(g, &s, &curvature(g, &f)).map_err(|e| e.to_string())?;
    expect(curvature(g, &gf), rhs, "gauge curvature equivariance")
}

pub const SUITES: &[(&str, Identity)] = &[
    ("d^2 = del^2 = delta^2 = 0", squares_vanish),
    ("generalized Cartan formula", cartan_formula),
    ("conjugated coboundary", conjugated_coboundary),
    ("exponential boundary", exponential_boundary),
    ("boundary of a product", boundary_of_product),
    ("Schouten graded Jacobi", schouten_jacobi),
    ("Weil conjugation", weil_conjugation),
    ("gauge curvature equivariance", gauge_curvature),
];

/// Runs `trials` random trials of one identity; trial i uses seed `seed + i`.
pub fn run(g: &LieAlgebra, id: Identity, seed: u64, trials: usize) -> Outcome {
    for i in 0..trials as u64 {
        let mut r = random::rng(seed.wrapping_add(i));
        id(g, &mut r).map_err(|e| format!("trial {i}: {e}"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_su2() {
        let g = LieAlgebra::su2();
        for (name, id) in SUITES {
            assert_eq!(run(&g, *id, 7, 5), Ok(()), "{name}");
        }
    }
}
