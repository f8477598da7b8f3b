//! Seeded random elements for the identity suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blade::{Blade, BladeBasis};
use crate::element::{ExtElt, MixedElt, Side};
use crate::poly::{Monomial, Poly};
use crate::rational::{qf, Q};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational with numerator in ±1..=3 and denominator 1..=3.
pub fn small_q(r: &mut TestRng) -> Q {
    let n: i64 = r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 };
    qf(n, r.gen_range(1..=3))
}

pub fn blade_of_size(r: &mut TestRng, basis: &BladeBasis, k: usize) -> Option<Blade> {
    basis.blades(k).choose(r).copied()
}

/// Random element with `terms` terms, blade sizes drawn from `sizes`.
pub fn ext(r: &mut TestRng, side: Side, n: usize, sizes: &[usize], terms: usize) -> ExtElt {
    let basis = BladeBasis::new(n);
    let mut x = ExtElt::zero(side, n);
    for _ in 0..terms {
        let k = *sizes.choose(r).expect("nonempty sizes");
        if let Some(b) = (k <= n).then(|| blade_of_size(r, &basis, k)).flatten() {
            x.add_term(b, small_q(r));
        }
    }
    x
}

pub fn poly(r: &mut TestRng, n: usize, max_deg: usize, terms: usize) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..terms {
        let d = r.gen_range(0..=max_deg);
        let monos = Monomial::all_of_degree(n, d);
        p.add_term(monos.choose(r).expect("nonempty").clone(), small_q(r));
    }
    p
}

/// Random mixed element; each term gets a random monomial of S-degree ≤ `max_deg`.
pub fn mixed(r: &mut TestRng, side: Side, n: usize, sizes: &[usize], max_deg: usize, terms: usize) -> MixedElt {
    let basis = BladeBasis::new(n);
    let mut x = MixedElt::zero(side, n);
    for _ in 0..terms {
        let k = *sizes.choose(r).expect("nonempty sizes");
        if let Some(b) = (k <= n).then(|| blade_of_size(r, &basis, k)).flatten() {
            let d = r.gen_range(0..=max_deg);
            let m = Monomial::all_of_degree(n, d).choose(r).expect("nonempty").clone();
            x.add_term(b, Poly::term(m, small_q(r)));
        }
    }
    x
}

/// Even blade sizes in 2..=n.
pub fn even_negative_sizes(n: usize) -> Vec<usize> {
    (2..=n).step_by(2).collect()
}

/// Odd blade sizes in 1..=n.
pub fn odd_sizes(n: usize) -> Vec<usize> {
    (1..=n).step_by(2).collect()
}

pub fn all_sizes(n: usize) -> Vec<usize> {
    (0..=n).collect()
}
