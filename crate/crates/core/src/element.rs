//! Sparse elements of ∧g, ∧g*, Sg*⊗∧g and Sg*⊗∧g* (the Weil algebra).
//!
//! One generic type covers all four: blades index the exterior factor, and
//! the coefficient is either a rational (pure exterior elements) or a
//! polynomial in the v^a (mixed elements). The polynomial factor is even, so
//! products never pick up signs from it.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::blade::Blade;
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::poly::{Monomial, Poly};
use crate::rational::Q;

pub trait Coeff: Clone + PartialEq + Eq + Debug + Default {
    fn zero_c() -> Self;
    fn one_c() -> Self;
    fn is_zero_c(&self) -> bool;
    fn add_scaled_c(&mut self, other: &Self, s: &Q);
    fn mul_c(&self, other: &Self) -> Self;
    fn scale_c(&self, s: &Q) -> Self;
}

impl Coeff for Q {
    fn zero_c() -> Self {
        Q::zero()
    }
    fn one_c() -> Self {
        Q::one()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_scaled_c(&mut self, other: &Self, s: &Q) {
        *self += other * s;
    }
    fn mul_c(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_c(&self, s: &Q) -> Self {
        self * s
    }
}

impl Coeff for Poly {
    fn zero_c() -> Self {
        Poly::zero()
    }
    fn one_c() -> Self {
        Poly::one()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_scaled_c(&mut self, other: &Self, s: &Q) {
        self.add_scaled(other, s);
    }
    fn mul_c(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scale_c(&self, s: &Q) -> Self {
        self.scale(s)
    }
}

/// Which exterior algebra the blades live in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    /// ∧g
    G,
    /// ∧g*
    GDual,
}

impl Side {
    pub fn dual(self) -> Side {
        match self {
            Side::G => Side::GDual,
            Side::GDual => Side::G,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Elt<C: Coeff> {
    side: Side,
    dim: usize,
    terms: BTreeMap<Blade, C>,
}

pub type ExtElt = Elt<Q>;
pub type MixedElt = Elt<Poly>;

impl<C: Coeff> Elt<C> {
    pub fn zero(side: Side, dim: usize) -> Self {
        Elt { side, dim, terms: BTreeMap::new() }
    }

    pub fn one(side: Side, dim: usize) -> Self {
        Elt::term(side, dim, Blade::EMPTY, C::one_c())
    }

    pub fn term(side: Side, dim: usize, b: Blade, c: C) -> Self {
        let mut e = Elt::zero(side, dim);
        e.add_term(b, c);
        e
    }

    /// The generator e_i (or e^i), 0-based.
    pub fn generator(side: Side, dim: usize, i: usize) -> Self {
        Elt::term(side, dim, Blade::single(i), C::one_c())
    }

    /// Wedge of generators in the given order.
    pub fn from_indices(side: Side, dim: usize, idx: &[usize], c: C) -> Self {
        match Blade::from_indices(idx) {
            Some((neg, b)) => Elt::term(side, dim, b, if neg { c.scale_c(&-Q::one()) } else { c }),
            None => Elt::zero(side, dim),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Blade, C> {
        &self.terms
    }

    pub fn coeff(&self, b: Blade) -> Option<&C> {
        self.terms.get(&b)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.side == other.side && self.dim == other.dim
    }

    pub fn ensure_compatible(&self, other: &Self) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::Mismatch(format!(
                "{:?}/dim {} vs {:?}/dim {}",
                self.side, self.dim, other.side, other.dim
            )))
        }
    }

    pub fn ensure_side(&self, side: Side, what: &str) -> Result<()> {
        if self.side == side {
            Ok(())
        } else {
            Err(Error::Mismatch(format!("{what} expects {side:?}, got {:?}", self.side)))
        }
    }

    pub fn add_term(&mut self, b: Blade, c: C) {
        if c.is_zero_c() {
            return;
        }
        match self.terms.entry(b) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_scaled_c(&c, &Q::one());
                if o.get().is_zero_c() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled_term(&mut self, b: Blade, c: &C, s: &Q) {
        if s.is_zero() || c.is_zero_c() {
            return;
        }
        match self.terms.entry(b) {
            Entry::Vacant(v) => {
                v.insert(c.scale_c(s));
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_scaled_c(c, s);
                if o.get().is_zero_c() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, s: &Q) {
        assert!(self.compatible(other), "adding elements of different spaces");
        for (b, c) in &other.terms {
            self.add_scaled_term(*b, c, s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.clone();
        e.add_assign_scaled(other, &Q::one());
        e
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut e = self.clone();
        e.add_assign_scaled(other, &-Q::one());
        e
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Elt::zero(self.side, self.dim);
        }
        Elt { side: self.side, dim: self.dim, terms: self.terms.iter().map(|(b, c)| (*b, c.scale_c(s))).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    /// Multiplies every coefficient by `c` (from the left; coefficients are even).
    pub fn mul_coeff(&self, c: &C) -> Self {
        let mut e = Elt::zero(self.side, self.dim);
        for (b, x) in &self.terms {
            e.add_term(*b, c.mul_c(x));
        }
        e
    }

    /// Part with blades of size `k`.
    pub fn component(&self, k: usize) -> Self {
        Elt {
            side: self.side,
            dim: self.dim,
            terms: self.terms.iter().filter(|(b, _)| b.len() == k).map(|(b, c)| (*b, c.clone())).collect(),
        }
    }

    pub fn blade_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(|b| b.len()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|b| b.len() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|b| b.len() % 2 == 1)
    }

    /// Applies a blade-level linear map landing on `side`.
    pub fn map_blades_to<F>(&self, side: Side, mut f: F) -> Self
    where
        F: FnMut(Blade, &mut Vec<(Blade, Q)>),
    {
        let mut out = Elt::zero(side, self.dim);
        let mut buf = Vec::new();
        for (b, c) in &self.terms {
            buf.clear();
            f(*b, &mut buf);
            for (b2, s) in &buf {
                out.add_scaled_term(*b2, c, s);
            }
        }
        out
    }

    pub fn map_blades<F>(&self, f: F) -> Self
    where
        F: FnMut(Blade, &mut Vec<(Blade, Q)>),
    {
        self.map_blades_to(self.side, f)
    }

    /// Exterior product; coefficients multiply without sign.
    pub fn wedge(&self, other: &Self) -> Self {
        assert!(self.compatible(other), "wedge of elements of different spaces");
        let mut out = Elt::zero(self.side, self.dim);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                if let Some((neg, b)) = b1.wedge(*b2) {
                    let c = c1.mul_c(c2);
                    out.add_scaled_term(b, &c, &crate::rational::sign(neg));
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Elt::one(self.side, self.dim);
        for _ in 0..k {
            acc = acc.wedge(self);
        }
        acc
    }

    /// `exp` of an even element without blade-size-0 part (finite series).
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::Parity("exp needs an even element".into()));
        }
        if self.terms.contains_key(&Blade::EMPTY) {
            return Err(Error::Parity("exp needs a vanishing blade-size-0 part".into()));
        }
        let mut acc = Elt::one(self.side, self.dim);
        let mut power = Elt::one(self.side, self.dim);
        let mut k = 0usize;
        loop {
            k += 1;
            power = power.wedge(self).scale(&Q::new(1.into(), (k as i64).into()));
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc)
    }

    /// `log F = -Σ (1-F)^k / k` for `F` with blade-size-0 part exactly 1.
    pub fn log_unipotent(&self) -> Result<Self> {
        let one = Elt::one(self.side, self.dim);
        let nil = one.sub(self);
        if nil.terms.contains_key(&Blade::EMPTY) {
            return Err(Error::NotUnipotent);
        }
        let mut acc = Elt::zero(self.side, self.dim);
        let mut power = one;
        let mut k = 0i64;
        loop {
            k += 1;
            power = power.wedge(&nil);
            if power.is_zero() {
                break;
            }
            acc.add_assign_scaled(&power, &-Q::new(1.into(), k.into()));
        }
        Ok(acc)
    }
}

impl ExtElt {
    pub fn to_mixed(&self) -> MixedElt {
        let mut e = MixedElt::zero(self.side, self.dim);
        for (b, c) in &self.terms {
            e.add_term(*b, Poly::constant(c.clone()));
        }
        e
    }

    pub fn scalar_part(&self) -> Q {
        self.terms.get(&Blade::EMPTY).cloned().unwrap_or_else(Q::zero)
    }
}

impl MixedElt {
    /// Coefficients must be constants.
    pub fn to_ext(&self) -> Option<ExtElt> {
        let mut e = ExtElt::zero(self.side, self.dim);
        for (b, c) in &self.terms {
            if c.degree().unwrap_or(0) > 0 {
                return None;
            }
            e.add_term(*b, c.constant_term());
        }
        Some(e)
    }

    pub fn from_poly(side: Side, dim: usize, p: &Poly) -> Self {
        MixedElt::term(side, dim, Blade::EMPTY, p.clone())
    }

    pub fn scalar_poly(&self) -> Poly {
        self.terms.get(&Blade::EMPTY).cloned().unwrap_or_default()
    }

    /// Largest S-degree present.
    pub fn s_degree(&self) -> usize {
        self.terms.values().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        self.mul_coeff(p)
    }

    /// Part of S-degree `s` and blade size `k`.
    pub fn homogeneous(&self, s: usize, k: usize) -> Self {
        let mut e = MixedElt::zero(self.side, self.dim);
        for (b, c) in &self.terms {
            if b.len() == k {
                e.add_term(*b, c.homogeneous(s));
            }
        }
        e
    }

    /// All (S-degree, blade size) pairs that occur.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self
            .terms
            .iter()
            .flat_map(|(b, c)| c.terms().keys().map(move |m| (m.degree(), b.len())))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Total degree of a homogeneous element, or `None` if mixed.
    pub fn total_degree(&self) -> Option<i64> {
        let sign = if self.side == Side::G { -1 } else { 1 };
        let mut degs = self.bidegrees().into_iter().map(|(s, b)| 2 * s as i64 + sign * b as i64);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// The coadjoint derivation L^S(e_a) on the polynomial factor.
    pub fn lie_derivative_s(&self, g: &LieAlgebra, a: usize) -> Self {
        let mut e = MixedElt::zero(self.side, self.dim);
        for (b, c) in &self.terms {
            e.add_term(*b, c.lie_derivative(g, a));
        }
        e
    }

    pub fn mul_var(&self, a: usize) -> Self {
        let mut e = MixedElt::zero(self.side, self.dim);
        for (b, c) in &self.terms {
            e.add_term(*b, c.mul_var(a));
        }
        e
    }

    /// Flattens to (monomial, blade) → rational.
    pub fn flat_terms(&self) -> Vec<(Monomial, Blade, Q)> {
        let mut v: Vec<(Monomial, Blade, Q)> = self
            .terms
            .iter()
            .flat_map(|(b, c)| c.terms().iter().map(move |(m, q)| (m.clone(), *b, q.clone())))
            .collect();
        v.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        v
    }

    pub fn from_flat(side: Side, dim: usize, terms: impl IntoIterator<Item = (Monomial, Blade, Q)>) -> Self {
        let mut e = MixedElt::zero(side, dim);
        for (m, b, q) in terms {
            e.add_term(b, Poly::term(m, q));
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn wedge_examples() {
        let e = |i| ExtElt::generator(Side::G, 3, i);
        let e12 = e(0).wedge(&e(1));
        assert_eq!(e(1).wedge(&e(0)), e12.neg());
        let lhs = e(0).add(&e(1)).wedge(&e(0).wedge(&e(2)));
        assert_eq!(lhs, ExtElt::term(Side::G, 3, Blade(0b111), q(-1)));
    }

    #[test]
    fn exp_log_roundtrip() {
        let x = ExtElt::from_indices(Side::G, 4, &[0, 1], q(2)).add(&ExtElt::from_indices(Side::G, 4, &[2, 3], q(3)));
        let e = x.exp_nilpotent().unwrap();
        assert_eq!(e.component(4), ExtElt::from_indices(Side::G, 4, &[0, 1, 2, 3], q(6)));
        assert_eq!(e.log_unipotent().unwrap(), x);
        assert!(ExtElt::generator(Side::G, 2, 0).exp_nilpotent().is_err());
    }
}
