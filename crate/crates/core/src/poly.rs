//! Polynomials in the generators v^1..v^n of Sg*.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::lie::LieAlgebra;
use crate::rational::Q;

/// Exponent vector with trailing zeros trimmed, so it does not depend on the
/// number of variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: &[u8]) -> Self {
        let mut v = e.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn exponent(&self, i: usize) -> u8 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Exponents padded to `n` variables.
    pub fn exponents(&self, n: usize) -> Vec<u8> {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0);
        v
    }

    pub fn nvars_used(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut v = a.0.clone();
        for (i, e) in b.0.iter().enumerate() {
            v[i] += e;
        }
        Monomial(v)
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] += 1;
        Monomial(v)
    }

    /// Divides by v^i once; `None` if v^i does not divide.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exponent(i) == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(Monomial::from_exponents(&v))
    }

    /// All monomials of degree `d` in `n` variables, in monomial order.
    pub fn all_of_degree(n: usize, d: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; n];
        fn rec(i: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
            let n = cur.len();
            if i + 1 == n {
                cur[i] = left as u8;
                out.push(Monomial::from_exponents(cur));
                cur[i] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e as u8;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if n == 0 {
            if d == 0 {
                out.push(Monomial::one());
            }
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    /// Graded, then larger exponent of earlier variables first.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let n = self.0.len().max(other.0.len());
        for i in 0..n {
            let (a, b) = (self.exponent(i), other.exponent(i));
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

pub type PolyElt = Poly;

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn var(i: usize) -> Self {
        Poly::term(Monomial::var(i), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
            *e += c * s;
        }
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(other, &Q::one());
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(other, &-Q::one());
        p
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Q::one())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *out.entry(m1.mul(m2)).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Poly { terms: out }
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn mul_var(&self, i: usize) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.mul_var(i), c.clone())).collect() }
    }

    /// Largest S-degree present, or `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn homogeneous(&self, d: usize) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Q::zero)
    }

    /// Partial derivative in v^i.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some(r) = m.div_var(i) {
                out.add_term(r, c * Q::from_integer(m.exponent(i).into()));
            }
        }
        out
    }

    /// Applies the derivation with `v^i ↦ images[i]`.
    pub fn derivation(&self, images: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for i in 0..images.len() {
            if images[i].is_zero() {
                continue;
            }
            let d = self.derivative(i);
            if !d.is_zero() {
                out.add_scaled(&d.mul(&images[i]), &Q::one());
            }
        }
        out
    }

    /// Coadjoint derivation L^S(e_a).
    pub fn lie_derivative(&self, g: &LieAlgebra, a: usize) -> Poly {
        let images: Vec<Poly> = (0..g.dim())
            .map(|b| Poly::from_terms(g.coadjoint(a, b).iter().map(|(c, v)| (Monomial::var(*c), v.clone()))))
            .collect();
        self.derivation(&images)
    }

    /// Substitutes `v^i ↦ images[i]` (algebra homomorphism).
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    t = t.mul(&images[i].pow(*e as usize));
                }
            }
            out.add_scaled(&t, &Q::one());
        }
        out
    }

    pub fn is_invariant(&self, g: &LieAlgebra) -> bool {
        (0..g.dim()).all(|a| self.lie_derivative(g, a).is_zero())
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { format!("v{}", i + 1) } else { format!("v{}^{}", i + 1, e) })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn monomial_basics() {
        let v1 = Monomial::var(0);
        assert_eq!(v1.mul(&v1).exponents(3), vec![2, 0, 0]);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(3, 2)[0].exponents(3), vec![2, 0, 0]);
    }

    #[test]
    fn casimir_polynomial_is_invariant() {
        let g = LieAlgebra::su2();
        let p = Poly::var(0).pow(2).add(&Poly::var(1).pow(2)).add(&Poly::var(2).pow(2));
        assert!(p.is_invariant(&g));
        assert!(!Poly::var(0).is_invariant(&g));
        assert_eq!(Poly::var(0).mul(&Poly::var(0)).derivative(0), Poly::var(0).scale(&q(2)));
    }
}
