//! Concrete graded bases: truncated Sg*, the exterior algebras ∧g and ∧g*,
//! and their tensor product Sg*⊗∧ (the Weil algebra on the dual side).
//!
//! Sg* puts v^a in degree 2, so S-degree s sits in graded degree 2s and a
//! cutoff D keeps degrees 0..=2D+1 as an incomplete slice.

use std::collections::BTreeMap;

use crate::blade::{Blade, BladeBasis};
use crate::element::{ExtElt, MixedElt, Side};
use crate::exterior;
use crate::graded::{tensor_index, GradedOp, GradedSpace};
use crate::lie::LieAlgebra;
use crate::linalg::{Accum, SparseVec};
use crate::poly::{Monomial, Poly};
use crate::rational::Q;

#[derive(Clone, Debug)]
pub struct SymSpace {
    n: usize,
    cutoff: usize,
    monos: Vec<Vec<Monomial>>,
    index: Vec<BTreeMap<Monomial, usize>>,
    space: GradedSpace,
}

impl SymSpace {
    pub fn new(n: usize, cutoff: usize) -> Self {
        let monos: Vec<Vec<Monomial>> = (0..=cutoff).map(|s| Monomial::all_of_degree(n, s)).collect();
        let index = monos.iter().map(|ms| ms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()).collect();
        let mut dims = vec![0; 2 * cutoff + 2];
        for (s, ms) in monos.iter().enumerate() {
            dims[2 * s] = ms.len();
        }
        SymSpace { n, cutoff, monos, index, space: GradedSpace::new(dims, false) }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn monomials(&self, s: usize) -> &[Monomial] {
        self.monos.get(s).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m.degree())?.get(m).copied()
    }

    pub fn to_vec(&self, p: &Poly, s: usize) -> SparseVec {
        SparseVec::from_pairs(
            p.terms()
                .iter()
                .filter(|(m, _)| m.degree() == s)
                .map(|(m, c)| (self.index[s][m], c.clone()))
                .collect(),
        )
    }

    pub fn from_vec(&self, s: usize, v: &SparseVec) -> Poly {
        Poly::from_terms(v.iter().map(|(i, c)| (self.monos[s][*i].clone(), c.clone())))
    }

    /// Operator of graded degree `2·shift` given on monomials.
    pub fn op_from_fn<F>(&self, tgt: &SymSpace, shift: i64, f: F) -> GradedOp
    where
        F: Fn(&Monomial) -> Poly,
    {
        GradedOp::from_fn(&self.space, &tgt.space, 2 * shift, |k, j| {
            if k % 2 == 1 {
                return SparseVec::new();
            }
            let s = k / 2;
            let image = f(&self.monos[s][j]);
            tgt.to_vec(&image, (s as i64 + shift) as usize)
        })
    }

    /// Multiplication by a homogeneous polynomial.
    pub fn mult(&self, p: &Poly) -> GradedOp {
        let e = p.degree().unwrap_or(0);
        debug_assert!(p.terms().keys().all(|m| m.degree() == e), "multiplier must be homogeneous");
        self.op_from_fn(self, e as i64, |m| p.mul(&Poly::term(m.clone(), Q::from_integer(1.into()))))
    }

    pub fn mult_var(&self, a: usize) -> GradedOp {
        self.op_from_fn(self, 1, |m| Poly::term(m.mul_var(a), Q::from_integer(1.into())))
    }

    /// L^S(e_a), the coadjoint action extended as a derivation.
    pub fn lie(&self, g: &LieAlgebra, a: usize) -> GradedOp {
        self.op_from_fn(self, 0, |m| Poly::term(m.clone(), Q::from_integer(1.into())).lie_derivative(g, a))
    }

    /// ∂/∂v^a.
    pub fn deriv(&self, a: usize) -> GradedOp {
        self.op_from_fn(self, -1, |m| Poly::term(m.clone(), Q::from_integer(1.into())).derivative(a))
    }

    /// Substitution v^b ↦ images[b] into another polynomial ring (linear images).
    pub fn substitution(&self, tgt: &SymSpace, images: &[Poly]) -> GradedOp {
        self.op_from_fn(tgt, 0, |m| Poly::term(m.clone(), Q::from_integer(1.into())).substitute(images))
    }
}

#[derive(Clone, Debug)]
pub struct ExtSpace {
    side: Side,
    basis: BladeBasis,
    space: GradedSpace,
}

impl ExtSpace {
    pub fn new(side: Side, n: usize) -> Self {
        let basis = BladeBasis::new(n);
        let dims = (0..=n).map(|k| basis.count(k)).collect();
        ExtSpace { side, basis, space: GradedSpace::new(dims, true) }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &BladeBasis {
        &self.basis
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn to_vec(&self, x: &ExtElt, k: usize) -> SparseVec {
        exterior::to_vector(x, &self.basis, k)
    }

    pub fn from_vec(&self, k: usize, v: &SparseVec) -> ExtElt {
        exterior::from_vector(v, &self.basis, k, self.side)
    }

    /// Operator given on blades.
    pub fn op_from_fn<F>(&self, degree: i64, f: F) -> GradedOp
    where
        F: Fn(Blade) -> ExtElt,
    {
        GradedOp::from_fn(&self.space, &self.space, degree, |k, j| {
            let b = self.basis.blades(k)[j];
            self.to_vec(&f(b), (k as i64 + degree) as usize)
        })
    }

    fn blade(&self, b: Blade) -> ExtElt {
        ExtElt::term(self.side, self.dim(), b, Q::from_integer(1.into()))
    }

    /// d on ∧g*, ∂ on ∧g.
    pub fn differential(&self, g: &LieAlgebra) -> GradedOp {
        match self.side {
            Side::GDual => self.op_from_fn(1, |b| self.blade(b).map_blades(|x, o| exterior::d_blade(g, x, o))),
            Side::G => self.op_from_fn(-1, |b| self.blade(b).map_blades(|x, o| exterior::boundary_blade(g, x, o))),
        }
    }

    /// Contraction by the `a`-th generator of the dual side.
    pub fn iota(&self, a: usize) -> GradedOp {
        self.op_from_fn(-1, |b| exterior::contract_index(a, &self.blade(b)))
    }

    /// Left multiplication by the `a`-th generator.
    pub fn eps(&self, a: usize) -> GradedOp {
        self.op_from_fn(1, |b| exterior::left_index(a, &self.blade(b)))
    }

    pub fn lie(&self, g: &LieAlgebra, a: usize) -> GradedOp {
        self.op_from_fn(0, |b| exterior::lie_derivative(g, a, &self.blade(b)))
    }

    /// ι(x) for a homogeneous x on the dual side.
    pub fn contract_by(&self, x: &ExtElt) -> GradedOp {
        let k = x.blade_sizes().first().copied().unwrap_or(0) as i64;
        self.op_from_fn(-k, |b| exterior::contract_unchecked(x, &self.blade(b)))
    }

    /// Left multiplication by a homogeneous x on the same side.
    pub fn wedge_by(&self, x: &ExtElt) -> GradedOp {
        let k = x.blade_sizes().first().copied().unwrap_or(0) as i64;
        self.op_from_fn(k, |b| x.wedge(&self.blade(b)))
    }

    /// μ: ∧⊗∧ → ∧ on the tensor square.
    pub fn product(&self) -> GradedOp {
        let sq = self.space.tensor(&self.space);
        GradedOp::from_fn(&sq, &self.space, 0, |k, j| {
            let (i, a, b) = GradedSpace::tensor_split(&self.space, &self.space, k, j);
            let x = self.blade(self.basis.blades(i)[a]);
            let y = self.blade(self.basis.blades(k - i)[b]);
            self.to_vec(&x.wedge(&y), k)
        })
    }
}

/// Sg*⊗∧ with the polynomial factor first.
#[derive(Clone, Debug)]
pub struct MixedSpace {
    pub sym: SymSpace,
    pub ext: ExtSpace,
    space: GradedSpace,
}

impl MixedSpace {
    pub fn new(side: Side, n: usize, cutoff: usize) -> Self {
        let sym = SymSpace::new(n, cutoff);
        let ext = ExtSpace::new(side, n);
        let space = sym.space().tensor(ext.space());
        MixedSpace { sym, ext, space }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn cutoff(&self) -> usize {
        self.sym.cutoff()
    }

    /// Component of total degree `k` as a coordinate vector.
    pub fn to_vec(&self, x: &MixedElt, k: usize) -> SparseVec {
        let mut acc = Accum::new();
        for (m, b, c) in x.flat_terms() {
            let s = m.degree();
            if 2 * s + b.len() != k {
                continue;
            }
            let im = self.sym.index_of(&m).expect("monomial beyond cutoff");
            let ib = self.ext.basis().index(b);
            acc.add(tensor_index(self.sym.space(), self.ext.space(), 2 * s, im, b.len(), ib), c);
        }
        acc.finish()
    }

    pub fn from_vec(&self, k: usize, v: &SparseVec) -> MixedElt {
        let terms = v.iter().map(|(j, c)| {
            let (i, a, b) = GradedSpace::tensor_split(self.sym.space(), self.ext.space(), k, *j);
            (self.sym.monomials(i / 2)[a].clone(), self.ext.basis().blades(k - i)[b], c.clone())
        });
        MixedElt::from_flat(self.ext.side(), self.ext.dim(), terms)
    }

    pub fn basis_elt(&self, k: usize, j: usize) -> MixedElt {
        self.from_vec(k, &SparseVec::unit(j))
    }

    /// Operator given by an element-level map of fixed degree.
    pub fn op_from_fn<F>(&self, degree: i64, f: F) -> GradedOp
    where
        F: Fn(&MixedElt) -> MixedElt,
    {
        GradedOp::from_fn(&self.space, &self.space, degree, |k, j| {
            let image = f(&self.basis_elt(k, j));
            self.to_vec(&image, (k as i64 + degree) as usize)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil;

    #[test]
    fn sym_dims_and_truncation() {
        let s = SymSpace::new(3, 2);
        assert_eq!(s.space().dims(), &[1, 0, 3, 0, 6, 0]);
        let v = s.mult_var(0);
        assert!(v.block(2).is_some());
        assert!(v.block(4).is_none());
        let comm = GradedOp::commutator(&s.deriv(1), &s.mult_var(1));
        assert!(comm.compare(&GradedOp::identity(s.space())).ok());
    }

    #[test]
    fn exterior_ops_match_elements() {
        let g = LieAlgebra::su2();
        let e = ExtSpace::new(Side::GDual, 3);
        let d = e.differential(&g);
        assert!(d.compose(&d).zero_check().ok());
        for a in 0..3 {
            let l = GradedOp::commutator(&d, &e.iota(a));
            assert!(l.compare(&e.lie(&g, a)).ok());
        }
        let mu = e.product();
        assert_eq!(mu.src().dims()[3], 20);
    }

    #[test]
    fn weil_differential_as_matrix() {
        let g = LieAlgebra::su2();
        let w = MixedSpace::new(Side::GDual, 3, 2);
        let dw = w.op_from_fn(1, |x| weil::weil_differential(&g, x));
        assert!(dw.compose(&dw).zero_check().ok());
        let x = w.basis_elt(3, 4);
        assert_eq!(w.from_vec(3, &w.to_vec(&x, 3)), x);
    }
}
