//! Hodge theory on ∧g: invariants, the Laplacian δ∂ + ∂δ, Green's operator,
//! the homotopy 𝒮 = 𝒢δ, primitive elements and their dual basis.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::blade::{Blade, BladeBasis};
use crate::element::{ExtElt, MixedElt, Side};
use crate::error::{Error, Result};
use crate::exterior::{self, boundary_blade, form_on_blades, lie_blade};
use crate::lie::LieAlgebra;
use crate::linalg::{Mat, SparseVec, Subspace};
use crate::poly::{Monomial, Poly};
use crate::rational::{half, Q};

/// Operators on ∧^k g for one blade size k.
#[derive(Clone, Debug)]
pub struct HodgeSlice {
    pub k: usize,
    pub dim: usize,
    /// ∂ : ∧^k → ∧^{k-1}
    pub boundary: Mat,
    /// δ : ∧^k → ∧^{k+1}
    pub delta: Mat,
    pub lie: Vec<Mat>,
    pub invariants: Subspace,
    pub laplacian: Mat,
    pub projection: Mat,
    pub green: Mat,
    /// 𝒮 = 𝒢δ : ∧^k → ∧^{k+1}
    pub homotopy: Mat,
}

#[derive(Clone, Debug)]
pub struct Primitive {
    pub degree: usize,
    pub c: ExtElt,
    /// Dual element in (∧g*)_inv with ι(c_i) c^j = δ_ij.
    pub dual: ExtElt,
}

#[derive(Clone, Debug)]
pub struct HodgePackage {
    alg: LieAlgebra,
    basis: BladeBasis,
    slices: Vec<HodgeSlice>,
    dual_invariants: Vec<Subspace>,
    decomposables: Vec<Subspace>,
    primitives: Vec<Primitive>,
}

fn hypothesis(check: &str, k: usize) -> Error {
    Error::HodgeHypothesis { check: check.into(), slice: k }
}

/// Stacked kernel of the given operators on a space of dimension `dim`.
pub fn joint_kernel(dim: usize, ops: &[Mat]) -> Subspace {
    if ops.is_empty() {
        return Subspace::full(dim);
    }
    let refs: Vec<&Mat> = ops.iter().collect();
    Subspace::kernel_of(&Mat::vstack(dim, &refs))
}

/// Projection onto `ker` along `im`, which must be complementary.
pub fn projection_along(ker: &Subspace, im: &Subspace) -> Option<Mat> {
    let n = ker.ambient();
    if ker.dim() + im.dim() != n {
        return None;
    }
    let mut cols: Vec<SparseVec> = ker.basis().to_vec();
    cols.extend(im.basis().iter().cloned());
    let t = Mat::from_cols(n, &cols);
    let tinv = t.inverse()?;
    let mut diag = Mat::zeros(n, n);
    for i in 0..ker.dim() {
        diag.embed(i, i, &Mat::identity(1));
    }
    Some(t.mul(&diag).mul(&tinv))
}

/// Green's operator of `lap` given the projection onto its kernel.
pub fn green_operator(lap: &Mat, proj: &Mat) -> Option<Mat> {
    Some(lap.add(proj).inverse()?.sub(proj))
}

/// Casimir Σ_{a,b} B^{ab} L_b L_a assembled from per-basis operators.
pub fn casimir(alg: &LieAlgebra, lie: &[Mat], dim: usize) -> Mat {
    let binv = alg.form_inv();
    let mut cas = Mat::zeros(dim, dim);
    for (a, row) in binv.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            if !v.is_zero() {
                cas = cas.axpy(v, &lie[b].mul(&lie[a]));
            }
        }
    }
    cas
}

impl HodgePackage {
    pub fn build(alg: &LieAlgebra) -> Result<Self> {
        alg.ensure_valid()?;
        let n = alg.dim();
        let basis = BladeBasis::new(n);
        let boundary: Vec<Mat> = (0..=n)
            .map(|k| {
                if k == 0 {
                    Mat::zeros(0, 1)
                } else {
                    exterior::blade_operator(&basis, k, k - 1, |b, out| boundary_blade(alg, b, out))
                }
            })
            .collect();
        let delta: Vec<Mat> = (0..=n)
            .map(|k| {
                if k == n {
                    Mat::zeros(0, 1)
                } else {
                    exterior::element_operator(&basis, Side::G, k, k + 1, |x| exterior::delta(alg, x).expect("side G"))
                }
            })
            .collect();
        let mut slices = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let dim = basis.count(k);
            let lie: Vec<Mat> =
                (0..n).map(|a| exterior::blade_operator(&basis, k, k, |b, out| lie_blade(alg, Side::G, a, b, out))).collect();
            let invariants = joint_kernel(dim, &lie);
            let mut lap = Mat::zeros(dim, dim);
            if k > 0 {
                lap = lap.add(&delta[k - 1].mul(&boundary[k]));
            }
            if k < n {
                lap = lap.add(&boundary[k + 1].mul(&delta[k]));
            }
            let cas = casimir(alg, &lie, dim);
            if lap != cas.scale(&-half()) {
                return Err(hypothesis("laplacian equals -1/2 Casimir", k));
            }
            let ker = Subspace::kernel_of(&lap);
            if !ker.same_as(&invariants) {
                return Err(hypothesis("kernel of laplacian equals invariants", k));
            }
            let im = lap.image();
            let projection = projection_along(&ker, &im).ok_or_else(|| hypothesis("kernel and image complementary", k))?;
            let green = green_operator(&lap, &projection).ok_or_else(|| hypothesis("laplacian invertible off kernel", k))?;
            let id = Mat::identity(dim);
            let comp = id.sub(&projection);
            if green.mul(&lap) != comp || lap.mul(&green) != comp || !green.mul(&projection).is_zero() {
                return Err(hypothesis("green operator identities", k));
            }
            slices.push(HodgeSlice {
                k,
                dim,
                boundary: boundary[k].clone(),
                delta: delta[k].clone(),
                lie,
                invariants,
                laplacian: lap,
                projection,
                green,
                homotopy: Mat::zeros(0, 0),
            });
        }
        for k in 0..=n {
            slices[k].homotopy = if k < n { slices[k + 1].green.mul(&slices[k].delta) } else { Mat::zeros(0, 1) };
        }
        for k in 0..=n {
            let dim = slices[k].dim;
            let mut comm = Mat::zeros(dim, dim);
            if k > 0 {
                comm = comm.add(&slices[k - 1].homotopy.mul(&slices[k].boundary));
            }
            if k < n {
                comm = comm.add(&slices[k + 1].boundary.mul(&slices[k].homotopy));
            }
            if comm != Mat::identity(dim).sub(&slices[k].projection) {
                return Err(hypothesis("[S, boundary] = I - projection", k));
            }
        }
        let dual_invariants = (0..=n)
            .map(|k| {
                let lie: Vec<Mat> = (0..n)
                    .map(|a| exterior::blade_operator(&basis, k, k, |b, out| lie_blade(alg, Side::GDual, a, b, out)))
                    .collect();
                joint_kernel(basis.count(k), &lie)
            })
            .collect();
        let mut pkg =
            HodgePackage { alg: alg.clone(), basis, slices, dual_invariants, decomposables: Vec::new(), primitives: Vec::new() };
        pkg.compute_primitives()?;
        Ok(pkg)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn blade_basis(&self) -> &BladeBasis {
        &self.basis
    }

    pub fn slice(&self, k: usize) -> &HodgeSlice {
        &self.slices[k]
    }

    pub fn slices(&self) -> &[HodgeSlice] {
        &self.slices
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    pub fn decomposables(&self, k: usize) -> &Subspace {
        &self.decomposables[k]
    }

    pub fn dual_invariants(&self, k: usize) -> &Subspace {
        &self.dual_invariants[k]
    }

    pub fn invariant_dims(&self) -> Vec<usize> {
        self.slices.iter().map(|s| s.invariants.dim()).collect()
    }

    /// Integer-primitive basis of (∧^k g)_inv as elements.
    pub fn invariant_basis(&self, k: usize) -> Vec<ExtElt> {
        self.slices[k]
            .invariants
            .integer_basis()
            .iter()
            .map(|v| exterior::from_vector(v, &self.basis, k, Side::G))
            .collect()
    }

    pub fn dual_invariant_basis(&self, k: usize) -> Vec<ExtElt> {
        self.dual_invariants[k]
            .integer_basis()
            .iter()
            .map(|v| exterior::from_vector(v, &self.basis, k, Side::GDual))
            .collect()
    }

    /// Trace of the Casimir on g itself.
    pub fn casimir_trace(&self) -> Q {
        let s = &self.slices[1];
        let cas = casimir(&self.alg, &s.lie, s.dim);
        (0..s.dim).fold(Q::zero(), |acc, i| acc + cas.get(i, i))
    }

    fn compute_primitives(&mut self) -> Result<()> {
        let n = self.alg.dim();
        let inv: Vec<Vec<ExtElt>> = (0..=n).map(|k| self.invariant_basis(k)).collect();
        let mut decomposables = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut vecs = Vec::new();
            for i in 1..k {
                for x in &inv[i] {
                    for y in &inv[k - i] {
                        vecs.push(exterior::to_vector(&x.wedge(y), &self.basis, k));
                    }
                }
            }
            decomposables.push(Subspace::from_spanning(self.basis.count(k), vecs));
        }
        let mut primitives = Vec::new();
        for k in 1..=n {
            let invk = &self.slices[k].invariants;
            let dec = &decomposables[k];
            let gram = form_on_blades(&self.alg, &self.basis, k);
            // coefficient vectors α over the invariant basis with B(Σ α_i v_i, d) = 0
            let ib = invk.integer_basis();
            let rows: Vec<SparseVec> = dec
                .basis()
                .iter()
                .map(|d| {
                    let gd = gram.transpose().apply(d);
                    SparseVec::from_pairs(ib.iter().enumerate().map(|(i, v)| (i, v.dot(&gd))).collect())
                })
                .collect();
            let coeffs = Mat::from_rows(ib.len(), rows).kernel();
            let vecs: Vec<SparseVec> = coeffs
                .iter()
                .map(|a| {
                    let mut acc = SparseVec::new();
                    for (i, c) in a.iter() {
                        acc = acc.axpy(c, &ib[*i]);
                    }
                    acc
                })
                .collect();
            let prim = Subspace::from_spanning(invk.ambient(), vecs);
            if prim.dim() + dec.dim() != invk.dim() || prim.intersect(dec).dim() != 0 {
                return Err(hypothesis("primitives complement decomposables", k));
            }
            if prim.dim() > 0 && k % 2 == 0 {
                return Err(Error::certificate("primitives have odd degree", format!("even primitive in degree {k}")));
            }
            if prim.dim() == 0 {
                continue;
            }
            let cs: Vec<ExtElt> =
                prim.integer_basis().iter().map(|v| exterior::from_vector(v, &self.basis, k, Side::G)).collect();
            // dual: annihilator of decomposables inside (∧^k g*)_inv under the ι-pairing
            let dinv = self.dual_invariant_basis(k);
            let dec_elts: Vec<ExtElt> =
                dec.basis().iter().map(|v| exterior::from_vector(v, &self.basis, k, Side::G)).collect();
            let rows: Vec<SparseVec> = dec_elts
                .iter()
                .map(|d| {
                    SparseVec::from_pairs(
                        dinv.iter()
                            .enumerate()
                            .map(|(m, eta)| (m, exterior::contract_unchecked(d, eta).scalar_part()))
                            .collect(),
                    )
                })
                .collect();
            let ann = Mat::from_rows(dinv.len(), rows).kernel();
            let etas: Vec<ExtElt> = ann
                .iter()
                .map(|a| {
                    let mut e = ExtElt::zero(Side::GDual, n);
                    for (m, c) in a.iter() {
                        e.add_assign_scaled(&dinv[*m], c);
                    }
                    e
                })
                .collect();
            if etas.len() != cs.len() {
                return Err(Error::Convention(format!("dual primitive count mismatch in degree {k}")));
            }
            let p = cs.len();
            let m: Vec<Vec<Q>> =
                cs.iter().map(|c| etas.iter().map(|e| exterior::contract_unchecked(c, e).scalar_part()).collect()).collect();
            let minv = Mat::from_dense(p, p, &m)
                .inverse()
                .ok_or_else(|| Error::Convention(format!("singular primitive pairing in degree {k}")))?;
            for (j, c) in cs.iter().enumerate() {
                let mut dual = ExtElt::zero(Side::GDual, n);
                for (mi, eta) in etas.iter().enumerate() {
                    dual.add_assign_scaled(eta, &minv.get(mi, j));
                }
                primitives.push(Primitive { degree: k, c: c.clone(), dual });
            }
        }
        let total: usize = self.invariant_dims().iter().sum();
        if primitives.len() >= usize::BITS as usize || 1usize << primitives.len() != total {
            return Err(Error::certificate(
                "exterior algebra on primitives",
                format!("2^{} != {} invariant dimensions", primitives.len(), total),
            ));
        }
        for (i, pi) in primitives.iter().enumerate() {
            for (j, pj) in primitives.iter().enumerate() {
                let v = exterior::contract_unchecked(&pi.c, &pj.dual).scalar_part();
                let want = if i == j { Q::one() } else { Q::zero() };
                if v != want {
                    return Err(Error::Convention(format!("iota(c_{}) c^{} = {v}", i + 1, j + 1)));
                }
            }
        }
        self.decomposables = decomposables;
        self.primitives = primitives;
        Ok(())
    }

    /// Basis of im(ζ) in ∧^k g, the subalgebra generated by the δe_a.
    pub fn zeta_subspace(&self) -> Vec<Subspace> {
        let n = self.alg.dim();
        let gens: Vec<ExtElt> =
            (0..n).map(|a| exterior::delta(&self.alg, &ExtElt::generator(Side::G, n, a)).expect("side G")).collect();
        let mut out: Vec<Subspace> = (0..=n).map(|k| Subspace::zero(self.basis.count(k))).collect();
        out[0] = Subspace::full(1);
        let mut k = 2;
        while k <= n {
            let prev: Vec<ExtElt> = out[k - 2]
                .basis()
                .iter()
                .map(|v| exterior::from_vector(v, &self.basis, k - 2, Side::G))
                .collect();
            let vecs = gens
                .iter()
                .flat_map(|g| prev.iter().map(move |p| g.wedge(p)))
                .map(|x| exterior::to_vector(&x, &self.basis, k));
            out[k] = Subspace::from_spanning(self.basis.count(k), vecs.collect::<Vec<_>>());
            k += 2;
        }
        out
    }

    pub fn zeta_contains(&self, x: &ExtElt) -> bool {
        let z = self.zeta_subspace();
        (0..=self.alg.dim()).all(|k| z[k].contains(&exterior::to_vector(&x.component(k), &self.basis, k)))
    }

    /// Checks that the invariant part of im(ζ)∧g is exactly the span of the primitives.
    pub fn zeta_primitive_check(&self) -> bool {
        let n = self.alg.dim();
        let z = self.zeta_subspace();
        (1..=n).all(|k| {
            let vecs: Vec<SparseVec> = z[k - 1]
                .basis()
                .iter()
                .flat_map(|v| {
                    let x = exterior::from_vector(v, &self.basis, k - 1, Side::G);
                    (0..n).map(move |a| x.wedge(&ExtElt::generator(Side::G, n, a)))
                })
                .map(|x| exterior::to_vector(&x, &self.basis, k))
                .collect();
            let span = Subspace::from_spanning(self.basis.count(k), vecs);
            let prim = Subspace::from_spanning(
                self.basis.count(k),
                self.primitives.iter().filter(|p| p.degree == k).map(|p| exterior::to_vector(&p.c, &self.basis, k)),
            );
            span.intersect(&self.slices[k].invariants).same_as(&prim)
        })
    }

    /// Applies a per-slice matrix Sg*-linearly to the blade-size-`k` part of `x`.
    pub fn apply_mixed(&self, m: &Mat, k: usize, k2: usize, x: &MixedElt) -> MixedElt {
        let targets = self.basis.blades(k2);
        let mut cols: BTreeMap<Monomial, Vec<(usize, Q)>> = BTreeMap::new();
        for (b, p) in x.terms() {
            if b.len() != k {
                continue;
            }
            let i = self.basis.index(*b);
            for (mono, c) in p.terms() {
                cols.entry(mono.clone()).or_default().push((i, c.clone()));
            }
        }
        let mut out = MixedElt::zero(x.side(), x.dim());
        for (mono, pairs) in cols {
            let y = m.apply(&SparseVec::from_pairs(pairs));
            for (j, c) in y.iter() {
                out.add_term(targets[*j], Poly::term(mono.clone(), c.clone()));
            }
        }
        out
    }

    /// 𝒮 extended Sg*-linearly to every blade size.
    pub fn homotopy_mixed(&self, x: &MixedElt) -> MixedElt {
        let mut out = MixedElt::zero(Side::G, x.dim());
        for k in x.blade_sizes() {
            if k < self.alg.dim() {
                out = out.add(&self.apply_mixed(&self.slices[k].homotopy, k, k + 1, x));
            }
        }
        out
    }

    pub fn projection_mixed(&self, x: &MixedElt) -> MixedElt {
        let mut out = MixedElt::zero(Side::G, x.dim());
        for k in x.blade_sizes() {
            out = out.add(&self.apply_mixed(&self.slices[k].projection, k, k, x));
        }
        out
    }

    pub fn green_mixed(&self, x: &MixedElt) -> MixedElt {
        let mut out = MixedElt::zero(Side::G, x.dim());
        for k in x.blade_sizes() {
            out = out.add(&self.apply_mixed(&self.slices[k].green, k, k, x));
        }
        out
    }

    /// Whether every Sg*-coefficient slice of `x` lies in the image of δ.
    pub fn is_delta_exact(&self, x: &MixedElt) -> bool {
        x.blade_sizes().into_iter().all(|k| {
            if k == 0 {
                return x.component(0).is_zero();
            }
            let im = self.slices[k - 1].delta.image();
            per_monomial(x, &self.basis, k).values().all(|v| im.contains(v))
        })
    }
}

/// Coefficient vectors of the blade-size-`k` part of `x`, one per monomial.
pub fn per_monomial(x: &MixedElt, basis: &BladeBasis, k: usize) -> BTreeMap<Monomial, SparseVec> {
    let mut cols: BTreeMap<Monomial, Vec<(usize, Q)>> = BTreeMap::new();
    for (b, p) in x.terms() {
        if b.len() != k {
            continue;
        }
        for (mono, c) in p.terms() {
            cols.entry(mono.clone()).or_default().push((basis.index(*b), c.clone()));
        }
    }
    cols.into_iter().map(|(m, v)| (m, SparseVec::from_pairs(v))).collect()
}

/// Basis of (S^s g*⊗∧^k)_inv on the given side, integer-scaled.
pub fn mixed_invariants(g: &LieAlgebra, side: Side, s: usize, k: usize) -> Vec<MixedElt> {
    let n = g.dim();
    let basis = BladeBasis::new(n);
    let monos = Monomial::all_of_degree(n, s);
    let blades = basis.blades(k);
    let index: BTreeMap<(Monomial, Blade), usize> = monos
        .iter()
        .flat_map(|m| blades.iter().map(move |b| (m.clone(), *b)))
        .enumerate()
        .map(|(i, key)| (key, i))
        .collect();
    let dim = index.len();
    let mut ops = Vec::new();
    for a in 0..n {
        let mut cols = Vec::with_capacity(dim);
        for (m, b) in index.keys() {
            let x = MixedElt::term(side, n, *b, Poly::term(m.clone(), Q::one()));
            let y = exterior::lie_derivative(g, a, &x).add(&x.lie_derivative_s(g, a));
            let pairs = y.flat_terms().into_iter().map(|(m2, b2, c)| (index[&(m2, b2)], c)).collect();
            cols.push(SparseVec::from_pairs(pairs));
        }
        ops.push(Mat::from_cols(dim, &cols));
    }
    let keys: Vec<&(Monomial, Blade)> = index.keys().collect();
    joint_kernel(dim, &ops)
        .integer_basis()
        .into_iter()
        .map(|v| MixedElt::from_flat(side, n, v.iter().map(|(i, c)| (keys[*i].0.clone(), keys[*i].1, c.clone()))))
        .collect()
}

/// Shorthand for building a single blade element.
pub fn blade_elt(side: Side, dim: usize, b: Blade) -> ExtElt {
    ExtElt::term(side, dim, b, Q::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn su2_package() {
        let g = LieAlgebra::su2();
        let pkg = HodgePackage::build(&g).unwrap();
        assert_eq!(pkg.invariant_dims(), vec![1, 0, 0, 1]);
        assert_eq!(pkg.slice(1).laplacian, Mat::identity(3));
        assert_eq!(pkg.casimir_trace(), q(-6));
        let p = &pkg.primitives()[0];
        assert_eq!(p.degree, 3);
        assert_eq!(p.c, ExtElt::from_indices(Side::G, 3, &[0, 1, 2], q(1)));
        assert_eq!(p.dual, ExtElt::from_indices(Side::GDual, 3, &[0, 1, 2], q(-1)));
        assert!(pkg.zeta_primitive_check());
    }

    #[test]
    fn abelian_package() {
        let g = LieAlgebra::abelian(2).unwrap();
        let pkg = HodgePackage::build(&g).unwrap();
        assert_eq!(pkg.invariant_dims(), vec![1, 2, 1]);
        assert_eq!(pkg.primitives().len(), 2);
        for s in pkg.slices() {
            assert!(s.green.is_zero());
            assert_eq!(s.projection, Mat::identity(s.dim));
        }
        assert_eq!(pkg.primitives()[1].dual, ExtElt::generator(Side::GDual, 2, 1));
    }

    #[test]
    fn zeta_membership() {
        let g = LieAlgebra::su2();
        let pkg = HodgePackage::build(&g).unwrap();
        let z = pkg.zeta_subspace();
        assert_eq!(z[2].dim(), 3);
        assert!(pkg.zeta_contains(&ExtElt::from_indices(Side::G, 3, &[0, 1], q(1))));
        assert!(!pkg.zeta_contains(&ExtElt::generator(Side::G, 3, 0)));
    }
}
