//! Contractions, Lie derivatives, the Koszul differentials d and ∂, the
//! transported differential δ and the Schouten bracket.
//!
//! Conventions: ι(ξ) is the interior product
//! ι(ξ)(μ1∧…∧μk) = Σ (−1)^{i−1} μ_i(ξ) μ1∧…μ̂_i…∧μk, and on blades
//! ι(ξ1∧…∧ξk) = ι(ξ1)∘…∘ι(ξk). The same rule gives ι*(μ) on ∧g.
//! Hence ι(e1∧…∧ek)(e^1∧…∧e^k) = (−1)^{k(k−1)/2}.

use num_traits::Zero;

use crate::blade::{Blade, BladeBasis};
use crate::element::{Coeff, Elt, ExtElt, Side};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{Mat, SparseVec};
use crate::rational::{half, q, sign, Q};

/// Contraction of one blade into a blade of the dual side.
pub fn contract_blade(by: Blade, target: Blade) -> Option<(bool, Blade)> {
    let mut neg = false;
    let mut cur = target;
    let idx: Vec<usize> = by.indices().collect();
    for &i in idx.iter().rev() {
        let (s, b) = cur.pull(i)?;
        neg ^= s;
        cur = b;
    }
    Some((neg, cur))
}

/// L(e_a) on a single blade: derivation extending ad (on ∧g) or the
/// coadjoint action (on ∧g*).
pub fn lie_blade(g: &LieAlgebra, side: Side, a: usize, blade: Blade, out: &mut Vec<(Blade, Q)>) {
    for i in blade.indices() {
        let rest = blade.without(i);
        let action = match side {
            Side::G => g.bracket(a, i),
            Side::GDual => g.coadjoint(a, i),
        };
        for (k, c) in action {
            if rest.contains(*k) {
                continue;
            }
            let neg = (rest.below(i) + rest.below(*k)) % 2 == 1;
            out.push((rest.with(*k), if neg { -c.clone() } else { c.clone() }));
        }
    }
}

pub fn lie_derivative<C: Coeff>(g: &LieAlgebra, a: usize, x: &Elt<C>) -> Elt<C> {
    x.map_blades(|b, out| lie_blade(g, x.side(), a, b, out))
}

/// ι(x) y, where x lives on the side dual to y.
pub fn contract<C: Coeff>(x: &Elt<C>, y: &Elt<C>) -> Result<Elt<C>> {
    if x.side() == y.side() || x.dim() != y.dim() {
        return Err(Error::Mismatch("contraction needs dual sides of one algebra".into()));
    }
    Ok(contract_unchecked(x, y))
}

pub fn contract_unchecked<C: Coeff>(x: &Elt<C>, y: &Elt<C>) -> Elt<C> {
    let mut out = Elt::zero(y.side(), y.dim());
    for (bx, cx) in x.terms() {
        for (by, cy) in y.terms() {
            if let Some((neg, b)) = contract_blade(*bx, *by) {
                out.add_scaled_term(b, &cx.mul_c(cy), &sign(neg));
            }
        }
    }
    out
}

/// ι(e_i) on one side (ι*(e^i) when `x` is in ∧g).
pub fn contract_index<C: Coeff>(i: usize, x: &Elt<C>) -> Elt<C> {
    x.map_blades(|b, out| {
        if let Some((neg, r)) = b.pull(i) {
            out.push((r, sign(neg)));
        }
    })
}

/// Left multiplication by the generator with index `i` (ε or ε*).
pub fn left_index<C: Coeff>(i: usize, x: &Elt<C>) -> Elt<C> {
    x.map_blades(|b, out| {
        if let Some((neg, r)) = b.push_front(i) {
            out.push((r, sign(neg)));
        }
    })
}

pub fn d_blade(g: &LieAlgebra, blade: Blade, out: &mut Vec<(Blade, Q)>) {
    let mut tmp = Vec::new();
    for a in 0..g.dim() {
        tmp.clear();
        lie_blade(g, Side::GDual, a, blade, &mut tmp);
        for (b, c) in &tmp {
            if let Some((neg, r)) = b.push_front(a) {
                let v = c * half();
                out.push((r, if neg { -v } else { v }));
            }
        }
    }
}

pub fn boundary_blade(g: &LieAlgebra, blade: Blade, out: &mut Vec<(Blade, Q)>) {
    let mut tmp = Vec::new();
    for a in blade.indices() {
        let (neg, rest) = blade.pull(a).expect("index present");
        tmp.clear();
        lie_blade(g, Side::G, a, rest, &mut tmp);
        let s = if neg { half() } else { -half() };
        for (b, c) in &tmp {
            out.push((*b, c * &s));
        }
    }
}

/// d = ½ Σ_a ε*(e^a) L(e_a) on ∧g*.
pub fn d_coboundary<C: Coeff>(g: &LieAlgebra, y: &Elt<C>) -> Result<Elt<C>> {
    y.ensure_side(Side::GDual, "d")?;
    Ok(y.map_blades(|b, out| d_blade(g, b, out)))
}

/// ∂ = −½ Σ_a L(e_a) ι*(e^a) on ∧g.
pub fn boundary<C: Coeff>(g: &LieAlgebra, x: &Elt<C>) -> Result<Elt<C>> {
    x.ensure_side(Side::G, "∂")?;
    Ok(x.map_blades(|b, out| boundary_blade(g, b, out)))
}

/// Image of a blade under the algebra map extending a linear map of generators.
fn transport_blade(images: &[ExtElt], blade: Blade, side: Side, dim: usize) -> ExtElt {
    let mut acc = ExtElt::one(side, dim);
    for i in blade.indices() {
        acc = acc.wedge(&images[i]);
    }
    acc
}

fn form_images(g: &LieAlgebra, to: Side, inverse: bool) -> Vec<ExtElt> {
    let n = g.dim();
    let m = if inverse { g.form_inv() } else { g.form() };
    (0..n)
        .map(|i| {
            let mut e = ExtElt::zero(to, n);
            for (j, v) in m[i].iter().enumerate() {
                if !v.is_zero() {
                    e.add_term(Blade::single(j), v.clone());
                }
            }
            e
        })
        .collect()
}

fn transport<C: Coeff>(g: &LieAlgebra, x: &Elt<C>, to: Side, inverse: bool) -> Elt<C> {
    let images = form_images(g, to, inverse);
    x.map_blades_to(to, |b, out| {
        for (r, c) in transport_blade(&images, b, to, g.dim()).terms() {
            out.push((*r, c.clone()));
        }
    })
}

/// Algebra map extending `e_i ↦ images[i]`, landing in an exterior algebra
/// of dimension `to_dim` on side `to`.
pub fn algebra_map<C: Coeff>(x: &Elt<C>, images: &[ExtElt], to: Side, to_dim: usize) -> Elt<C> {
    let mut out = Elt::zero(to, to_dim);
    for (b, c) in x.terms() {
        for (r, v) in transport_blade(images, *b, to, to_dim).terms() {
            out.add_scaled_term(*r, c, v);
        }
    }
    out
}

/// B♭ : ∧g → ∧g*, e_i ↦ Σ_j B_ij e^j.
pub fn flat<C: Coeff>(g: &LieAlgebra, x: &Elt<C>) -> Result<Elt<C>> {
    x.ensure_side(Side::G, "B♭")?;
    Ok(transport(g, x, Side::GDual, false))
}

/// B♯ : ∧g* → ∧g, inverse of B♭.
pub fn sharp<C: Coeff>(g: &LieAlgebra, y: &Elt<C>) -> Result<Elt<C>> {
    y.ensure_side(Side::GDual, "B♯")?;
    Ok(transport(g, y, Side::G, true))
}

/// δ = B♯ ∘ d ∘ B♭ on ∧g.
pub fn delta<C: Coeff>(g: &LieAlgebra, x: &Elt<C>) -> Result<Elt<C>> {
    x.ensure_side(Side::G, "δ")?;
    sharp(g, &d_coboundary(g, &flat(g, x)?)?)
}

/// [f, h] = −Σ_a L(e_a) f ∧ ι*(e^a) h on ∧g.
pub fn schouten<C: Coeff>(g: &LieAlgebra, f: &Elt<C>, h: &Elt<C>) -> Result<Elt<C>> {
    f.ensure_side(Side::G, "Schouten")?;
    f.ensure_compatible(h)?;
    Ok(schouten_unchecked(g, f, h))
}

pub fn schouten_unchecked<C: Coeff>(g: &LieAlgebra, f: &Elt<C>, h: &Elt<C>) -> Elt<C> {
    let mut out = Elt::zero(f.side(), f.dim());
    for a in 0..g.dim() {
        let ih = contract_index(a, h);
        if ih.is_zero() {
            continue;
        }
        let lf = lie_derivative(g, a, f);
        if lf.is_zero() {
            continue;
        }
        out.add_assign_scaled(&lf.wedge(&ih), &-Q::from_integer(1.into()));
    }
    out
}

/// Determinant pairing ⟨x, y⟩ of x ∈ ∧g with y ∈ ∧g*.
pub fn pairing(x: &ExtElt, y: &ExtElt) -> Result<Q> {
    x.ensure_side(Side::G, "pairing")?;
    y.ensure_side(Side::GDual, "pairing")?;
    if x.dim() != y.dim() {
        return Err(Error::Mismatch("pairing across algebras".into()));
    }
    let mut s = Q::zero();
    for (b, c) in x.terms() {
        if let Some(d) = y.coeff(*b) {
            s += c * d;
        }
    }
    Ok(s)
}

/// B extended to ∧g by determinants: B(ξ1∧…∧ξk, η1∧…∧ηk) = det B(ξi, ηj).
pub fn form_on_blades(g: &LieAlgebra, basis: &BladeBasis, k: usize) -> Mat {
    let blades = basis.blades(k);
    let n = blades.len();
    let rows: Vec<SparseVec> = blades
        .iter()
        .map(|b| {
            let fx = flat(g, &ExtElt::term(Side::G, g.dim(), *b, q(1))).expect("side G");
            SparseVec::from_pairs(fx.terms().iter().map(|(bb, c)| (basis.index(*bb), c.clone())).collect())
        })
        .collect();
    Mat::from_rows(n, rows)
}

/// Matrix of a blade-level map from size-`k` blades to size-`k2` blades.
pub fn blade_operator<F>(basis: &BladeBasis, k: usize, k2: usize, mut f: F) -> Mat
where
    F: FnMut(Blade, &mut Vec<(Blade, Q)>),
{
    let src = basis.blades(k);
    let mut cols = Vec::with_capacity(src.len());
    let mut buf = Vec::new();
    for b in src {
        buf.clear();
        f(*b, &mut buf);
        let pairs = buf
            .iter()
            .filter(|(r, _)| r.len() == k2)
            .map(|(r, c)| (basis.index(*r), c.clone()))
            .collect();
        cols.push(SparseVec::from_pairs(pairs));
    }
    Mat::from_cols(basis.count(k2), &cols)
}

pub fn element_operator<F>(basis: &BladeBasis, side: Side, k: usize, k2: usize, f: F) -> Mat
where
    F: Fn(&ExtElt) -> ExtElt,
{
    blade_operator(basis, k, k2, |b, out| {
        let y = f(&ExtElt::term(side, basis.dim(), b, q(1)));
        out.extend(y.terms().iter().map(|(r, c)| (*r, c.clone())));
    })
}

pub fn to_vector(x: &ExtElt, basis: &BladeBasis, k: usize) -> SparseVec {
    SparseVec::from_pairs(
        x.terms().iter().filter(|(b, _)| b.len() == k).map(|(b, c)| (basis.index(*b), c.clone())).collect(),
    )
}

pub fn from_vector(v: &SparseVec, basis: &BladeBasis, k: usize, side: Side) -> ExtElt {
    let blades = basis.blades(k);
    let mut e = ExtElt::zero(side, basis.dim());
    for (i, c) in v.iter() {
        e.add_term(blades[*i], c.clone());
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2() -> LieAlgebra {
        LieAlgebra::su2()
    }
    fn eg(i: usize) -> ExtElt {
        ExtElt::generator(Side::G, 3, i)
    }
    fn ed(i: usize) -> ExtElt {
        ExtElt::generator(Side::GDual, 3, i)
    }
    fn blade(side: Side, idx: &[usize], c: i64) -> ExtElt {
        ExtElt::from_indices(side, 3, idx, q(c))
    }

    #[test]
    fn contraction_examples() {
        let top = blade(Side::GDual, &[0, 1, 2], 1);
        assert_eq!(contract(&eg(2), &top).unwrap(), blade(Side::GDual, &[0, 1], 1));
        let c = blade(Side::G, &[0, 1, 2], 1);
        assert_eq!(contract(&c, &top).unwrap().scalar_part(), q(-1));
        assert!(contract(&eg(0), &blade(Side::GDual, &[1, 2], 1)).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let g = su2();
        assert_eq!(lie_derivative(&g, 0, &eg(1)), eg(2));
        assert_eq!(lie_derivative(&g, 0, &ed(1)), ed(2));
        for a in 0..3 {
            assert!(lie_derivative(&g, a, &blade(Side::G, &[0, 1, 2], 1)).is_zero());
        }
    }

    #[test]
    fn differentials_on_su2() {
        let g = su2();
        assert_eq!(d_coboundary(&g, &ed(0)).unwrap(), blade(Side::GDual, &[1, 2], -1));
        assert_eq!(boundary(&g, &blade(Side::G, &[1, 2], 1)).unwrap(), eg(0).neg());
        assert_eq!(delta(&g, &eg(0)).unwrap(), blade(Side::G, &[1, 2], -1));
        assert!(delta(&g, &blade(Side::G, &[0, 1, 2], 1)).unwrap().is_zero());
        assert!(d_coboundary(&g, &eg(0)).is_err());
    }

    #[test]
    fn schouten_examples() {
        let g = su2();
        let c = blade(Side::G, &[0, 1, 2], 1);
        assert!(schouten(&g, &eg(0), &blade(Side::G, &[1, 2], 1)).unwrap().is_zero());
        assert!(schouten(&g, &eg(1), &c).unwrap().is_zero());
        assert_eq!(schouten(&g, &eg(0), &eg(1)).unwrap(), eg(2));
    }

    #[test]
    fn pairing_examples() {
        let x = blade(Side::G, &[0, 1], 1);
        assert_eq!(pairing(&x, &blade(Side::GDual, &[0, 1], 1)).unwrap(), q(1));
        assert_eq!(pairing(&x, &blade(Side::GDual, &[1, 0], 1)).unwrap(), q(-1));
        assert_eq!(pairing(&eg(0), &ed(1)).unwrap(), q(0));
    }

    #[test]
    fn abelian_differentials_vanish() {
        let g = LieAlgebra::abelian(3).unwrap();
        assert!(d_coboundary(&g, &blade(Side::GDual, &[0, 1], 1)).unwrap().is_zero());
        assert!(boundary(&g, &blade(Side::G, &[0, 1], 1)).unwrap().is_zero());
        assert!(delta(&g, &eg(2)).unwrap().is_zero());
    }
}
