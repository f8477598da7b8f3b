//! Functoriality of the small Cartan model along φ: g → h, and the product ⊙
//! it induces through the diagonal g → g⊕g.

use serde_json::json;

use crate::blade::Blade;
use crate::element::{ExtElt, MixedElt, Side};
use crate::error::{Error, Result};
use crate::exterior;
use crate::gds::Gds;
use crate::graded::{tensor_index, GradedOp, GradedSpace, GradedSubspace};
use crate::hodge::HodgePackage;
use crate::lie::LieAlgebra;
use crate::linalg::{Mat, SparseVec};
use crate::mc::{diagonal_phi, phi_images, phi_star, solve_mc, solve_relative_mc, RelativeSolution};
use crate::poly::Poly;
use crate::rational::Q;
use crate::spaces::SymSpace;

use super::cartan::{induced_ranks, twist_map};
use super::{exp_nilpotent_op, Certificate, Report};

/// ι(u) on Sg*⊗M for u ∈ Sg*⊗∧h, with ∧h contracting through `m`.
fn iota_u(sym: &SymSpace, m: &Gds, u: &MixedElt) -> GradedOp {
    let amb = sym.space().tensor(&m.space);
    let mut out = GradedOp::zero(&amb, &amb, 0);
    for (mono, b, c) in u.flat_terms() {
        let p = Poly::term(mono, Q::from_integer(1.into()));
        out = out.add(&GradedOp::tensor(&sym.mult(&p), &m.iota_blade(b)).scale(&c));
    }
    out
}

fn exp_iota_u(sym: &SymSpace, m: &Gds, u: &MixedElt) -> GradedOp {
    exp_nilpotent_op(&iota_u(sym, m, u), m.n() + 1)
}

/// Checks ∂u + ½[u,u] = Σ_j p^j⊗(Δ(c_j) − diag(c_j)) and reports [u,u].
pub fn diagonal_equation(rel: &RelativeSolution, pkg: &HodgePackage) -> Result<Vec<Certificate>> {
    let g = &rel.g;
    let h = &rel.h;
    let n = g.dim();
    let mc = solve_mc(pkg)?;
    let images = phi_images(&rel.phi, h.dim());
    let inj = |off: usize| -> Vec<ExtElt> {
        (0..n)
            .map(|a| {
                let mut e = ExtElt::zero(Side::G, h.dim());
                e.add_term(Blade::single(a + off), Q::from_integer(1.into()));
                e
            })
            .collect()
    };
    let (left, right) = (inj(0), inj(n));
    let mut rhs = MixedElt::zero(Side::G, h.dim());
    for (prim, p) in pkg.primitives().iter().zip(&mc.p) {
        let diag = exterior::algebra_map(&prim.c, &images, Side::G, h.dim());
        let delta = exterior::algebra_map(&prim.c, &left, Side::G, h.dim())
            .add(&exterior::algebra_map(&prim.c, &right, Side::G, h.dim()));
        rhs = rhs.add(&delta.sub(&diag).to_mixed().mul_poly(p));
    }
    let curv = crate::mc::curvature(h, &rel.u);
    let bracket = exterior::schouten(h, &rel.u, &rel.u)?;
    Ok(vec![
        Certificate::from_degrees(
            "du + 1/2[u,u] = sum p^j (Delta(c_j) - diag(c_j))",
            &[0],
            (!curv.sub(&rhs).is_zero()).then(|| format!("{} blades differ", curv.sub(&rhs).len())),
        ),
        Certificate::from_degrees("[u,u] = 0", &[0], (!bracket.is_zero()).then(|| format!("{} nonzero blades", bracket.len()))),
    ])
}

/// The product ⊙ on (Sg*)_inv⊗M_inv,
/// (p⊗y)⊙(p'⊗y') = (1⊗μ) e^{ι(u)} (pp'⊗y⊗y'), and its Leibniz rule for d̃_g.
pub fn product_twist(m: &Gds, rel: &RelativeSolution, pkg: &HodgePackage, cutoff: usize) -> Result<Report> {
    let g = &m.alg;
    let n = g.dim();
    if rel.g != *g || rel.phi != diagonal_phi(n) {
        return Err(Error::Mismatch("product twist needs the relative solution for the diagonal g → g⊕g".into()));
    }
    let mu = m.product.as_ref().ok_or_else(|| Error::Mismatch(format!("`{}` has no product", m.name)))?;
    m.ensure_valid()?;
    let mc = solve_mc(pkg)?;
    let mut report = Report::new("product", g.name());
    for c in diagonal_equation(rel, pkg)? {
        report.push(c);
    }
    let tw = twist_map(m, &mc, pkg, cutoff)?;
    let small = &tw.small;
    let sym = &tw.ambient.sym;
    let mm = Gds::external_tensor(m, m)?;

    // (p⊗y)⊗(p'⊗y') ↦ pp'⊗y⊗y' on the small model; p' is even so no sign
    let src = small.sub.space().tensor(&small.sub.space());
    let smm = sym.space().tensor(&mm.space);
    let emb = small.sub.embedding();
    let cols_of = |k: usize, i: usize| -> Vec<(usize, usize, usize, Q)> {
        let col = emb.block(k as i64).expect("embedding is complete").col(i);
        col.iter()
            .map(|(idx, c)| {
                let (s, mi, yi) = GradedSpace::tensor_split(sym.space(), &m.space, k, *idx);
                (s, mi, yi, c.clone())
            })
            .collect()
    };
    let insert = GradedOp::try_from_fn(&src, &smm, 0, |k, idx| {
        let (i, a, b) = GradedSpace::tensor_split(&small.sub.space(), &small.sub.space(), k, idx);
        let j = k - i;
        let mut out = SparseVec::new();
        for (s1, m1, y1, c1) in cols_of(i, a) {
            for (s2, m2, y2, c2) in cols_of(j, b) {
                let s = s1 + s2;
                if s / 2 > sym.cutoff() {
                    return None;
                }
                let mono = sym.monomials(s1 / 2)[m1].mul(&sym.monomials(s2 / 2)[m2]);
                let mi = sym.index_of(&mono)?;
                let (dy1, dy2) = (i - s1, j - s2);
                let yy = tensor_index(&m.space, &m.space, dy1, y1, dy2, y2);
                let target = tensor_index(sym.space(), &mm.space, s, mi, dy1 + dy2, yy);
                out = out.add(&SparseVec::from_pairs(vec![(target, &c1 * &c2)]));
            }
        }
        Some(out)
    });
    let twist = exp_iota_u(sym, &mm, &rel.u);
    let mult = GradedOp::tensor(&GradedOp::identity(sym.space()), mu);
    let odot_amb = mult.compose(&twist).compose(&insert);
    let odot = odot_amb
        .restrict(&GradedSubspace::full(&src), &small.sub)
        .map_err(|k| Error::certificate("⊙ preserves the small model", format!("degree {k}")))?;
    let id = GradedOp::identity(&small.sub.space());
    let d2 = GradedOp::tensor(&small.d, &id).add(&GradedOp::tensor(&id, &small.d));
    report.push(Certificate::from_comparison(
        "d~(x ⊙ x') = d~x ⊙ x' + (-1)^|x| x ⊙ d~x'",
        &small.d.compose(&odot).compare(&odot.compose(&d2)),
    ));
    report.data = json!({
        "module": m.name,
        "u": rel.u.flat_terms().iter().map(|(mo, b, c)| json!({"poly": format!("{mo:?}"), "blade": b.to_vec(), "coeff": c.to_string()})).collect::<Vec<_>>(),
        "small_dims": small.dims(),
    });
    Ok(report)
}

/// Ψ = e^{ι(u)}∘(φ*⊗1) from the small h-model of `m` to its small g-model,
/// with the two legs of the square compared on cohomology.
pub fn fun1_check(g: &LieAlgebra, h: &LieAlgebra, phi: &Mat, m: &Gds, cutoff: usize) -> Result<Report> {
    if m.alg != *h {
        return Err(Error::Mismatch("the space must be an h-differential space".into()));
    }
    m.ensure_valid()?;
    let pkg_g = HodgePackage::build(g)?;
    let pkg_h = HodgePackage::build(h)?;
    let rel = solve_relative_mc(g, h, phi, &pkg_g, &pkg_h)?;
    let mc_g = solve_mc(&pkg_g)?;
    let mc_h = solve_mc(&pkg_h)?;
    let mg = m.restrict_along(g, phi)?;
    mg.ensure_valid()?;
    let mut report = Report::new("fun1", &format!("{} -> {}", g.name(), h.name()));
    let tw_h = twist_map(m, &mc_h, &pkg_h, cutoff)?;
    let tw_g = twist_map(&mg, &mc_g, &pkg_g, cutoff)?;
    let images: Vec<Poly> = (0..h.dim()).map(|b| phi_star(phi, &Poly::var(b))).collect();
    let pull = GradedOp::tensor(&tw_h.ambient.sym.substitution(&tw_g.ambient.sym, &images), &GradedOp::identity(&m.space));
    let psi_amb = exp_iota_u(&tw_g.ambient.sym, m, &rel.u).compose(&pull);
    let psi = psi_amb
        .restrict(&tw_h.small.sub, &tw_g.small.sub)
        .map_err(|k| Error::certificate("Psi lands in the small g-model", format!("degree {k}")))?;
    report.push(Certificate::from_comparison("d~_g Psi = Psi d~_h", &tw_g.small.d.compose(&psi).compare(&psi.compose(&tw_h.small.d))));
    let restr = pull
        .restrict(&tw_h.big.sub, &tw_g.big.sub)
        .map_err(|k| Error::certificate("restriction lands in the Cartan g-model", format!("degree {k}")))?;
    report.push(Certificate::from_comparison("restriction is a cochain map", &tw_g.big.d.compose(&restr).compare(&restr.compose(&tw_h.big.d))));

    // Φ_g∘Ψ − (φ*⊗1)∘Φ_h must send cocycles to coboundaries.
    let diff = tw_g.phi.compose(&psi).sub(&restr.compose(&tw_h.phi));
    let ranks = induced_ranks(&diff, &tw_h.small, &tw_g.big);
    let mut degs = Vec::new();
    let mut fail = None;
    for (k, r) in ranks.iter().enumerate() {
        if let Some(r) = r {
            degs.push(k);
            if *r != 0 && fail.is_none() {
                fail = Some(format!("degree {k}: legs differ by a map of rank {r} on cohomology"));
            }
        }
    }
    report.push(Certificate::from_degrees("legs agree on cohomology", &degs, fail));
    report.notes.push("commutation up to equivariant homotopy is not constructed; cohomology maps are compared instead".into());
    report.data = json!({
        "u_terms": rel.u.len(),
        "small_h_dims": tw_h.small.dims(),
        "small_g_dims": tw_g.small.dims(),
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::rational::q;

    #[test]
    fn e3_subalgebra_of_su2() {
        let g = LieAlgebra::abelian(1).unwrap();
        let h = LieAlgebra::su2();
        let phi = Mat::from_dense(3, 1, &[vec![q(0)], vec![q(0)], vec![q(1)]]);
        let r = fun1_check(&g, &h, &phi, &Gds::wedge_dual(&h), 3).unwrap();
        for c in &r.certificates {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn su2_diagonal_u_is_cyclic_sum() {
        let g = LieAlgebra::su2();
        let h = LieAlgebra::direct_sum(&g, &g).unwrap();
        let pkg = HodgePackage::build(&g).unwrap();
        let rel = solve_relative_mc(&g, &h, &diagonal_phi(3), &pkg, &HodgePackage::build(&h).unwrap()).unwrap();
        let mut terms = vec![];
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            let (neg, bl) = Blade::from_indices(&[a, b, a + 3, b + 3]).unwrap();
            for v in 0..3 {
                let mut e = [0u8; 3];
                e[v] = 2;
                terms.push((Monomial::from_exponents(&e), bl, if neg { q(-1) } else { q(1) }));
            }
        }
        assert_eq!(rel.u, MixedElt::from_flat(Side::G, 6, terms));
        let r = product_twist(&Gds::wedge_dual(&g), &rel, &pkg, 3).unwrap();
        for c in &r.certificates {
            assert!(c.passed(), "{c:?}");
        }
    }
}
