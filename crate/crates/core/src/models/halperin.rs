//! The Halperin complex N_basic⊗M_inv and its cochain map into (N⊗M)_basic.

use serde_json::json;

use crate::error::{Error, Result};
use crate::gds::Gds;
use crate::graded::{GradedOp, GradedSubspace};
use crate::hodge::HodgePackage;
use crate::mc::McSolution;

use super::{exp_nilpotent_op, known_prefix, Certificate, Complex, Report};

pub struct Halperin {
    pub source: Complex,
    pub target: Complex,
    pub map: GradedOp,
    pub report: Report,
}

/// Σ_a y^a⊗ι^M(e_a) on N⊗M.
fn alpha(n: &Gds, m: &Gds) -> Result<GradedOp> {
    let w = n.weil.as_ref().ok_or_else(|| Error::Mismatch(format!("`{}` carries no Weil-algebra action", n.name)))?;
    let mut out = GradedOp::zero(&n.space.tensor(&m.space), &n.space.tensor(&m.space), 0);
    for a in 0..n.n() {
        out = out.add(&GradedOp::tensor(&w.y[a], &m.iota[a]));
    }
    Ok(out)
}

/// ι^M(x) on N⊗M, the polynomial part of x acting on N through v.
fn iota_m(n: &Gds, m: &Gds, x: &crate::element::MixedElt) -> Result<GradedOp> {
    let amb = n.space.tensor(&m.space);
    let mut out = GradedOp::zero(&amb, &amb, 0);
    for (mono, b, c) in x.flat_terms() {
        out = out.add(&GradedOp::tensor(&n.act_monomial(&mono)?, &m.iota_blade(b)).scale(&c));
    }
    Ok(out)
}

/// Certifies that e^{−α}∘e^{ι^M(f)} maps N_basic⊗M_inv into (N⊗M)_basic as a
/// cochain map for the differential d^N⊗1 + 1⊗d^M − Σ_j p^j⊗ι^M(c_j).
pub fn halperin_check(n: &Gds, m: &Gds, mc: &McSolution, pkg: &HodgePackage) -> Result<Halperin> {
    halperin_with_sign(n, m, mc, pkg, -1)
}

/// Same with e^{±α}; `alpha_sign` = +1 is the other orientation of the twist.
pub fn halperin_with_sign(n: &Gds, m: &Gds, mc: &McSolution, pkg: &HodgePackage, alpha_sign: i64) -> Result<Halperin> {
    n.ensure_valid()?;
    m.ensure_valid()?;
    let mut report = Report::new("halperin", n.alg.name());
    let nm = Gds::tensor(n, m)?;
    let sn = n.subspaces();
    let sm = m.subspaces();
    let id_n = GradedOp::identity(&n.space);
    let id_m = GradedOp::identity(&m.space);

    let mut d_src = GradedOp::tensor(&n.d, &id_m).add(&GradedOp::tensor(&id_n, &m.d));
    for (pj, prim) in mc.p.iter().zip(pkg.primitives()) {
        d_src = d_src.sub(&GradedOp::tensor(&n.act_poly(pj)?, &m.iota_ext(&prim.c)));
    }
    let source = Complex::restrict("Halperin complex", GradedSubspace::tensor(&sn.basic, &sm.inv), &d_src)?;
    report.push(Certificate::from_comparison("Halperin d^2 = 0", &source.d_squared()));
    let target = Complex::restrict("(N⊗M)_basic", nm.subspaces().basic, &nm.d)?;

    let a = alpha(n, m)?;
    // e^{α}(ι^N + ι^M)e^{−α} = ι^N
    let e_pos = exp_nilpotent_op(&a, n.n() + 1);
    let e_neg = exp_nilpotent_op(&a.neg(), n.n() + 1);
    let mut fail = None;
    let mut checked = Vec::new();
    for i in 0..n.n() {
        let c = e_pos.compose(&nm.iota[i]).compose(&e_neg).compare(&GradedOp::tensor(&n.iota[i], &id_m));
        checked = c.checked.clone();
        if fail.is_none() {
            fail = c.describe().map(|r| format!("e_{}: {r}", i + 1));
        }
    }
    report.push(Certificate::from_degrees("e^a (iota^N + iota^M) e^-a = iota^N", &checked, fail));

    let twist = if alpha_sign < 0 { e_neg } else { e_pos };
    let map_amb = twist.compose(&exp_nilpotent_op(&iota_m(n, m, &mc.f)?, n.n() + 1));
    let map = map_amb
        .restrict(&source.sub, &target.sub)
        .map_err(|k| Error::certificate("Halperin map lands in (N⊗M)_basic", format!("degree {k}")))?;
    report.push(Certificate::pass("Halperin map lands in (N⊗M)_basic", None));
    report.push(Certificate::from_comparison("Halperin map is a cochain map", &target.d.compose(&map).compare(&map.compose(&source.d))));

    let mut fail = None;
    let mut checked = Vec::new();
    for (j, pj) in mc.p.iter().enumerate() {
        let on_src = GradedOp::tensor(&n.act_poly(pj)?, &id_m)
            .restrict(&source.sub, &source.sub)
            .map_err(|k| Error::certificate("p-action preserves the Halperin complex", format!("degree {k}")))?;
        let on_tgt = nm
            .act_poly(pj)?
            .restrict(&target.sub, &target.sub)
            .map_err(|k| Error::certificate("p-action preserves (N⊗M)_basic", format!("degree {k}")))?;
        let c = map.compose(&on_src).compare(&on_tgt.compose(&map));
        checked = c.checked.clone();
        if fail.is_none() {
            fail = c.describe().map(|r| format!("p^{}: {r}", j + 1));
        }
    }
    report.push(Certificate::from_degrees("Halperin map is (Sg*)_inv-linear", &checked, fail));
    report.data = json!({
        "modules": [n.name, m.name],
        "source_dims": source.dims(),
        "target_dims": target.dims(),
        "source_cohomology": known_prefix(&source.cohomology()),
        "target_cohomology": known_prefix(&target.cohomology()),
    });
    Ok(Halperin { source, target, map, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::mc::solve_mc;

    #[test]
    fn su2_weil_wedge_dual() {
        let g = LieAlgebra::su2();
        let pkg = HodgePackage::build(&g).unwrap();
        let mc = solve_mc(&pkg).unwrap();
        let h = halperin_check(&Gds::weil(&g, 2), &Gds::wedge_dual(&g), &mc, &pkg).unwrap();
        for c in &h.report.certificates {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn abelian_trivial() {
        let g = LieAlgebra::abelian(2).unwrap();
        let pkg = HodgePackage::build(&g).unwrap();
        let mc = solve_mc(&pkg).unwrap();
        let h = halperin_check(&Gds::weil(&g, 2), &Gds::trivial(&g), &mc, &pkg).unwrap();
        assert!(h.report.passed());
    }
}
