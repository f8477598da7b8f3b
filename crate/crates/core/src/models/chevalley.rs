//! The Chevalley–Koszul complex N_basic⊗(∧g*)_inv of a g-differential
//! Wg-module with the maps Ψ and Υ, Cartan's projection C_g(N) → N_basic and
//! the canonical isomorphism N_hor⊗∧g* → N.

use std::collections::HashMap;

use serde_json::json;

use crate::element::{MixedElt, Side};
use crate::error::{Error, Result};
use crate::gds::Gds;
use crate::graded::{tensor_index, GradedOp, GradedSpace, GradedSubspace};
use crate::hodge::HodgePackage;
use crate::linalg::SparseVec;
use crate::mc::McSolution;
use crate::models::cartan::CartanAmbient;
use crate::poly::Poly;
use crate::rational::sign;
use crate::spaces::ExtSpace;
use crate::weil;

use super::{exp_nilpotent_op, known_prefix, Certificate, Complex, Report};

pub struct ChevalleyKoszul {
    pub complex: Complex,
    pub n_inv: GradedSubspace,
    /// Ψ: complex → N_inv, in subspace coordinates.
    pub psi: GradedOp,
    /// Υ: N_inv → complex.
    pub upsilon: GradedOp,
    pub report: Report,
}

/// x⊗η ↦ (−1)^{|η||x|} op_η(x) on N⊗∧g*, with one operator per blade η.
fn blade_acting(n: &Gds, e: &ExtSpace, ops: &[Vec<GradedOp>]) -> GradedOp {
    let amb = n.space.tensor(e.space());
    let mut cache: HashMap<(usize, usize, usize), Vec<SparseVec>> = HashMap::new();
    GradedOp::try_from_fn(&amb, &n.space, 0, |k, idx| {
        let (i, zi, bi) = GradedSpace::tensor_split(&n.space, e.space(), k, idx);
        let j = k - i;
        let cols = match cache.get(&(j, bi, i)) {
            Some(c) => c,
            None => {
                let m = ops[j][bi].block(i as i64)?;
                cache.entry((j, bi, i)).or_insert_with(|| m.cols())
            }
        };
        Some(cols[zi].scale(&sign(i * j % 2 == 1)))
    })
}

/// z ↦ z⊗1.
fn unit_embedding(n: &Gds, e: &ExtSpace) -> GradedOp {
    let amb = n.space.tensor(e.space());
    GradedOp::from_fn(&n.space, &amb, 0, |k, zi| SparseVec::unit(tensor_index(&n.space, e.space(), k, zi, 0, 0)))
}

pub fn chevalley_koszul(n: &Gds, mc: &McSolution, pkg: &HodgePackage) -> Result<ChevalleyKoszul> {
    n.ensure_valid()?;
    let g = &n.alg;
    let e = ExtSpace::new(Side::GDual, g.dim());
    let mut report = Report::new("chevalley", g.name());
    let subs = n.subspaces();
    let e_inv = {
        let lie: Vec<GradedOp> = (0..g.dim()).map(|a| e.lie(g, a)).collect();
        let refs: Vec<&GradedOp> = lie.iter().collect();
        GradedSubspace::joint_kernel(e.space(), &refs)
    };
    let id_n = GradedOp::identity(&n.space);
    let id_e = GradedOp::identity(e.space());
    let prims = pkg.primitives();

    // d⊗1 + Σ_j p^j⊗ι(c_j) on N⊗∧g*
    let mut d_amb = GradedOp::tensor(&n.d, &id_e);
    for (pj, prim) in mc.p.iter().zip(prims) {
        d_amb = d_amb.add(&GradedOp::tensor(&n.act_poly(pj)?, &e.contract_by(&prim.c)));
    }
    let complex = Complex::restrict("Chevalley-Koszul complex", GradedSubspace::tensor(&subs.basic, &e_inv), &d_amb)?;
    report.push(Certificate::from_comparison("Chevalley-Koszul d^2 = 0", &complex.d_squared()));

    // Ψ(z⊗η) = (−1)^{|η||z|} (e^{ι(f)}η).z
    let mut ops = Vec::with_capacity(g.dim() + 1);
    for j in 0..=g.dim() {
        let mut row = Vec::new();
        for b in e.basis().blades(j) {
            let eta = MixedElt::term(Side::GDual, g.dim(), *b, Poly::one());
            let w = weil::exp_iota(&mc.f, &eta)?;
            row.push(n.act_weil(&w, j as i64)?);
        }
        ops.push(row);
    }
    let psi_amb = blade_acting(n, &e, &ops);
    let psi = psi_amb
        .restrict(&complex.sub, &subs.inv)
        .map_err(|k| Error::certificate("Psi lands in N_inv", format!("degree {k}")))?;
    let n_inv_d = n.d.restrict(&subs.inv, &subs.inv).map_err(|k| Error::certificate("d preserves N_inv", format!("degree {k}")))?;
    report.push(Certificate::from_comparison("Psi is a cochain map", &n_inv_d.compose(&psi).compare(&psi.compose(&complex.d))));

    // Υ(z) = (P_hor⊗1) e^{−α} (e^{ι(f)} z ⊗ 1), α = Σ_j ι(c_j)⊗c^j.
    // With e^{−ι(f)} here Υ fails to be a cochain map for su2.
    let mut alpha = GradedOp::zero(&d_amb.src().clone(), d_amb.src(), 0);
    for prim in prims {
        alpha = alpha.add(&GradedOp::tensor(&n.iota_ext(&prim.c), &e.wedge_by(&prim.dual)));
    }
    let e_alpha = exp_nilpotent_op(&alpha.neg(), prims.len() + 1);
    let e_f = n.iota_mixed(&mc.f.exp_nilpotent()?, 0)?;
    let p_hor = GradedOp::tensor(&n.horizontal_projection()?, &id_e);
    let ups_amb = p_hor.compose(&e_alpha).compose(&unit_embedding(n, &e)).compose(&e_f);
    let upsilon = ups_amb
        .restrict(&subs.inv, &complex.sub)
        .map_err(|k| Error::certificate("Upsilon lands in the Chevalley-Koszul complex", format!("degree {k}")))?;
    report.push(Certificate::from_comparison("Upsilon is a cochain map", &complex.d.compose(&upsilon).compare(&upsilon.compose(&n_inv_d))));

    let id_c = GradedOp::identity(&complex.sub.space());
    report.push(Certificate::from_comparison("Upsilon Psi = I", &upsilon.compose(&psi).compare(&id_c)));
    let pi = psi.compose(&upsilon);
    report.push(Certificate::from_comparison("Psi Upsilon is idempotent", &pi.compose(&pi).compare(&pi)));

    // (∧g)_inv acts by contraction on the second factor and on N_inv
    let mut f_psi = None;
    let mut f_ups = None;
    let mut checked = Vec::new();
    for (j, prim) in prims.iter().enumerate() {
        let on_c = GradedOp::tensor(&id_n, &e.contract_by(&prim.c))
            .restrict(&complex.sub, &complex.sub)
            .map_err(|k| Error::certificate("contraction preserves the complex", format!("degree {k}")))?;
        let on_n = n
            .iota_ext(&prim.c)
            .restrict(&subs.inv, &subs.inv)
            .map_err(|k| Error::certificate("contraction preserves N_inv", format!("degree {k}")))?;
        let c1 = psi.compose(&on_c).compare(&on_n.compose(&psi));
        let c2 = upsilon.compose(&on_n).compare(&on_c.compose(&upsilon));
        checked = c1.checked.clone();
        if f_psi.is_none() {
            f_psi = c1.describe().map(|r| format!("c_{}: {r}", j + 1));
        }
        if f_ups.is_none() {
            f_ups = c2.describe().map(|r| format!("c_{}: {r}", j + 1));
        }
    }
    report.push(Certificate::from_degrees("Psi is (wedge g)_inv-linear", &checked, f_psi));
    report.push(Certificate::from_degrees("Upsilon is (wedge g)_inv-linear", &checked, f_ups));
    report.notes.push("projection verified, homotopy not constructed".into());
    report.data = json!({
        "module": n.name,
        "complex_dims": complex.dims(),
        "n_inv_dims": subs.inv.dims(),
        "complex_cohomology": known_prefix(&complex.cohomology()),
    });
    Ok(ChevalleyKoszul { complex, n_inv: subs.inv, psi, upsilon, report })
}

/// p⊗x ↦ P_hor(p.x) from C_g(N) to N_basic.
pub fn cartan_projection(n: &Gds, cutoff: usize) -> Result<Report> {
    n.ensure_valid()?;
    let amb = CartanAmbient::new(n, cutoff);
    let mut report = Report::new("cartan_projection", n.alg.name());
    let big = Complex::restrict("Cartan model", amb.invariants(), &amb.d_big())?;
    let subs = n.subspaces();
    let basic = Complex::restrict("N_basic", subs.basic.clone(), &n.d)?;
    let p_hor = n.horizontal_projection()?;
    let mut cache: HashMap<(usize, usize, usize), Vec<SparseVec>> = HashMap::new();
    let mut mono_ops: HashMap<(usize, usize), GradedOp> = HashMap::new();
    let s_space = amb.sym.space().clone();
    let proj_amb = GradedOp::try_from_fn(&amb.space, &n.space, 0, |k, idx| {
        let (i, mi, xi) = GradedSpace::tensor_split(&s_space, &n.space, k, idx);
        let key = (i, mi, k - i);
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
            let op = mono_ops.entry((i, mi)).or_insert_with(|| {
                let m = &amb.sym.monomials(i / 2)[mi];
                p_hor.compose(&n.act_monomial(m).expect("Weil action checked above"))
            });
            let cols = op.block((k - i) as i64)?.cols();
            e.insert(cols);
        }
        Some(cache[&key][xi].clone())
    });
    let proj = proj_amb
        .restrict(&big.sub, &subs.basic)
        .map_err(|k| Error::certificate("projection lands in N_basic", format!("degree {k}")))?;
    report.push(Certificate::from_comparison("projection is a cochain map", &basic.d.compose(&proj).compare(&proj.compose(&big.d))));
    let incl_amb = GradedOp::from_fn(&n.space, &amb.space, 0, |k, xi| {
        SparseVec::unit(tensor_index(&s_space, &n.space, 0, 0, k, xi))
    });
    let incl = incl_amb
        .restrict(&subs.basic, &big.sub)
        .map_err(|k| Error::certificate("N_basic lies in the Cartan model", format!("degree {k}")))?;
    let id = GradedOp::identity(&subs.basic.space());
    report.push(Certificate::from_comparison("projection after inclusion = I", &proj.compose(&incl).compare(&id)));
    let mut fail = None;
    let mut checked = Vec::new();
    let pkg = HodgePackage::build(&n.alg)?;
    let mc = crate::mc::solve_mc(&pkg)?;
    for (j, pj) in mc.p.iter().enumerate() {
        let on_big = amb.mult(pj).restrict(&big.sub, &big.sub).map_err(|k| Error::certificate("p-action", format!("degree {k}")))?;
        let on_basic = n.act_poly(pj)?.restrict(&subs.basic, &subs.basic).map_err(|k| Error::certificate("p-action", format!("degree {k}")))?;
        let c = proj.compose(&on_big).compare(&on_basic.compose(&proj));
        checked = c.checked.clone();
        if fail.is_none() {
            fail = c.describe().map(|r| format!("p^{}: {r}", j + 1));
        }
    }
    report.push(Certificate::from_degrees("projection is (Sg*)_inv-linear", &checked, fail));
    let ranks: Vec<Option<usize>> = proj.blocks().iter().map(|b| b.as_ref().map(|m| m.rank())).collect();
    report.data = json!({ "module": n.name, "basic_dims": subs.basic.dims(), "image_ranks": known_prefix(&ranks) });
    Ok(report)
}

/// x⊗η ↦ (−1)^{|η||x|} η.x from N_hor⊗∧g* to N, and the differential it induces.
pub fn canonical_iso_check(n: &Gds) -> Result<Report> {
    n.ensure_valid()?;
    let g = &n.alg;
    let e = ExtSpace::new(Side::GDual, g.dim());
    let w = n.weil.as_ref().ok_or_else(|| Error::Mismatch("module carries no Weil action".into()))?;
    let mut report = Report::new("canonical_iso", g.name());
    let subs = n.subspaces();
    let sub = GradedSubspace::tensor(&subs.hor, &GradedSubspace::full(e.space()));
    let mut ops = Vec::with_capacity(g.dim() + 1);
    for j in 0..=g.dim() {
        ops.push(e.basis().blades(j).iter().map(|b| n.act_y_blade(*b)).collect::<Result<Vec<_>>>()?);
    }
    let iso_amb = blade_acting(n, &e, &ops);
    let iso = iso_amb.restrict(&sub, &GradedSubspace::full(&n.space)).expect("full target");
    let mut fail = None;
    let mut checked = Vec::new();
    for (k, b) in iso.blocks().iter().enumerate() {
        if let Some(m) = b {
            checked.push(k);
            let r = m.rank();
            if (r != m.nrows() || r != m.ncols()) && fail.is_none() {
                fail = Some(format!("degree {k}: rank {r}, source {}, target {}", m.ncols(), m.nrows()));
            }
        }
    }
    report.push(Certificate::from_degrees("N_hor ⊗ wedge g* -> N is bijective", &checked, fail));
    let id_n = GradedOp::identity(&n.space);
    let id_e = GradedOp::identity(e.space());
    let d_hor = n.horizontal_projection()?.compose(&n.d);
    let mut dd = GradedOp::tensor(&id_n, &e.differential(g)).neg().add(&GradedOp::tensor(&d_hor, &id_e));
    for a in 0..g.dim() {
        dd = dd.add(&GradedOp::tensor(&w.v[a], &e.iota(a)));
        let l = GradedOp::tensor(&n.lie[a], &id_e).add(&GradedOp::tensor(&id_n, &e.lie(g, a)));
        dd = dd.add(&GradedOp::tensor(&id_n, &e.eps(a)).compose(&l));
    }
    let dd = dd
        .restrict(&sub, &sub)
        .map_err(|k| Error::certificate("induced differential preserves N_hor ⊗ wedge g*", format!("degree {k}")))?;
    let d_full = n.d.restrict(&GradedSubspace::full(&n.space), &GradedSubspace::full(&n.space)).expect("full");
    report.push(Certificate::from_comparison("pulled-back differential matches", &d_full.compose(&iso).compare(&iso.compose(&dd))));
    report.data = json!({ "module": n.name, "hor_dims": subs.hor.dims() });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::mc::solve_mc;

    fn assert_pass(r: &Report) {
        for c in &r.certificates {
            assert!(c.passed(), "{}: {c:?}", r.check);
        }
    }

    #[test]
    fn abelian_and_su2_small() {
        for g in [LieAlgebra::abelian(1).unwrap(), LieAlgebra::su2()] {
            let pkg = HodgePackage::build(&g).unwrap();
            let mc = solve_mc(&pkg).unwrap();
            let n = Gds::weil(&g, 2);
            assert_pass(&chevalley_koszul(&n, &mc, &pkg).unwrap().report);
            assert_pass(&cartan_projection(&n, 2).unwrap());
            assert_pass(&canonical_iso_check(&n).unwrap());
        }
    }
}
