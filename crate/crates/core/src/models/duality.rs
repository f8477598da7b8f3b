//! Koszul duality between differential SP̃*-modules and ∧P-modules: the
//! functors h and t, and the twists identifying htY with K(P)⊗Y and thX with
//! K(P)^-⊗X.

use serde_json::json;

use crate::error::{Error, Result};
use crate::gds::Gds;
use crate::graded::{cohomology_dims, GradedOp, GradedSpace, GradedSubspace};
use crate::hodge::HodgePackage;
use crate::koszul::KoszulAlgebra;
use crate::mc::McSolution;
use crate::models::cartan::CartanAmbient;
use crate::spaces::SymSpace;

use super::{exp_nilpotent_op, known_prefix, Certificate, Report};

/// A differential ∧P-module: one odd operator ι(c_j) per primitive.
#[derive(Clone, Debug)]
pub struct WedgeModule {
    pub name: String,
    pub space: GradedSpace,
    pub d: GradedOp,
    pub iota: Vec<GradedOp>,
}

/// A differential SP̃*-module: one even operator per generator p^j.
#[derive(Clone, Debug)]
pub struct SymModule {
    pub name: String,
    pub space: GradedSpace,
    pub d: GradedOp,
    pub p: Vec<GradedOp>,
}

fn restricted(op: &GradedOp, sub: &GradedSubspace, what: &str) -> Result<GradedOp> {
    op.restrict(sub, sub).map_err(|k| Error::certificate(format!("{what} preserves the subspace"), format!("degree {k}")))
}

impl WedgeModule {
    /// The ground field with zero action; `degrees` are those of the c_j.
    pub fn trivial(degrees: &[usize]) -> Self {
        let space = GradedSpace::point();
        let d = GradedOp::zero(&space, &space, 1);
        let iota = degrees.iter().map(|k| GradedOp::zero(&space, &space, -(*k as i64))).collect();
        WedgeModule { name: "trivial".into(), iota, space, d }
    }

    /// M_inv with ι(c_j) acting by contraction.
    pub fn invariants(m: &Gds, pkg: &HodgePackage) -> Result<Self> {
        let inv = m.subspaces().inv;
        let d = restricted(&m.d, &inv, "d")?;
        let iota = pkg.primitives().iter().map(|c| restricted(&m.iota_ext(&c.c), &inv, "contraction")).collect::<Result<_>>()?;
        Ok(WedgeModule { name: format!("{}_inv", m.name), space: inv.space(), d, iota })
    }
}

impl SymModule {
    /// (Sg*)_inv with zero differential, p^j acting by multiplication.
    pub fn invariant_polys(m: &McSolution, n: usize, lie: &crate::lie::LieAlgebra, cutoff: usize) -> Result<Self> {
        let s = SymSpace::new(n, cutoff);
        let ops: Vec<GradedOp> = (0..n).map(|a| s.lie(lie, a)).collect();
        let refs: Vec<&GradedOp> = ops.iter().collect();
        let inv = GradedSubspace::joint_kernel(s.space(), &refs);
        let p = m.p.iter().map(|pj| restricted(&s.mult(pj), &inv, "p-multiplication")).collect::<Result<_>>()?;
        let space = inv.space();
        Ok(SymModule { name: "(Sg*)_inv".into(), d: GradedOp::zero(&space, &space, 1), space, p })
    }

    /// The Cartan model C_g(M) with p^j acting on the polynomial factor.
    pub fn cartan(m: &Gds, mc: &McSolution, cutoff: usize) -> Result<Self> {
        let amb = CartanAmbient::new(m, cutoff);
        let inv = amb.invariants();
        let d = restricted(&amb.d_big(), &inv, "Cartan differential")?;
        let p = mc.p.iter().map(|pj| restricted(&amb.mult(pj), &inv, "p-multiplication")).collect::<Result<_>>()?;
        Ok(SymModule { name: format!("C_g({})", m.name), space: inv.space(), d, p })
    }
}

fn operator_family(report: &mut Report, check: &str, pairs: &[(GradedOp, GradedOp)]) {
    let mut fail = None;
    let mut checked = Vec::new();
    for (j, (a, b)) in pairs.iter().enumerate() {
        let c = a.compare(b);
        if c.checked.len() > checked.len() {
            checked = c.checked.clone();
        }
        if fail.is_none() {
            fail = c.describe().map(|r| format!("j = {}: {r}", j + 1));
        }
    }
    report.push(Certificate::from_degrees(check, &checked, fail));
}

/// H(K(P)) is the ground field in degree 0.
pub fn koszul_acyclic(k: &KoszulAlgebra) -> Certificate {
    let h = cohomology_dims(&k.differential());
    let mut checked = Vec::new();
    let mut fail = None;
    for (deg, x) in h.iter().enumerate() {
        if let Some(x) = x {
            checked.push(deg);
            let expected = usize::from(deg == 0);
            if *x != expected && fail.is_none() {
                fail = Some(format!("dim H^{deg} = {x}"));
            }
        }
    }
    Certificate::from_degrees("K(P) is acyclic", &checked, fail)
}

/// htY = K(P)⊗Y versus K(P)⊗Y with the untwisted structure, through e^α,
/// α = Σ_k c^k⊗ι_Y(c_k).
pub fn ht_check(k: &KoszulAlgebra, y: &WedgeModule) -> Result<Report> {
    if y.iota.len() != k.rank() {
        return Err(Error::Mismatch(format!("∧P-module `{}` has {} operators, K(P) has rank {}", y.name, y.iota.len(), k.rank())));
    }
    let mut report = Report::new("duality_ht", &y.name);
    let ik = GradedOp::identity(k.space());
    let iy = GradedOp::identity(&y.space);
    let mut d_ht = GradedOp::tensor(&k.differential(), &iy).add(&GradedOp::tensor(&ik, &y.d));
    let mut alpha = GradedOp::zero(&k.space().tensor(&y.space), &k.space().tensor(&y.space), 0);
    for j in 0..k.rank() {
        d_ht = d_ht.sub(&GradedOp::tensor(&k.mult_p(j), &y.iota[j]));
        alpha = alpha.add(&GradedOp::tensor(&k.mult_c(j), &y.iota[j]));
    }
    report.push(Certificate::from_comparison("d_htY^2 = 0", &d_ht.compose(&d_ht).zero_check()));
    let e_pos = exp_nilpotent_op(&alpha, k.rank() + 1);
    let e_neg = exp_nilpotent_op(&alpha.neg(), k.rank() + 1);
    let conj = |x: &GradedOp| e_neg.compose(x).compose(&e_pos);
    let pairs: Vec<(GradedOp, GradedOp)> = (0..k.rank())
        .map(|j| {
            let lhs = conj(&GradedOp::tensor(&k.iota_c(j), &iy));
            let rhs = GradedOp::tensor(&k.iota_c(j), &iy).add(&GradedOp::tensor(&ik, &y.iota[j]));
            (lhs, rhs)
        })
        .collect();
    operator_family(&mut report, "Ad(e^-alpha) iota_htY(c_j) = iota_K(c_j)⊗1 + 1⊗iota_Y(c_j)", &pairs);
    let plain = GradedOp::tensor(&k.differential(), &iy).add(&GradedOp::tensor(&ik, &y.d));
    report.push(Certificate::from_comparison("Ad(e^-alpha) d_htY = d_K⊗1 + 1⊗d_Y", &conj(&d_ht).compare(&plain)));
    report.data = json!({
        "module": y.name,
        "htY_cohomology": known_prefix(&cohomology_dims(&d_ht)),
        "Y_cohomology": known_prefix(&cohomology_dims(&y.d)),
    });
    Ok(report)
}

/// thX = K(P)⊗X versus K(P)^-⊗X, through e^β, β = Σ_j ∂/∂p^j⊗p^j.
/// Reordering t(hX) gives d_thX = −d_K⊗1 + 1⊗d_X + Σ_j ι_K(c_j)⊗p^j.
pub fn th_check(k: &KoszulAlgebra, x: &SymModule) -> Result<Report> {
    if x.p.len() != k.rank() {
        return Err(Error::Mismatch(format!("SP-module `{}` has {} operators, K(P) has rank {}", x.name, x.p.len(), k.rank())));
    }
    let mut report = Report::new("duality_th", &x.name);
    let ik = GradedOp::identity(k.space());
    let ix = GradedOp::identity(&x.space);
    let plain = GradedOp::tensor(&k.differential().neg(), &ix).add(&GradedOp::tensor(&ik, &x.d));
    let mut d_th = plain.clone();
    let mut beta = GradedOp::zero(&k.space().tensor(&x.space), &k.space().tensor(&x.space), 0);
    for j in 0..k.rank() {
        d_th = d_th.add(&GradedOp::tensor(&k.iota_c(j), &x.p[j]));
        beta = beta.add(&GradedOp::tensor(&k.deriv_p(j), &x.p[j]));
    }
    report.push(Certificate::from_comparison("d_thX^2 = 0", &d_th.compose(&d_th).zero_check()));
    let max_terms = k.cutoff() + 1;
    let e_pos = exp_nilpotent_op(&beta, max_terms);
    let e_neg = exp_nilpotent_op(&beta.neg(), max_terms);
    let conj = |op: &GradedOp| e_pos.compose(op).compose(&e_neg);
    let pairs: Vec<(GradedOp, GradedOp)> = (0..k.rank())
        .map(|j| {
            let lhs = conj(&GradedOp::tensor(&k.mult_p(j), &ix));
            let rhs = GradedOp::tensor(&k.mult_p(j), &ix).add(&GradedOp::tensor(&ik, &x.p[j]));
            (lhs, rhs)
        })
        .collect();
    operator_family(&mut report, "Ad(e^beta) p^j_thX = p^j⊗1 + 1⊗p^j", &pairs);
    report.push(Certificate::from_comparison("Ad(e^beta) d_thX = -d_K⊗1 + 1⊗d_X", &conj(&d_th).compare(&plain)));
    report.data = json!({
        "module": x.name,
        "thX_cohomology": known_prefix(&cohomology_dims(&d_th)),
        "X_cohomology": known_prefix(&cohomology_dims(&x.d)),
    });
    Ok(report)
}

/// K(P) acyclicity plus both twists for Y = F, Y = (∧g*)_inv, X = (Sg*)_inv.
pub fn koszul_duality(pkg: &HodgePackage, mc: &McSolution, cutoff: usize) -> Result<Report> {
    let g = pkg.algebra();
    let degrees: Vec<usize> = pkg.primitives().iter().map(|c| c.degree).collect();
    let k = KoszulAlgebra::new(&degrees, cutoff);
    let mut report = Report::new("duality", g.name());
    report.push(koszul_acyclic(&k));
    let ys = [WedgeModule::trivial(&degrees), WedgeModule::invariants(&Gds::wedge_dual(g), pkg)?];
    let mut data = serde_json::Map::new();
    for y in &ys {
        let r = ht_check(&k, y)?;
        for mut c in r.certificates {
            c.check = format!("{} [Y = {}]", c.check, y.name);
            report.push(c);
        }
        data.insert(format!("ht {}", y.name), r.data);
    }
    let x = SymModule::invariant_polys(mc, g.dim(), g, cutoff)?;
    let r = th_check(&k, &x)?;
    for mut c in r.certificates {
        c.check = format!("{} [X = {}]", c.check, x.name);
        report.push(c);
    }
    data.insert(format!("th {}", x.name), r.data);
    data.insert("koszul_dims".into(), json!(k.space().dims()));
    report.data = serde_json::Value::Object(data);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::mc::solve_mc;

    #[test]
    fn su2_duality() {
        let g = LieAlgebra::su2();
        let pkg = HodgePackage::build(&g).unwrap();
        let mc = solve_mc(&pkg).unwrap();
        let r = koszul_duality(&pkg, &mc, 4).unwrap();
        for c in &r.certificates {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn trivial_y_gives_koszul_complex() {
        let k = KoszulAlgebra::new(&[3], 3);
        let r = ht_check(&k, &WedgeModule::trivial(&[3])).unwrap();
        assert!(r.passed());
        assert_eq!(r.data["htY_cohomology"][0], 1);
    }

    #[test]
    fn cartan_model_as_sp_module() {
        let g = LieAlgebra::su2();
        let pkg = HodgePackage::build(&g).unwrap();
        let mc = solve_mc(&pkg).unwrap();
        let x = SymModule::cartan(&Gds::wedge_dual(&g), &mc, 3).unwrap();
        let k = KoszulAlgebra::new(&[3], 3);
        assert!(th_check(&k, &x).unwrap().passed());
    }
}
