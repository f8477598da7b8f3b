//! Distinguished cochains of transgression c̃^j = e^{ι(f)}c^j and the map
//! Φ = e^{ι(f)}∘incl : K(P) → Wg.

use serde_json::json;

use crate::element::{MixedElt, Side};
use crate::error::Result;
use crate::hodge::HodgePackage;
use crate::koszul::{KoszulAlgebra, KoszulMonomial};
use crate::linalg::Mat;
use crate::mc::McSolution;
use crate::poly::Poly;
use crate::rational::{sign, Q};
use crate::serial;
use crate::spaces::MixedSpace;
use crate::weil;

use super::{Certificate, Report};

pub struct Transgression {
    /// c̃^j, aligned with the primitives.
    pub cochains: Vec<MixedElt>,
    pub report: Report,
}

/// The inclusion K(P) → Wg: p^j ↦ p^j, c^j ↦ the dual primitive.
fn include(k: &KoszulAlgebra, m: &KoszulMonomial, mc: &McSolution, pkg: &HodgePackage) -> MixedElt {
    let n = pkg.algebra().dim();
    let mut poly = Poly::one();
    for (j, e) in m.exps.iter().enumerate() {
        poly = poly.mul(&mc.p[j].pow(*e as usize));
    }
    let mut w = MixedElt::from_poly(Side::GDual, n, &poly);
    for (j, prim) in pkg.primitives().iter().enumerate().take(k.rank()) {
        if m.mask >> j & 1 == 1 {
            w = w.wedge(&prim.dual.to_mixed());
        }
    }
    w
}

/// ι_K(c_j) m as a signed monomial.
fn iota_k(m: &KoszulMonomial, j: usize) -> Option<(KoszulMonomial, Q)> {
    if m.mask >> j & 1 == 0 {
        return None;
    }
    let below = (m.mask & ((1 << j) - 1)).count_ones();
    Some((KoszulMonomial { exps: m.exps.clone(), mask: m.mask & !(1 << j) }, sign(below % 2 == 1)))
}

pub fn phi(k: &KoszulAlgebra, m: &KoszulMonomial, mc: &McSolution, pkg: &HodgePackage) -> Result<MixedElt> {
    weil::exp_iota(&mc.f, &include(k, m, mc, pkg))
}

fn record(fail: &mut Option<String>, checked: &mut Vec<usize>, deg: usize, ok: bool, what: impl FnOnce() -> String) {
    if checked.last() != Some(&deg) {
        checked.push(deg);
    }
    if !ok && fail.is_none() {
        *fail = Some(what());
    }
}

/// Emits the c̃^j and certifies them together with Φ on K(P) up to S-degree `cutoff`.
pub fn transgress(mc: &McSolution, pkg: &HodgePackage, cutoff: usize) -> Result<Transgression> {
    let g = pkg.algebra();
    let n = g.dim();
    let prims = pkg.primitives();
    let r = prims.len();
    let mut report = Report::new("transgress", g.name());

    let mut cochains = Vec::with_capacity(r);
    let mut fail_d = None;
    let mut fail_i = None;
    for (j, prim) in prims.iter().enumerate() {
        let ct = weil::exp_iota(&mc.f, &prim.dual.to_mixed())?;
        if weil::weil_differential(g, &ct) != MixedElt::from_poly(Side::GDual, n, &mc.p[j]) && fail_d.is_none() {
            fail_d = Some(format!("j = {}", j + 1));
        }
        for (i, pi) in prims.iter().enumerate() {
            let v = weil::iota_action(&pi.c.to_mixed(), &ct)?;
            let want = if i == j { MixedElt::one(Side::GDual, n) } else { MixedElt::zero(Side::GDual, n) };
            if v != want && fail_i.is_none() {
                fail_i = Some(format!("i = {}, j = {}", i + 1, j + 1));
            }
        }
        cochains.push(ct);
    }
    let deg: Vec<usize> = prims.iter().map(|p| p.degree).collect();
    let (lo, hi) = (deg.iter().min().copied().unwrap_or(0), deg.iter().max().copied().unwrap_or(0));
    let range = (!prims.is_empty()).then_some([lo, hi]);
    report.push(match fail_d {
        None => Certificate::pass("d^W c~^j = p^j", range),
        Some(d) => Certificate::fail("d^W c~^j = p^j", range, d),
    });
    report.push(match fail_i {
        None => Certificate::pass("iota(c_i) c~^j = delta_ij", range),
        Some(d) => Certificate::fail("iota(c_i) c~^j = delta_ij", range, d),
    });

    let k = KoszulAlgebra::new(&deg, cutoff);
    let top = k.space().top();
    let mut images: Vec<Vec<MixedElt>> = Vec::with_capacity(top + 1);
    for d in 0..=top {
        images.push(k.monomials(d).iter().map(|m| phi(&k, m, mc, pkg)).collect::<Result<_>>()?);
    }
    let at = |m: &KoszulMonomial| -> Result<MixedElt> { phi(&k, m, mc, pkg) };

    let one = KoszulMonomial { exps: vec![0; r], mask: 0 };
    let unital = at(&one)? == MixedElt::one(Side::GDual, n);
    report.push(if unital {
        Certificate::pass("Phi(1) = 1", Some([0, 0]))
    } else {
        Certificate::fail("Phi(1) = 1", Some([0, 0]), "Phi(1) differs from 1".into())
    });

    let (mut f_co, mut f_p, mut f_c) = (None, None, None);
    let (mut d_co, mut d_p, mut d_c) = (Vec::new(), Vec::new(), Vec::new());
    for d in 0..=top {
        for (m, img) in k.monomials(d).iter().zip(&images[d]) {
            let label = k.label(m);
            let mut rhs = MixedElt::zero(Side::GDual, n);
            for j in 0..r {
                if let Some((mj, s)) = iota_k(m, j) {
                    rhs.add_assign_scaled(&at(&mj)?.mul_poly(&mc.p[j]), &s);
                }
            }
            record(&mut f_co, &mut d_co, d, weil::weil_differential(g, img) == rhs, || format!("degree {d}, {label}"));
            for j in 0..r {
                let mut up = m.clone();
                up.exps[j] += 1;
                let ok = at(&up)? == img.mul_poly(&mc.p[j]);
                record(&mut f_p, &mut d_p, d, ok, || format!("p^{} on {label}", j + 1));
                let lhs = weil::iota_action(&prims[j].c.to_mixed(), img)?;
                let rhs = match iota_k(m, j) {
                    Some((mj, s)) => at(&mj)?.scale(&s),
                    None => MixedElt::zero(Side::GDual, n),
                };
                record(&mut f_c, &mut d_c, d, lhs == rhs, || format!("iota(c_{}) on {label}", j + 1));
            }
        }
    }
    report.push(Certificate::from_degrees("d^W Phi = Phi d_K", &d_co, f_co));
    report.push(Certificate::from_degrees("Phi(p^j x) = p^j Phi(x)", &d_p, f_p));
    report.push(Certificate::from_degrees("iota(c_j) Phi = Phi iota_K(c_j)", &d_c, f_c));

    let smax = images.iter().flatten().map(|w| w.s_degree()).max().unwrap_or(0);
    let ws = MixedSpace::new(Side::GDual, n, smax);
    let mut fail = None;
    let mut checked = Vec::new();
    for (d, imgs) in images.iter().enumerate() {
        let cols: Vec<_> = imgs.iter().map(|w| ws.to_vec(w, d)).collect();
        let rank = Mat::from_cols(ws.space().dims()[d], &cols).rank();
        record(&mut fail, &mut checked, d, rank == imgs.len(), || format!("degree {d}: rank {rank} of {}", imgs.len()));
    }
    report.push(Certificate::from_degrees("Phi is injective", &checked, fail));

    report.data = json!({
        "cochains": cochains.iter().map(serial::mixed_to_json).collect::<Vec<_>>(),
        "koszul_dims": k.space().dims(),
    });
    Ok(Transgression { cochains, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::mc::solve_mc;

    fn run(g: &LieAlgebra, cutoff: usize) -> Transgression {
        let pkg = HodgePackage::build(g).unwrap();
        let mc = solve_mc(&pkg).unwrap();
        transgress(&mc, &pkg, cutoff).unwrap()
    }

    #[test]
    fn abelian_cochains_are_generators() {
        let t = run(&LieAlgebra::abelian(2).unwrap(), 3);
        assert!(t.report.passed(), "{:?}", t.report.first_failure());
        for (a, c) in t.cochains.iter().enumerate() {
            // c~^a = y^a up to the normalisation of the dual primitives
            assert_eq!(c.blade_sizes(), vec![1]);
            assert_eq!(c.s_degree(), 0, "a = {a}");
        }
    }

    #[test]
    fn su2_phi() {
        let t = run(&LieAlgebra::su2(), 4);
        assert!(t.report.passed(), "{:?}", t.report.first_failure());
        let casimir = (0..3).fold(Poly::zero(), |acc, a| acc.add(&Poly::var(a).pow(2)));
        assert_eq!(weil::weil_differential(&LieAlgebra::su2(), &t.cochains[0]), MixedElt::from_poly(Side::GDual, 3, &casimir));
    }
}
