//! The family Φ(t) = e^{ι(f(t))} for f(t) = exp(t s1).f0 and the homotopy
//! H(t) = Φ(t)∘ι(s1) between its members, compared coefficient-wise in t.

use std::collections::BTreeMap;

use serde_json::json;

use crate::element::{MixedElt, Side};
use crate::error::{Error, Result};
use crate::exterior;
use crate::gds::Gds;
use crate::graded::{Comparison, GradedOp, GradedSubspace};
use crate::hodge::{mixed_invariants, HodgePackage};
use crate::lie::LieAlgebra;
use crate::mc::{curvature, is_invariant_mixed, McSolution};
use crate::rational::{factorial, half, q, Q};
use crate::weil;

use super::cartan::{small_cartan, CartanAmbient};
use super::{Certificate, Report};

/// A polynomial in t with coefficients in Sg*⊗∧g, lowest power first.
pub type TPoly = Vec<MixedElt>;

fn trim(mut p: TPoly) -> TPoly {
    while p.len() > 1 && p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
    p
}

pub fn tpoly_mul(a: &TPoly, b: &TPoly) -> TPoly {
    let Some(z) = a.first().or(b.first()).map(|x| MixedElt::zero(x.side(), x.dim())) else {
        return Vec::new();
    };
    let mut out = vec![z; (a.len() + b.len()).saturating_sub(1)];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.wedge(y));
        }
    }
    trim(out)
}

/// e^{F(t)} for F with nilpotent coefficients.
pub fn tpoly_exp(f: &TPoly, n: usize) -> TPoly {
    let mut out = vec![MixedElt::one(Side::G, n)];
    let mut power = out.clone();
    for k in 1.. {
        power = tpoly_mul(&power, f);
        if power.iter().all(|x| x.is_zero()) {
            break;
        }
        let scaled: TPoly = power.iter().map(|x| x.scale(&(Q::from_integer(1.into()) / factorial(k)))).collect();
        out.resize(out.len().max(scaled.len()), MixedElt::zero(Side::G, n));
        for (i, x) in scaled.iter().enumerate() {
            out[i] = out[i].add(x);
        }
    }
    trim(out)
}

pub fn tpoly_derivative(f: &TPoly) -> TPoly {
    if f.len() <= 1 {
        return f.first().map(|x| vec![MixedElt::zero(x.side(), x.dim())]).unwrap_or_default();
    }
    f.iter().enumerate().skip(1).map(|(k, x)| x.scale(&q(k as i64))).collect()
}

/// Invariant, odd, and every blade of size at least 3, so ad_s raises blade size.
pub fn check_admissible(g: &LieAlgebra, s: &MixedElt) -> Result<()> {
    if !s.is_odd() {
        return Err(Error::Parity("gauge parameter must be odd".into()));
    }
    if s.blade_sizes().iter().any(|k| *k < 3) {
        return Err(Error::Mismatch("gauge parameter has a blade of size below 3".into()));
    }
    if !is_invariant_mixed(g, s) {
        return Err(Error::Mismatch("gauge parameter is not invariant".into()));
    }
    Ok(())
}

/// Coefficients of f(t) = e^{t ad_s} f0 − j^R(t ad_s)(t ∂s).
pub fn gauge_family(g: &LieAlgebra, f0: &MixedElt, s: &MixedElt) -> Result<TPoly> {
    check_admissible(g, s)?;
    let ds = exterior::boundary(g, s)?;
    let mut out = vec![f0.clone()];
    let (mut af, mut ads) = (f0.clone(), ds);
    for k in 1..=g.dim() + 1 {
        if k > 1 {
            ads = exterior::schouten(g, s, &ads)?;
        }
        af = exterior::schouten(g, s, &af)?;
        if af.is_zero() && ads.is_zero() {
            return Ok(trim(out));
        }
        out.push(af.sub(&ads).scale(&(Q::from_integer(1.into()) / factorial(k))));
    }
    Err(Error::Parity("ad_s is not nilpotent".into()))
}

/// ι(x) on Sg*⊗M, one operator per total degree of x.
fn iota_by_degree(amb: &CartanAmbient, x: &MixedElt) -> Result<BTreeMap<i64, GradedOp>> {
    let mut parts: BTreeMap<i64, Vec<_>> = BTreeMap::new();
    for (m, b, c) in x.flat_terms() {
        parts.entry(2 * m.degree() as i64 - b.len() as i64).or_default().push((m, b, c));
    }
    parts
        .into_iter()
        .map(|(deg, terms)| Ok((deg, amb.iota_mixed(&MixedElt::from_flat(x.side(), x.dim(), terms), deg)?)))
        .collect()
}

fn merge(fail: &mut Option<String>, checked: &mut Vec<usize>, c: &Comparison, label: impl FnOnce() -> String) {
    for k in &c.checked {
        if !checked.contains(k) {
            checked.push(*k);
        }
    }
    if fail.is_none() {
        *fail = c.describe().map(|r| format!("{}: {r}", label()));
    }
}

/// f(t), f'(t) and e^{f(t)}, after certifying that every f(t) solves the
/// equation and that f' + ∂s1 + [f, s1] = 0.
struct Family {
    f: TPoly,
    fp: TPoly,
    ef: TPoly,
}

fn family(mc: &McSolution, pkg: &HodgePackage, s1: &MixedElt, report: &mut Report) -> Result<Family> {
    let g = pkg.algebra();
    let n = g.dim();
    let f = gauge_family(g, &mc.f, s1)?;
    let zero = MixedElt::zero(Side::G, n);
    let c0 = curvature(g, &mc.f);
    let mut bad = None;
    for k in 0..f.len() * 2 {
        let mut ck = if k < f.len() { exterior::boundary(g, &f[k])? } else { zero.clone() };
        for i in 0..=k {
            if i < f.len() && k - i < f.len() {
                ck = ck.add(&exterior::schouten(g, &f[i], &f[k - i])?.scale(&half()));
            }
        }
        let want = if k == 0 { &c0 } else { &zero };
        if &ck != want && bad.is_none() {
            bad = Some(format!("t^{k}"));
        }
    }
    report.push(match bad {
        None => Certificate::pass("curvature of f(t) is constant", None),
        Some(d) => Certificate::fail("curvature of f(t) is constant", None, d),
    });

    let fp = tpoly_derivative(&f);
    let mut bad = None;
    let ds = exterior::boundary(g, s1)?;
    for (k, fk) in fp.iter().enumerate() {
        let mut lhs = fk.add(&exterior::schouten(g, &f[k], s1)?);
        if k == 0 {
            lhs = lhs.add(&ds);
        }
        if !lhs.is_zero() && bad.is_none() {
            bad = Some(format!("t^{k}"));
        }
    }
    report.push(match bad {
        None => Certificate::pass("df/dt + ds1 + [f, s1] = 0", None),
        Some(d) => Certificate::fail("df/dt + ds1 + [f, s1] = 0", None, d),
    });
    if f.len() == 1 {
        report.notes.push("f(t) is constant for this s1".into());
    }
    let ef = tpoly_exp(&f, n);
    Ok(Family { f, fp, ef })
}

fn h_family(fam: &Family, s1: &MixedElt, scale_by_t: bool) -> TPoly {
    let s_t: TPoly = if scale_by_t { vec![MixedElt::zero(Side::G, s1.dim()), s1.clone()] } else { vec![s1.clone()] };
    tpoly_mul(&fam.ef, &s_t)
}

/// dΦ/dt = H∘d̃_g + d_g∘H on the truncated small model of `m`, with H = Φ∘ι(s1).
pub fn homotopy_family_check(m: &Gds, mc: &McSolution, pkg: &HodgePackage, s1: &MixedElt, cutoff: usize) -> Result<Report> {
    let g = pkg.algebra();
    let n = g.dim();
    let mut report = Report::new("homotopy-family", g.name());
    let fam = family(mc, pkg, s1, &mut report)?;
    let zero = MixedElt::zero(Side::G, n);
    let amb = CartanAmbient::new(m, cutoff);
    let small = small_cartan(m, mc, pkg, cutoff)?;
    let inv = amb.invariants();
    let e = small.sub.embedding();
    let d_big = amb.d_big();
    let lhs = tpoly_mul(&fam.ef, &fam.fp);
    let h = h_family(&fam, s1, false);

    let (mut fail, mut checked) = (None, Vec::new());
    let (mut fail_inv, mut checked_inv) = (None, Vec::new());
    for k in 0..lhs.len().max(h.len()) {
        let l = iota_by_degree(&amb, lhs.get(k).unwrap_or(&zero))?;
        let hk = iota_by_degree(&amb, h.get(k).unwrap_or(&zero))?;
        let mut degrees: Vec<i64> = l.keys().copied().collect();
        degrees.extend(hk.keys().map(|d| d + 1));
        degrees.sort_unstable();
        degrees.dedup();
        for deg in degrees {
            let left = match l.get(&deg) {
                Some(op) => op.compose(&e),
                None => GradedOp::zero(small.d.src(), &amb.space, deg),
            };
            let right = match hk.get(&(deg - 1)) {
                Some(op) => {
                    let he = op.compose(&e);
                    he.compose(&small.d).add(&d_big.compose(&he))
                }
                None => GradedOp::zero(small.d.src(), &amb.space, deg),
            };
            merge(&mut fail, &mut checked, &left.compare(&right), || format!("t^{k}, operator degree {deg}"));
        }
        for (deg, op) in &hk {
            let he = op.compose(&e);
            match he.restrict(&GradedSubspace::full(he.src()), &inv) {
                Ok(r) => checked_inv.extend(r.known_degrees().into_iter().filter(|d| !checked_inv.contains(d)).collect::<Vec<_>>()),
                Err(d) if fail_inv.is_none() => fail_inv = Some(format!("t^{k}, operator degree {deg}, source degree {d}")),
                Err(_) => {}
            }
        }
    }
    checked.sort_unstable();
    checked_inv.sort_unstable();
    report.push(Certificate::from_degrees("dPhi/dt = H d~_g + d_g H", &checked, fail));
    report.push(Certificate::from_degrees("H lands in (Sg*⊗M)_inv", &checked_inv, fail_inv));
    report.data = json!({
        "module": m.name,
        "t_degree_f": fam.f.len() - 1,
        "t_degree_phi": fam.ef.len() - 1,
    });
    Ok(report)
}

/// Exact version for M = ∧g*: the identity is checked on every basis vector
/// P⊗ω of (S^{≤max_s}g*)_inv⊗(∧g*)_inv, with no truncation of the target.
pub fn homotopy_family_wedge(mc: &McSolution, pkg: &HodgePackage, s1: &MixedElt, max_s: usize) -> Result<Report> {
    homotopy_family_wedge_with(mc, pkg, s1, max_s, false)
}

/// With `scale_by_t`, H = Φ∘ι(t s1) in place of Φ∘ι(s1).
pub fn homotopy_family_wedge_with(mc: &McSolution, pkg: &HodgePackage, s1: &MixedElt, max_s: usize, scale_by_t: bool) -> Result<Report> {
    let g = pkg.algebra();
    let n = g.dim();
    let mut report = Report::new("homotopy-family", g.name());
    let fam = family(mc, pkg, s1, &mut report)?;
    let lhs = tpoly_mul(&fam.ef, &fam.fp);
    let h = h_family(&fam, s1, scale_by_t);

    let mut samples = Vec::new();
    for sdeg in 0..=max_s {
        for p in mixed_invariants(g, Side::GDual, sdeg, 0) {
            for k in 0..=n {
                for w in pkg.dual_invariant_basis(k) {
                    samples.push((2 * sdeg + k, p.wedge(&w.to_mixed())));
                }
            }
        }
    }
    let d_wedge = |w: &MixedElt| w.map_blades(|b, o| exterior::d_blade(g, b, o));
    let d_small = |w: &MixedElt| -> Result<MixedElt> {
        let mut out = d_wedge(w);
        for (pj, prim) in mc.p.iter().zip(pkg.primitives()) {
            out = out.sub(&weil::iota_action(&prim.c.to_mixed(), w)?.mul_poly(pj));
        }
        Ok(out)
    };
    let d_big = |w: &MixedElt| {
        let mut out = d_wedge(w);
        for a in 0..n {
            out = out.sub(&weil::iota_e(a, w).mul_var(a));
        }
        out
    };
    let zero = MixedElt::zero(Side::G, n);
    let (mut fail, mut fail_inv, mut checked) = (None, None, Vec::new());
    let mut nonzero = 0usize;
    for (deg, w) in &samples {
        let dw = d_small(w)?;
        for k in 0..lhs.len().max(h.len()) {
            let hk = h.get(k).unwrap_or(&zero);
            let left = weil::iota_action(lhs.get(k).unwrap_or(&zero), w)?;
            let hw = weil::iota_action(hk, w)?;
            let right = weil::iota_action(hk, &dw)?.add(&d_big(&hw));
            if !left.is_zero() {
                nonzero += 1;
            }
            if left != right && fail.is_none() {
                fail = Some(format!("t^{k} on a sample of degree {deg}"));
            }
            if (0..n).any(|a| !weil::lie_weil(g, a, &hw).is_zero()) && fail_inv.is_none() {
                fail_inv = Some(format!("t^{k} on a sample of degree {deg}"));
            }
        }
        if !checked.contains(deg) {
            checked.push(*deg);
        }
    }
    checked.sort_unstable();
    report.push(Certificate::from_degrees("dPhi/dt = H d~_g + d_g H", &checked, fail));
    report.push(Certificate::from_degrees("H lands in (Sg*⊗M)_inv", &checked, fail_inv));
    report.data = json!({
        "module": "wedge-dual",
        "samples": samples.len(),
        "nonzero_derivative_samples": nonzero,
        "t_degree_f": fam.f.len() - 1,
        "t_degree_phi": fam.ef.len() - 1,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::mixed_invariants;
    use crate::mc::{gauge_transform, solve_mc};

    fn su2_sum_parameter(g: &LieAlgebra) -> MixedElt {
        let basis = mixed_invariants(g, Side::G, 2, 3);
        assert!(!basis.is_empty());
        basis.iter().enumerate().fold(MixedElt::zero(Side::G, g.dim()), |acc, (i, x)| acc.add(&x.scale(&q(i as i64 + 1))))
    }

    #[test]
    fn family_matches_gauge_transform_at_t1() {
        let g = LieAlgebra::builtin("su2+su2").unwrap();
        let pkg = HodgePackage::build(&g).unwrap();
        let mc = solve_mc(&pkg).unwrap();
        let s = su2_sum_parameter(&g);
        let f = gauge_family(&g, &mc.f, &s).unwrap();
        assert!(f.len() > 1);
        let at1 = f.iter().fold(MixedElt::zero(Side::G, 6), |acc, x| acc.add(x));
        assert_eq!(at1, gauge_transform(&g, &mc.f, &s).unwrap());
    }

    #[test]
    fn su2_sum_wedge_dual() {
        let g = LieAlgebra::builtin("su2+su2").unwrap();
        let pkg = HodgePackage::build(&g).unwrap();
        let mc = solve_mc(&pkg).unwrap();
        let s = su2_sum_parameter(&g);
        let r = homotopy_family_wedge(&mc, &pkg, &s, 2).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert!(r.data["nonzero_derivative_samples"].as_u64().unwrap() > 0);
        let r = homotopy_family_wedge_with(&mc, &pkg, &s, 2, true).unwrap();
        assert!(!r.passed());
        let r = homotopy_family_check(&Gds::wedge_dual(&g), &mc, &pkg, &s, 2).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
    }

    #[test]
    fn su2_constant_family() {
        let g = LieAlgebra::su2();
        let pkg = HodgePackage::build(&g).unwrap();
        let mc = solve_mc(&pkg).unwrap();
        let s = mixed_invariants(&g, Side::G, 1, 3);
        assert!(s.is_empty());
        let s = mixed_invariants(&g, Side::G, 2, 3).remove(0);
        let r = homotopy_family_wedge(&mc, &pkg, &s, 2).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.data["t_degree_f"], 0);
    }
}
