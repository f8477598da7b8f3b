//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::Value;
use weilmc::exterior;
use weilmc::gds::Gds;
use weilmc::hodge::HodgePackage;
use weilmc::identities;
use weilmc::mc::{diagonal_phi, exp_f_neumann, solve_mc, solve_relative_mc, McSolution};
use weilmc::models::{cartan, chevalley, duality, halperin, product, transgress, Report};
use weilmc::rational::q;
use weilmc::{Blade, LieAlgebra, MixedElt, Monomial, Poly, Side};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn setup(name: &str) -> Result<(LieAlgebra, HodgePackage, McSolution), String> {
    let g = LieAlgebra::builtin(name).map_err(|e| e.to_string())?;
    let pkg = HodgePackage::build(&g).map_err(|e| e.to_string())?;
    let mc = solve_mc(&pkg).map_err(|e| e.to_string())?;
    Ok((g, pkg, mc))
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn all_pass(r: &Report) -> Result<usize, String> {
    match r.first_failure() {
        None if r.certificates.is_empty() => Err(format!("{}: no certificates", r.check)),
        None => Ok(r.certificates.len()),
        Some(c) => Err(format!("{}: `{}` failed: {}", r.check, c.check, c.first_failure.clone().unwrap_or_default())),
    }
}

fn within(t: Instant, limit: Duration) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {e:.2?}, limit {limit:?}"))?;
    Ok(e)
}

/// Σ_k coeff · v^var ⊗ e_blade, indices 0-based.
fn mixed(n: usize, terms: &[(usize, u8, &[usize], i64)]) -> MixedElt {
    let mut flat = Vec::new();
    for (var, pow, blade, c) in terms {
        let mut e = vec![0u8; n];
        e[*var] = *pow;
        let (neg, b) = Blade::from_indices(blade).expect("distinct indices");
        flat.push((Monomial::from_exponents(&e), b, q(if neg { -c } else { *c })));
    }
    MixedElt::from_flat(Side::G, n, flat)
}

fn su2_f(shift: usize, n: usize) -> MixedElt {
    let s = shift;
    mixed(n, &[(s, 1, &[s + 1, s + 2], 1), (s + 1, 1, &[s + 2, s], 1), (s + 2, 1, &[s, s + 1], 1)])
}

fn c1() -> Check {
    let t = Instant::now();
    let (g, pkg, mc) = setup("su2")?;
    let f = su2_f(0, 3);
    ensure(mc.f == f, || format!("f = {:?}", mc.f))?;
    let z = mixed(3, &[(0, 2, &[0, 1, 2], 1), (1, 2, &[0, 1, 2], 1), (2, 2, &[0, 1, 2], 1)]);
    ensure(mc.z == z, || "Z differs".into())?;
    let df = mixed(3, &[(0, 1, &[0], -1), (1, 1, &[1], -1), (2, 1, &[2], -1)]);
    ensure(exterior::boundary(&g, &mc.f).map_err(|e| e.to_string())? == df, || "boundary of f differs".into())?;
    ensure(pkg.casimir_trace() == q(-6), || format!("tr Cas = {}", pkg.casimir_trace()))?;
    let checks = mc.verify(&pkg);
    ensure(checks.iter().all(|c| c.passed), || format!("{:?}", checks.iter().find(|c| !c.passed)))?;
    let e = within(t, Duration::from_secs(1))?;

    let out = Command::new(env!("CARGO_BIN_EXE_weilmc")).args(["solve", "--lie", "su2", "--verify"]).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("CLI exit {:?}", out.status.code()))?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(v["casimir_trace"] == "-6" && v["status"] == "pass", || "CLI report differs".into())?;
    Ok(format!("f, Z, boundary f exact, tr Cas = -6, {e:.2?}"))
}

fn c2() -> Check {
    let t = Instant::now();
    for n in 1..=4 {
        let (g, pkg, mc) = setup(&format!("abelian:{n}"))?;
        ensure(mc.f.is_zero(), || format!("abelian:{n}: f != 0"))?;
        let vars: Vec<Poly> = (0..n).map(Poly::var).collect();
        ensure(mc.p == vars, || format!("abelian:{n}: p = {:?}", mc.p))?;
        let same = cartan::models_coincide(&Gds::wedge_dual(&g), &mc, &pkg, 6).map_err(|e| e.to_string())?;
        ensure(same, || format!("abelian:{n}: models differ"))?;
    }
    let e = within(t, Duration::from_secs(1))?;
    Ok(format!("abelian:1..4, f = 0, p^a = v^a, models coincide, {e:.2?}"))
}

fn c3() -> Check {
    let t = Instant::now();
    let (_, pkg, mc) = setup("su2+su2")?;
    let block = su2_f(0, 6).add(&su2_f(3, 6));
    ensure(mc.f == block, || "f is not the block sum".into())?;
    let dims = pkg.invariant_dims();
    ensure(dims == [1, 0, 0, 2, 0, 0, 1], || format!("invariant dims {dims:?}"))?;
    let e = within(t, Duration::from_secs(5))?;
    Ok(format!("block sum, invariant dims {dims:?}, {e:.2?}"))
}

fn c4() -> Check {
    let t = Instant::now();
    let (_, pkg, mc) = setup("sl3")?;
    let mut s = mc.generator_degrees();
    s.sort();
    ensure(s == [2, 3], || format!("generator S-degrees {s:?}"))?;
    let w: Vec<usize> = pkg.primitives().iter().map(|p| p.degree).collect();
    ensure(w == [3, 5], || format!("primitive degrees {w:?}"))?;
    let total: usize = pkg.invariant_dims().iter().sum();
    ensure(total == 4, || format!("invariant total {total}"))?;
    let checks = mc.verify(&pkg);
    ensure(checks.iter().all(|c| c.passed), || format!("{:?}", checks.iter().find(|c| !c.passed)))?;
    let e = within(t, Duration::from_secs(600))?;
    Ok(format!("Z in (Sg*)_inv (x) P, S-degrees {s:?}, wedge degrees {w:?}, total 4, {e:.2?}"))
}

fn c5() -> Check {
    for name in ["su2", "su2+su2", "sl2", "sl3"] {
        let (_, pkg, mc) = setup(name)?;
        let direct = mc.f.exp_nilpotent().map_err(|e| e.to_string())?;
        ensure(exp_f_neumann(&pkg) == direct, || format!("{name}: Neumann series differs"))?;
    }
    Ok("su2, su2+su2, sl2, sl3".into())
}

fn c6() -> Check {
    let mut n = 0;
    for (name, cutoff) in [("su2", 6), ("sl2", 6), ("abelian:1", 6), ("abelian:3", 4), ("su2+su2", 4), ("sl3", 3)] {
        let (_, pkg, mc) = setup(name)?;
        let tr = transgress::transgress(&mc, &pkg, cutoff).map_err(|e| format!("{name}: {e}"))?;
        n += all_pass(&tr.report).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{n} certificates over su2, sl2, abelian:1, abelian:3, su2+su2, sl3"))
}

fn c7() -> Check {
    let trials = 50;
    let names = ["abelian:3", "su2", "sl2", "su2+su2", "sl3"];
    for name in names {
        let g = LieAlgebra::builtin(name).map_err(|e| e.to_string())?;
        for (suite, id) in identities::SUITES {
            identities::run(&g, *id, 1, trials).map_err(|e| format!("{name}: {suite}: {e}"))?;
        }
    }
    Ok(format!("{} suites x {trials} trials on {}", identities::SUITES.len(), names.join(", ")))
}

fn c8() -> Check {
    let (g, pkg, mc) = setup("su2")?;
    let m = Gds::wedge_dual(&g);
    let tw = cartan::twist_map(&m, &mc, &pkg, 8).map_err(|e| e.to_string())?;
    let a = all_pass(&tw.report)?;
    let h = cartan::homotopy_inverse(&m, &mc, 8).map_err(|e| e.to_string())?;
    let b = all_pass(&h.report)?;
    Ok(format!("su2 wedge-dual cutoff 8: {a} twist and {b} homotopy certificates"))
}

fn c9() -> Check {
    let (g, pkg, mc) = setup("su2")?;
    let r = chevalley::chevalley_koszul(&Gds::weil(&g, 4), &mc, &pkg).map_err(|e| e.to_string())?;
    ensure(r.report.certificates.iter().any(|c| c.check == "Upsilon Psi = I"), || "Upsilon Psi = I not certified".into())?;
    let n = all_pass(&r.report)?;
    Ok(format!("weil:4(su2): {n} certificates"))
}

fn c10() -> Check {
    let (_, pkg, mc) = setup("su2")?;
    let r = duality::koszul_duality(&pkg, &mc, 6).map_err(|e| e.to_string())?;
    let n = all_pass(&r)?;
    Ok(format!("K(P)(su2) cutoff 6: {n} certificates"))
}

fn c11() -> Check {
    let (g, pkg, _) = setup("su2")?;
    let h = LieAlgebra::direct_sum(&g, &g).map_err(|e| e.to_string())?;
    let pkg_h = HodgePackage::build(&h).map_err(|e| e.to_string())?;
    let rel = solve_relative_mc(&g, &h, &diagonal_phi(3), &pkg, &pkg_h).map_err(|e| e.to_string())?;
    let mut terms = Vec::new();
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        for v in 0..3 {
            terms.push((v, 2, vec![a, b, a + 3, b + 3], 1));
        }
    }
    let terms: Vec<(usize, u8, &[usize], i64)> = terms.iter().map(|(v, p, b, c)| (*v, *p, b.as_slice(), *c)).collect();
    ensure(rel.u == mixed(6, &terms), || "u is not the cyclic sum".into())?;
    ensure(exterior::schouten(&h, &rel.u, &rel.u).map_err(|e| e.to_string())?.is_zero(), || "[u,u] != 0".into())?;
    let r = product::product_twist(&Gds::wedge_dual(&g), &rel, &pkg, 6).map_err(|e| e.to_string())?;
    let n = all_pass(&r)?;
    Ok(format!("cyclic u, [u,u] = 0, {n} product certificates at cutoff 6"))
}

fn c12() -> Check {
    let (g, pkg, mc) = setup("su2")?;
    let r = halperin::halperin_check(&Gds::weil(&g, 4), &Gds::wedge_dual(&g), &mc, &pkg).map_err(|e| e.to_string())?;
    let n = all_pass(&r.report)?;
    Ok(format!("N = weil:4(su2), M = wedge-dual(su2): {n} certificates"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("su(2) ground truth", c1),
        ("abelian degeneration", c2),
        ("block additivity", c3),
        ("sl3 structure", c4),
        ("Neumann exponential", c5),
        ("transgression", c6),
        ("identity suites", c7),
        ("Cartan-model equivalence", c8),
        ("Chevalley-Koszul", c9),
        ("Koszul duality", c10),
        ("product", c11),
        ("Halperin", c12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let e = t.elapsed();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{e:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{e:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
