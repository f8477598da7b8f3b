//! The inhomogeneous Maurer-Cartan equation ∂f + ½[f,f] = Σ p^j c_j − Σ v^a e_a,
//! its canonical solution, the exponential of the solution, gauge
//! transformations and the relative equation for a Lie homomorphism.

use num_traits::{One, Zero};

use crate::element::{ExtElt, MixedElt, Side};
use crate::error::{Error, Result};
use crate::exterior;
use crate::hodge::HodgePackage;
use crate::lie::{CheckResult, LieAlgebra};
use crate::linalg::Mat;
use crate::poly::Poly;
use crate::rational::{factorial, half, Q};

#[derive(Clone, Debug)]
pub struct McSolution {
    /// f = Σ f_N with f_N of blade size N+1.
    pub f: MixedElt,
    pub components: Vec<(usize, MixedElt)>,
    /// Z = ∂f + ½[f,f] + Σ v^a e_a.
    pub z: MixedElt,
    /// Invariant polynomials with Z = Σ p^j c_j, aligned with the primitives.
    pub p: Vec<Poly>,
    pub iterations: usize,
}

/// X = −Σ_a v^a ⊗ e_a.
pub fn canonical_x(n: usize) -> MixedElt {
    let mut x = MixedElt::zero(Side::G, n);
    for a in 0..n {
        x.add_term(crate::blade::Blade::single(a), Poly::var(a).neg());
    }
    x
}

/// ∂f + ½[f,f].
pub fn curvature(g: &LieAlgebra, f: &MixedElt) -> MixedElt {
    let d = f.map_blades(|b, out| exterior::boundary_blade(g, b, out));
    d.add(&exterior::schouten_unchecked(g, f, f).scale(&half()))
}

/// L(e_a) on Sg*⊗∧g, acting on both factors.
pub fn lie_mixed(g: &LieAlgebra, a: usize, x: &MixedElt) -> MixedElt {
    exterior::lie_derivative(g, a, x).add(&x.lie_derivative_s(g, a))
}

pub fn is_invariant_mixed(g: &LieAlgebra, x: &MixedElt) -> bool {
    (0..g.dim()).all(|a| lie_mixed(g, a, x).is_zero())
}

/// Recursion f_N = 𝒮(X_N − ½ Σ_{i+j=N−1} [f_i, f_j]) for odd N with N+1 ≤ dim.
fn recursion(
    g: &LieAlgebra,
    pkg: &HodgePackage,
    x: &MixedElt,
) -> (Vec<(usize, MixedElt)>, usize) {
    let n = g.dim();
    let mut comps: Vec<(usize, MixedElt)> = Vec::new();
    let mut iterations = 0;
    let mut big_n = 1;
    while big_n < n {
        iterations += 1;
        let mut rhs = x.component(big_n);
        for (i, fi) in &comps {
            for (j, fj) in &comps {
                if i + j + 1 == big_n {
                    rhs.add_assign_scaled(&exterior::schouten_unchecked(g, fi, fj), &-half());
                }
            }
        }
        let fnn = pkg.homotopy_mixed(&rhs);
        if !fnn.is_zero() {
            comps.push((big_n, fnn));
        }
        big_n += 2;
    }
    (comps, iterations)
}

pub fn solve_mc(pkg: &HodgePackage) -> Result<McSolution> {
    let g = pkg.algebra();
    let n = g.dim();
    let x = canonical_x(n);
    let (components, iterations) = recursion(g, pkg, &x);
    let mut f = MixedElt::zero(Side::G, n);
    for (_, c) in &components {
        f = f.add(c);
    }
    let z = curvature(g, &f).sub(&x);
    let mut p = Vec::new();
    let mut rebuilt = MixedElt::zero(Side::G, n);
    for prim in pkg.primitives() {
        let pj = exterior::contract_unchecked(&z, &prim.dual.to_mixed()).scalar_poly();
        rebuilt = rebuilt.add(&prim.c.to_mixed().mul_poly(&pj));
        p.push(pj);
    }
    if rebuilt != z {
        return Err(Error::certificate(
            "residual lies in invariant polynomials tensor primitives",
            "Z differs from the sum of p^j c_j",
        ));
    }
    if let Some(j) = p.iter().position(|pj| !pj.is_invariant(g)) {
        return Err(Error::certificate("p^j invariant", format!("p^{} is not invariant", j + 1)));
    }
    Ok(McSolution { f, components, z, p, iterations })
}

impl McSolution {
    /// Re-derives every stated property of the solution.
    pub fn verify(&self, pkg: &HodgePackage) -> Vec<CheckResult> {
        let g = pkg.algebra();
        let n = g.dim();
        let mut out = Vec::new();
        let degree_ok = self.components.iter().all(|(nn, c)| {
            c.bidegrees().iter().all(|(s, k)| *k == nn + 1 && 2 * s == nn + 1)
        }) && self.f.component(0).is_zero();
        out.push(CheckResult::from_option("f has total degree 0", (!degree_ok).then(|| "bad bidegree".to_string())));
        out.push(CheckResult::from_option(
            "f invariant",
            (0..n).find(|a| !lie_mixed(g, *a, &self.f).is_zero()).map(|a| format!("L(e_{}) f != 0", a + 1)),
        ));
        let df = exterior::delta(g, &self.f).expect("side G");
        out.push(CheckResult::from_option("delta f = 0", (!df.is_zero()).then(|| "nonzero".to_string())));
        out.push(CheckResult::from_option(
            "f delta-exact",
            (!pkg.is_delta_exact(&self.f)).then(|| "slice outside im delta".to_string()),
        ));
        let lhs = curvature(g, &self.f).sub(&canonical_x(n));
        out.push(CheckResult::from_option("Z = curvature + sum v^a e_a", (lhs != self.z).then(|| "mismatch".to_string())));
        let mut rebuilt = MixedElt::zero(Side::G, n);
        for (prim, pj) in pkg.primitives().iter().zip(&self.p) {
            rebuilt = rebuilt.add(&prim.c.to_mixed().mul_poly(pj));
        }
        out.push(CheckResult::from_option("Z = sum p^j c_j", (rebuilt != self.z).then(|| "mismatch".to_string())));
        out.push(CheckResult::from_option(
            "p^j invariant",
            self.p.iter().position(|pj| !pj.is_invariant(g)).map(|j| format!("p^{}", j + 1)),
        ));
        out
    }

    /// S-degrees of the p^j.
    pub fn generator_degrees(&self) -> Vec<usize> {
        self.p.iter().map(|p| p.degree().unwrap_or(0)).collect()
    }
}

/// e^f via the Neumann series F_[0] = 1, F_[k+2] = 𝒢(δY ∧ F_[k]), δY = −Σ v^a δe_a.
pub fn exp_f_neumann(pkg: &HodgePackage) -> MixedElt {
    let g = pkg.algebra();
    let n = g.dim();
    let mut dy = MixedElt::zero(Side::G, n);
    for a in 0..n {
        let de = exterior::delta(g, &ExtElt::generator(Side::G, n, a)).expect("side G").to_mixed();
        dy.add_assign_scaled(&de.mul_poly(&Poly::var(a)), &-Q::one());
    }
    let mut term = MixedElt::one(Side::G, n);
    let mut total = term.clone();
    loop {
        term = pkg.green_mixed(&dy.wedge(&term));
        if term.is_zero() {
            break;
        }
        total = total.add(&term);
    }
    total
}

/// exp(s).f = e^{ad_s} f − j^R(ad_s) ∂s with j^R(z) = (e^z − 1)/z.
pub fn gauge_transform(g: &LieAlgebra, f: &MixedElt, s: &MixedElt) -> Result<MixedElt> {
    if !s.is_odd() {
        return Err(Error::Parity("gauge parameter must be odd".into()));
    }
    f.ensure_side(Side::G, "gauge")?;
    let ds = s.map_blades(|b, out| exterior::boundary_blade(g, b, out));
    let mut out = f.clone();
    let (mut af, mut ads) = (f.clone(), ds.clone());
    out = out.sub(&ds);
    let limit = 2 * g.dim() + 4;
    for k in 1..=limit {
        af = exterior::schouten_unchecked(g, s, &af);
        ads = exterior::schouten_unchecked(g, s, &ads);
        if af.is_zero() && ads.is_zero() {
            return Ok(out);
        }
        out.add_assign_scaled(&af, &(Q::one() / factorial(k)));
        out.add_assign_scaled(&ads, &-(Q::one() / factorial(k + 1)));
    }
    Err(Error::Parity("ad_s is not nilpotent on these inputs".into()))
}

/// e^{ad_s} x.
pub fn exp_ad(g: &LieAlgebra, s: &MixedElt, x: &MixedElt) -> Result<MixedElt> {
    let mut out = x.clone();
    let mut t = x.clone();
    for k in 1..=2 * g.dim() + 4 {
        t = exterior::schouten_unchecked(g, s, &t);
        if t.is_zero() {
            return Ok(out);
        }
        out.add_assign_scaled(&t, &(Q::one() / factorial(k)));
    }
    Err(Error::Parity("ad_s is not nilpotent on these inputs".into()))
}

/// Solution u of ∂u + ½[u,u]_h = Σ φ*(q^l) d_l − Σ p^j φ(c_j).
#[derive(Clone, Debug)]
pub struct RelativeSolution {
    pub u: MixedElt,
    pub x: MixedElt,
    /// n_h × n_g, φ(e_a) = Σ_b phi[b][a] e_b.
    pub phi: Mat,
    pub g: LieAlgebra,
    pub h: LieAlgebra,
}

/// Checks φ[x,y] = [φx, φy] on basis pairs.
pub fn check_homomorphism(g: &LieAlgebra, h: &LieAlgebra, phi: &Mat) -> Result<()> {
    if phi.nrows() != h.dim() || phi.ncols() != g.dim() {
        return Err(Error::NotHomomorphism(format!(
            "matrix is {}x{}, expected {}x{}",
            phi.nrows(),
            phi.ncols(),
            h.dim(),
            g.dim()
        )));
    }
    let col = |a: usize| -> Vec<Q> { (0..h.dim()).map(|b| phi.get(b, a)).collect() };
    for a in 0..g.dim() {
        for b in a + 1..g.dim() {
            let mut lhs = vec![Q::zero(); h.dim()];
            for (k, c) in g.bracket(a, b) {
                for (i, v) in col(*k).iter().enumerate() {
                    lhs[i] += c * v;
                }
            }
            if lhs != h.bracket_vec(&col(a), &col(b)) {
                return Err(Error::NotHomomorphism(format!("bracket of basis vectors ({},{})", a + 1, b + 1)));
            }
        }
    }
    Ok(())
}

/// Images φ(e_a) as elements of ∧h.
pub fn phi_images(phi: &Mat, nh: usize) -> Vec<ExtElt> {
    (0..phi.ncols())
        .map(|a| {
            let mut e = ExtElt::zero(Side::G, nh);
            for b in 0..nh {
                e.add_term(crate::blade::Blade::single(b), phi.get(b, a));
            }
            e
        })
        .collect()
}

/// φ* on polynomials: v_h^b ↦ Σ_a phi[b][a] v_g^a.
pub fn phi_star(phi: &Mat, p: &Poly) -> Poly {
    let images: Vec<Poly> = (0..phi.nrows())
        .map(|b| Poly::from_terms((0..phi.ncols()).map(|a| (crate::poly::Monomial::var(a), phi.get(b, a)))))
        .collect();
    p.substitute(&images)
}

/// The g-action on ∧h through φ combined with the coadjoint action on Sg*.
pub fn lie_relative(g: &LieAlgebra, h: &LieAlgebra, phi: &Mat, a: usize, x: &MixedElt) -> MixedElt {
    let mut out = x.lie_derivative_s(g, a);
    for b in 0..h.dim() {
        let c = phi.get(b, a);
        if !c.is_zero() {
            out.add_assign_scaled(&exterior::lie_derivative(h, b, x), &c);
        }
    }
    out
}

pub fn solve_relative_mc(
    g: &LieAlgebra,
    h: &LieAlgebra,
    phi: &Mat,
    pkg_g: &HodgePackage,
    pkg_h: &HodgePackage,
) -> Result<RelativeSolution> {
    check_homomorphism(g, h, phi)?;
    let (nh, ng) = (h.dim(), g.dim());
    let sol_g = solve_mc(pkg_g)?;
    let sol_h = solve_mc(pkg_h)?;
    let images = phi_images(phi, nh);
    let mut x = MixedElt::zero(Side::G, nh);
    for (prim, q) in pkg_h.primitives().iter().zip(&sol_h.p) {
        x = x.add(&prim.c.to_mixed().mul_poly(&phi_star(phi, q)));
    }
    for (prim, p) in pkg_g.primitives().iter().zip(&sol_g.p) {
        let pc = exterior::algebra_map(&prim.c, &images, Side::G, nh);
        x = x.sub(&pc.to_mixed().mul_poly(p));
    }
    let (comps, _) = recursion(h, pkg_h, &x);
    let mut u = MixedElt::zero(Side::G, nh);
    for (_, c) in comps {
        u = u.add(&c);
    }
    let residual = curvature(h, &u).sub(&x);
    if !residual.is_zero() {
        return Err(Error::certificate("relative residual vanishes", format!("{} nonzero blades", residual.len())));
    }
    if let Some(a) = (0..ng).find(|a| !lie_relative(g, h, phi, *a, &u).is_zero()) {
        return Err(Error::certificate("u is g-invariant", format!("L(e_{}) u != 0", a + 1)));
    }
    Ok(RelativeSolution { u, x, phi: phi.clone(), g: g.clone(), h: h.clone() })
}

/// The diagonal embedding g → g ⊕ g.
pub fn diagonal_phi(n: usize) -> Mat {
    let mut m = Mat::zeros(2 * n, n);
    for a in 0..n {
        m.embed(a, a, &Mat::identity(1));
        m.embed(n + a, a, &Mat::identity(1));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blade::Blade;

    fn su2_f() -> MixedElt {
        let mut f = MixedElt::zero(Side::G, 3);
        f.add_term(Blade(0b110), Poly::var(0));
        f.add_term(Blade(0b101), Poly::var(1).neg());
        f.add_term(Blade(0b011), Poly::var(2));
        f
    }

    #[test]
    fn su2_solution_matches_closed_form() {
        let g = LieAlgebra::su2();
        let pkg = HodgePackage::build(&g).unwrap();
        let sol = solve_mc(&pkg).unwrap();
        assert_eq!(sol.f, su2_f());
        let p = Poly::var(0).pow(2).add(&Poly::var(1).pow(2)).add(&Poly::var(2).pow(2));
        assert_eq!(sol.p, vec![p]);
        assert!(sol.verify(&pkg).iter().all(|c| c.passed));
    }

    #[test]
    fn abelian_solution_vanishes() {
        let g = LieAlgebra::abelian(3).unwrap();
        let pkg = HodgePackage::build(&g).unwrap();
        let sol = solve_mc(&pkg).unwrap();
        assert!(sol.f.is_zero());
        assert_eq!(sol.p, (0..3).map(Poly::var).collect::<Vec<_>>());
    }

    #[test]
    fn neumann_series_matches_exp() {
        let g = LieAlgebra::su2();
        let pkg = HodgePackage::build(&g).unwrap();
        let sol = solve_mc(&pkg).unwrap();
        assert_eq!(exp_f_neumann(&pkg), sol.f.exp_nilpotent().unwrap());
    }

    #[test]
    fn subalgebra_e3_relative_solution() {
        let g = LieAlgebra::abelian(1).unwrap();
        let h = LieAlgebra::su2();
        let mut phi = Mat::zeros(3, 1);
        phi.embed(2, 0, &Mat::identity(1));
        let sol =
            solve_relative_mc(&g, &h, &phi, &HodgePackage::build(&g).unwrap(), &HodgePackage::build(&h).unwrap()).unwrap();
        let want = MixedElt::term(Side::G, 3, Blade(0b011), Poly::var(0));
        assert_eq!(sol.u, want);
    }

    #[test]
    fn zero_gauge_is_identity() {
        let g = LieAlgebra::su2();
        let f = su2_f();
        assert_eq!(gauge_transform(&g, &f, &MixedElt::zero(Side::G, 3)).unwrap(), f);
    }
}
