//! The Cartan model (Sg*⊗M)_inv, the small model (Sg*)_inv⊗M_inv, the twist
//! Φ = e^{ι(f)} between them and the homotopy inverse built from a Green
//! operator.

use serde_json::json;

use crate::element::{ExtElt, MixedElt};
use crate::error::{Error, Result};
use crate::gds::Gds;
use crate::graded::{GradedOp, GradedSpace, GradedSubspace};
use crate::hodge::{green_operator, projection_along, HodgePackage};
use crate::linalg::Subspace;
use crate::mc::McSolution;
use crate::poly::Poly;
use crate::rational::Q;
use crate::spaces::SymSpace;

use super::{known_prefix, Certificate, Complex, Report};

/// Sg*⊗M with the operators used by both Cartan models.
#[derive(Clone, Debug)]
pub struct CartanAmbient {
    pub m: Gds,
    pub sym: SymSpace,
    pub space: GradedSpace,
    id_s: GradedOp,
    id_m: GradedOp,
}

impl CartanAmbient {
    pub fn new(m: &Gds, cutoff: usize) -> Self {
        let sym = SymSpace::new(m.n(), cutoff);
        let space = sym.space().tensor(&m.space);
        let id_s = GradedOp::identity(sym.space());
        let id_m = GradedOp::identity(&m.space);
        CartanAmbient { m: m.clone(), sym, space, id_s, id_m }
    }

    pub fn lift_m(&self, op: &GradedOp) -> GradedOp {
        GradedOp::tensor(&self.id_s, op)
    }

    pub fn lift_s(&self, op: &GradedOp) -> GradedOp {
        GradedOp::tensor(op, &self.id_m)
    }

    /// Multiplication by a homogeneous polynomial on the S factor.
    pub fn mult(&self, p: &Poly) -> GradedOp {
        self.lift_s(&self.sym.mult(p))
    }

    /// Diagonal L(e_a) = L^S(e_a)⊗1 + 1⊗L^M(e_a).
    pub fn lie(&self, a: usize) -> GradedOp {
        self.lift_s(&self.sym.lie(&self.m.alg, a)).add(&self.lift_m(&self.m.lie[a]))
    }

    pub fn invariants(&self) -> GradedSubspace {
        let ops: Vec<GradedOp> = (0..self.m.n()).map(|a| self.lie(a)).collect();
        let refs: Vec<&GradedOp> = ops.iter().collect();
        GradedSubspace::joint_kernel(&self.space, &refs)
    }

    pub fn sym_invariants(&self) -> GradedSubspace {
        let ops: Vec<GradedOp> = (0..self.m.n()).map(|a| self.sym.lie(&self.m.alg, a)).collect();
        let refs: Vec<&GradedOp> = ops.iter().collect();
        GradedSubspace::joint_kernel(self.sym.space(), &refs)
    }

    /// (Sg*)_inv⊗M_inv inside Sg*⊗M.
    pub fn small_subspace(&self) -> GradedSubspace {
        GradedSubspace::tensor(&self.sym_invariants(), &self.m.subspaces().inv)
    }

    /// d_g = 1⊗d − Σ_a v^a⊗ι(e_a).
    pub fn d_big(&self) -> GradedOp {
        let mut d = self.lift_m(&self.m.d);
        for a in 0..self.m.n() {
            d = d.sub(&GradedOp::tensor(&self.sym.mult_var(a), &self.m.iota[a]));
        }
        d
    }

    /// d̃_g = 1⊗d − Σ_j p^j⊗ι(c_j).
    pub fn d_small(&self, p: &[Poly], c: &[ExtElt]) -> GradedOp {
        let mut d = self.lift_m(&self.m.d);
        for (pj, cj) in p.iter().zip(c) {
            d = d.sub(&GradedOp::tensor(&self.sym.mult(pj), &self.m.iota_ext(cj)));
        }
        d
    }

    /// ι(x) = Σ P⊗ι^M(B) for x = Σ P⊗B of total degree `degree`.
    pub fn iota_mixed(&self, x: &MixedElt, degree: i64) -> Result<GradedOp> {
        let mut out = GradedOp::zero(&self.space, &self.space, degree);
        for (m, b, c) in x.flat_terms() {
            if 2 * m.degree() as i64 - b.len() as i64 != degree {
                return Err(Error::Mismatch("contracting element is not homogeneous".into()));
            }
            let op = GradedOp::tensor(&self.sym.mult(&Poly::term(m, Q::from_integer(1.into()))), &self.m.iota_blade(b));
            out = out.add(&op.scale(&c));
        }
        Ok(out)
    }

    /// e^{ι(f)} = ι(e^f) for the degree-0 solution f.
    pub fn exp_iota(&self, f: &MixedElt) -> Result<GradedOp> {
        self.iota_mixed(&f.exp_nilpotent()?, 0)
    }

    /// Multiplication by each p^j, restricted to a subspace stable under it.
    fn p_action(&self, p: &[Poly], sub: &GradedSubspace) -> Result<Vec<GradedOp>> {
        p.iter()
            .enumerate()
            .map(|(j, pj)| {
                self.mult(pj)
                    .restrict(sub, sub)
                    .map_err(|k| Error::certificate("p-action preserves the model", format!("p^{} in degree {k}", j + 1)))
            })
            .collect()
    }
}

fn primitives(pkg: &HodgePackage) -> Vec<ExtElt> {
    pkg.primitives().iter().map(|p| p.c.clone()).collect()
}

pub fn big_cartan(m: &Gds, cutoff: usize) -> Result<Complex> {
    let amb = CartanAmbient::new(m, cutoff);
    Complex::restrict("Cartan model", amb.invariants(), &amb.d_big())
}

/// The small model; d̃² = 0 is derived, so a failure aborts.
pub fn small_cartan(m: &Gds, mc: &McSolution, pkg: &HodgePackage, cutoff: usize) -> Result<Complex> {
    let amb = CartanAmbient::new(m, cutoff);
    small_in(&amb, mc, pkg)
}

fn small_in(amb: &CartanAmbient, mc: &McSolution, pkg: &HodgePackage) -> Result<Complex> {
    let c = Complex::restrict("small Cartan model", amb.small_subspace(), &amb.d_small(&mc.p, &primitives(pkg)))?;
    if let Some(r) = c.d_squared().describe() {
        return Err(Error::certificate("small model differential squares to zero", r));
    }
    Ok(c)
}

/// Φ with both complexes, in subspace coordinates.
pub struct Twist {
    pub ambient: CartanAmbient,
    pub big: Complex,
    pub small: Complex,
    pub phi: GradedOp,
    pub report: Report,
}

/// Rank of the map induced on cohomology by `phi`: small → big, per degree.
pub fn induced_ranks(phi: &GradedOp, small: &Complex, big: &Complex) -> Vec<Option<usize>> {
    let top = small.d.src().top().min(big.d.src().top());
    (0..=top)
        .map(|k| {
            let ds = small.d.block(k as i64)?;
            big.d.block(k as i64)?;
            let z = ds.kernel();
            let pm = phi.block(k as i64)?;
            let bdim = big.sub.parts[k].dim();
            let bsub = if k == 0 {
                Subspace::zero(bdim)
            } else {
                big.d.block(k as i64 - 1)?.image()
            };
            let images = Subspace::from_spanning(bdim, z.iter().map(|v| pm.apply(v)));
            Some(images.sum(&bsub).dim() - bsub.dim())
        })
        .collect()
}

pub fn twist_map(m: &Gds, mc: &McSolution, pkg: &HodgePackage, cutoff: usize) -> Result<Twist> {
    let amb = CartanAmbient::new(m, cutoff);
    let mut report = Report::new("twist", m.alg.name());
    let big = Complex::restrict("Cartan model", amb.invariants(), &amb.d_big())?;
    let small = small_in(&amb, mc, pkg)?;
    report.push(Certificate::from_comparison("d_g^2 = 0", &big.d_squared()));
    report.push(Certificate::from_comparison("small d^2 = 0", &small.d_squared()));
    let e = amb.exp_iota(&mc.f)?;
    let phi = e
        .restrict(&small.sub, &big.sub)
        .map_err(|k| Error::certificate("Phi lands in invariants", format!("degree {k}")))?;
    report.push(Certificate::from_comparison("d_g Phi = Phi d~_g", &big.d.compose(&phi).compare(&phi.compose(&small.d))));
    let ps = amb.p_action(&mc.p, &small.sub)?;
    let pb = amb.p_action(&mc.p, &big.sub)?;
    let mut fail = None;
    let mut checked = Vec::new();
    for (j, (a, b)) in ps.iter().zip(&pb).enumerate() {
        let c = b.compose(&phi).compare(&phi.compose(a));
        checked = c.checked.clone();
        if fail.is_none() {
            fail = c.describe().map(|r| format!("p^{}: {r}", j + 1));
        }
    }
    report.push(Certificate::from_degrees("Phi is (Sg*)_inv-linear", &checked, fail));
    let hs = small.cohomology();
    let hb = big.cohomology();
    let ranks = induced_ranks(&phi, &small, &big);
    let mut degs = Vec::new();
    let mut fail = None;
    for k in 0..ranks.len() {
        if let (Some(r), Some(a), Some(b)) = (ranks[k], hs[k], hb[k]) {
            degs.push(k);
            if !(r == a && a == b) && fail.is_none() {
                fail = Some(format!("degree {k}: rank {r}, small {a}, big {b}"));
            }
        }
    }
    report.push(Certificate::from_degrees("Phi induces an isomorphism on cohomology", &degs, fail));
    report.data = json!({
        "module": m.name,
        "cutoff": amb.sym.cutoff(),
        "small_dims": small.dims(),
        "big_dims": big.dims(),
        "small_cohomology": known_prefix(&hs),
        "big_cohomology": known_prefix(&hb),
    });
    Ok(Twist { ambient: amb, big, small, phi, report })
}

pub struct HomotopyInverse {
    /// Projection onto ker 𝓛 along im 𝓛, on invariants.
    pub pi: GradedOp,
    pub h: GradedOp,
    pub report: Report,
}

/// h = −Σ_a L^S(e_a)⊗ι(B♯e^a), 𝓛 = [d', h] with d' = e^{−ι(f)} d_g e^{ι(f)},
/// Π the projection onto ker 𝓛 along im 𝓛 and H = h𝒢.
pub fn homotopy_inverse(m: &Gds, mc: &McSolution, cutoff: usize) -> Result<HomotopyInverse> {
    let amb = CartanAmbient::new(m, cutoff);
    let g = &m.alg;
    let n = g.dim();
    let mut report = Report::new("homotopy_inverse", g.name());
    let inv = amb.invariants();
    let small = amb.small_subspace();
    let e_plus = amb.exp_iota(&mc.f)?;
    let e_minus = amb.exp_iota(&mc.f.neg())?;
    let d_prime = e_minus.compose(&amb.d_big()).compose(&e_plus);
    let mut h_amb = GradedOp::zero(&amb.space, &amb.space, -1);
    for a in 0..n {
        let mut sharp = GradedOp::zero(&m.space, &m.space, -1);
        for (b, c) in g.form_inv()[a].iter().enumerate() {
            sharp = sharp.add(&m.iota[b].scale(c));
        }
        h_amb = h_amb.sub(&GradedOp::tensor(&amb.sym.lie(g, a), &sharp));
    }
    let restrict = |op: &GradedOp, what: &str| {
        op.restrict(&inv, &inv).map_err(|k| Error::certificate(format!("{what} preserves invariants"), format!("degree {k}")))
    };
    let dp = restrict(&d_prime, "d'")?;
    let h = restrict(&h_amb, "h")?;
    let lap = GradedOp::commutator(&dp, &h);
    let space = inv.space();
    let mut pi_blocks = Vec::new();
    let mut green_blocks = Vec::new();
    let mut split_fail = None;
    let mut ker_fail = None;
    let mut checked = Vec::new();
    for k in 0..=space.top() {
        let Some(l) = lap.block(k as i64) else {
            pi_blocks.push(None);
            green_blocks.push(None);
            continue;
        };
        checked.push(k);
        let ker = Subspace::kernel_of(l);
        let im = l.image();
        let pi = projection_along(&ker, &im);
        match pi {
            Some(p) => {
                let gr = green_operator(l, &p).ok_or_else(|| Error::certificate("Green operator", format!("degree {k}")))?;
                green_blocks.push(Some(gr));
                pi_blocks.push(Some(p));
            }
            None => {
                split_fail.get_or_insert(format!("degree {k}: kernel and image are not complementary"));
                pi_blocks.push(None);
                green_blocks.push(None);
                continue;
            }
        }
        // the small model, written in invariant coordinates
        let coords: Vec<_> = small.parts[k].basis().iter().map(|v| inv.parts[k].coords(v)).collect();
        match coords.into_iter().collect::<Option<Vec<_>>>() {
            Some(cs) => {
                let sm = Subspace::from_spanning(inv.parts[k].dim(), cs);
                if !sm.same_as(&ker) && ker_fail.is_none() {
                    ker_fail = Some(format!("degree {k}: dim ker = {}, small model dim = {}", ker.dim(), sm.dim()));
                }
            }
            None => {
                ker_fail.get_or_insert(format!("degree {k}: small model not invariant"));
            }
        }
    }
    report.push(Certificate::from_degrees("[d', h] splits as kernel plus image", &checked, split_fail));
    report.push(Certificate::from_degrees("ker [d', h] is the small model", &checked, ker_fail));
    let pi = GradedOp::from_blocks(&space, &space, 0, pi_blocks);
    let green = GradedOp::from_blocks(&space, &space, 0, green_blocks);
    let hh = h.compose(&green);
    let id = GradedOp::identity(&space);
    let lhs = GradedOp::commutator(&dp, &hh);
    report.push(Certificate::from_comparison("[d', H] = I - Pi", &lhs.compare(&id.sub(&pi))));
    report.push(Certificate::from_comparison("Pi is a cochain map", &GradedOp::commutator(&dp, &pi).zero_check()));
    let ps = amb.p_action(&mc.p, &inv)?;
    let mut fail = None;
    let mut degs = Vec::new();
    for (j, p) in ps.iter().enumerate() {
        let c1 = GradedOp::commutator(p, &pi).zero_check();
        let c2 = GradedOp::commutator(p, &hh).zero_check();
        degs = c2.checked.clone();
        if fail.is_none() {
            fail = c1.describe().or(c2.describe()).map(|r| format!("p^{}: {r}", j + 1));
        }
    }
    report.push(Certificate::from_degrees("Pi and H commute with (Sg*)_inv", &degs, fail));
    report.data = json!({ "module": m.name, "cutoff": cutoff, "invariant_dims": inv.dims() });
    Ok(HomotopyInverse { pi, h: hh, report })
}

/// Matrices of both models in ambient coordinates; equal when the models coincide.
pub fn models_coincide(m: &Gds, mc: &McSolution, pkg: &HodgePackage, cutoff: usize) -> Result<bool> {
    let amb = CartanAmbient::new(m, cutoff);
    let big = Complex::restrict("Cartan model", amb.invariants(), &amb.d_big())?;
    let small = small_in(&amb, mc, pkg)?;
    Ok(big.sub.same_as(&small.sub) && big.d == small.d)
}

/// Cohomology of the big and/or small model.
pub fn cohomology_report(m: &Gds, mc: &McSolution, pkg: &HodgePackage, cutoff: usize, small: bool, big: bool) -> Result<Report> {
    let amb = CartanAmbient::new(m, cutoff);
    let mut report = Report::new("cohomology", m.alg.name());
    let mut data = serde_json::Map::new();
    data.insert("module".into(), json!(m.name));
    data.insert("cutoff".into(), json!(cutoff));
    if big {
        let c = Complex::restrict("Cartan model", amb.invariants(), &amb.d_big())?;
        report.push(Certificate::from_comparison("d_g^2 = 0", &c.d_squared()));
        data.insert("big".into(), json!({"dims": c.dims(), "cohomology": known_prefix(&c.cohomology())}));
    }
    if small {
        let c = small_in(&amb, mc, pkg)?;
        report.push(Certificate::from_comparison("small d^2 = 0", &c.d_squared()));
        data.insert("small".into(), json!({"dims": c.dims(), "cohomology": known_prefix(&c.cohomology())}));
    }
    report.data = serde_json::Value::Object(data);
    Ok(report)
}

/// Plain d-cohomology of the space itself.
pub fn space_cohomology(m: &Gds) -> Vec<Option<usize>> {
    crate::graded::cohomology_dims(&m.d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::mc::solve_mc;

    fn setup(g: &LieAlgebra) -> (HodgePackage, McSolution) {
        let pkg = HodgePackage::build(g).unwrap();
        let mc = solve_mc(&pkg).unwrap();
        (pkg, mc)
    }

    #[test]
    fn abelian_models_coincide() {
        let g = LieAlgebra::abelian(2).unwrap();
        let (pkg, mc) = setup(&g);
        assert!(models_coincide(&Gds::wedge_dual(&g), &mc, &pkg, 3).unwrap());
    }

    #[test]
    fn trivial_module_cohomology_is_invariant_polynomials() {
        let g = LieAlgebra::su2();
        let (pkg, mc) = setup(&g);
        let c = big_cartan(&Gds::trivial(&g), 4).unwrap();
        assert_eq!(&c.dims()[..9], &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
        let s = small_cartan(&Gds::trivial(&g), &mc, &pkg, 4).unwrap();
        assert_eq!(s.dims(), c.dims());
    }

    #[test]
    fn su2_twist_small_cutoff() {
        let g = LieAlgebra::su2();
        let (pkg, mc) = setup(&g);
        let t = twist_map(&Gds::wedge_dual(&g), &mc, &pkg, 3).unwrap();
        for c in &t.report.certificates {
            assert!(c.passed(), "{c:?}");
        }
        let h = homotopy_inverse(&Gds::wedge_dual(&g), &mc, 3).unwrap();
        for c in &h.report.certificates {
            assert!(c.passed(), "{c:?}");
        }
    }
}
