//! Matrix-backed g-differential spaces: built-in models, file-loaded models,
//! tensor products, restriction along homomorphisms and axiom validation.

use serde_json::{json, Value};

use crate::blade::Blade;
use crate::element::{ExtElt, MixedElt, Side};
use crate::error::{Error, Result};
use crate::graded::{GradedOp, GradedSpace, GradedSubspace};
use crate::hodge::HodgePackage;
use crate::koszul::KoszulAlgebra;
use crate::lie::{CheckResult, LieAlgebra};
use crate::linalg::{Mat, SparseVec};
use crate::poly::Monomial;
use crate::rational::{fmt_q, parse_q, Q};
use crate::spaces::{ExtSpace, MixedSpace};
use crate::weil;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GdsKind {
    /// Full g-operations d, ι(e_a), L(e_a).
    Differential,
    /// Only d and the ∧P-contractions ι(c_j); `lie` is empty.
    Koszul,
}

/// Action of the generators y^a, v^a of the Weil algebra.
#[derive(Clone, Debug)]
pub struct WeilAction {
    pub y: Vec<GradedOp>,
    pub v: Vec<GradedOp>,
}

#[derive(Clone, Debug)]
pub struct Gds {
    pub name: String,
    pub alg: LieAlgebra,
    pub kind: GdsKind,
    pub space: GradedSpace,
    pub d: GradedOp,
    pub iota: Vec<GradedOp>,
    pub lie: Vec<GradedOp>,
    /// Multiplication space⊗space → space.
    pub product: Option<GradedOp>,
    pub weil: Option<WeilAction>,
}

/// Invariant, horizontal and basic subspaces per degree.
#[derive(Clone, Debug)]
pub struct Subspaces {
    pub inv: GradedSubspace,
    pub hor: GradedSubspace,
    pub basic: GradedSubspace,
}

impl Gds {
    pub fn builtin(alg: &LieAlgebra, name: &str, cutoff: usize) -> Result<Gds> {
        match name {
            "wedge-dual" => Ok(Gds::wedge_dual(alg)),
            "trivial" => Ok(Gds::trivial(alg)),
            "weil" => Ok(Gds::weil(alg, cutoff)),
            "koszul" => {
                let pkg = HodgePackage::build(alg)?;
                Ok(Gds::koszul(alg, &pkg, cutoff))
            }
            _ => match name.strip_prefix("weil:") {
                Some(d) => {
                    let d: usize = d.parse().map_err(|_| Error::UnknownSpace(name.into()))?;
                    Ok(Gds::weil(alg, d))
                }
                None => Err(Error::UnknownSpace(name.into())),
            },
        }
    }

    /// ∧g* with d, ι(e_a) and the coadjoint L(e_a).
    pub fn wedge_dual(alg: &LieAlgebra) -> Gds {
        let e = ExtSpace::new(Side::GDual, alg.dim());
        let n = alg.dim();
        Gds {
            name: "wedge-dual".into(),
            alg: alg.clone(),
            kind: GdsKind::Differential,
            space: e.space().clone(),
            d: e.differential(alg),
            iota: (0..n).map(|a| e.iota(a)).collect(),
            lie: (0..n).map(|a| e.lie(alg, a)).collect(),
            product: Some(e.product()),
            weil: None,
        }
    }

    pub fn trivial(alg: &LieAlgebra) -> Gds {
        let s = GradedSpace::point();
        let n = alg.dim();
        let sq = s.tensor(&s);
        Gds {
            name: "trivial".into(),
            alg: alg.clone(),
            kind: GdsKind::Differential,
            d: GradedOp::zero(&s, &s, 1),
            iota: vec![GradedOp::zero(&s, &s, -1); n],
            lie: vec![GradedOp::zero(&s, &s, 0); n],
            product: Some(GradedOp::from_fn(&sq, &s, 0, |_, _| SparseVec::unit(0))),
            weil: None,
            space: s,
        }
    }

    /// Wg = Sg*⊗∧g* kept up to S-degree `cutoff`.
    pub fn weil(alg: &LieAlgebra, cutoff: usize) -> Gds {
        let w = MixedSpace::new(Side::GDual, alg.dim(), cutoff);
        let n = alg.dim();
        Gds {
            name: format!("weil:{cutoff}"),
            alg: alg.clone(),
            kind: GdsKind::Differential,
            space: w.space().clone(),
            d: w.op_from_fn(1, |x| weil::weil_differential(alg, x)),
            iota: (0..n).map(|a| w.op_from_fn(-1, |x| weil::iota_e(a, x))).collect(),
            lie: (0..n).map(|a| w.op_from_fn(0, |x| weil::lie_weil(alg, a, x))).collect(),
            product: None,
            weil: Some(WeilAction {
                y: (0..n).map(|a| w.op_from_fn(1, |x| weil::y_mul(a, x))).collect(),
                v: (0..n).map(|a| w.op_from_fn(2, |x| x.mul_var(a))).collect(),
            }),
        }
    }

    /// K(P) with its ∧P-contractions; p-monomials kept up to S-degree `cutoff`.
    pub fn koszul(alg: &LieAlgebra, pkg: &HodgePackage, cutoff: usize) -> Gds {
        let degs: Vec<usize> = pkg.primitives().iter().map(|p| p.degree).collect();
        let k = KoszulAlgebra::new(&degs, cutoff);
        Gds {
            name: "koszul".into(),
            alg: alg.clone(),
            kind: GdsKind::Koszul,
            space: k.space().clone(),
            d: k.differential(),
            iota: (0..k.rank()).map(|j| k.iota_c(j)).collect(),
            lie: Vec::new(),
            product: None,
            weil: None,
        }
    }

    pub fn n(&self) -> usize {
        self.alg.dim()
    }

    /// ι(e_{b1}∧…∧e_{bk}) = ι(e_{b1})∘…∘ι(e_{bk}).
    pub fn iota_blade(&self, b: Blade) -> GradedOp {
        let mut out = GradedOp::identity(&self.space);
        for i in b.indices().collect::<Vec<_>>().into_iter().rev() {
            out = self.iota[i].compose(&out);
        }
        out
    }

    /// ι(x) for a homogeneous x ∈ ∧g.
    pub fn iota_ext(&self, x: &ExtElt) -> GradedOp {
        let k = x.blade_sizes().first().copied().unwrap_or(0) as i64;
        let mut out = GradedOp::zero(&self.space, &self.space, -k);
        for (b, c) in x.terms() {
            out = out.add(&self.iota_blade(*b).scale(c));
        }
        out
    }

    fn weil_action(&self) -> Result<&WeilAction> {
        self.weil.as_ref().ok_or_else(|| Error::Mismatch(format!("`{}` carries no Weil-algebra action", self.name)))
    }

    /// P_hor = ι(e_1)y^1 ∘ … ∘ ι(e_n)y^n.
    pub fn horizontal_projection(&self) -> Result<GradedOp> {
        let w = self.weil_action()?;
        let mut out = GradedOp::identity(&self.space);
        for a in (0..self.n()).rev() {
            out = self.iota[a].compose(&w.y[a]).compose(&out);
        }
        Ok(out)
    }

    /// Action of a homogeneous polynomial in the v^a.
    pub fn act_poly(&self, p: &crate::poly::Poly) -> Result<GradedOp> {
        let deg = p.degree().unwrap_or(0) as i64;
        let mut out = GradedOp::zero(&self.space, &self.space, 2 * deg);
        for (m, c) in p.terms() {
            out = out.add(&self.act_monomial(m)?.scale(c));
        }
        Ok(out)
    }

    /// Fails unless every axiom check passes.
    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().into_iter().find(|c| !c.passed) {
            None => Ok(()),
            Some(c) => Err(Error::certificate(
                format!("`{}` axioms: {}", self.name, c.check),
                c.first_failure.unwrap_or_default(),
            )),
        }
    }

    /// Action of a monomial in the v^a.
    pub fn act_monomial(&self, m: &Monomial) -> Result<GradedOp> {
        let w = self.weil_action()?;
        let mut out = GradedOp::identity(&self.space);
        for a in 0..self.n() {
            for _ in 0..m.exponent(a) {
                out = w.v[a].compose(&out);
            }
        }
        Ok(out)
    }

    /// Left action of y^{b1}∧…∧y^{bk}.
    pub fn act_y_blade(&self, b: Blade) -> Result<GradedOp> {
        let w = self.weil_action()?;
        let mut out = GradedOp::identity(&self.space);
        for i in b.indices().collect::<Vec<_>>().into_iter().rev() {
            out = w.y[i].compose(&out);
        }
        Ok(out)
    }

    /// Action of a homogeneous Weil element of total degree `degree`.
    pub fn act_weil(&self, w: &MixedElt, degree: i64) -> Result<GradedOp> {
        w.ensure_side(Side::GDual, "Weil action")?;
        let mut out = GradedOp::zero(&self.space, &self.space, degree);
        for (m, b, c) in w.flat_terms() {
            if (2 * m.degree() + b.len()) as i64 != degree {
                return Err(Error::Mismatch("Weil element is not homogeneous".into()));
            }
            let op = self.act_monomial(&m)?.compose(&self.act_y_blade(b)?);
            out = out.add(&op.scale(&c));
        }
        Ok(out)
    }

    /// ι^N(x) for x ∈ Sg*⊗∧g of total degree `degree`: polynomials act
    /// through the Weil action, blades by contraction.
    pub fn iota_mixed(&self, x: &MixedElt, degree: i64) -> Result<GradedOp> {
        x.ensure_side(Side::G, "contraction")?;
        let mut out = GradedOp::zero(&self.space, &self.space, degree);
        for (m, b, c) in x.flat_terms() {
            if 2 * m.degree() as i64 - b.len() as i64 != degree {
                return Err(Error::Mismatch("contracting element is not homogeneous".into()));
            }
            let op = if m.degree() == 0 {
                self.iota_blade(b)
            } else {
                self.act_monomial(&m)?.compose(&self.iota_blade(b))
            };
            out = out.add(&op.scale(&c));
        }
        Ok(out)
    }

    pub fn validate(&self) -> Vec<CheckResult> {
        let mut out = Vec::new();
        let dd = self.d.compose(&self.d);
        out.push(CheckResult::from_option("d^2 = 0", dd.zero_check().describe()));
        match self.kind {
            GdsKind::Differential => self.validate_g(&mut out),
            GdsKind::Koszul => {
                let mut f1 = None;
                let mut f2 = None;
                for (j, i) in self.iota.iter().enumerate() {
                    if f1.is_none() {
                        f1 = GradedOp::commutator(&self.d, i).zero_check().describe().map(|s| format!("j={}: {s}", j + 1));
                    }
                    for (k, i2) in self.iota.iter().enumerate() {
                        if f2.is_none() {
                            f2 = GradedOp::commutator(i, i2)
                                .zero_check()
                                .describe()
                                .map(|s| format!("({},{}): {s}", j + 1, k + 1));
                        }
                    }
                }
                out.push(CheckResult::from_option("[d, iota(c_j)] = 0", f1));
                out.push(CheckResult::from_option("[iota(c_i), iota(c_j)] = 0", f2));
            }
        }
        if let Some(w) = &self.weil {
            self.validate_weil(w, &mut out);
        }
        if let Some(mu) = &self.product {
            self.validate_product(mu, &mut out);
        }
        out
    }

    fn lin_comb(&self, ops: &[GradedOp], terms: &[(usize, Q)], degree: i64) -> GradedOp {
        let mut acc = GradedOp::zero(&self.space, &self.space, degree);
        for (k, c) in terms {
            acc = acc.add(&ops[*k].scale(c));
        }
        acc
    }

    fn validate_g(&self, out: &mut Vec<CheckResult>) {
        let n = self.n();
        let mut fail: [Option<String>; 5] = Default::default();
        let note = |slot: &mut Option<String>, what: String, r: Option<String>| {
            if slot.is_none() {
                if let Some(r) = r {
                    *slot = Some(format!("{what}: {r}"));
                }
            }
        };
        for a in 0..n {
            let c = GradedOp::commutator(&self.d, &self.iota[a]);
            note(&mut fail[0], format!("a={}", a + 1), c.compare(&self.lie[a]).describe());
            let c = GradedOp::commutator(&self.lie[a], &self.d);
            note(&mut fail[1], format!("a={}", a + 1), c.zero_check().describe());
            for b in 0..n {
                let br = self.alg.bracket(a, b);
                let c = GradedOp::commutator(&self.lie[a], &self.iota[b]);
                note(&mut fail[2], format!("({},{})", a + 1, b + 1), c.compare(&self.lin_comb(&self.iota, br, -1)).describe());
                let c = GradedOp::commutator(&self.iota[a], &self.iota[b]);
                note(&mut fail[3], format!("({},{})", a + 1, b + 1), c.zero_check().describe());
                let c = GradedOp::commutator(&self.lie[a], &self.lie[b]);
                note(&mut fail[4], format!("({},{})", a + 1, b + 1), c.compare(&self.lin_comb(&self.lie, br, 0)).describe());
            }
        }
        let names = [
            "[d, iota(e_a)] = L(e_a)",
            "[L(e_a), d] = 0",
            "[L(e_a), iota(e_b)] = iota([e_a,e_b])",
            "[iota(e_a), iota(e_b)] = 0",
            "[L(e_a), L(e_b)] = L([e_a,e_b])",
        ];
        for (name, f) in names.iter().zip(fail) {
            out.push(CheckResult::from_option(name, f));
        }
    }

    fn validate_weil(&self, w: &WeilAction, out: &mut Vec<CheckResult>) {
        let n = self.n();
        let half = Q::new(1.into(), 2.into());
        let mut fail: [Option<String>; 4] = Default::default();
        let mut note = |i: usize, what: String, r: Option<String>| {
            if fail[i].is_none() {
                if let Some(r) = r {
                    fail[i] = Some(format!("{what}: {r}"));
                }
            }
        };
        for a in 0..n {
            // [d, y^a] = v^a + ½ Σ_b y^b coad(b, a), [d, v^a] = Σ_b y^b coad(b, a) acting on v
            let mut ry = w.v[a].clone();
            let mut rv = GradedOp::zero(&self.space, &self.space, 3);
            for b in 0..n {
                for (k, c) in self.alg.coadjoint(b, a) {
                    ry = ry.add(&w.y[b].compose(&w.y[*k]).scale(&(c * &half)));
                    rv = rv.add(&w.y[b].compose(&w.v[*k]).scale(c));
                }
            }
            note(0, format!("d,y^{}", a + 1), GradedOp::commutator(&self.d, &w.y[a]).compare(&ry).describe());
            note(0, format!("d,v^{}", a + 1), GradedOp::commutator(&self.d, &w.v[a]).compare(&rv).describe());
            for b in 0..n {
                let delta = if a == b { GradedOp::identity(&self.space) } else { GradedOp::zero(&self.space, &self.space, 0) };
                note(1, format!("iota_{},y^{}", b + 1, a + 1), GradedOp::commutator(&self.iota[b], &w.y[a]).compare(&delta).describe());
                note(1, format!("iota_{},v^{}", b + 1, a + 1), GradedOp::commutator(&self.iota[b], &w.v[a]).zero_check().describe());
                let co = self.alg.coadjoint(b, a);
                note(2, format!("L_{},y^{}", b + 1, a + 1), GradedOp::commutator(&self.lie[b], &w.y[a]).compare(&self.lin_comb(&w.y, co, 1)).describe());
                note(2, format!("L_{},v^{}", b + 1, a + 1), GradedOp::commutator(&self.lie[b], &w.v[a]).compare(&self.lin_comb(&w.v, co, 2)).describe());
                note(3, format!("y^{},y^{}", a + 1, b + 1), GradedOp::commutator(&w.y[a], &w.y[b]).zero_check().describe());
                note(3, format!("y^{},v^{}", a + 1, b + 1), GradedOp::commutator(&w.y[a], &w.v[b]).zero_check().describe());
                note(3, format!("v^{},v^{}", a + 1, b + 1), GradedOp::commutator(&w.v[a], &w.v[b]).zero_check().describe());
            }
        }
        let names = [
            "Weil action: [d, y^a], [d, v^a]",
            "Weil action: [iota(e_b), y^a] = delta, [iota(e_b), v^a] = 0",
            "Weil action: equivariance",
            "Weil action: generators supercommute",
        ];
        for (name, f) in names.iter().zip(fail) {
            out.push(CheckResult::from_option(name, f));
        }
    }

    fn validate_product(&self, mu: &GradedOp, out: &mut Vec<CheckResult>) {
        let id = GradedOp::identity(&self.space);
        let mut f = None;
        let mut ops: Vec<(String, &GradedOp)> = vec![("d".into(), &self.d)];
        for (a, op) in self.iota.iter().enumerate() {
            ops.push((format!("iota_{}", a + 1), op));
        }
        for (a, op) in self.lie.iter().enumerate() {
            ops.push((format!("L_{}", a + 1), op));
        }
        for (name, op) in ops {
            let lhs = op.compose(mu);
            let rhs = mu.compose(&GradedOp::tensor(op, &id).add(&GradedOp::tensor(&id, op)));
            if let Some(r) = lhs.compare(&rhs).describe() {
                f = Some(format!("{name}: {r}"));
                break;
            }
        }
        out.push(CheckResult::from_option("operators are derivations of the product", f));
    }

    pub fn subspaces(&self) -> Subspaces {
        let lie: Vec<&GradedOp> = self.lie.iter().collect();
        let iota: Vec<&GradedOp> = self.iota.iter().collect();
        let inv = GradedSubspace::joint_kernel(&self.space, &lie);
        let hor = GradedSubspace::joint_kernel(&self.space, &iota);
        let basic = inv.intersect(&hor);
        Subspaces { inv, hor, basic }
    }

    /// Closure of M_inv and M_basic under d.
    pub fn subspace_checks(&self, s: &Subspaces) -> Vec<CheckResult> {
        vec![
            CheckResult::from_option("d preserves M_inv", s.inv.preserved_by(&self.d).map(|k| format!("degree {k}"))),
            CheckResult::from_option("d preserves M_basic", s.basic.preserved_by(&self.d).map(|k| format!("degree {k}"))),
        ]
    }

    /// Diagonal tensor product over the same algebra; the Weil action, if
    /// any, is taken from the first factor that has one.
    pub fn tensor(a: &Gds, b: &Gds) -> Result<Gds> {
        if a.alg != b.alg || a.kind != GdsKind::Differential || b.kind != GdsKind::Differential {
            return Err(Error::Mismatch("tensor factors must be g-differential spaces over one algebra".into()));
        }
        let ia = GradedOp::identity(&a.space);
        let ib = GradedOp::identity(&b.space);
        let both = |x: &GradedOp, y: &GradedOp| GradedOp::tensor(x, &ib).add(&GradedOp::tensor(&ia, y));
        let n = a.n();
        let weil = match (&a.weil, &b.weil) {
            (Some(w), _) => Some(WeilAction {
                y: w.y.iter().map(|o| GradedOp::tensor(o, &ib)).collect(),
                v: w.v.iter().map(|o| GradedOp::tensor(o, &ib)).collect(),
            }),
            (None, Some(w)) => Some(WeilAction {
                y: w.y.iter().map(|o| GradedOp::tensor(&ia, o)).collect(),
                v: w.v.iter().map(|o| GradedOp::tensor(&ia, o)).collect(),
            }),
            (None, None) => None,
        };
        Ok(Gds {
            name: format!("{}⊗{}", a.name, b.name),
            alg: a.alg.clone(),
            kind: GdsKind::Differential,
            space: a.space.tensor(&b.space),
            d: both(&a.d, &b.d),
            iota: (0..n).map(|i| both(&a.iota[i], &b.iota[i])).collect(),
            lie: (0..n).map(|i| both(&a.lie[i], &b.lie[i])).collect(),
            product: None,
            weil,
        })
    }

    /// a⊗b as a space over g_a ⊕ g_b.
    pub fn external_tensor(a: &Gds, b: &Gds) -> Result<Gds> {
        let alg = LieAlgebra::direct_sum(&a.alg, &b.alg)?;
        let ia = GradedOp::identity(&a.space);
        let ib = GradedOp::identity(&b.space);
        let lift = |ops_a: &[GradedOp], ops_b: &[GradedOp]| -> Vec<GradedOp> {
            ops_a
                .iter()
                .map(|o| GradedOp::tensor(o, &ib))
                .chain(ops_b.iter().map(|o| GradedOp::tensor(&ia, o)))
                .collect()
        };
        Ok(Gds {
            name: format!("{}⊠{}", a.name, b.name),
            alg,
            kind: GdsKind::Differential,
            space: a.space.tensor(&b.space),
            d: GradedOp::tensor(&a.d, &ib).add(&GradedOp::tensor(&ia, &b.d)),
            iota: lift(&a.iota, &b.iota),
            lie: lift(&a.lie, &b.lie),
            product: None,
            weil: None,
        })
    }

    /// The same space viewed over g through φ: g → h (`phi` is n_h × n_g,
    /// column a holding φ(e_a)).
    pub fn restrict_along(&self, g: &LieAlgebra, phi: &Mat) -> Result<Gds> {
        if phi.nrows() != self.n() || phi.ncols() != g.dim() {
            return Err(Error::Mismatch("homomorphism matrix has the wrong shape".into()));
        }
        let pull = |ops: &[GradedOp], degree: i64| -> Vec<GradedOp> {
            (0..g.dim())
                .map(|a| {
                    let terms: Vec<(usize, Q)> = (0..self.n()).map(|b| (b, phi.get(b, a))).collect();
                    self.lin_comb(ops, &terms, degree)
                })
                .collect()
        };
        Ok(Gds {
            name: format!("{}|{}", self.name, g.name()),
            alg: g.clone(),
            kind: self.kind,
            space: self.space.clone(),
            d: self.d.clone(),
            iota: pull(&self.iota, -1),
            lie: pull(&self.lie, 0),
            product: self.product.clone(),
            weil: None,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut grading = Vec::new();
        for (k, d) in self.space.dims().iter().enumerate() {
            grading.extend(std::iter::repeat_n(k, *d));
        }
        let mut v = json!({
            "name": self.name,
            "algebra": self.alg.to_json(),
            "grading": grading,
            "complete": self.space.is_complete(),
            "d": op_to_json(&self.d),
            "iota": self.iota.iter().map(op_to_json).collect::<Vec<_>>(),
            "L": self.lie.iter().map(op_to_json).collect::<Vec<_>>(),
        });
        if let Some(mu) = &self.product {
            v["product"] = op_to_json(mu);
        }
        if let Some(w) = &self.weil {
            v["weil_action"] = json!({
                "y": w.y.iter().map(op_to_json).collect::<Vec<_>>(),
                "v": w.v.iter().map(op_to_json).collect::<Vec<_>>(),
            });
        }
        v
    }

    /// Loads a space from JSON. `algebra` is either a built-in name, a path,
    /// or an inline algebra object.
    pub fn from_json(v: &Value, path: &str) -> Result<Gds> {
        let schema = |loc: &str, msg: &str| Error::Schema { path: format!("{path}:{loc}"), msg: msg.into() };
        let alg = match v.get("algebra") {
            Some(Value::String(s)) => LieAlgebra::resolve(s)?,
            Some(obj @ Value::Object(_)) => LieAlgebra::from_json(obj, &format!("{path}:algebra"))?,
            _ => return Err(schema("algebra", "missing algebra")),
        };
        let grading = v
            .get("grading")
            .and_then(|g| g.as_array())
            .ok_or_else(|| schema("grading", "expected an array of degrees"))?;
        let mut dims: Vec<usize> = Vec::new();
        let mut last = 0;
        for (i, g) in grading.iter().enumerate() {
            let k = g.as_u64().ok_or_else(|| schema(&format!("grading[{i}]"), "degree must be a nonnegative integer"))? as usize;
            if k < last {
                return Err(schema(&format!("grading[{i}]"), "basis must be ordered by degree"));
            }
            last = k;
            if dims.len() <= k {
                dims.resize(k + 1, 0);
            }
            dims[k] += 1;
        }
        if dims.is_empty() {
            dims.push(0);
        }
        let complete = v.get("complete").and_then(|c| c.as_bool()).unwrap_or(true);
        let space = GradedSpace::new(dims, complete);
        let n = alg.dim();
        let ops = |key: &str, degree: i64| -> Result<Vec<GradedOp>> {
            let arr = v.get(key).and_then(|x| x.as_array()).ok_or_else(|| schema(key, "expected an array of operators"))?;
            if arr.len() != n {
                return Err(schema(key, &format!("expected {n} operators")));
            }
            arr.iter()
                .enumerate()
                .map(|(a, o)| op_from_json(o, &space, &space, degree, &format!("{path}:{key}[{a}]")))
                .collect()
        };
        let d = op_from_json(v.get("d").ok_or_else(|| schema("d", "missing"))?, &space, &space, 1, &format!("{path}:d"))?;
        let iota = ops("iota", -1)?;
        let lie = ops("L", 0)?;
        let product = match v.get("product") {
            Some(p) => Some(op_from_json(p, &space.tensor(&space), &space, 0, &format!("{path}:product"))?),
            None => None,
        };
        let weil = match v.get("weil_action") {
            Some(w) => {
                let part = |key: &str, degree: i64| -> Result<Vec<GradedOp>> {
                    let arr = w.get(key).and_then(|x| x.as_array()).ok_or_else(|| schema(&format!("weil_action.{key}"), "expected an array"))?;
                    if arr.len() != n {
                        return Err(schema(&format!("weil_action.{key}"), &format!("expected {n} operators")));
                    }
                    arr.iter()
                        .enumerate()
                        .map(|(a, o)| op_from_json(o, &space, &space, degree, &format!("{path}:weil_action.{key}[{a}]")))
                        .collect()
                };
                Some(WeilAction { y: part("y", 1)?, v: part("v", 2)? })
            }
            None => None,
        };
        let name = v.get("name").and_then(|x| x.as_str()).unwrap_or(path).to_string();
        Ok(Gds { name, alg, kind: GdsKind::Differential, space, d, iota, lie, product, weil })
    }

    /// A built-in name or a JSON file path.
    pub fn resolve(alg: &LieAlgebra, spec: &str, cutoff: usize) -> Result<Gds> {
        let p = std::path::Path::new(spec);
        if p.is_file() {
            let text = std::fs::read_to_string(p)?;
            let v: Value = serde_json::from_str(&text)?;
            let m = Gds::from_json(&v, spec)?;
            if m.alg.dim() != alg.dim() {
                return Err(Error::Mismatch(format!("space `{spec}` is over an algebra of another dimension")));
            }
            Ok(m)
        } else {
            Gds::builtin(alg, spec, cutoff)
        }
    }
}

/// Per-source-degree blocks, each a list of rows of rational strings; null
/// marks a block whose target lies beyond a truncation.
pub fn op_to_json(op: &GradedOp) -> Value {
    Value::Array(
        op.blocks()
            .iter()
            .map(|b| match b {
                None => Value::Null,
                Some(m) => Value::Array(
                    m.to_dense().iter().map(|r| Value::Array(r.iter().map(|x| Value::String(fmt_q(x))).collect())).collect(),
                ),
            })
            .collect(),
    )
}

pub fn op_from_json(v: &Value, src: &GradedSpace, tgt: &GradedSpace, degree: i64, path: &str) -> Result<GradedOp> {
    let schema = |loc: String, msg: String| Error::Schema { path: format!("{path}{loc}"), msg };
    let arr = v.as_array().ok_or_else(|| schema(String::new(), "expected an array of blocks".into()))?;
    if arr.len() != src.top() + 1 {
        return Err(schema(String::new(), format!("expected {} blocks, found {}", src.top() + 1, arr.len())));
    }
    let mut blocks = Vec::with_capacity(arr.len());
    for (k, b) in arr.iter().enumerate() {
        let rows = tgt.dim(k as i64 + degree);
        let cols = src.dims()[k];
        match (b, rows) {
            (Value::Null, None) => blocks.push(None),
            (Value::Null, Some(_)) => return Err(schema(format!("[{k}]"), "block may only be null beyond a truncation".into())),
            (_, None) => return Err(schema(format!("[{k}]"), "block targets an unknown degree; use null".into())),
            (b, Some(r)) => {
                let rs = b.as_array().ok_or_else(|| schema(format!("[{k}]"), "expected a matrix".into()))?;
                if rs.len() != r {
                    return Err(schema(format!("[{k}]"), format!("expected {r} rows, found {}", rs.len())));
                }
                let mut dense = Vec::with_capacity(r);
                for (i, row) in rs.iter().enumerate() {
                    let xs = row.as_array().ok_or_else(|| schema(format!("[{k}][{i}]"), "expected a row".into()))?;
                    if xs.len() != cols {
                        return Err(schema(format!("[{k}][{i}]"), format!("expected {cols} entries, found {}", xs.len())));
                    }
                    let parsed = xs
                        .iter()
                        .enumerate()
                        .map(|(j, x)| match x {
                            Value::String(s) => parse_q(s).map_err(|e| schema(format!("[{k}][{i}][{j}]"), e.to_string())),
                            Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap_or(0).into())),
                            _ => Err(schema(format!("[{k}][{i}][{j}]"), "expected a rational string".into())),
                        })
                        .collect::<Result<Vec<Q>>>()?;
                    dense.push(parsed);
                }
                blocks.push(Some(Mat::from_dense(r, cols, &dense)));
            }
        }
    }
    Ok(GradedOp::from_blocks(src, tgt, degree, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pass(m: &Gds) {
        for c in m.validate() {
            assert!(c.passed, "{}: {:?}", c.check, c.first_failure);
        }
    }

    #[test]
    fn builtins_validate() {
        let g = LieAlgebra::su2();
        let w = Gds::wedge_dual(&g);
        assert_eq!(w.space.total(), 8);
        all_pass(&w);
        all_pass(&Gds::trivial(&g));
        all_pass(&Gds::weil(&g, 2));
        all_pass(&Gds::builtin(&g, "koszul", 3).unwrap());
        assert!(Gds::builtin(&g, "nonsense", 3).is_err());
    }

    #[test]
    fn subspace_dims() {
        let g = LieAlgebra::su2();
        let w = Gds::wedge_dual(&g);
        let s = w.subspaces();
        assert_eq!(s.inv.dims(), vec![1, 0, 0, 1]);
        let weil = Gds::weil(&g, 3);
        let s = weil.subspaces();
        // basic part of Wg is (Sg*)_inv: 1 in degree 0 and v·v in degree 4
        assert_eq!(&s.basic.dims()[..7], &[1, 0, 0, 0, 1, 0, 0]);
        assert!(weil.subspace_checks(&s).iter().all(|c| c.passed));
    }

    #[test]
    fn tensor_with_trivial_and_json_roundtrip() {
        let g = LieAlgebra::su2();
        let w = Gds::wedge_dual(&g);
        let t = Gds::tensor(&Gds::trivial(&g), &w).unwrap();
        assert_eq!(t.space, w.space);
        assert_eq!(t.d, w.d);
        let back = Gds::from_json(&w.to_json(), "mem").unwrap();
        assert_eq!(back.d, w.d);
        assert_eq!(back.product, w.product);
        all_pass(&Gds::tensor(&Gds::weil(&g, 2), &w).unwrap());
    }

    #[test]
    fn corrupted_lie_derivative_is_caught() {
        let g = LieAlgebra::su2();
        let w = Gds::wedge_dual(&g);
        let mut v = w.to_json();
        v["L"][0][1][0][0] = json!("5");
        let bad = Gds::from_json(&v, "mem").unwrap();
        let report = bad.validate();
        assert!(report.iter().any(|c| !c.passed && c.check == "[L(e_a), d] = 0"));
    }
}
