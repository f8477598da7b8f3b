//! Lie algebras given by rational structure constants and an invariant form.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rational::{fmt_q, parse_q, q, Q};

/// `[e_a, e_b] = Σ_k c[a][b][k] e_k`, all indices 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    basis: Vec<String>,
    c: Vec<Vec<Vec<Q>>>,
    b: Vec<Vec<Q>>,
    b_inv: Vec<Vec<Q>>,
    bracket: Vec<Vec<Vec<(usize, Q)>>>,
    coad: Vec<Vec<Vec<(usize, Q)>>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn pass(check: &str) -> Self {
        CheckResult { check: check.into(), passed: true, first_failure: None }
    }
    pub fn fail(check: &str, detail: String) -> Self {
        CheckResult { check: check.into(), passed: false, first_failure: Some(detail) }
    }
    pub fn from_option(check: &str, failure: Option<String>) -> Self {
        match failure {
            None => Self::pass(check),
            Some(d) => Self::fail(check, d),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub algebra: String,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl LieAlgebra {
    /// Builds an algebra without validating it. `b` must be invertible.
    pub fn new(name: &str, basis: Vec<String>, c: Vec<Vec<Vec<Q>>>, b: Vec<Vec<Q>>) -> Result<Self> {
        let n = basis.len();
        if n == 0 || n > 63 {
            return Err(Error::InvalidAlgebra(format!("dimension {n} not in 1..=63")));
        }
        let shape_ok = c.len() == n
            && c.iter().all(|r| r.len() == n && r.iter().all(|s| s.len() == n))
            && b.len() == n
            && b.iter().all(|r| r.len() == n);
        if !shape_ok {
            return Err(Error::InvalidAlgebra("structure constants or form have the wrong shape".into()));
        }
        let b_inv = Mat::from_dense(n, n, &b)
            .inverse()
            .ok_or_else(|| Error::InvalidAlgebra("B is not invertible".into()))?
            .to_dense();
        let mut bracket = vec![vec![Vec::new(); n]; n];
        let mut coad = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for i in 0..n {
                for k in 0..n {
                    if !c[a][i][k].is_zero() {
                        bracket[a][i].push((k, c[a][i][k].clone()));
                    }
                    // (L(e_a) e^i)(e_k) = -e^i([e_a, e_k])
                    if !c[a][k][i].is_zero() {
                        coad[a][i].push((k, -c[a][k][i].clone()));
                    }
                }
            }
        }
        Ok(LieAlgebra { name: name.into(), basis, c, b, b_inv, bracket, coad })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn structure_constant(&self, a: usize, b: usize, k: usize) -> &Q {
        &self.c[a][b][k]
    }

    pub fn form(&self) -> &[Vec<Q>] {
        &self.b
    }

    pub fn form_inv(&self) -> &[Vec<Q>] {
        &self.b_inv
    }

    /// Nonzero terms of `[e_a, e_i]`.
    pub fn bracket(&self, a: usize, i: usize) -> &[(usize, Q)] {
        &self.bracket[a][i]
    }

    /// Nonzero terms of the coadjoint action `L(e_a) e^i`.
    pub fn coadjoint(&self, a: usize, i: usize) -> &[(usize, Q)] {
        &self.coad[a][i]
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().all(|r| r.iter().all(|t| t.is_empty()))
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket_vec(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                let s = &x[a] * &y[b];
                for (k, c) in &self.bracket[a][b] {
                    out[*k] += &s * c;
                }
            }
        }
        out
    }

    /// Matrix of `ad(e_a)` in the basis.
    pub fn ad(&self, a: usize) -> Mat {
        let n = self.dim();
        let mut data = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for (k, c) in &self.bracket[a][i] {
                data[*k][i] = c.clone();
            }
        }
        Mat::from_dense(n, n, &data)
    }

    pub fn killing_form(&self) -> Vec<Vec<Q>> {
        let n = self.dim();
        let ads: Vec<Mat> = (0..n).map(|a| self.ad(a)).collect();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let p = ads[a].mul(&ads[b]);
                        (0..n).map(|i| p.get(i, i)).fold(Q::zero(), |s, x| s + x)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let c = &self.c;
        let idx = |t: &[usize]| t.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");

        let mut antisym = None;
        'a: for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    if c[a][b][k] != -c[b][a][k].clone() {
                        antisym = Some(format!("({})", idx(&[a, b, k])));
                        break 'a;
                    }
                }
            }
        }

        let mut jacobi = None;
        'j: for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    // [e_a,[e_b,e_d]] + [e_b,[e_d,e_a]] + [e_d,[e_a,e_b]]
                    let mut acc = vec![Q::zero(); n];
                    for (x, y, z) in [(a, b, d), (b, d, a), (d, a, b)] {
                        for (m, cm) in &self.bracket[y][z] {
                            for (k, ck) in &self.bracket[x][*m] {
                                acc[*k] += cm * ck;
                            }
                        }
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        jacobi = Some(format!("({})", idx(&[a, b, d])));
                        break 'j;
                    }
                }
            }
        }

        let mut sym = None;
        'b: for a in 0..n {
            for b in 0..n {
                if self.b[a][b] != self.b[b][a] {
                    sym = Some(format!("({})", idx(&[a, b])));
                    break 'b;
                }
            }
        }

        let mut inv = None;
        'i: for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    let mut s = Q::zero();
                    for m in 0..n {
                        s += &c[a][b][m] * &self.b[m][k] + &self.b[b][m] * &c[a][k][m];
                    }
                    if !s.is_zero() {
                        inv = Some(format!("({})", idx(&[a, b, k])));
                        break 'i;
                    }
                }
            }
        }

        ValidationReport {
            algebra: self.name.clone(),
            checks: vec![
                CheckResult::from_option("antisymmetry", antisym),
                CheckResult::from_option("jacobi", jacobi),
                CheckResult::from_option("form-symmetric", sym),
                CheckResult::pass("form-invertible"),
                CheckResult::from_option("form-invariant", inv),
            ],
        }
    }

    /// Errors with the first failing check.
    pub fn ensure_valid(&self) -> Result<()> {
        let r = self.validate();
        match r.first_failure() {
            None => Ok(()),
            Some(f) => Err(Error::InvalidAlgebra(format!(
                "{} violation at {}",
                f.check,
                f.first_failure.clone().unwrap_or_default()
            ))),
        }
    }

    pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> Result<LieAlgebra> {
        a.ensure_valid()?;
        b.ensure_valid()?;
        let (na, nb) = (a.dim(), b.dim());
        let n = na + nb;
        let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
        let mut form = vec![vec![Q::zero(); n]; n];
        for (alg, off) in [(a, 0), (b, na)] {
            let m = alg.dim();
            for i in 0..m {
                for j in 0..m {
                    form[off + i][off + j] = alg.b[i][j].clone();
                    for k in 0..m {
                        c[off + i][off + j][off + k] = alg.c[i][j][k].clone();
                    }
                }
            }
        }
        let mut names: Vec<String> = Vec::with_capacity(n);
        let clash = a.basis.iter().any(|x| b.basis.contains(x));
        for (alg, tag) in [(a, 1), (b, 2)] {
            for x in &alg.basis {
                names.push(if clash { format!("{x}^({tag})") } else { x.clone() });
            }
        }
        LieAlgebra::new(&format!("{}+{}", a.name, b.name), names, c, form)
    }

    /// Structure constants of a matrix Lie algebra spanned by `mats`, with
    /// the Killing form. Brackets must close on the span.
    fn from_matrices(name: &str, names: &[&str], mats: &[Vec<Vec<i64>>]) -> Result<Self> {
        let n = mats.len();
        let size = mats[0].len();
        let flat = |m: &Vec<Vec<i64>>| -> Vec<Q> { m.iter().flatten().map(|x| q(*x)).collect() };
        let cols: Vec<crate::linalg::SparseVec> =
            mats.iter().map(|m| crate::linalg::SparseVec::from_dense(&flat(m))).collect();
        let span = Mat::from_cols(size * size, &cols);
        let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut comm = vec![vec![0i64; size]; size];
                for i in 0..size {
                    for j in 0..size {
                        let mut s = 0;
                        for k in 0..size {
                            s += mats[a][i][k] * mats[b][k][j] - mats[b][i][k] * mats[a][k][j];
                        }
                        comm[i][j] = s;
                    }
                }
                let target = crate::linalg::SparseVec::from_dense(&flat(&comm));
                // solve span * x = target via the column space
                let aug: Vec<crate::linalg::SparseVec> =
                    cols.iter().cloned().chain(std::iter::once(target.neg())).collect();
                let k = Mat::from_cols(size * size, &aug).kernel();
                let sol = k
                    .iter()
                    .find(|v| v.get(n).is_some())
                    .ok_or_else(|| Error::InvalidAlgebra(format!("{name}: bracket does not close")))?;
                let t = sol.get(n).unwrap().clone();
                for (i, v) in sol.iter() {
                    if *i < n {
                        c[a][b][*i] = v / &t;
                    }
                }
                debug_assert!(span.ncols() == n);
            }
        }
        let placeholder = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        let basis = names.iter().map(|s| s.to_string()).collect();
        let tmp = LieAlgebra::new(name, basis, c.clone(), placeholder)?;
        let killing = tmp.killing_form();
        LieAlgebra::new(name, tmp.basis.clone(), c, killing)
    }

    pub fn su2() -> Self {
        let n = 3;
        let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
        for (a, b, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[a][b][k] = Q::one();
            c[b][a][k] = -Q::one();
        }
        let basis = ["e1", "e2", "e3"].iter().map(|s| s.to_string()).collect();
        LieAlgebra::new("su2", basis, c, identity(n)).expect("su2 is well formed")
    }

    pub fn abelian(n: usize) -> Result<Self> {
        let c = vec![vec![vec![Q::zero(); n]; n]; n];
        let basis = (1..=n).map(|i| format!("e{i}")).collect();
        LieAlgebra::new(&format!("abelian:{n}"), basis, c, identity(n))
    }

    pub fn sl2() -> Self {
        let h = vec![vec![1, 0], vec![0, -1]];
        let e = vec![vec![0, 1], vec![0, 0]];
        let f = vec![vec![0, 0], vec![1, 0]];
        LieAlgebra::from_matrices("sl2", &["h", "e", "f"], &[h, e, f]).expect("sl2 is well formed")
    }

    /// Chevalley basis h1, h2, e1, e2, e3 = [e1,e2], f1, f2, f3.
    pub fn sl3() -> Self {
        let unit = |i: usize, j: usize| {
            let mut m = vec![vec![0i64; 3]; 3];
            m[i][j] = 1;
            m
        };
        let h1 = vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 0]];
        let h2 = vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, -1]];
        let mats = vec![h1, h2, unit(0, 1), unit(1, 2), unit(0, 2), unit(1, 0), unit(2, 1), unit(2, 0)];
        LieAlgebra::from_matrices("sl3", &["h1", "h2", "e1", "e2", "e3", "f1", "f2", "f3"], &mats)
            .expect("sl3 is well formed")
    }

    /// `su2`, `abelian:n`, `sl2`, `sl3`, or a `+`-separated sum of these.
    pub fn builtin(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.split('+').map(|s| s.trim()).collect();
        if parts.len() > 1 {
            let mut acc = LieAlgebra::builtin(parts[0])?;
            for p in &parts[1..] {
                acc = LieAlgebra::direct_sum(&acc, &LieAlgebra::builtin(p)?)?;
            }
            acc.name = name.to_string();
            return Ok(acc);
        }
        match name {
            "su2" => Ok(LieAlgebra::su2()),
            "sl2" => Ok(LieAlgebra::sl2()),
            "sl3" => Ok(LieAlgebra::sl3()),
            _ => {
                if let Some(k) = name.strip_prefix("abelian:") {
                    let n: usize = k.parse().map_err(|_| Error::UnknownAlgebra(name.into()))?;
                    LieAlgebra::abelian(n)
                } else {
                    Err(Error::UnknownAlgebra(name.into()))
                }
            }
        }
    }

    /// Builtin name, or path to a Lie algebra file.
    pub fn resolve(spec: &str) -> Result<Self> {
        let p = Path::new(spec);
        if p.is_file() {
            let text = std::fs::read_to_string(p)?;
            let v: Value = serde_json::from_str(&text)?;
            LieAlgebra::from_json(&v, spec)
        } else {
            LieAlgebra::builtin(spec)
        }
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Self> {
        let file: LieFile = serde_json::from_value(v.clone())
            .map_err(|e| Error::Schema { path: path.into(), msg: e.to_string() })?;
        file.into_algebra(path)
    }

    pub fn to_json(&self) -> Value {
        let n = self.dim();
        let mut brackets = BTreeMap::new();
        for a in 0..n {
            for b in (a + 1)..n {
                let terms: Vec<(usize, String)> =
                    self.bracket[a][b].iter().map(|(k, v)| (k + 1, fmt_q(v))).collect();
                if !terms.is_empty() {
                    brackets.insert(format!("{},{}", a + 1, b + 1), terms);
                }
            }
        }
        let form: Vec<Vec<String>> = self.b.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
        serde_json::json!({
            "name": self.name,
            "dim": n,
            "basis": self.basis,
            "brackets": brackets,
            "B": form,
        })
    }
}

fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

#[derive(Deserialize)]
struct LieFile {
    name: Option<String>,
    dim: usize,
    basis: Option<Vec<String>>,
    #[serde(default)]
    brackets: BTreeMap<String, Vec<(usize, String)>>,
    #[serde(rename = "B")]
    form: Vec<Vec<String>>,
}

impl LieFile {
    fn into_algebra(self, path: &str) -> Result<LieAlgebra> {
        let n = self.dim;
        let schema = |loc: String, msg: &str| Error::Schema { path: format!("{path}:{loc}"), msg: msg.into() };
        let basis = self.basis.unwrap_or_else(|| (1..=n).map(|i| format!("e{i}")).collect());
        if basis.len() != n {
            return Err(schema("basis".into(), "length differs from dim"));
        }
        let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
        for (key, terms) in &self.brackets {
            let loc = format!("brackets[\"{key}\"]");
            let (a, b) = key.split_once(',').ok_or_else(|| schema(loc.clone(), "key must be \"a,b\""))?;
            let a: usize = a.trim().parse().map_err(|_| schema(loc.clone(), "bad index"))?;
            let b: usize = b.trim().parse().map_err(|_| schema(loc.clone(), "bad index"))?;
            if a == 0 || b == 0 || a > n || b > n {
                return Err(schema(loc, "index out of range"));
            }
            for (k, v) in terms {
                if *k == 0 || *k > n {
                    return Err(schema(loc.clone(), "target index out of range"));
                }
                let v = parse_q(v).map_err(|e| schema(loc.clone(), &e.to_string()))?;
                c[a - 1][b - 1][k - 1] += v.clone();
                if a != b {
                    c[b - 1][a - 1][k - 1] -= v;
                }
            }
        }
        if self.form.len() != n || self.form.iter().any(|r| r.len() != n) {
            return Err(schema("B".into(), "must be an n x n array"));
        }
        let mut form = vec![vec![Q::zero(); n]; n];
        for (i, r) in self.form.iter().enumerate() {
            for (j, s) in r.iter().enumerate() {
                form[i][j] = parse_q(s).map_err(|e| schema(format!("B[{i}][{j}]"), &e.to_string()))?;
            }
        }
        let name = self.name.unwrap_or_else(|| path.to_string());
        LieAlgebra::new(&name, basis, c, form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in ["su2", "sl2", "sl3", "abelian:3", "su2+su2", "su2+abelian:1", "abelian:1+abelian:2"] {
            let g = LieAlgebra::builtin(name).unwrap();
            assert!(g.validate().passed(), "{name}: {:?}", g.validate());
        }
    }

    #[test]
    fn sl2_killing() {
        let g = LieAlgebra::sl2();
        assert_eq!(g.form()[0][0], q(8));
        assert_eq!(g.form()[1][2], q(4));
        assert_eq!(g.form()[1][1], q(0));
        assert_eq!(*g.structure_constant(0, 1, 1), q(2));
        assert_eq!(*g.structure_constant(1, 2, 0), q(1));
    }

    #[test]
    fn sl3_integer_constants() {
        let g = LieAlgebra::sl3();
        for a in 0..8 {
            for b in 0..8 {
                for k in 0..8 {
                    assert!(g.structure_constant(a, b, k).is_integer());
                }
            }
        }
        // e3 = [e1, e2]
        assert_eq!(*g.structure_constant(2, 3, 4), q(1));
    }

    #[test]
    fn antisymmetry_violation_reported() {
        let mut c = vec![vec![vec![Q::zero(); 3]; 3]; 3];
        c[0][1][2] = q(1);
        c[1][0][2] = q(1);
        let g = LieAlgebra::new("bad", vec!["a".into(), "b".into(), "c".into()], c, identity(3)).unwrap();
        let r = g.validate();
        assert!(!r.checks[0].passed);
        assert_eq!(r.checks[0].first_failure.as_deref(), Some("(1,2,3)"));
    }

    #[test]
    fn json_roundtrip() {
        let g = LieAlgebra::sl3();
        let back = LieAlgebra::from_json(&g.to_json(), "mem").unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn sums() {
        let g = LieAlgebra::builtin("abelian:1+abelian:2").unwrap();
        assert_eq!(g.dim(), 3);
        assert!(g.is_abelian());
        let h = LieAlgebra::builtin("su2+abelian:1").unwrap();
        assert_eq!(h.dim(), 4);
        assert!(h.bracket(3, 0).is_empty());
    }
}
