//! Cartan, small Cartan and Chevalley–Koszul complexes, the cochain maps
//! between them, and exact certificates for each.

pub mod cartan;
pub mod chevalley;
pub mod duality;
pub mod halperin;
pub mod homotopy;
pub mod product;
pub mod transgress;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graded::{cohomology_dims, Comparison, GradedOp, GradedSubspace};
use crate::lie::CheckResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One exact identity, with the degree range where it was checked.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<[usize; 2]>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl Certificate {
    pub fn pass(check: &str, range: Option<[usize; 2]>) -> Self {
        Certificate { check: check.into(), range, status: Status::Pass, first_failure: None }
    }

    pub fn fail(check: &str, range: Option<[usize; 2]>, detail: String) -> Self {
        Certificate { check: check.into(), range, status: Status::Fail, first_failure: Some(detail) }
    }

    /// An operator identity; an empty checked range counts as a failure.
    pub fn from_comparison(check: &str, c: &Comparison) -> Self {
        let range = c.range().map(|(a, b)| [a, b]);
        match (c.describe(), range) {
            (Some(d), _) => Certificate::fail(check, range, d),
            (None, None) => Certificate::fail(check, None, "no degree inside the trustworthy range".into()),
            (None, Some(r)) => Certificate::pass(check, Some(r)),
        }
    }

    pub fn from_degrees(check: &str, checked: &[usize], failure: Option<String>) -> Self {
        let range = checked.first().map(|a| [*a, *checked.last().unwrap_or(a)]);
        match (failure, range) {
            (Some(d), _) => Certificate::fail(check, range, d),
            (None, None) => Certificate::fail(check, None, "no degree inside the trustworthy range".into()),
            (None, Some(r)) => Certificate::pass(check, Some(r)),
        }
    }

    pub fn from_check(c: &CheckResult) -> Self {
        Certificate { check: c.check.clone(), range: None, status: if c.passed { Status::Pass } else { Status::Fail }, first_failure: c.first_failure.clone() }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub algebra: String,
    pub certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Report {
    pub fn new(check: &str, algebra: &str) -> Self {
        Report { check: check.into(), algebra: algebra.into(), certificates: Vec::new(), notes: Vec::new(), data: Value::Null }
    }

    pub fn push(&mut self, c: Certificate) {
        self.certificates.push(c);
    }

    pub fn passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed())
    }

    pub fn first_failure(&self) -> Option<&Certificate> {
        self.certificates.iter().find(|c| !c.passed())
    }
}

/// A complex embedded in an ambient graded space, with its differential in
/// the subspace coordinates.
#[derive(Clone, Debug)]
pub struct Complex {
    pub name: String,
    pub sub: GradedSubspace,
    pub d: GradedOp,
}

impl Complex {
    /// Restricts an ambient differential; fails if the subspace is not a subcomplex.
    pub fn restrict(name: &str, sub: GradedSubspace, ambient_d: &GradedOp) -> Result<Complex> {
        let d = ambient_d
            .restrict(&sub, &sub)
            .map_err(|k| Error::certificate(format!("{name} is a subcomplex"), format!("differential leaves it in degree {k}")))?;
        Ok(Complex { name: name.into(), sub, d })
    }

    pub fn d_squared(&self) -> Comparison {
        self.d.compose(&self.d).zero_check()
    }

    /// dim H^k where both adjacent blocks are known.
    pub fn cohomology(&self) -> Vec<Option<usize>> {
        cohomology_dims(&self.d)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.sub.dims()
    }
}

/// Known prefix of a cohomology list, for reports.
pub fn known_prefix(h: &[Option<usize>]) -> Vec<usize> {
    h.iter().map_while(|x| *x).collect()
}

/// e^X = Σ X^k/k! for a nilpotent degree-0 operator, stopping once a power vanishes.
pub fn exp_nilpotent_op(x: &GradedOp, max_terms: usize) -> GradedOp {
    let mut out = GradedOp::identity(x.src());
    let mut term = GradedOp::identity(x.src());
    for k in 1..=max_terms {
        term = x.compose(&term).scale(&crate::rational::qf(1, k as i64));
        if term.zero_check().ok() {
            break;
        }
        out = out.add(&term);
    }
    out
}
