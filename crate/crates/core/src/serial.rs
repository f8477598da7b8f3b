//! Element JSON: {"space", "dim", "terms": [{"wedge": [i, ...], "poly": [..], "coeff": "p/q"}]}.
//! Indices are 1-based and ascending; "poly" appears only for mixed spaces.

use serde_json::{json, Value};

use crate::blade::Blade;
use crate::element::{ExtElt, MixedElt, Side};
use crate::error::{Error, Result};
use crate::poly::Monomial;
use crate::rational::{fmt_q, parse_q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Ext(ExtElt),
    Mixed(MixedElt),
}

fn space_name(side: Side, mixed: bool) -> &'static str {
    match (side, mixed) {
        (Side::G, false) => "ext-g",
        (Side::GDual, false) => "ext-gdual",
        (Side::G, true) => "mixed-g",
        (Side::GDual, true) => "weil",
    }
}

fn wedge(b: Blade) -> Value {
    json!(b.indices().map(|i| i + 1).collect::<Vec<_>>())
}

pub fn ext_to_json(x: &ExtElt) -> Value {
    let terms: Vec<Value> = x.terms().iter().map(|(b, c)| json!({"wedge": wedge(*b), "coeff": fmt_q(c)})).collect();
    json!({"space": space_name(x.side(), false), "dim": x.dim(), "terms": terms})
}

pub fn mixed_to_json(x: &MixedElt) -> Value {
    let n = x.dim();
    let terms: Vec<Value> = x
        .flat_terms()
        .into_iter()
        .map(|(m, b, c)| json!({"wedge": wedge(b), "poly": m.exponents(n), "coeff": fmt_q(&c)}))
        .collect();
    json!({"space": space_name(x.side(), true), "dim": n, "terms": terms})
}

pub fn to_json(e: &Element) -> Value {
    match e {
        Element::Ext(x) => ext_to_json(x),
        Element::Mixed(x) => mixed_to_json(x),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_wedge(t: &Value, dim: usize) -> Result<Blade> {
    let idx = t["wedge"].as_array().ok_or_else(|| bad("term without `wedge`"))?;
    let mut out = Vec::with_capacity(idx.len());
    for i in idx {
        let i = i.as_u64().ok_or_else(|| bad("wedge index is not a positive integer"))? as usize;
        if i == 0 || i > dim {
            return Err(Error::Index { index: i, dim });
        }
        out.push(i - 1);
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("wedge indices must be strictly ascending"));
    }
    Blade::from_indices(&out).map(|(_, b)| b).ok_or_else(|| bad("repeated wedge index"))
}

/// Parses an element; `dim` is used when the document omits it.
pub fn from_json(v: &Value, dim: Option<usize>) -> Result<Element> {
    let space = v["space"].as_str().ok_or_else(|| bad("element without `space`"))?;
    let (side, mixed) = match space {
        "ext-g" => (Side::G, false),
        "ext-gdual" => (Side::GDual, false),
        "mixed-g" => (Side::G, true),
        "weil" => (Side::GDual, true),
        other => return Err(Error::UnknownSpace(other.into())),
    };
    let dim = match v.get("dim") {
        Some(d) => d.as_u64().ok_or_else(|| bad("`dim` is not an integer"))? as usize,
        None => dim.ok_or_else(|| bad("element without `dim`"))?,
    };
    let terms = v["terms"].as_array().ok_or_else(|| bad("element without `terms`"))?;
    let coeff = |t: &Value| parse_q(t["coeff"].as_str().ok_or_else(|| bad("coefficient must be a string"))?);
    if !mixed {
        let mut x = ExtElt::zero(side, dim);
        for t in terms {
            x.add_term(parse_wedge(t, dim)?, coeff(t)?);
        }
        return Ok(Element::Ext(x));
    }
    let mut flat = Vec::with_capacity(terms.len());
    for t in terms {
        let e: Vec<u8> = t["poly"]
            .as_array()
            .ok_or_else(|| bad("mixed term without `poly`"))?
            .iter()
            .map(|x| x.as_u64().and_then(|x| u8::try_from(x).ok()).ok_or_else(|| bad("bad exponent")))
            .collect::<Result<_>>()?;
        if e.len() > dim {
            return Err(bad(format!("`poly` has {} exponents for dimension {dim}", e.len())));
        }
        flat.push((Monomial::from_exponents(&e), parse_wedge(t, dim)?, coeff(t)?));
    }
    Ok(Element::Mixed(MixedElt::from_flat(side, dim, flat)))
}

fn blade_text(side: Side, b: Blade) -> String {
    let sym = match side {
        Side::G => "e",
        Side::GDual => "y",
    };
    b.indices().map(|i| format!("{sym}{}", i + 1)).collect::<Vec<_>>().join("^")
}

/// Human-readable form, e.g. `(1/2)*e1^e3 + 2`.
pub fn ext_text(x: &ExtElt) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = x
        .terms()
        .iter()
        .map(|(b, c)| if b.is_empty() { c.to_string() } else { format!("({c})*{}", blade_text(x.side(), *b)) })
        .collect();
    parts.join(" + ")
}

/// Mixed counterpart, e.g. `((1/2)*v1*v2) ⊗ e1^e3 + (v3)`.
pub fn mixed_text(x: &MixedElt) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = x
        .terms()
        .iter()
        .map(|(b, p)| if b.is_empty() { format!("({p})") } else { format!("({p}) ⊗ {}", blade_text(x.side(), *b)) })
        .collect();
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::HodgePackage;
    use crate::lie::LieAlgebra;
    use crate::mc::solve_mc;

    #[test]
    fn su2_solution_round_trips() {
        let pkg = HodgePackage::build(&LieAlgebra::su2()).unwrap();
        let mc = solve_mc(&pkg).unwrap();
        let e = Element::Mixed(mc.f.clone());
        let v = to_json(&e);
        assert_eq!(v["space"], "mixed-g");
        let text = serde_json::to_string(&v).unwrap();
        let back = from_json(&serde_json::from_str(&text).unwrap(), None).unwrap();
        assert_eq!(back, e);
        let c = Element::Ext(pkg.primitives()[0].dual.clone());
        assert_eq!(from_json(&to_json(&c), None).unwrap(), c);
    }

    #[test]
    fn rejects_malformed() {
        let v = json!({"space": "ext-g", "dim": 3, "terms": [{"wedge": [2, 1], "coeff": "1"}]});
        assert!(from_json(&v, None).is_err());
        let v = json!({"space": "ext-g", "terms": [{"wedge": [4], "coeff": "1"}]});
        assert!(matches!(from_json(&v, Some(3)), Err(Error::Index { .. })));
        let v = json!({"space": "weil", "dim": 2, "terms": [{"wedge": [1], "poly": [0, 2], "coeff": "-3/4"}]});
        let Element::Mixed(x) = from_json(&v, None).unwrap() else { panic!() };
        assert_eq!(mixed_text(&x), "((-3/4)*v2^2) ⊗ y1");
    }
}
