//! Rendering of reports and elements as JSON or text.

use serde_json::{json, Value};
use weilmc::models::{Report, Status};
use weilmc::poly::Poly;
use weilmc::serial::{ext_text, ext_to_json, mixed_text, mixed_to_json};
use weilmc::{ExtElt, MixedElt, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// An element in both renderings; JSON carries the text form alongside.
pub fn ext(x: &ExtElt) -> Value {
    let mut v = ext_to_json(x);
    v["text"] = json!(ext_text(x));
    v
}

pub fn mixed(x: &MixedElt) -> Value {
    let mut v = mixed_to_json(x);
    v["text"] = json!(mixed_text(x));
    v
}

/// A polynomial as an element of the Weil algebra with empty wedge part.
pub fn poly(p: &Poly, n: usize) -> Value {
    mixed(&MixedElt::from_poly(Side::GDual, n, p))
}

pub fn reports_value(reports: &[Report]) -> Value {
    json!(reports)
}

fn range_text(r: Option<[usize; 2]>) -> String {
    match r {
        Some([a, b]) if a == b => format!(" [degree {a}]"),
        Some([a, b]) => format!(" [degrees {a}..{b}]"),
        None => String::new(),
    }
}

pub fn report_text(r: &Report) -> String {
    let mut out = format!("{} ({})\n", r.check, r.algebra);
    for c in &r.certificates {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        out.push_str(&format!("  {tag} {}{}", c.check, range_text(c.range)));
        if let Some(f) = &c.first_failure {
            out.push_str(&format!(": {f}"));
        }
        out.push('\n');
    }
    for n in &r.notes {
        out.push_str(&format!("  note: {n}\n"));
    }
    out
}

/// Text rendering of a JSON document: `text` fields of elements are shown,
/// nested objects are indented.
pub fn value_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            if let Some(Value::String(t)) = m.get("text") {
                out.push_str(&format!("{pad}{t}\n"));
                return;
            }
            for (k, x) in m {
                match x {
                    Value::Object(o) if o.get("text").is_some() => {
                        out.push_str(&format!("{pad}{k} = {}\n", o["text"].as_str().unwrap_or_default()));
                    }
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        value_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k} = {}\n", scalar(x))),
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                if is_flat(x) {
                    out.push_str(&format!("{pad}{}\n", scalar(x)));
                } else {
                    value_text(x, indent, out);
                    if !matches!(x, Value::Object(o) if o.get("text").is_some()) {
                        out.push_str(&format!("{pad}--\n"));
                    }
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar(x))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_object() && !x.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        x => x.to_string(),
    }
}
