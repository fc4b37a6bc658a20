//! JSON report values with fixed 17-significant-digit number formatting, so
//! identical inputs give byte-identical reports.

use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Map, Number, Value};

use siegel_core::fuchsian_detector::{GroupPresentation, TraceAuditReport};
use siegel_core::linalg::Mat3;
use siegel_core::{ProjectivePoint, Tolerances, Vector3};

pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(format!("{x}"));
    }
    let x = if x == 0.0 { 0.0 } else { x }; // no "-0"
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float is a JSON number"))
}

pub fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn matrix(m: &Mat3) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(|&z| complex(z)).collect())).collect())
}

pub fn vector(v: &Vector3) -> Value {
    Value::Array(v.0.iter().map(|&z| complex(z)).collect())
}

/// `"inf"` or `[z1, z2]`.
pub fn point(p: &ProjectivePoint) -> Value {
    match p.to_finite() {
        Some(f) => json!([complex(f.z1), complex(f.z2)]),
        None => Value::String("inf".into()),
    }
}

pub fn tolerances(t: &Tolerances) -> Value {
    json!({
        "point": num(t.point),
        "group": num(t.group),
        "eigen": num(t.eigen),
        "trace": num(t.trace),
        "coplanarity": num(t.coplanarity),
        "membership": num(t.membership),
        "entry": num(t.entry),
        "certification": num(t.certification),
        "escalation": t.escalation,
        "radius": t.radius,
    })
}

pub fn audit(report: &TraceAuditReport, p: &GroupPresentation) -> Value {
    json!({
        "radius": report.radius,
        "words_checked": report.words_checked,
        "max_imag_trace": num(report.max_imag_trace),
        "witness": report.witness.as_ref().map(|w| json!({
            "word": w.word.display(p).to_string(),
            "imag_trace": num(w.imag_trace),
        })),
    })
}

/// Common envelope: command echo, input digest, tolerances, results and
/// optionally the wall time.
pub struct Envelope {
    pub command: String,
    pub digest: Option<String>,
    pub tolerances: Option<Tolerances>,
    pub wall_ms: Option<f64>,
}

impl Envelope {
    pub fn wrap(self, results: Value) -> Value {
        let mut out = Map::new();
        out.insert("command".into(), Value::String(self.command));
        if let Some(d) = self.digest {
            out.insert("input_sha256".into(), Value::String(d));
        }
        if let Some(t) = self.tolerances {
            out.insert("tolerances".into(), tolerances(&t));
        }
        out.insert("results".into(), results);
        if let Some(ms) = self.wall_ms {
            out.insert("wall_time_ms".into(), num(ms));
        }
        Value::Object(out)
    }
}

pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
