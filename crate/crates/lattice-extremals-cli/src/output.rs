//! Number formatting (12 significant digits) and JSON/CSV emission.

use std::io::Write;

use lattice_extremals::extremal::{HypothesisMargin, LemmaParams, LemmaReport};
use lattice_extremals::ModularPoint;
use serde_json::{json, Value};

/// Rounds to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if v.is_finite() && v != 0.0 {
        format!("{v:.11e}").parse().unwrap_or(v)
    } else {
        v
    }
}

/// Shortest decimal form of the 12-digit rounding; re-reading and
/// re-formatting is the identity.
pub fn fmt12(v: f64) -> String {
    let r = round12(v);
    if r.is_nan() {
        "NaN".into()
    } else if r.is_infinite() {
        if r > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{r}")
    }
}

/// JSON number rounded to 12 significant digits; non-finite values become
/// strings since JSON has no representation for them.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(round12(v))
    } else {
        Value::String(fmt12(v))
    }
}

pub fn point(z: ModularPoint) -> Value {
    json!({ "x": num(z.x()), "y": num(z.y()) })
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

fn list(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn params(p: &LemmaParams) -> Value {
    json!({
        "alpha": opt(p.alpha),
        "beta": opt(p.beta),
        "s": opt(p.s),
        "k": opt(p.k),
        "y_max": opt(p.y_max),
        "a": list(&p.a),
        "alphas": list(&p.alphas),
        "b": list(&p.b),
        "betas": list(&p.betas),
    })
}

fn hypothesis(h: &HypothesisMargin) -> Value {
    json!({
        "name": h.name,
        "worst_margin": num(h.worst_margin),
        "worst_point": point(h.worst_point),
        "points": h.points,
    })
}

pub fn lemma_report(r: &LemmaReport) -> Value {
    json!({
        "lemma_id": r.lemma_id,
        "passed": r.passed,
        "grid_shape": [r.grid_shape.0, r.grid_shape.1],
        "worst_point": point(r.worst_point),
        "worst_margin": num(r.worst_margin),
        "params": params(&r.params),
        "hypotheses": r.hypotheses.iter().map(hypothesis).collect::<Vec<_>>(),
    })
}

pub fn write_json(out: &mut impl Write, v: &Value) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

/// CSV with a header row, RFC-4180 quoting and LF line endings.
pub fn write_csv(out: &mut impl Write, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(1.180340599016096), "1.18034059902");
        assert_eq!(fmt12(0.1 + 0.2), "0.3");
        assert_eq!(fmt12(-2.5e-20), "-0.000000000000000000025");
        for v in [1.0 / 3.0, 2.0f64.sqrt() * 1e7, -7.123456789012345e-5] {
            let s = fmt12(v);
            assert_eq!(fmt12(s.parse().unwrap()), s);
        }
    }
}
