//! Machine-readable outputs: JSON-lines records and CSV sweeps.
//!
//! Field order is fixed, numbers are printed with 17 significant digits
//! (round-trip exact for f64), complex values are `[re, im]` pairs, and
//! params are emitted in sorted key order, so identical runs produce
//! byte-identical files.

use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;

use crate::error::Result;
use crate::scatter::SweepRow;

#[derive(Debug, Clone)]
pub enum Value {
    Real(f64),
    Complex(Complex64),
    Reals(Vec<f64>),
    Text(String),
    Bool(bool),
    Int(i64),
}

#[derive(Debug, Clone)]
pub struct Record {
    pub quantity: String,
    pub params: Vec<(String, Value)>,
    pub value: Value,
    /// Populated whenever the quantity has an oracle.
    pub error_estimate: Option<f64>,
    pub provenance: String,
}

impl Record {
    pub fn new(quantity: &str, value: Value, provenance: &str) -> Self {
        Record {
            quantity: quantity.to_string(),
            params: Vec::new(),
            value,
            error_estimate: None,
            provenance: provenance.to_string(),
        }
    }

    pub fn param(mut self, key: &str, v: Value) -> Self {
        self.params.push((key.to_string(), v));
        self
    }

    pub fn error(mut self, e: f64) -> Self {
        self.error_estimate = Some(e);
        self
    }
}

/// 17 significant digits; exact round trip through a f64 parse.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        return "0.0".to_string();
    }
    format!("{v:.16e}")
}

fn fmt_value(out: &mut String, v: &Value) {
    match v {
        Value::Real(x) => out.push_str(&fmt_f64(*x)),
        Value::Complex(z) => {
            let _ = write!(out, "[{},{}]", fmt_f64(z.re), fmt_f64(z.im));
        }
        Value::Reals(xs) => {
            out.push('[');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&fmt_f64(*x));
            }
            out.push(']');
        }
        Value::Text(s) => {
            let _ = write!(out, "{}", serde_json::to_string(s).unwrap());
        }
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Int(i) => {
            let _ = write!(out, "{i}");
        }
    }
}

/// One JSON object per record, deterministic field order.
pub fn record_to_json(r: &Record) -> String {
    let mut out = String::new();
    out.push_str("{\"quantity\":");
    let _ = write!(out, "{}", serde_json::to_string(&r.quantity).unwrap());
    out.push_str(",\"params\":{");
    let mut params = r.params.clone();
    params.sort_by(|a, b| a.0.cmp(&b.0));
    for (i, (k, v)) in params.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}:", serde_json::to_string(k).unwrap());
        fmt_value(&mut out, v);
    }
    out.push_str("},\"value\":");
    fmt_value(&mut out, &r.value);
    out.push_str(",\"error_estimate\":");
    match r.error_estimate {
        Some(e) => out.push_str(&fmt_f64(e)),
        None => out.push_str("null"),
    }
    out.push_str(",\"provenance\":");
    let _ = write!(out, "{}", serde_json::to_string(&r.provenance).unwrap());
    out.push('}');
    out
}

pub fn write_records(path: &str, records: &[Record]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    for r in records {
        writeln!(f, "{}", record_to_json(r))?;
    }
    Ok(())
}

/// CSV for s-sweeps, header `mode,re_s,im_s,re_S,im_S`.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("mode,re_s,im_s,re_S,im_S\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.mode,
            fmt_f64(r.s.re),
            fmt_f64(r.s.im),
            fmt_f64(r.value.re),
            fmt_f64(r.value.im)
        );
    }
    out
}

pub fn write_sweep_csv(path: &str, rows: &[SweepRow]) -> Result<()> {
    std::fs::write(path, sweep_to_csv(rows))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip_bit_exact() {
        for v in [std::f64::consts::PI, 1.0 / 3.0, -2.5e-17, 6.02e23] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{s}");
        }
    }

    #[test]
    fn record_shape() {
        let r = Record::new(
            "residue",
            Value::Complex(Complex64::new(0.25, 0.0)),
            "contour-vs-recursion",
        )
        .param("mode", Value::Text("xi_1_0".into()))
        .param("k", Value::Int(1))
        .error(1e-9);
        let json = record_to_json(&r);
        assert!(json.starts_with("{\"quantity\":\"residue\""));
        assert!(json.contains("\"params\":{\"k\":1,\"mode\":\"xi_1_0\"}"));
        let e: f64 = json
            .split("\"error_estimate\":")
            .nth(1)
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(e.to_bits(), 1e-9f64.to_bits());
        // parses as valid JSON and the complex value is a [re, im] pair
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["value"][0].as_f64().unwrap(), 0.25);
        assert_eq!(v["value"][1].as_f64().unwrap(), 0.0);
    }

    #[test]
    fn sweep_header_contract() {
        let rows = vec![SweepRow {
            mode: "xi_1_0".into(),
            s: Complex64::new(1.0, 0.7),
            value: Complex64::new(0.3, -0.2),
        }];
        let csv = sweep_to_csv(&rows);
        assert!(csv.starts_with("mode,re_s,im_s,re_S,im_S\n"));
        assert!(csv.lines().count() == 2);
    }
}
