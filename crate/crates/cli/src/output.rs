//! CSV and JSON writers. Both are deterministic for a given input.

use ecs_qfi::limits::SweepRow;
use serde::{Serialize, Serializer};

pub const CSV_HEADER: &str = "R,T,F,shot_noise,heisenberg,hofmann,flags";

/// Residuals smaller than this are emitted as strings in JSON.
const STRING_BELOW: f64 = 1e-15;

/// 17 significant digits: enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            num(r.reflection),
            num(r.transmission),
            num(r.qfi),
            num(r.limits.shot_noise),
            num(r.limits.heisenberg),
            num(r.limits.hofmann),
            r.status.label(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonRow<'a> {
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "F")]
    f: f64,
    shot_noise: f64,
    heisenberg: f64,
    hofmann: f64,
    flags: &'a str,
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    alpha: [f64; 2],
    rows: Vec<JsonRow<'a>>,
}

pub fn sweep_json(alpha: [f64; 2], rows: &[SweepRow]) -> String {
    let labels: Vec<String> = rows.iter().map(|r| r.status.label()).collect();
    let doc = SweepDoc {
        alpha,
        rows: rows
            .iter()
            .zip(&labels)
            .map(|(r, label)| JsonRow {
                r: r.reflection,
                t: r.transmission,
                f: r.qfi,
                shot_noise: r.limits.shot_noise,
                heisenberg: r.limits.heisenberg,
                hofmann: r.limits.hofmann,
                flags: label,
            })
            .collect(),
    };
    pretty(&doc)
}

pub fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Serialize a residual as a number, or as a decimal string when it is
/// too small for the float printer to be unambiguous.
pub fn residual<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.abs() < STRING_BELOW {
        s.serialize_str(&num(*x))
    } else {
        s.serialize_f64(*x)
    }
}

pub fn optional_residual<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => residual(v, s),
        None => s.serialize_none(),
    }
}
