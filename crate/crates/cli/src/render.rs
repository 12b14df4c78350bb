use fermiorder::{BipartitionSpec, ComplexMatrix, ModeOrdering};
use serde::Serialize;

use crate::UsageError;

pub fn json<T: Serialize>(value: &T) -> Result<String, UsageError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn csv<T: Serialize>(rows: &[T]) -> Result<String, UsageError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| UsageError(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| UsageError(e.to_string()))
}

pub fn labels(o: &ModeOrdering) -> String {
    o.labels().join(",")
}

pub fn split(bp: &BipartitionSpec) -> String {
    format!("{} | {}", bp.kept().join(","), bp.traced().join(","))
}

fn real(x: f64) -> String {
    // keep -0.0000 out of the tables
    let x = if x.abs() < 5e-5 { 0.0 } else { x };
    format!("{x:.4}")
}

fn entry(z: num_complex::Complex64) -> String {
    if z.im.abs() < 5e-5 {
        real(z.re)
    } else {
        format!("{}{:+.4}i", real(z.re), z.im)
    }
}

/// Matrix rows, one per line, each prefixed with `indent`.
pub fn matrix(m: &ComplexMatrix, indent: &str) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim()).map(|j| format!("{:>8}", entry(m[(i, j)]))).collect();
        out.push_str(indent);
        out.push('[');
        out.push_str(&row.join(" "));
        out.push_str(" ]\n");
    }
    out
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
