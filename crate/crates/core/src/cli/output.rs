//! CSV and JSON serialisation of scan curves. Floats are always written as
//! `{:.16e}` (17 significant digits) so identical inputs give identical
//! bytes and every value round-trips exactly.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::chsh::{ScanCurve, ScanRow};

const COLUMNS: [&str; 8] = ["J", "S", "E_ab", "E_abp", "E_apb", "E_apbp", "err", "cutoff_used"];

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_float(x: f64) -> String {
    if x.is_finite() {
        float(x)
    } else {
        "null".to_string()
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialise")
}

fn row_fields(row: &ScanRow) -> [String; 8] {
    let r = &row.result;
    [
        float(row.j),
        float(r.s),
        float(r.e_ab),
        float(r.e_abp),
        float(r.e_apb),
        float(r.e_apbp),
        float(r.err),
        r.cutoff_used.to_string(),
    ]
}

fn meta(curve: &ScanCurve) -> Vec<(&'static str, String)> {
    let s = &curve.spec;
    vec![
        ("family", s.kind.name().to_string()),
        ("r", float(s.r)),
        ("y", s.y.get().to_string()),
        ("method", curve.method.name().to_string()),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("line", format!("a={} a_prime={} b={} b_prime={}", float(s.line.a), float(s.line.a_prime), float(s.line.b), float(s.line.b_prime))),
        ("j_min", float(s.j_min)),
        ("j_max", float(s.j_max)),
        ("steps", s.steps.to_string()),
    ]
}

/// `#`-prefixed metadata lines, the column header, then one row per point.
pub fn curve_csv(curve: &ScanCurve) -> String {
    let mut out = String::new();
    for (k, v) in meta(curve) {
        let _ = writeln!(out, "# {k}: {v}");
    }
    for f in &curve.failed {
        let _ = writeln!(out, "# failed: J={} {}", float(f.j), f.error);
    }
    let _ = writeln!(out, "{}", COLUMNS.join(","));
    for row in &curve.rows {
        let _ = writeln!(out, "{}", row_fields(row).join(","));
    }
    out
}

/// `{"meta": {...}, "rows": [...], "failed": [...]}` with the CSV columns
/// as row keys.
pub fn curve_json(curve: &ScanCurve) -> String {
    let mut out = String::from("{\n  \"meta\": {");
    let numeric = ["r", "y", "j_min", "j_max", "steps"];
    let fields: Vec<String> = meta(curve)
        .into_iter()
        .map(|(k, v)| if numeric.contains(&k) { format!("\"{k}\": {v}") } else { format!("\"{k}\": {}", json_string(&v)) })
        .collect();
    out.push_str(&fields.join(", "));
    out.push_str("},\n  \"rows\": [");
    for (i, row) in curve.rows.iter().enumerate() {
        let r = &row.result;
        let vals = [row.j, r.s, r.e_ab, r.e_abp, r.e_apb, r.e_apbp, r.err];
        let mut obj: Vec<String> = COLUMNS[..7].iter().zip(vals).map(|(k, v)| format!("\"{k}\": {}", json_float(v))).collect();
        obj.push(format!("\"cutoff_used\": {}", r.cutoff_used));
        out.push_str(if i == 0 { "\n    {" } else { ",\n    {" });
        out.push_str(&obj.join(", "));
        out.push('}');
    }
    out.push_str(if curve.rows.is_empty() { "],\n  \"failed\": [" } else { "\n  ],\n  \"failed\": [" });
    let failed: Vec<String> =
        curve.failed.iter().map(|f| format!("{{\"J\": {}, \"error\": {}}}", json_float(f.j), json_string(&f.error))).collect();
    out.push_str(&failed.join(", "));
    out.push_str("]\n}\n");
    out
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcorr::BitIndex;
    use crate::chsh::{ChshResult, FailedPoint, Method, ScanSpec, SettingKind};

    fn curve() -> ScanCurve {
        let spec = ScanSpec::new(SettingKind::Displacement, 0.5, BitIndex::new(2).unwrap(), 0.0, 1.0, 2);
        let result = ChshResult { e_ab: 1.0, e_abp: 0.5, e_apb: 0.5, e_apbp: 0.1, s: 1.9, err: 1e-12, cutoff_used: 64 };
        ScanCurve {
            spec,
            method: Method::Analytic,
            rows: vec![ScanRow { j: 0.0, result }],
            failed: vec![FailedPoint { j: 1.0, error: "cutoff \"exceeded\"".into() }],
        }
    }

    #[test]
    fn csv_layout() {
        let text = curve_csv(&curve());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# family: displacement");
        assert!(lines.iter().any(|l| l.starts_with("# failed: J=1.0000000000000000e0")));
        let header = lines.iter().position(|l| *l == "J,S,E_ab,E_abp,E_apb,E_apbp,err,cutoff_used").unwrap();
        assert_eq!(lines[header + 1].split(',').count(), 8);
        assert!(lines[header + 1].starts_with("0.0000000000000000e0,1.8999999999999999e0,"));
    }

    #[test]
    fn json_parses_and_round_trips() {
        let v: serde_json::Value = serde_json::from_str(&curve_json(&curve())).unwrap();
        assert_eq!(v["meta"]["family"], "displacement");
        assert_eq!(v["meta"]["y"], 2);
        assert_eq!(v["rows"][0]["S"].as_f64(), Some(1.9));
        assert_eq!(v["rows"][0]["cutoff_used"], 64);
        assert_eq!(v["failed"][0]["error"], "cutoff \"exceeded\"");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
