//! Deterministic report emission.
//!
//! Both emitters print every float with 17 significant digits (enough to
//! round-trip an IEEE double exactly), keep a fixed field order, and
//! normalize wall-clock fields to zero, so identical inputs produce
//! byte-identical files. Files are written to a temporary sibling and
//! renamed into place.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use restriction_core::probes::{CheckKind, ProbeReport};

use crate::manifest::Format;

/// Fixed CSV header, one row per probe scale.
pub const CSV_HEADER: &str =
    "probe_id,scale,measured,target_exponent,fitted_exponent,residual,constant,verdict,seed,runtime_ms";

fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

fn fmt_json_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Render the CSV body for a report list.
pub fn render_csv(reports: &[ProbeReport]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let fitted = r.fit.as_ref().map(|f| f.exponent);
        let residual = r.fit.as_ref().map(|f| f.residual);
        let verdict = if r.verdict { "pass" } else { "fail" };
        let mut row = |scale: String, measured: String| {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},0",
                r.label,
                scale,
                measured,
                r.target_exponent.map(fmt_float).unwrap_or_default(),
                fitted.map(fmt_float).unwrap_or_default(),
                residual.map(fmt_float).unwrap_or_default(),
                fmt_float(r.empirical_constant),
                verdict,
                r.seed,
            );
        };
        if r.rows.is_empty() {
            row(String::new(), String::new());
        } else {
            for s in &r.rows {
                row(fmt_float(s.scale), fmt_float(s.measured));
            }
        }
    }
    out
}

/// Render the JSON body: the full reports with per-trial payloads under
/// the `trials` key of each report.
pub fn render_json(reports: &[ProbeReport]) -> String {
    let mut out = String::from("{\n  \"reports\": [");
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("\n    {\n");
        let _ = writeln!(out, "      \"label\": {},", json_string(&r.label));
        let _ = writeln!(out, "      \"kind\": {},", json_string(&r.kind));
        let _ = writeln!(out, "      \"seed\": {},", r.seed);
        let _ = writeln!(out, "      \"trials_requested\": {},", r.trials);
        let _ = writeln!(out, "      \"rejected_trials\": {},", r.rejected_trials);
        let _ = writeln!(
            out,
            "      \"target_exponent\": {},",
            r.target_exponent.map(fmt_json_float).unwrap_or("null".into())
        );
        let _ = writeln!(out, "      \"target_note\": {},", json_string(&r.target_note));
        let _ = writeln!(
            out,
            "      \"empirical_constant\": {},",
            fmt_json_float(r.empirical_constant)
        );
        match &r.fit {
            Some(f) => {
                let _ = writeln!(
                    out,
                    "      \"fit\": {{\"exponent\": {}, \"intercept\": {}, \"residual\": {}, \"point_count\": {}}},",
                    fmt_json_float(f.exponent),
                    fmt_json_float(f.intercept),
                    fmt_json_float(f.residual),
                    f.point_count
                );
            }
            None => {
                let _ = writeln!(out, "      \"fit\": null,");
            }
        }
        out.push_str("      \"checks\": [");
        for (j, c) in r.checks.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let kind = match c.kind {
                CheckKind::Within => "within",
                CheckKind::AtMost => "at-most",
                CheckKind::AtLeast => "at-least",
            };
            let _ = write!(
                out,
                "\n        {{\"name\": {}, \"value\": {}, \"target\": {}, \"tolerance\": {}, \"kind\": \"{}\", \"pass\": {}}}",
                json_string(&c.name),
                fmt_json_float(c.value),
                fmt_json_float(c.target),
                fmt_json_float(c.tolerance),
                kind,
                c.pass
            );
        }
        if r.checks.is_empty() {
            out.push_str("],\n");
        } else {
            out.push_str("\n      ],\n");
        }
        out.push_str("      \"trials\": [");
        for (j, s) in r.rows.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(
                out,
                "\n        {{\"scale\": {}, \"measured\": {}, \"skipped\": {}, \"extra\": {{",
                fmt_json_float(s.scale),
                fmt_json_float(s.measured),
                s.skipped_trials
            );
            for (k, (name, v)) in s.extra.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{}: {}", json_string(name), fmt_json_float(*v));
            }
            out.push_str("}, \"values\": [");
            for (k, v) in s.trial_values.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push_str(&fmt_json_float(*v));
            }
            out.push_str("]}");
        }
        if r.rows.is_empty() {
            out.push_str("],\n");
        } else {
            out.push_str("\n      ],\n");
        }
        let _ = writeln!(out, "      \"verdict\": {},", r.verdict);
        let _ = writeln!(out, "      \"runtime_ms\": 0,");
        let _ = write!(
            out,
            "      \"error\": {}\n    }}",
            r.error.as_deref().map(json_string).unwrap_or("null".into())
        );
    }
    if reports.is_empty() {
        out.push_str("]\n}\n");
    } else {
        out.push_str("\n  ]\n}\n");
    }
    out
}

/// Atomically write `content` to `path` (temporary sibling + rename).
pub fn write_atomic(path: &Path, content: &str) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)
}

/// Emit one format to an explicit file path.
pub fn emit(reports: &[ProbeReport], format: Format, path: &Path) -> io::Result<()> {
    let body = match format {
        Format::Csv => render_csv(reports),
        Format::Json => render_json(reports),
    };
    write_atomic(path, &body)
}

/// Emit the requested formats into a directory as `reports.csv` /
/// `reports.json`, creating the directory if needed.
pub fn emit_all(reports: &[ProbeReport], dir: &Path, formats: &[Format]) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for f in formats {
        let name = match f {
            Format::Csv => "reports.csv",
            Format::Json => "reports.json",
        };
        emit(reports, *f, &dir.join(name))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_reports_render_header_only_csv() {
        let csv = render_csv(&[]);
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn empty_reports_render_valid_json() {
        let json = render_json(&[]);
        assert!(json.contains("\"reports\": []"));
    }

    #[test]
    fn float_format_has_17_significant_digits() {
        let s = fmt_float(std::f64::consts::PI);
        assert!(s.starts_with("3.1415926535897931e0"), "{s}");
        let parsed: f64 = s.parse().unwrap();
        assert_eq!(parsed, std::f64::consts::PI);
    }
}
