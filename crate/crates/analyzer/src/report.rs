//! Result rendering: aligned text or a stable JSON document.

use serde_json::{json, Value};

use crate::interp::AnalysisResult;

/// Output format for [`report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Renders `r` in the requested format. Both renderings are functions of
/// the result alone, so identical analyses produce identical bytes.
pub fn report(r: &AnalysisResult, fmt: Format) -> String {
    match fmt {
        Format::Text => text(r),
        Format::Json => json_doc(r).to_string(),
    }
}

/// One aligned `name ∈ [lo, hi]` line per variable (`∈ ∅` when the end of
/// the program is unreachable), then one `warning:` line each.
fn text(r: &AnalysisResult) -> String {
    let width = r.vars.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (name, bounds) in &r.vars {
        let shown = match bounds {
            Some(b) => format!("[{}, {}]", b.lo(), b.hi()),
            None => "∅".to_string(),
        };
        out.push_str(&format!("{name:width$} ∈ {shown}\n"));
    }
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

/// `{"config": {...}, "vars": {...}, "warnings": [...]}`. Variable bounds
/// are `[lo, hi]` with infinities spelled `"-inf"`/`"inf"` (JSON numbers
/// cannot be infinite), or `null` when the program end is unreachable.
fn json_doc(r: &AnalysisResult) -> Value {
    let vars: serde_json::Map<String, Value> = r
        .vars
        .iter()
        .map(|(name, bounds)| {
            let v = match bounds {
                Some(b) => json!([bound(b.lo()), bound(b.hi())]),
                None => Value::Null,
            };
            (name.clone(), v)
        })
        .collect();
    json!({
        "config": {
            "domain": r.config.domain.to_string(),
            "conc": r.config.conc.to_string(),
            "fp": r.config.fp,
            "unroll_bound": r.config.unroll_bound,
            "backward_passes": r.config.backward_passes,
        },
        "vars": vars,
        "warnings": r.warnings,
    })
}

fn bound(v: f64) -> Value {
    if v == f64::INFINITY {
        Value::String("inf".to_string())
    } else if v == f64::NEG_INFINITY {
        Value::String("-inf".to_string())
    } else {
        json!(v)
    }
}
