//! Table rendering: CSV with `#`-prefixed header block, or JSON with
//! `{meta, columns, rows}`. Output is byte-deterministic for a fixed
//! config and tool version.

use std::fmt::Write as _;

use decoh_core::ToleranceConfig;

/// One table cell; numeric cells render with full double precision.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    /// Rendered empty in CSV, `null` in JSON.
    Missing,
}

/// An analysis result destined for one output file.
#[derive(Debug, Clone)]
pub struct Table {
    /// Ordered key/value pairs for the header block.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            meta: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }
}

/// 17 significant digits: round-trip exact for f64.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Canonical single-line rendering of every tolerance, for output headers.
pub fn tolerance_summary(tol: &ToleranceConfig) -> String {
    format!(
        "hermiticity_strict={:e} hermiticity={:e} state_norm={:e} eigenvalue_floor={:e} \
         orthonormality={:e} residual={:e} degeneracy_gap={:e} phase_pivot={:e} \
         entropy_weight_floor={:e} norm_drift={:e} projector={:e} linear_term={:e} \
         truncation_leakage={:e} interchange_overlap={} max_dim={}",
        tol.hermiticity_strict,
        tol.hermiticity,
        tol.state_norm,
        tol.eigenvalue_floor,
        tol.orthonormality,
        tol.residual,
        tol.degeneracy_gap,
        tol.phase_pivot,
        tol.entropy_weight_floor,
        tol.norm_drift,
        tol.projector,
        tol.linear_term,
        tol.truncation_leakage,
        tol.interchange_overlap,
        tol.max_dim
    )
}

pub fn render_csv(table: &Table) -> String {
    let mut out = String::new();
    for (k, v) in &table.meta {
        let _ = writeln!(out, "# {k}: {v}");
    }
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let rendered: Vec<String> = row
            .iter()
            .map(|cell| match cell {
                Cell::Num(x) => format_f64(*x),
                Cell::Int(n) => n.to_string(),
                Cell::Text(s) => s.clone(),
                Cell::Missing => String::new(),
            })
            .collect();
        let _ = writeln!(out, "{}", rendered.join(","));
    }
    out
}

pub fn render_json(table: &Table) -> String {
    use serde_json::{json, Map, Number, Value};
    let mut meta = Map::new();
    for (k, v) in &table.meta {
        meta.insert(k.clone(), Value::String(v.clone()));
    }
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|cell| match cell {
                        Cell::Num(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
                        Cell::Int(n) => Value::Number((*n).into()),
                        Cell::Text(s) => Value::String(s.clone()),
                        Cell::Missing => Value::Null,
                    })
                    .collect(),
            )
        })
        .collect();
    let doc = json!({
        "meta": Value::Object(meta),
        "columns": table.columns,
        "rows": rows,
    });
    // Pretty output with a trailing newline; serde_json sorts object keys,
    // so the bytes are deterministic.
    let mut s = serde_json::to_string_pretty(&doc).expect("static structure");
    s.push('\n');
    s
}
