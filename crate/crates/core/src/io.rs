//! JSON and CSV formats for spaces, barcodes and reports.
//!
//! Written JSON is canonical: keys sorted, two-space indentation, a trailing
//! newline, exact rationals as `"p/q"` strings and floats as the shortest
//! decimal that round-trips.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gh::{Certificate, GHResult};
use crate::group::{FiniteGroup, GroupAction, Perm};
use crate::interleaving::InterleavingReport;
use crate::persistence::Barcode;
use crate::scalar::{Scalar, Q};
use crate::space::{AnySpace, GMetricSpace, NetReport, PackingReport};
use crate::vr::Label;

/// A distance as JSON: a `"p/q"` string when exact, a number otherwise.
pub fn scalar_json<S: Scalar>(s: S) -> Value {
    if S::EXACT {
        Value::String(s.to_text())
    } else {
        json!(s.to_f64())
    }
}

pub fn opt_scalar_json<S: Scalar>(s: Option<S>) -> Value {
    s.map_or(Value::Null, scalar_json)
}

/// Canonical text of a JSON value.
pub fn to_canonical(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values always serialize");
    s.push('\n');
    s
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::ParseError { line: e.line(), column: e.column(), msg: e.to_string() })
}

/// Re-emits JSON text in canonical form.
pub fn canonicalize(text: &str) -> Result<String> {
    Ok(to_canonical(&parse_json(text)?))
}

fn schema(field: &str, msg: impl Into<String>) -> Error {
    Error::SchemaError { field: field.to_string(), msg: msg.into() }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_report(path: &Path, report: &Value) -> Result<()> {
    write_text(path, &to_canonical(report))
}

pub fn read_report(path: &Path) -> Result<Value> {
    parse_json(&read_text(path)?)
}

// ---- groups ----

pub fn group_json(group: &FiniteGroup) -> Value {
    let mut m = Map::new();
    m.insert("order".into(), json!(group.order()));
    m.insert("table".into(), json!(group.table()));
    if let Some(labels) = group.labels() {
        m.insert("labels".into(), json!(labels));
    }
    Value::Object(m)
}

pub fn parse_group(value: &Value) -> Result<FiniteGroup> {
    match value {
        Value::String(name) => FiniteGroup::by_name(name),
        Value::Object(m) => {
            let table: Vec<Vec<usize>> = serde_json::from_value(m.get("table").cloned().unwrap_or(Value::Null))
                .map_err(|e| schema("group.table", e.to_string()))?;
            if let Some(order) = m.get("order") {
                if order.as_u64() != Some(table.len() as u64) {
                    return Err(schema("group.order", "does not match the table size"));
                }
            }
            let labels: Option<Vec<String>> = match m.get("labels") {
                None | Some(Value::Null) => None,
                Some(v) => Some(serde_json::from_value(v.clone()).map_err(|e| schema("group.labels", e.to_string()))?),
            };
            FiniteGroup::with_labels(table, labels)
        }
        _ => Err(schema("group", "expected a name or an object with a table")),
    }
}

// ---- spaces ----

pub fn space_json<S: Scalar>(space: &GMetricSpace<S>) -> Value {
    let mut m = Map::new();
    m.insert("exact".into(), json!(S::EXACT));
    m.insert(
        "dist".into(),
        Value::Array(space.dist_rows().into_iter().map(|row| Value::Array(row.into_iter().map(scalar_json).collect())).collect()),
    );
    m.insert("group".into(), group_json(space.group()));
    m.insert("action".into(), json!(space.action().perms()));
    if let Some(labels) = space.labels() {
        m.insert("labels".into(), json!(labels));
    }
    Value::Object(m)
}

pub fn any_space_json(space: &AnySpace) -> Value {
    match space {
        AnySpace::Exact(s) => space_json(s),
        AnySpace::Float(s) => space_json(s),
    }
}

fn entry_text(v: &Value, field: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(schema(field, format!("expected a number or a string, got {v}"))),
    }
}

fn parse_matrix<S: Scalar>(rows: &[Vec<String>]) -> Result<Vec<Vec<S>>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, t)| S::parse_text(t).ok_or_else(|| schema("dist", format!("entry ({i},{j}) `{t}` is not a distance"))))
                .collect()
        })
        .collect()
}

fn build_space(rows: Vec<Vec<String>>, exact: bool, group: FiniteGroup, action: Option<Vec<Perm>>, labels: Option<Vec<String>>) -> Result<AnySpace> {
    let n = rows.len();
    let action = match action {
        Some(perms) => GroupAction::new(group, perms).map_err(|e| schema("action", e.to_string()))?,
        None => GroupAction::trivial_on(group, n),
    };
    fn finish<S: Scalar>(rows: &[Vec<String>], action: GroupAction, labels: Option<Vec<String>>) -> Result<GMetricSpace<S>> {
        let dist = parse_matrix::<S>(rows)?;
        let space = GMetricSpace::new(dist, action).map_err(|e| schema("dist", e.to_string()))?;
        match labels {
            Some(l) => space.with_labels(l).map_err(|e| schema("labels", e.to_string())),
            None => Ok(space),
        }
    }
    Ok(if exact {
        AnySpace::Exact(finish::<Q>(&rows, action, labels)?)
    } else {
        AnySpace::Float(finish::<f64>(&rows, action, labels)?)
    })
}

/// Parses the JSON space format. Without `"exact"`, the space is exact when
/// every entry is an integer or a string.
pub fn parse_space_json(text: &str) -> Result<AnySpace> {
    let v = parse_json(text)?;
    let m = v.as_object().ok_or_else(|| schema("", "expected an object"))?;
    let dist = m.get("dist").and_then(Value::as_array).ok_or_else(|| schema("dist", "missing or not an array"))?;
    let mut rows = Vec::with_capacity(dist.len());
    let mut all_exact_text = true;
    for row in dist {
        let row = row.as_array().ok_or_else(|| schema("dist", "rows must be arrays"))?;
        for e in row {
            all_exact_text &= e.is_string() || e.is_i64() || e.is_u64();
        }
        rows.push(row.iter().map(|e| entry_text(e, "dist")).collect::<Result<Vec<_>>>()?);
    }
    let exact = match m.get("exact") {
        None => all_exact_text,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(schema("exact", "expected a boolean")),
    };
    let group = match m.get("group") {
        None => FiniteGroup::trivial(),
        Some(g) => parse_group(g)?,
    };
    let action: Option<Vec<Perm>> = match m.get("action") {
        None | Some(Value::Null) => None,
        Some(a) => Some(serde_json::from_value(a.clone()).map_err(|e| schema("action", e.to_string()))?),
    };
    let labels: Option<Vec<String>> = match m.get("labels") {
        None | Some(Value::Null) => None,
        Some(l) => Some(serde_json::from_value(l.clone()).map_err(|e| schema("labels", e.to_string()))?),
    };
    build_space(rows, exact, group, action, labels)
}

/// Parses a CSV distance matrix. Exact when every entry parses as a rational
/// (integers, `p/q`, short decimals). `action` is the sidecar JSON
/// `{"group": ..., "action": [...]}`.
pub fn parse_space_csv(text: &str, action: Option<&str>) -> Result<AnySpace> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
        if let Some(col) = row.iter().position(|t| f64::parse_text(t).is_none()) {
            let column = line.split(',').take(col).map(|s| s.len() + 1).sum::<usize>() + 1;
            return Err(Error::ParseError { line: i + 1, column, msg: format!("`{}` is not a number", row[col]) });
        }
        rows.push(row);
    }
    let exact = rows.iter().flatten().all(|t| Q::parse_text(t).is_some());
    let (group, perms) = match action {
        None => (FiniteGroup::trivial(), None),
        Some(text) => {
            let v = parse_json(text)?;
            let group = parse_group(v.get("group").ok_or_else(|| schema("group", "missing in the action file"))?)?;
            let perms: Vec<Perm> = serde_json::from_value(v.get("action").cloned().unwrap_or(Value::Null))
                .map_err(|e| schema("action", e.to_string()))?;
            (group, Some(perms))
        }
    };
    build_space(rows, exact, group, perms, None)
}

/// `<file>.action.json` next to a CSV file.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().unwrap_or_default().to_os_string();
    name.push(".action.json");
    csv.with_file_name(name)
}

/// Reads a `.json` or `.csv` space; a CSV picks up its sidecar action file if present.
pub fn read_space(path: &Path) -> Result<AnySpace> {
    let text = read_text(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => {
            let side = sidecar_path(path);
            let action = if side.exists() { Some(read_text(&side)?) } else { None };
            parse_space_csv(&text, action.as_deref())
        }
        _ => parse_space_json(&text),
    }
}

pub fn write_space(path: &Path, space: &AnySpace) -> Result<()> {
    write_text(path, &to_canonical(&any_space_json(space)))
}

// ---- barcodes and reports ----

pub fn label_json(label: Label) -> Value {
    match label {
        Label::Full => json!("full"),
        Label::Eigen { g, lambda } => json!({ "g": g, "lambda": lambda }),
    }
}

pub fn barcode_json<S: Scalar>(code: &Barcode<S>) -> Value {
    let bars: Vec<Value> = code
        .bars
        .iter()
        .map(|b| json!([scalar_json(b.birth), b.death.map_or(json!("inf"), scalar_json)]))
        .collect();
    let mut m = Map::new();
    m.insert("degree".into(), json!(code.degree));
    m.insert("field".into(), json!(code.field));
    m.insert("label".into(), label_json(code.label));
    m.insert("bars".into(), Value::Array(bars));
    if let Some(r) = code.truncated_at {
        m.insert("truncated_at".into(), scalar_json(r));
    }
    Value::Object(m)
}

pub fn certificate_json<S: Scalar>(c: &Certificate<S>) -> Value {
    json!({ "name": c.name, "lower": c.lower, "value": opt_scalar_json(c.value), "note": c.note })
}

pub fn gh_report_json<S: Scalar>(r: &GHResult<S>) -> Value {
    json!({
        "exact": S::EXACT,
        "value": scalar_json(r.value),
        "method": r.method,
        "witness": r.witness.as_ref().map(|w| json!(w.pairs())),
        "certificates": r.lower_certificates.iter().map(certificate_json).collect::<Vec<_>>(),
        "stats": r.stats,
    })
}

pub fn interleaving_report_json<S: Scalar>(r: &InterleavingReport<S>) -> Value {
    json!({
        "exact": S::EXACT,
        "degrees": r.degrees,
        "certified_lower_bound": scalar_json(r.combined_lower),
        "bottleneck_full": r.bottleneck_full.iter().map(|b| json!({ "degree": b.degree, "value": scalar_json(b.value) })).collect::<Vec<_>>(),
        "bottleneck_eigen": r.bottleneck_eigen.iter().map(|b| json!({
            "degree": b.degree, "g": b.g, "lambda": b.lambda, "field": b.field, "value": scalar_json(b.value),
        })).collect::<Vec<_>>(),
        "m_odd": r.m_odd.iter().map(|b| json!({
            "side": b.side, "degree": b.degree, "g": b.g, "field": b.field, "root": b.root,
            "m_odd": scalar_json(b.m_odd), "certified": scalar_json(b.certified),
        })).collect::<Vec<_>>(),
        "truncated_at": opt_scalar_json(r.truncated_at),
        "barcodes_x": r.barcodes_x.iter().map(barcode_json).collect::<Vec<_>>(),
        "barcodes_y": r.barcodes_y.iter().map(barcode_json).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

pub fn net_report_json<S: Scalar>(r: &NetReport<S>) -> Value {
    json!({
        "exact": S::EXACT,
        "epsilon": scalar_json(r.epsilon),
        "net": r.net,
        "cardinality": r.cardinality,
        "is_G_invariant": r.is_g_invariant,
        "certified_optimal": r.certified_optimal,
    })
}

pub fn packing_report_json<S: Scalar>(r: &PackingReport<S>) -> Value {
    json!({
        "exact": S::EXACT,
        "epsilon": scalar_json(r.epsilon),
        "covering_number": r.covering_number,
        "packing_number": r.packing_number,
        "holds": r.holds,
        "net": r.net,
        "packing": r.packing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_space_round_trip() {
        let text = r#"{"dist": [["0", "1/2"], ["1/2", 0]], "group": "Z2", "action": [[0, 1], [1, 0]]}"#;
        let s = parse_space_json(text).unwrap();
        assert!(s.is_exact());
        let once = to_canonical(&any_space_json(&s));
        let twice = to_canonical(&any_space_json(&parse_space_json(&once).unwrap()));
        assert_eq!(once, twice);
        assert!(once.contains("\"1/2\""));
    }

    #[test]
    fn float_space_and_errors() {
        let s = parse_space_json(r#"{"dist": [[0.0, 0.1], [0.1, 0.0]]}"#).unwrap();
        assert!(!s.is_exact());
        assert!(matches!(parse_space_json("{\"dist\": [[0, 1]"), Err(Error::ParseError { line: 1, .. })));
        assert!(matches!(parse_space_json(r#"{"dist": [[0, 1], [2, 0]]}"#), Err(Error::SchemaError { .. })));
    }

    #[test]
    fn csv_import() {
        let s = parse_space_csv("0,1\n1,0\n", Some(r#"{"group": "Z2", "action": [[0,1],[1,0]]}"#)).unwrap();
        assert!(s.is_exact());
        assert_eq!(s.group().order(), 2);
        assert!(matches!(parse_space_csv("0,1\n2,0\n", None), Err(Error::SchemaError { .. })));
        assert!(matches!(parse_space_csv("0,x\n", None), Err(Error::ParseError { line: 1, column: 3, .. })));
    }
}
