//! Text, JSON-lines and TSV renderings with a fixed field order.

use serde_json::{json, Value};

use super::{Analysis, PureAnalysis, TableReport, VerificationReport};
use crate::classgroup::ClassGroupConfig;
use crate::predictor::PredictionReport;

/// Leading fields shared by every per-prime record.
pub const FIELDS: [&str; 13] = [
    "p",
    "residue9",
    "symbol3",
    "cl3_L",
    "cl3_k",
    "rank3",
    "s",
    "u",
    "principal_I0",
    "principal_I",
    "principal_P0",
    "principal_P",
    "principal_Q",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

/// Ordered key/value pairs; serialized by hand so the order is stable.
pub type Record = Vec<(&'static str, Value)>;

fn symbol(trivial: bool) -> Value {
    Value::from(if trivial { "1" } else { "≠1" })
}

fn config_fields(r: &mut Record, c: &ClassGroupConfig) {
    r.push(("seed", json!(c.seed)));
    r.push(("effort", json!(c.effort)));
    r.push(("bound_mult", json!(c.bound_mult)));
}

pub fn prediction_record(r: &PredictionReport) -> Record {
    let ck3 = r.predicted_ck3.invariants();
    let pat = r.predicted_principality.pattern();
    vec![
        ("p", json!(r.p)),
        ("residue9", json!(r.residue9)),
        ("symbol3", symbol(r.symbol3_trivial)),
        ("cl3_L", if r.predicted_cl3_exact3 { json!([3]) } else { Value::Null }),
        ("cl3_k", json!(ck3)),
        ("rank3", json!(ck3.as_ref().map(Vec::len))),
        ("s", json!(ck3.as_ref().map(Vec::len))),
        ("u", json!(r.predicted_u.value())),
        ("principal_I0", json!(pat.map(|x| x.i0))),
        ("principal_I", json!(pat.map(|x| x.i))),
        ("principal_P0", json!(pat.map(|x| x.p0))),
        ("principal_P", json!(pat.map(|x| x.p))),
        ("principal_Q", json!(pat.map(|x| x.q))),
        ("zeta3_symbol", json!(r.zeta3_symbol.to_string())),
        ("t", json!(r.t)),
        ("qstar", json!(r.qstar)),
        ("ambiguous_order", json!(r.ambiguous_order)),
        ("ck3", json!(r.predicted_ck3.to_string())),
    ]
}

fn computed_fields(a: &Analysis) -> Record {
    vec![
        ("p", json!(a.p)),
        ("residue9", json!(a.residue9)),
        ("symbol3", symbol(a.symbol3_trivial)),
        ("cl3_L", json!(a.cl3_l)),
        ("cl3_k", json!(a.cl3_k)),
        ("rank3", json!(a.rank3)),
        ("s", json!(a.s)),
        ("u", json!(a.u())),
        ("principal_I0", json!(a.principal_i0)),
        ("principal_I", json!(a.principal_i)),
        ("principal_P0", json!(a.principal_p0)),
        ("principal_P", json!(a.principal_p)),
        ("principal_Q", json!(a.principal_q)),
    ]
}

pub fn analysis_record(a: &Analysis, config: &ClassGroupConfig) -> Record {
    let mut r = computed_fields(a);
    r.push(("class_number_L", json!(a.class_number_l)));
    r.push(("invariants_L", json!(a.invariants_l)));
    r.push(("class_number_k", json!(a.class_number_k)));
    r.push(("invariants_k", json!(a.invariants_k)));
    r.push(("ambiguous_order", json!(a.structure.as_ref().map(|s| s.ambiguous_order))));
    r.push(("plus_part_order", json!(a.structure.as_ref().map(|s| s.plus_part_order))));
    config_fields(&mut r, config);
    r.push(("incomplete", json!(a.incomplete)));
    r
}

pub fn verification_record(v: &VerificationReport) -> Record {
    let mut r = computed_fields(&v.computed);
    r.push(("verdict", json!(v.outcome)));
    config_fields(&mut r, &v.config);
    r.push(("incomplete", json!(v.computed.incomplete)));
    r.push(("claims", json!(v.claims)));
    r
}

pub fn pure_record(a: &PureAnalysis) -> Record {
    vec![
        ("field", json!(a.field)),
        ("d", json!(a.d)),
        ("class_number", json!(a.class_number)),
        ("invariants", json!(a.invariants)),
    ]
}

/// Flat rendering of a scalar or list for text and TSV.
fn flat(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_nested(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.iter().any(|x| x.is_object())) || v.is_object()
}

pub fn json_line(r: &Record) -> String {
    let body: Vec<String> = r.iter().map(|(k, v)| format!("{}:{}", Value::from(*k), v)).collect();
    format!("{{{}}}", body.join(","))
}

pub fn render(records: &[Record], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for r in records {
                out.push_str(&json_line(r));
                out.push('\n');
            }
        }
        Format::Tsv => {
            if let Some(first) = records.first() {
                let keys: Vec<&str> = first.iter().filter(|(_, v)| !is_nested(v)).map(|(k, _)| *k).collect();
                out.push_str(&keys.join("\t"));
                out.push('\n');
            }
            for r in records {
                let cells: Vec<String> = r.iter().filter(|(_, v)| !is_nested(v)).map(|(_, v)| flat(v)).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
        }
        Format::Text => {
            for (i, r) in records.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let width = r.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in r {
                    if k == &"claims" {
                        text_claims(&mut out, v);
                    } else if !is_nested(v) {
                        out.push_str(&format!("{k:<width$}  {}\n", flat(v)));
                    }
                }
            }
        }
    }
    out
}

fn text_claims(out: &mut String, claims: &Value) {
    out.push_str("claims\n");
    for c in claims.as_array().into_iter().flatten() {
        out.push_str(&format!(
            "  {:<14} {:<14} predicted {:<14} computed {}\n",
            flat(&c["claim"]),
            flat(&c["verdict"]),
            flat(&c["predicted"]),
            flat(&c["computed"]),
        ));
    }
}

pub fn render_table(t: &TableReport, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for row in &t.rows {
                let cells: Vec<(&'static str, Value)> =
                    t.header.iter().zip(&row.cells).map(|(h, c)| (*h, Value::from(c.as_str()))).collect();
                let mut r: Record = vec![("table", json!(t.which))];
                r.extend(cells);
                r.push(("mismatches", json!(row.mismatches)));
                r.push(("incomplete", json!(row.incomplete)));
                out.push_str(&json_line(&r));
                out.push('\n');
            }
        }
        Format::Text | Format::Tsv => {
            out.push_str(&t.header.join("\t"));
            out.push('\n');
            for row in &t.rows {
                out.push_str(&row.cells.join("\t"));
                out.push('\n');
            }
        }
    }
    out
}
