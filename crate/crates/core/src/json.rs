//! File formats shared by the command line and the HTTP service.
//!
//! Vertices are 1-based in every document. Rationals are written as strings
//! `"p/q"` (integers may also be plain JSON numbers on input). Objects are
//! serialized with sorted keys, so equal values give byte-identical output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{format_rational, parse_rational, FieldKind, Rational};
use crate::linalg::Matrix;
use crate::qp::{QpError, QuiverWithPotential, DEFAULT_TRUNCATION};
use crate::quiver::{Arrow, Quiver, QuiverError};
use crate::rep::{RepError, Representation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("invalid document: {0}")]
    Schema(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Qp(#[from] QpError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

pub type JsonResult<T> = Result<T, JsonError>;

fn schema(msg: impl Into<String>) -> JsonError {
    JsonError::Schema(msg.into())
}

#[derive(Debug, Deserialize)]
struct ArrowDoc {
    id: String,
    src: usize,
    tgt: usize,
}

#[derive(Debug, Deserialize)]
struct QuiverDoc {
    n: Option<usize>,
    b: Option<Vec<Vec<i64>>>,
    arrows: Option<Vec<ArrowDoc>>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
struct TermDoc {
    coef: Value,
    cycle: Vec<String>,
}

pub fn parse_value(text: &str) -> JsonResult<Value> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
}

/// A rational from `"p/q"`, `"n"` or an integer number.
pub fn rational_from_value(v: &Value) -> JsonResult<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| schema(format!("bad rational {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(crate::field::rat)
            .ok_or_else(|| schema(format!("non-integer number {n}; write rationals as \"p/q\""))),
        other => Err(schema(format!("expected a rational, got {other}"))),
    }
}

/// Integers as JSON numbers, other rationals as `"p/q"` strings.
pub fn rational_to_value(q: &Rational) -> Value {
    if q.is_integer() {
        if let Ok(n) = format_rational(q).parse::<i64>() {
            return json!(n);
        }
    }
    json!(format_rational(q))
}

pub fn quiver_from_value(v: &Value) -> JsonResult<Quiver> {
    let doc: QuiverDoc = serde_json::from_value(v.clone()).map_err(|e| schema(e.to_string()))?;
    let n = match (doc.n, &doc.b) {
        (Some(n), _) => n,
        (None, Some(b)) => b.len(),
        (None, None) => return Err(schema("quiver needs \"n\" or \"b\"")),
    };
    if let Some(b) = &doc.b {
        if b.len() != n {
            return Err(schema(format!("\"b\" has {} rows but n = {n}", b.len())));
        }
    }
    let q = match doc.arrows {
        Some(arrows) => {
            let arrows = arrows
                .into_iter()
                .map(|a| {
                    if a.src == 0 || a.tgt == 0 || a.src > n || a.tgt > n {
                        return Err(schema(format!("arrow {:?} has a vertex outside 1..{n}", a.id)));
                    }
                    Ok(Arrow::new(a.id, a.src - 1, a.tgt - 1))
                })
                .collect::<JsonResult<Vec<_>>>()?;
            let q = Quiver::from_arrows(n, arrows, doc.labels, false)?;
            if let Some(b) = &doc.b {
                for (i, row) in b.iter().enumerate() {
                    if let Some(j) = (0..n).find(|&j| row.get(j) != Some(&q.entry(i, j))) {
                        return Err(QuiverError::InconsistentArrows(i + 1, j + 1).into());
                    }
                }
            }
            q
        }
        None => {
            let b = doc.b.ok_or_else(|| schema("quiver needs \"b\" or \"arrows\""))?;
            match doc.labels {
                Some(labels) => Quiver::from_matrix_with_labels(b, labels)?,
                None => Quiver::from_matrix(b)?,
            }
        }
    };
    Ok(q)
}

pub fn quiver_to_value(q: &Quiver) -> Value {
    let arrows: Vec<Value> =
        q.arrows().iter().map(|a| json!({"id": a.id, "src": a.src + 1, "tgt": a.tgt + 1})).collect();
    json!({
        "n": q.n(),
        "b": q.exchange_matrix(),
        "arrows": arrows,
        "labels": q.labels(),
    })
}

/// A QP document; a bare quiver document is read with zero potential.
pub fn qp_from_value(v: &Value) -> JsonResult<QuiverWithPotential> {
    let q = quiver_from_value(v)?;
    let truncation = match v.get("truncation") {
        None | Some(Value::Null) => DEFAULT_TRUNCATION,
        Some(t) => t.as_u64().ok_or_else(|| schema("\"truncation\" must be a non-negative integer"))? as usize,
    };
    let terms: Vec<TermDoc> = match v.get("potential") {
        None | Some(Value::Null) => Vec::new(),
        Some(p) => serde_json::from_value(p.clone()).map_err(|e| schema(format!("potential: {e}")))?,
    };
    let terms =
        terms.into_iter().map(|t| Ok((t.cycle, rational_from_value(&t.coef)?))).collect::<JsonResult<Vec<_>>>()?;
    Ok(QuiverWithPotential::from_id_terms(q, &terms, truncation)?)
}

pub fn qp_to_value(p: &QuiverWithPotential) -> Value {
    let mut v = quiver_to_value(p.quiver());
    let terms: Vec<Value> =
        p.id_terms().into_iter().map(|(c, ids)| json!({"coef": format_rational(&c), "cycle": ids})).collect();
    let obj = v.as_object_mut().expect("quiver documents are objects");
    obj.insert("potential".into(), Value::Array(terms));
    obj.insert("truncation".into(), json!(p.truncation()));
    v
}

pub fn rep_from_value(v: &Value, q: &Quiver) -> JsonResult<Representation> {
    let field: FieldKind = serde_json::from_value(v.get("field").cloned().unwrap_or(json!("Q")))
        .map_err(|e| schema(format!("field: {e}")))?;
    let dims: Vec<usize> = serde_json::from_value(v.get("dims").cloned().ok_or_else(|| schema("missing \"dims\""))?)
        .map_err(|e| schema(format!("dims: {e}")))?;
    if dims.len() != q.n() {
        return Err(RepError::DimensionCount { expected: q.n(), got: dims.len() }.into());
    }
    let empty = Map::new();
    let mats_doc = match v.get("mats") {
        None | Some(Value::Null) => &empty,
        Some(Value::Object(m)) => m,
        Some(_) => return Err(schema("\"mats\" must be an object keyed by arrow id")),
    };
    if let Some(id) = mats_doc.keys().find(|id| q.arrow_index(id).is_none()) {
        return Err(schema(format!("unknown arrow {id:?} in \"mats\"")));
    }
    let mut mats = Vec::with_capacity(q.arrows().len());
    for a in q.arrows() {
        let (rows, cols) = (dims[a.tgt], dims[a.src]);
        let m = match mats_doc.get(&a.id) {
            None => Matrix::filled(rows, cols, crate::field::rat(0)),
            Some(Value::Array(rs)) => {
                let parsed = rs
                    .iter()
                    .map(|r| match r {
                        Value::Array(xs) => xs.iter().map(rational_from_value).collect::<JsonResult<Vec<_>>>(),
                        _ => Err(schema(format!("matrix of {:?} must be a list of rows", a.id))),
                    })
                    .collect::<JsonResult<Vec<_>>>()?;
                if parsed.len() != rows || parsed.iter().any(|r| r.len() != cols) {
                    return Err(RepError::MatrixShape { arrow: a.id.clone(), rows, cols }.into());
                }
                Matrix::from_rows(parsed, cols).expect("shape checked")
            }
            Some(_) => return Err(schema(format!("matrix of {:?} must be a list of rows", a.id))),
        };
        mats.push(m);
    }
    Ok(Representation::new(q, field, dims, mats)?)
}

pub fn rep_to_value(m: &Representation, q: &Quiver) -> Value {
    let mats: Map<String, Value> = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(x, a)| {
            let rows: Vec<Value> =
                m.mat(x).to_rows().iter().map(|r| Value::Array(r.iter().map(rational_to_value).collect())).collect();
            (a.id.clone(), Value::Array(rows))
        })
        .collect();
    json!({"field": m.field(), "dims": m.dims(), "mats": mats})
}

/// Compact serialization with sorted keys.
pub fn canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

/// Lowercase hex SHA-256 of the canonical serialization.
pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(canonical_string(v).as_bytes()))
}

/// Serialize any value through `serde_json::Value`, so that key order is
/// canonical.
pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("document types always serialize")
}
