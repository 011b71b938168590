//! Self-describing JSON model documents.
//!
//! ```json
//! {
//!   "representation": "poe",
//!   "name": "rrpr",
//!   "m": [1, 0, 0, 0.3, 0, 0, -1, 0, 0, 1, 0, 0.5, 0, 0, 0, 1],
//!   "screws": [[0, 0, 1, 0, 0, 0], [0, 1, 0, -0.2, 0, 0]]
//! }
//! ```
//!
//! Payloads by tag (angles in radians, lengths in meters, matrices as 16
//! row-major numbers):
//!
//! * `dh`: optional `base` `[a, d, alpha, theta]`, `rows` of
//!   `[a, d, alpha, theta, kind]`, optional `tool` matrix;
//! * `poe`: `m` matrix and `screws` as `[wx, wy, wz, vx, vy, vz]`;
//! * `rpyxyz`: `rows` of `[roll, pitch, yaw, x, y, z]` and `kinds`;
//! * `gjd`: `frames` matrices, `kinds` and `tool` matrix.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{
    DhModel, DhParams, DhRow, GjdModel, JointKind, Model, PoeModel, Representation, RpyXyzModel, RpyXyzRow,
    Validate,
};
use crate::se3::{Screw, Transform, VALIDITY_TOL};

/// A named model as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelDocument {
    pub name: String,
    pub model: Model,
}

impl ModelDocument {
    pub fn new(name: impl Into<String>, model: impl Into<Model>) -> Self {
        Self {
            name: name.into(),
            model: model.into(),
        }
    }
}

#[derive(Deserialize)]
struct DhPayload {
    #[serde(default)]
    base: Option<Vec<f64>>,
    rows: Vec<(f64, f64, f64, f64, JointKind)>,
    #[serde(default)]
    tool: Option<Vec<f64>>,
}

#[derive(Deserialize)]
struct PoePayload {
    m: Vec<f64>,
    screws: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RpyXyzPayload {
    rows: Vec<Vec<f64>>,
    kinds: Vec<JointKind>,
}

#[derive(Deserialize)]
struct GjdPayload {
    frames: Vec<Vec<f64>>,
    kinds: Vec<JointKind>,
    tool: Vec<f64>,
}

fn fixed<const N: usize>(field: &str, what: &str, values: &[f64]) -> Result<[f64; N]> {
    values.try_into().map_err(|_| {
        Error::Parse(format!(
            "{field}: {what} must have {N} components, found {}",
            values.len()
        ))
    })
}

fn matrix(field: &str, values: &[f64]) -> Result<Transform> {
    let m: [f64; 16] = fixed(field, "matrix", values)?;
    let bottom = [m[12], m[13], m[14], m[15] - 1.0];
    if bottom.iter().any(|v| v.abs() > VALIDITY_TOL) {
        return Err(Error::Parse(format!("{field}: bottom row must be [0, 0, 0, 1]")));
    }
    Ok(Transform::from_row_major(&m))
}

fn payload<T: for<'de> Deserialize<'de>>(value: Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses a document without checking model invariants.
pub fn parse_document(text: &str) -> Result<ModelDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("document must be a JSON object".into()))?;
    let tag = obj
        .get("representation")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing string field `representation`".into()))?;
    let representation: Representation = tag.parse()?;
    let name = match obj.get("name") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(Error::Parse("`name` must be a string".into())),
    };

    let model = match representation {
        Representation::Dh => {
            let p: DhPayload = payload(value)?;
            let base = match &p.base {
                Some(b) => {
                    let [a, d, alpha, theta] = fixed("base", "DH row", b)?;
                    DhParams::new(a, d, alpha, theta)
                }
                None => DhParams::default(),
            };
            let tool = match &p.tool {
                Some(t) => matrix("tool", t)?,
                None => Transform::identity(),
            };
            let rows = p
                .rows
                .iter()
                .map(|&(a, d, alpha, theta, kind)| DhRow::new(a, d, alpha, theta, kind))
                .collect();
            Model::Dh(DhModel { base, rows, tool })
        }
        Representation::Poe => {
            let p: PoePayload = payload(value)?;
            let screws = p
                .screws
                .iter()
                .enumerate()
                .map(|(i, s)| fixed(&format!("screws[{i}]"), "screw", s).map(Screw::from_array))
                .collect::<Result<_>>()?;
            Model::Poe(PoeModel {
                m: matrix("m", &p.m)?,
                screws,
            })
        }
        Representation::RpyXyz => {
            let p: RpyXyzPayload = payload(value)?;
            let rows = p
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| fixed(&format!("rows[{i}]"), "RPY-XYZ row", r).map(RpyXyzRow::from_array))
                .collect::<Result<_>>()?;
            Model::RpyXyz(RpyXyzModel { rows, kinds: p.kinds })
        }
        Representation::Gjd => {
            let p: GjdPayload = payload(value)?;
            let joint_frames = p
                .frames
                .iter()
                .enumerate()
                .map(|(i, f)| matrix(&format!("frames[{i}]"), f))
                .collect::<Result<_>>()?;
            Model::Gjd(GjdModel {
                joint_frames,
                kinds: p.kinds,
                tool_frame: matrix("tool", &p.tool)?,
            })
        }
    };
    Ok(ModelDocument { name, model })
}

fn matrix_value(t: &Transform) -> Value {
    json!(t.to_row_major().to_vec())
}

fn kinds_value(kinds: &[JointKind]) -> Value {
    json!(kinds)
}

/// Renders a document; output depends only on the model.
pub fn render_document(doc: &ModelDocument) -> String {
    let mut fields: Vec<(&str, Value)> = vec![
        ("representation", json!(doc.model.representation().as_str())),
        ("name", json!(doc.name)),
    ];
    match &doc.model {
        Model::Dh(m) => {
            let b = &m.base;
            fields.push(("base", json!([b.a, b.d, b.alpha, b.theta])));
            let rows = m
                .rows
                .iter()
                .map(|r| json!([r.params.a, r.params.d, r.params.alpha, r.params.theta, r.kind]))
                .collect::<Vec<_>>();
            fields.push(("rows", Value::Array(rows)));
            fields.push(("tool", matrix_value(&m.tool)));
        }
        Model::Poe(m) => {
            fields.push(("m", matrix_value(&m.m)));
            let screws = m.screws.iter().map(|s| json!(s.to_array().to_vec())).collect();
            fields.push(("screws", Value::Array(screws)));
        }
        Model::RpyXyz(m) => {
            let rows = m.rows.iter().map(|r| json!(r.to_array().to_vec())).collect();
            fields.push(("rows", Value::Array(rows)));
            fields.push(("kinds", kinds_value(&m.kinds)));
        }
        Model::Gjd(m) => {
            let frames = m.joint_frames.iter().map(matrix_value).collect();
            fields.push(("frames", Value::Array(frames)));
            fields.push(("kinds", kinds_value(&m.kinds)));
            fields.push(("tool", matrix_value(&m.tool_frame)));
        }
    }

    let mut out = String::from("{\n");
    let body = fields
        .iter()
        .map(|(k, v)| {
            let mut s = format!("  \"{k}\": ");
            write_value(v, 2, &mut s);
            s
        })
        .collect::<Vec<_>>()
        .join(",\n");
    out.push_str(&body);
    out.push_str("\n}\n");
    out
}

// Arrays of scalars stay on one line; nested arrays get one element per line.
fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Array(items) if items.iter().any(|i| i.is_array() || i.is_object()) => {
            out.push_str("[\n");
            let pad = " ".repeat(indent + 2);
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(item, indent + 2, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&" ".repeat(indent));
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            let parts = items.iter().map(Value::to_string).collect::<Vec<_>>();
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes through a temporary file in the target directory so that a failed
/// write never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_error(path, e))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|_| tmp.flush())
        .map_err(|e| io_error(path, e))?;
    tmp.persist(path).map_err(|e| io_error(path, e.error))?;
    Ok(())
}

/// Reads and parses a document without validating it.
pub fn read_model(path: impl AsRef<Path>) -> Result<ModelDocument> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_document(&text)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelDocument> {
    load_model_with_tol(path, VALIDITY_TOL)
}

pub fn load_model_with_tol(path: impl AsRef<Path>, tol: f64) -> Result<ModelDocument> {
    let doc = read_model(path)?;
    doc.model.ensure_valid(tol)?;
    Ok(doc)
}

pub fn save_model(doc: &ModelDocument, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &render_document(doc))
}
