//! JSON documents for states, channels, gluings and unitaries.
//!
//! ```json
//! {"schema_version": "1", "kind": "state", "payload": {"dim": 2, "matrix": [[[0.5, 0.0], [0.0, 0.0]], ...]}}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Floats are written in shortest round-trip form, so a parse and
//! re-serialize cycle is bit-exact.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channels::{validate_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::gluings::{LspGluing, SpGluing};
use crate::numerics::{ensure_unitary, Complex64, ComplexMatrix, ComplexVector};
use crate::states::{validate_density, DensityMatrix};

pub const SCHEMA_VERSION: &str = "1";

pub const KINDS: [&str; 5] = ["state", "channel", "gluing_lsp", "gluing_sp", "unitary"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentEnvelope {
    pub schema_version: String,
    pub kind: String,
    pub payload: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    State(DensityMatrix),
    Channel(KrausChannel),
    GluingLsp(LspGluing),
    GluingSp(SpGluing),
    Unitary(ComplexMatrix),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::State(_) => "state",
            Document::Channel(_) => "channel",
            Document::GluingLsp(_) => "gluing_lsp",
            Document::GluingSp(_) => "gluing_sp",
            Document::Unitary(_) => "unitary",
        }
    }
}

type JsonComplex = [f64; 2];
type JsonMatrix = Vec<Vec<JsonComplex>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixPayload {
    dim: usize,
    matrix: JsonMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelPayload {
    dim: usize,
    kraus: Vec<JsonMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LspPayload {
    channel_a: ChannelPayload,
    channel_b: ChannelPayload,
    coeff_a: Vec<JsonComplex>,
    coeff_b: Vec<JsonComplex>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpPayload {
    channel_a: ChannelPayload,
    channel_b: ChannelPayload,
    contraction: JsonMatrix,
}

fn malformed(e: impl std::fmt::Display) -> Error {
    Error::Malformed(e.to_string())
}

fn to_json_matrix(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

fn from_json_matrix(rows: &JsonMatrix) -> Result<ComplexMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err(malformed("empty matrix"));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(malformed(format!(
            "ragged matrix: row of length {} among rows of length {cols}",
            bad.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(rows.len(), cols, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

fn square_of(dim: usize, rows: &JsonMatrix) -> Result<ComplexMatrix> {
    let m = from_json_matrix(rows)?;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(malformed(format!(
            "dim is {dim} but matrix is {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

fn to_json_vector(v: &ComplexVector) -> Vec<JsonComplex> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn from_json_vector(v: &[JsonComplex]) -> ComplexVector {
    ComplexVector::from_iterator(v.len(), v.iter().map(|z| Complex64::new(z[0], z[1])))
}

fn channel_payload(c: &KrausChannel) -> ChannelPayload {
    ChannelPayload {
        dim: c.dim(),
        kraus: c.kraus().iter().map(to_json_matrix).collect(),
    }
}

fn channel_from(p: &ChannelPayload) -> Result<KrausChannel> {
    let kraus = p
        .kraus
        .iter()
        .map(|k| square_of(p.dim, k))
        .collect::<Result<Vec<_>>>()?;
    validate_channel(kraus)
}

fn payload<T: for<'de> Deserialize<'de>>(value: serde_json::Value) -> Result<T> {
    serde_json::from_value(value).map_err(malformed)
}

impl DocumentEnvelope {
    pub fn from_document(doc: &Document) -> Self {
        let payload = match doc {
            Document::State(rho) => serde_json::to_value(MatrixPayload {
                dim: rho.dim(),
                matrix: to_json_matrix(rho.matrix()),
            }),
            Document::Channel(c) => serde_json::to_value(channel_payload(c)),
            Document::GluingLsp(g) => serde_json::to_value(LspPayload {
                channel_a: channel_payload(g.channel_a()),
                channel_b: channel_payload(g.channel_b()),
                coeff_a: to_json_vector(g.coeff_a()),
                coeff_b: to_json_vector(g.coeff_b()),
            }),
            Document::GluingSp(g) => serde_json::to_value(SpPayload {
                channel_a: channel_payload(g.channel_a()),
                channel_b: channel_payload(g.channel_b()),
                contraction: to_json_matrix(g.contraction()),
            }),
            Document::Unitary(u) => serde_json::to_value(MatrixPayload {
                dim: u.nrows(),
                matrix: to_json_matrix(u),
            }),
        }
        .expect("payloads serialize");
        DocumentEnvelope {
            schema_version: SCHEMA_VERSION.to_string(),
            kind: doc.kind().to_string(),
            payload,
        }
    }

    /// Checks version and kind, then validates the payload.
    pub fn into_document(self) -> Result<Document> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::UnsupportedVersion(self.schema_version));
        }
        match self.kind.as_str() {
            "state" => {
                let p: MatrixPayload = payload(self.payload)?;
                Ok(Document::State(validate_density(square_of(
                    p.dim, &p.matrix,
                )?)?))
            }
            "channel" => Ok(Document::Channel(channel_from(&payload(self.payload)?)?)),
            "gluing_lsp" => {
                let p: LspPayload = payload(self.payload)?;
                Ok(Document::GluingLsp(LspGluing::new(
                    channel_from(&p.channel_a)?,
                    channel_from(&p.channel_b)?,
                    from_json_vector(&p.coeff_a),
                    from_json_vector(&p.coeff_b),
                )?))
            }
            "gluing_sp" => {
                let p: SpPayload = payload(self.payload)?;
                Ok(Document::GluingSp(SpGluing::new(
                    channel_from(&p.channel_a)?,
                    channel_from(&p.channel_b)?,
                    from_json_matrix(&p.contraction)?,
                )?))
            }
            "unitary" => {
                let p: MatrixPayload = payload(self.payload)?;
                let u = square_of(p.dim, &p.matrix)?;
                ensure_unitary(&u)?;
                Ok(Document::Unitary(u))
            }
            _ => Err(Error::UnknownKind(self.kind)),
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let envelope: DocumentEnvelope = serde_json::from_str(text).map_err(malformed)?;
    envelope.into_document()
}

/// Indented JSON with each matrix row on a single line.
pub fn to_json(doc: &Document) -> String {
    let value =
        serde_json::to_value(DocumentEnvelope::from_document(doc)).expect("envelopes serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out
}

fn is_row(v: &serde_json::Value) -> bool {
    v.as_array().is_some_and(|items| {
        items.iter().all(|x| {
            x.is_number()
                || x.as_array()
                    .is_some_and(|p| p.iter().all(|y| y.is_number()))
        })
    })
}

fn write_value(v: &serde_json::Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        serde_json::Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&format!(
                    "{}{}: ",
                    pad(depth + 1),
                    serde_json::Value::String(k.clone())
                ));
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}}}", pad(depth)));
        }
        serde_json::Value::Array(items) if !items.is_empty() && !is_row(v) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}]", pad(depth)));
        }
        _ => out.push_str(&serde_json::to_string(v).expect("json values serialize")),
    }
}

pub fn read_document(path: impl AsRef<Path>) -> Result<Document> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_document(&text)
}

fn wrong_kind(expected: &str, doc: &Document) -> Error {
    Error::WrongKind {
        expected: expected.to_string(),
        found: doc.kind().to_string(),
    }
}

pub fn read_state(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    match read_document(path)? {
        Document::State(rho) => Ok(rho),
        other => Err(wrong_kind("state", &other)),
    }
}

pub fn read_unitary(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    match read_document(path)? {
        Document::Unitary(u) => Ok(u),
        other => Err(wrong_kind("unitary", &other)),
    }
}

/// Either gluing kind.
pub fn read_gluing(path: impl AsRef<Path>) -> Result<Document> {
    match read_document(path)? {
        doc @ (Document::GluingLsp(_) | Document::GluingSp(_)) => Ok(doc),
        other => Err(wrong_kind("gluing_lsp or gluing_sp", &other)),
    }
}
