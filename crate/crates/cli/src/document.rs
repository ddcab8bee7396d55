//! Input documents: channels, measurements and states.
//!
//! Square matrices are flat row-major lists of `[re, im]` pairs, `dim²`
//! entries long. See `docs/` for the JSON schemas.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use unital_core::linalg::{ComplexMatrix, C64};
use unital_core::{KrausChannel, Measurement, Povm, ProjectiveMeasurement, Tolerances};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1.0";

pub type Entry = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDocument {
    pub schema_version: String,
    pub dim: usize,
    pub kraus: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementKind {
    Povm,
    Projective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementDocument {
    pub schema_version: String,
    pub kind: MeasurementKind,
    pub dim: usize,
    pub elements: Vec<Vec<Entry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub schema_version: String,
    pub dim: usize,
    pub matrix: Vec<Entry>,
}

/// Row-major `[re, im]` list of a square matrix.
pub fn flatten(m: &ComplexMatrix) -> Vec<Entry> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

fn unflatten(
    entries: &[Entry],
    rows: usize,
    cols: usize,
    path: &str,
) -> Result<ComplexMatrix, CliError> {
    if entries.len() != rows * cols {
        return Err(CliError::parse(
            path,
            format!(
                "expected {} entries for a {rows}x{cols} matrix, found {}",
                rows * cols,
                entries.len()
            ),
        ));
    }
    if let Some(k) = entries
        .iter()
        .position(|e| !e[0].is_finite() || !e[1].is_finite())
    {
        return Err(CliError::parse(
            format!("{path}[{k}]"),
            "entry is not finite".to_string(),
        ));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
        let [re, im] = entries[i * cols + j];
        C64::new(re, im)
    }))
}

fn check_version(version: &str) -> Result<(), CliError> {
    if version != SCHEMA_VERSION {
        return Err(CliError::parse(
            "schema_version",
            format!("unsupported schema version {version:?}, expected {SCHEMA_VERSION:?}"),
        ));
    }
    Ok(())
}

fn check_dim(dim: usize) -> Result<(), CliError> {
    if dim == 0 {
        return Err(CliError::parse(
            "dim",
            "dimension must be positive".to_string(),
        ));
    }
    Ok(())
}

fn decode<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    Ok(value)
}

impl ChannelDocument {
    pub fn from_channel(ch: &KrausChannel, metadata: Option<Metadata>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            dim: ch.dim(),
            kraus: ch.kraus().iter().map(flatten).collect(),
            metadata,
        }
    }

    pub fn kraus_matrices(&self) -> Result<Vec<ComplexMatrix>, CliError> {
        check_version(&self.schema_version)?;
        check_dim(self.dim)?;
        if self.kraus.is_empty() {
            return Err(CliError::parse(
                "kraus",
                "at least one Kraus operator is required".to_string(),
            ));
        }
        self.kraus
            .iter()
            .enumerate()
            .map(|(k, entries)| unflatten(entries, self.dim, self.dim, &format!("kraus[{k}]")))
            .collect()
    }
}

/// Parses and validates a channel document.
pub fn parse_channel(bytes: &[u8], tol: &Tolerances) -> Result<KrausChannel, CliError> {
    let doc: ChannelDocument = decode(bytes)?;
    let kraus = doc.kraus_matrices()?;
    Ok(KrausChannel::new(kraus, tol)?)
}

pub fn parse_measurement(bytes: &[u8], tol: &Tolerances) -> Result<Measurement, CliError> {
    let doc: MeasurementDocument = decode(bytes)?;
    check_version(&doc.schema_version)?;
    check_dim(doc.dim)?;
    let elements = doc
        .elements
        .iter()
        .enumerate()
        .map(|(k, entries)| unflatten(entries, doc.dim, doc.dim, &format!("elements[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match doc.kind {
        MeasurementKind::Povm => Measurement::Povm(Povm::new(elements, tol)?),
        MeasurementKind::Projective => {
            Measurement::Projective(ProjectiveMeasurement::new(elements)?)
        }
    })
}

pub fn parse_state(bytes: &[u8]) -> Result<ComplexMatrix, CliError> {
    let doc: StateDocument = decode(bytes)?;
    check_version(&doc.schema_version)?;
    check_dim(doc.dim)?;
    unflatten(&doc.matrix, doc.dim, doc.dim, "matrix")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_is_row_major() {
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(2.0, 0.5),
                C64::new(3.0, 0.0),
                C64::new(4.0, -1.0),
            ],
        );
        assert_eq!(
            flatten(&m),
            vec![[1.0, 0.0], [2.0, 0.5], [3.0, 0.0], [4.0, -1.0]]
        );
        assert_eq!(unflatten(&flatten(&m), 2, 2, "m").unwrap(), m);
    }

    #[test]
    fn parse_errors_carry_location() {
        let text = "{\n  \"schema_version\": \"1.0\",\n  \"dim\": \"two\",\n  \"kraus\": []\n}";
        match parse_channel(text.as_bytes(), &Tolerances::default()) {
            Err(CliError::Parse { path, line, .. }) => {
                assert_eq!(path, "dim");
                assert_eq!(line, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = r#"{"schema_version":"1.0","dim":2,"kraus":[[[1,0],[0,0],[0,0]]]}"#;
        match parse_channel(text.as_bytes(), &Tolerances::default()) {
            Err(CliError::Parse { path, .. }) => assert_eq!(path, "kraus[0]"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
