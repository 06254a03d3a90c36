//! Space/instance documents.
//!
//! ```json
//! {
//!   "points": ["1", "2"],
//!   "m": [[0, "1/2"], ["1/2", 1]],
//!   "phi": {"1": 0, "2": "3/4"},
//!   "T": {"1": "1", "2": "1"},
//!   "variant": "m_weak"
//! }
//! ```
//!
//! Entries may be JSON numbers or strings; both are read exactly, so `0.1`
//! is `1/10`. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use mmetric::caristi::Variant;
use mmetric::rational::ParseRationalError;
use mmetric::{FiniteSpace, PointMap, Potential, Rational, SpaceError};
use serde::Deserialize;
use serde_json::value::RawValue;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed document at line {line}, column {column}: {message}")]
    MalformedDocument {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("bad rational at {location}: {source}")]
    RationalParseError {
        location: String,
        #[source]
        source: ParseRationalError,
    },
    #[error("{what} is missing point `{missing}`")]
    TotalityError { what: &'static str, missing: String },
    #[error("{0}")]
    UnknownVariant(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument<'a> {
    points: Vec<String>,
    #[serde(borrow)]
    m: Vec<Vec<&'a RawValue>>,
    #[serde(default, borrow)]
    phi: Option<BTreeMap<String, &'a RawValue>>,
    #[serde(default, rename = "T")]
    map_t: Option<BTreeMap<String, String>>,
    #[serde(default)]
    variant: Option<String>,
}

/// A parsed document: a valid space with optional potential, self map and
/// condition variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceDocument {
    pub space: FiniteSpace,
    pub phi: Option<Potential>,
    pub map_t: Option<PointMap>,
    pub variant: Option<Variant>,
}

fn rational(raw: &RawValue, location: impl FnOnce() -> String) -> Result<Rational, DocumentError> {
    let text = raw.get();
    let parsed = if text.starts_with('"') {
        let s: String = serde_json::from_str(text).expect("raw JSON string");
        s.parse()
    } else {
        text.parse()
    };
    parsed.map_err(|source| DocumentError::RationalParseError {
        location: location(),
        source,
    })
}

impl SpaceDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let raw: RawDocument =
            serde_json::from_str(text).map_err(|e| DocumentError::MalformedDocument {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        let table = raw
            .m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| rational(v, || format!("m[{i}][{j}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let space = FiniteSpace::new(raw.points, table)?;

        let phi = match raw.phi {
            None => None,
            Some(map) => {
                let mut values = Vec::with_capacity(space.len());
                for label in space.labels() {
                    let v = map.get(label).ok_or_else(|| DocumentError::TotalityError {
                        what: "phi",
                        missing: label.clone(),
                    })?;
                    values.push(rational(v, || format!("phi[{label}]"))?);
                }
                if let Some(extra) = map.keys().find(|k| space.index_of(k).is_err()) {
                    return Err(SpaceError::UnknownLabel(extra.clone()).into());
                }
                Some(Potential::from_values(&space, values)?)
            }
        };

        let map_t = match raw.map_t {
            None => None,
            Some(map) => {
                if let Some(missing) = space.labels().iter().find(|l| !map.contains_key(*l)) {
                    return Err(DocumentError::TotalityError {
                        what: "T",
                        missing: missing.clone(),
                    });
                }
                Some(PointMap::from_map(&space, &space, &map)?)
            }
        };

        let variant = raw
            .variant
            .map(|v| v.parse::<Variant>().map_err(DocumentError::UnknownVariant))
            .transpose()?;

        Ok(SpaceDocument {
            space,
            phi,
            map_t,
            variant,
        })
    }
}

/// Resolves `path`, trying `path.json` when `path` itself does not exist.
pub fn resolve(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_path_buf();
    }
    let mut with_ext = path.as_os_str().to_owned();
    with_ext.push(".json");
    let with_ext = PathBuf::from(with_ext);
    if with_ext.exists() {
        with_ext
    } else {
        path.to_path_buf()
    }
}

/// Reads a document, returning it with the bytes that were read.
pub fn parse_space_file(path: &Path) -> Result<(SpaceDocument, Vec<u8>), DocumentError> {
    let path = resolve(path);
    let bytes = fs::read(&path).map_err(|source| DocumentError::Io {
        path: path.clone(),
        source,
    })?;
    let text = String::from_utf8_lossy(&bytes);
    Ok((SpaceDocument::parse(&text)?, bytes))
}
