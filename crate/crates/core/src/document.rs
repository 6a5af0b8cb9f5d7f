//! JSON tuple documents.
//!
//! ```json
//! {"size": 3, "matrices": [
//!   [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
//!   [[0, "1/2", 0], [0, 0, 0], [0, 0, 0]]
//! ]}
//! ```
//!
//! Entries are JSON integers or strings holding an integer or `p/q`.
//! The canonical form writes integers that fit in `i64` as numbers and
//! everything else as lowest-terms `p/q` strings, one matrix per line.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SmallMatrix;
use crate::scalar::{self, Scalar};
use crate::tuple::NilTuple;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    pub fn from_scalar(x: &Scalar) -> Entry {
        if x.is_integer() {
            if let Some(v) = x.numer().to_i64() {
                return Entry::Int(v);
            }
        }
        Entry::Text(scalar::format(x))
    }

    pub fn to_scalar(&self) -> Result<Scalar> {
        match self {
            Entry::Int(v) => Ok(scalar::int(*v)),
            Entry::Text(s) => scalar::parse(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDocument {
    pub size: usize,
    pub matrices: Vec<Vec<Vec<Entry>>>,
}

impl TupleDocument {
    pub fn from_tuple(t: &NilTuple) -> Self {
        TupleDocument {
            size: t.size(),
            matrices: t
                .mats()
                .iter()
                .map(|m| {
                    m.rows()
                        .iter()
                        .map(|r| r.iter().map(Entry::from_scalar).collect())
                        .collect()
                })
                .collect(),
        }
    }

    /// Matrices without the nilpotency check.
    pub fn to_matrices(&self) -> Result<Vec<SmallMatrix>> {
        if self.size != 2 && self.size != 3 {
            return Err(Error::UnsupportedSize(self.size));
        }
        self.matrices
            .iter()
            .enumerate()
            .map(|(i, grid)| {
                let shape_ok = grid.len() == self.size && grid.iter().all(|r| r.len() == self.size);
                if !shape_ok {
                    return Err(Error::Parse(format!(
                        "matrix {} is not {}x{}",
                        i + 1,
                        self.size,
                        self.size
                    )));
                }
                let entries = grid
                    .iter()
                    .flatten()
                    .map(Entry::to_scalar)
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::Parse(format!("matrix {}: {e}", i + 1)))?;
                SmallMatrix::new(self.size, entries)
            })
            .collect()
    }

    pub fn to_tuple(&self) -> Result<NilTuple> {
        NilTuple::new(self.size, self.to_matrices()?)
    }

    /// Canonical text: compact JSON with one matrix per line.
    pub fn render(&self) -> String {
        let mats: Vec<String> = self
            .matrices
            .iter()
            .map(|m| format!("  {}", serde_json::to_string(m).expect("plain data")))
            .collect();
        format!(
            "{{\"size\": {}, \"matrices\": [\n{}\n]}}\n",
            self.size,
            mats.join(",\n")
        )
    }
}

pub fn parse_document(text: &str) -> Result<TupleDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses and validates a document into a tuple of nilpotent matrices.
pub fn parse_tuple(text: &str) -> Result<NilTuple> {
    parse_document(text)?.to_tuple()
}

pub fn render_tuple(t: &NilTuple) -> String {
    TupleDocument::from_tuple(t).render()
}

/// Serializes a tuple as its document.
pub fn ser_tuple<S: serde::Serializer>(t: &NilTuple, s: S) -> std::result::Result<S::Ok, S::Error> {
    TupleDocument::from_tuple(t).serialize(s)
}
