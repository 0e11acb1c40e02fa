//! JSON representation documents.
//!
//! ```json
//! {"genus": 0, "punctures": 2, "rank": 2,
//!  "A": [], "B": [],
//!  "C": [[["1","1"],["0","1"]], [["1","-1"],["0","1"]]]}
//! ```
//!
//! Entries are strings `"p/q"` or `"p/q+r/s i"`. `A[i]` and `B[i]` are the
//! handle pair `(A_{i+1}, B_{i+1})`. Parse errors carry the line and column
//! of the offending token, including ragged rows and bad scalar literals.

use std::fmt;
use std::path::Path;

use serde::de::{self, DeserializeSeed, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::monodromy::PuncturedSurfaceRep;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDocument {
    pub genus: usize,
    pub punctures: usize,
    pub rank: usize,
    #[serde(rename = "A", default)]
    pub a: Vec<MatrixDoc>,
    #[serde(rename = "B", default)]
    pub b: Vec<MatrixDoc>,
    #[serde(rename = "C")]
    pub c: Vec<MatrixDoc>,
}

/// A matrix whose rows are checked for equal length while parsing, so that a
/// malformed row is reported at its own position in the source.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDoc(pub Matrix);

impl Serialize for MatrixDoc {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatrixDoc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RowsVisitor;

        impl<'de> Visitor<'de> for RowsVisitor {
            type Value = MatrixDoc;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a matrix as an array of rows of scalar strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<MatrixDoc, A::Error> {
                let mut rows: Vec<Vec<Scalar>> = Vec::new();
                loop {
                    let seed = RowSeed {
                        index: rows.len() + 1,
                        expected: rows.first().map(Vec::len),
                    };
                    match seq.next_element_seed(seed)? {
                        Some(row) => rows.push(row),
                        None => break,
                    }
                }
                Matrix::from_rows(rows)
                    .map(MatrixDoc)
                    .ok_or_else(|| de::Error::custom("ragged matrix"))
            }
        }

        /// Reads one row and fails inside it, so the error points at the row.
        struct RowSeed {
            index: usize,
            expected: Option<usize>,
        }

        impl RowSeed {
            fn mismatch<E: de::Error>(&self, got: usize, expected: usize) -> E {
                E::custom(format!(
                    "malformed matrix row {}: {got} entries, expected {expected}",
                    self.index
                ))
            }
        }

        impl<'de> DeserializeSeed<'de> for RowSeed {
            type Value = Vec<Scalar>;

            fn deserialize<D: Deserializer<'de>>(self, deserializer: D) -> Result<Self::Value, D::Error> {
                deserializer.deserialize_seq(self)
            }
        }

        impl<'de> Visitor<'de> for RowSeed {
            type Value = Vec<Scalar>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a matrix row")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vec<Scalar>, A::Error> {
                let mut row = Vec::new();
                while let Some(x) = seq.next_element::<Scalar>()? {
                    row.push(x);
                    if let Some(expected) = self.expected {
                        if row.len() > expected {
                            return Err(self.mismatch(row.len(), expected));
                        }
                    }
                }
                match self.expected {
                    Some(expected) if row.len() != expected => Err(self.mismatch(row.len(), expected)),
                    _ => Ok(row),
                }
            }
        }

        deserializer.deserialize_seq(RowsVisitor)
    }
}

impl RepDocument {
    pub fn from_rep(rep: &PuncturedSurfaceRep) -> Self {
        let wrap = |m: &Matrix| MatrixDoc(m.clone());
        Self {
            genus: rep.genus(),
            punctures: rep.punctures(),
            rank: rep.rank(),
            a: (0..rep.genus()).map(|i| wrap(rep.a(i))).collect(),
            b: (0..rep.genus()).map(|i| wrap(rep.b(i))).collect(),
            c: rep.cusp_matrices().iter().map(wrap).collect(),
        }
    }

    pub fn into_rep(self) -> Result<PuncturedSurfaceRep> {
        if self.a.len() != self.genus || self.b.len() != self.genus {
            return Err(Error::Structure(format!(
                "genus {} needs {} A and B matrices, got {} and {}",
                self.genus,
                self.genus,
                self.a.len(),
                self.b.len()
            )));
        }
        let handle_pairs = self.a.into_iter().zip(self.b).flat_map(|(a, b)| [a.0, b.0]).collect();
        PuncturedSurfaceRep::new(
            self.genus,
            self.punctures,
            self.rank,
            handle_pairs,
            self.c.into_iter().map(|m| m.0).collect(),
        )
    }
}

pub fn parse_rep(text: &str) -> Result<PuncturedSurfaceRep> {
    let doc: RepDocument = serde_json::from_str(text)?;
    doc.into_rep()
}

pub fn read_rep(path: impl AsRef<Path>) -> Result<PuncturedSurfaceRep> {
    parse_rep(&std::fs::read_to_string(path)?)
}

pub fn rep_to_json(rep: &PuncturedSurfaceRep) -> String {
    serde_json::to_string_pretty(&RepDocument::from_rep(rep)).expect("documents serialize")
}
