//! JSON wire formats shared between the library and the command line.
//!
//! Integers that may exceed machine width (matrix entries, torsion
//! coefficients) travel as decimal strings; plain JSON numbers are also
//! accepted on input for convenience, but floats are rejected. Every
//! conversion into a domain type revalidates through the type's own
//! constructor, so a wire value that parses can still be refused.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::abgroup::FgAbelianGroup;
use crate::chainkit::ChainComplex;
use crate::openbook::{variation_hom_from_matrix, Monodromy, PageData};
use crate::zlinalg::IntMatrix;
use crate::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

/// Arbitrary-precision integer carried as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntText(pub BigInt);

impl Serialize for IntText {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for IntText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct IntTextVisitor;

        impl Visitor<'_> for IntTextVisitor {
            type Value = IntText;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<IntText, E> {
                Ok(IntText(BigInt::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<IntText, E> {
                Ok(IntText(BigInt::from(v)))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<IntText, E> {
                Err(E::custom(format!(
                    "expected an integer, got the float {}",
                    v
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<IntText, E> {
                BigInt::from_str(v)
                    .map(IntText)
                    .map_err(|_| E::custom(format!("not a decimal integer: {:?}", v)))
            }
        }

        deserializer.deserialize_any(IntTextVisitor)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MatrixWire {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<IntText>>,
}

impl MatrixWire {
    pub fn from_matrix(m: &IntMatrix) -> Self {
        MatrixWire {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| IntText(m[(i, j)].clone())).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<IntMatrix> {
        if self.entries.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix declares {} rows but has {} entry rows",
                self.rows,
                self.entries.len()
            )));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.cols {
                return Err(Error::DimensionMismatch(format!(
                    "matrix declares {} cols but row {} has {} entries",
                    self.cols,
                    i,
                    row.len()
                )));
            }
        }
        Ok(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.entries[i][j].0.clone()
        }))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GroupWire {
    pub free_rank: usize,
    pub torsion: Vec<IntText>,
}

impl GroupWire {
    pub fn from_group(g: &FgAbelianGroup) -> Self {
        GroupWire {
            free_rank: g.free_rank(),
            torsion: g.torsion().iter().map(|t| IntText(t.clone())).collect(),
        }
    }

    pub fn to_group(&self) -> Result<FgAbelianGroup> {
        FgAbelianGroup::from_parts(
            self.free_rank,
            self.torsion.iter().map(|t| t.0.clone()).collect(),
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ComplexWire {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<MatrixWire>,
}

impl ComplexWire {
    pub fn from_complex(c: &ChainComplex) -> Self {
        ComplexWire {
            ranks: c.ranks().to_vec(),
            boundaries: c.boundaries().iter().map(MatrixWire::from_matrix).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<ChainComplex> {
        let boundaries = self
            .boundaries
            .iter()
            .map(|w| w.to_matrix())
            .collect::<Result<Vec<_>>>()?;
        ChainComplex::new(self.ranks.clone(), boundaries)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PageWire {
    pub complex: ComplexWire,
    pub sub_indices: Vec<Vec<usize>>,
    pub q: usize,
    pub weinstein_type: bool,
}

impl PageWire {
    pub fn from_page(p: &PageData) -> Self {
        PageWire {
            complex: ComplexWire::from_complex(p.complex()),
            sub_indices: p.boundary().sub_indices().to_vec(),
            q: p.q(),
            weinstein_type: p.weinstein_type(),
        }
    }

    pub fn to_page(&self) -> Result<PageData> {
        PageData::new(
            self.complex.to_complex()?,
            self.sub_indices.clone(),
            self.q,
            self.weinstein_type,
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MonodromyWire {
    ChainMap(Vec<MatrixWire>),
    VariationMatrix(MatrixWire),
}

/// A monodromy arrives either as a full chain map, which supports every
/// computation, or as a bare variation matrix in the canonical homology
/// bases, which only supports the variation-to-middle-homology route.
pub enum MonodromyInput {
    Map(Monodromy),
    Variation(crate::abgroup::GroupHom),
}

impl MonodromyWire {
    pub fn from_monodromy(m: &Monodromy) -> Self {
        MonodromyWire::ChainMap(
            m.map()
                .components()
                .iter()
                .map(MatrixWire::from_matrix)
                .collect(),
        )
    }

    pub fn to_input(&self, page: &PageData) -> Result<MonodromyInput> {
        match self {
            MonodromyWire::ChainMap(wires) => {
                let components = wires
                    .iter()
                    .map(|w| w.to_matrix())
                    .collect::<Result<Vec<_>>>()?;
                Ok(MonodromyInput::Map(Monodromy::from_components(
                    page, components,
                )?))
            }
            MonodromyWire::VariationMatrix(wire) => Ok(MonodromyInput::Variation(
                variation_hom_from_matrix(page, wire.to_matrix()?)?,
            )),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OpenBookWire {
    pub page: PageWire,
    pub monodromy: MonodromyWire,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct HypothesesWire {
    pub dim: usize,
    pub c1_vanishes_on_spheres: bool,
    pub page_flexible: bool,
}

impl HypothesesWire {
    pub fn to_hypotheses(&self) -> Result<crate::obstruct::Hypotheses> {
        crate::obstruct::Hypotheses::new(self.dim, self.c1_vanishes_on_spheres, self.page_flexible)
    }
}

/// Obstruction problems carry the hypotheses plus exactly one source of
/// middle homology: the group itself or a full open book to compute from.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ObstructionWire {
    pub hypotheses: HypothesesWire,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub middle_homology: Option<GroupWire>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub open_book: Option<OpenBookWire>,
}

impl ObstructionWire {
    pub fn check_one_source(&self) -> Result<()> {
        match (&self.middle_homology, &self.open_book) {
            (Some(_), Some(_)) => Err(Error::InvalidProblem(
                "give middle_homology or open_book, not both".into(),
            )),
            (None, None) => Err(Error::InvalidProblem(
                "give middle_homology or an open_book to compute it from".into(),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LoopWire {
    pub g: usize,
    pub q_odd: bool,
    pub automorphism: MatrixWire,
    pub formal_class_preserved: bool,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    ChainHomology,
    Double,
    OpenBook,
    Obstruction,
    Loop,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProblemKind::ChainHomology => "chain_homology",
            ProblemKind::Double => "double",
            ProblemKind::OpenBook => "open_book",
            ProblemKind::Obstruction => "obstruction",
            ProblemKind::Loop => "loop",
        };
        write!(f, "{}", s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: String,
    pub kind: ProblemKind,
    pub payload: serde_json::Value,
}

impl ProblemFile {
    pub fn check_version(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidProblem(format!(
                "unrecognized schema_version {:?}, this build reads {:?}",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        Ok(())
    }
}
