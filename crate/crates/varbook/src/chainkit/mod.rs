//! Chain complexes of finitely generated free abelian groups, chain maps,
//! and their homology.
//!
//! Everything here is exact: boundaries are integer matrices, homology
//! groups come out as [`crate::abgroup::FgAbelianGroup`] values with
//! certified generators, and chain maps induce honest group homomorphisms
//! between them. The [`HomologyBasis`] type is the workhorse: it fixes a
//! deterministic generating set for one homology group and converts between
//! chains and homology coordinates in both directions.

mod complex;
mod homology;
mod maps;

pub use complex::{ChainComplex, SubcomplexPair};
pub use homology::{cohomology, homology, homology_all, HomologyBasis};
pub use maps::{induced_hom, mapping_cone, quotient_projection, relative_homology, ChainMap};
