//! Exact integral homology for open books presented by chain data.
//!
//! An open book here is a compact page `W` given as a cellular chain complex,
//! a marked boundary subcomplex modelling `∂W`, and a monodromy: a chain
//! self-map of the page restricting to the identity on the boundary
//! subcomplex. The closed manifold `M` bound by the open book is modelled by
//! gluing two copies of `W × I` along the double `DW = W ∪_∂W W`, and its
//! homology is computed two independent ways:
//!
//! * through the variation map `H_q(W, ∂W) → H_q(W)`, `[c] ↦ [f(c) − c]`,
//!   whose cokernel is the middle homology of `M`;
//! * through the glued twisted-double complex, a mapping cone built from the
//!   double and the extended monodromy.
//!
//! Everything is exact: matrices carry arbitrary-precision integers, Smith
//! normal forms come with unimodular change-of-basis certificates, and the
//! two computation paths are cross-checked wherever both apply.
//!
//! Modules:
//! * [`zlinalg`]: integer matrices, certified Smith normal form, kernels.
//! * [`abgroup`]: finitely generated abelian groups in invariant-factor form.
//! * [`chainkit`]: chain complexes, homology with chosen cycle bases,
//!   relative homology, mapping cones.
//! * [`openbook`]: pages, monodromies, doubles, variation, glued complexes.
//! * [`obstruct`]: torsion obstructions to flexible pages and loop detection
//!   in the space of contact structures.

pub mod abgroup;
pub mod chainkit;
mod error;
pub mod json;
pub mod obstruct;
pub mod openbook;
pub mod zlinalg;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
