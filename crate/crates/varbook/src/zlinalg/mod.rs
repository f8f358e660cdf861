//! Exact integer linear algebra: matrices, Smith normal form with
//! unimodular certificates, kernels, integer solving, cokernels.
//!
//! Every answer that downstream code consumes is certified: the Smith form
//! carries `U`, `V` and their inverses so that `U * A * V = D` can be (and
//! in tests, is) re-checked by multiplication, kernels come out saturated,
//! and cokernel presentations are normalised through the same machinery.

mod matrix;
mod snf;

pub use matrix::IntMatrix;
pub use snf::{
    invert_unimodular, is_unimodular, kernel_basis, smith_normal_form, solve, SmithForm,
};

use num_traits::One;

use crate::abgroup::FgAbelianGroup;

/// Cokernel `Z^rows / im(A)` as a finitely generated abelian group in
/// invariant-factor form. Trivial factors are dropped here; they survive in
/// the Smith form itself.
pub fn cokernel_presentation(a: &IntMatrix) -> FgAbelianGroup {
    let s = smith_normal_form(a);
    let torsion = s
        .invariant_factors
        .iter()
        .filter(|f| !f.is_one())
        .cloned()
        .collect();
    FgAbelianGroup::from_parts(a.rows() - s.rank, torsion)
        .expect("smith invariant factors form a divisibility chain")
}
