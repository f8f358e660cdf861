use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ChainComplex;
use crate::abgroup::FgAbelianGroup;
use crate::zlinalg::{smith_normal_form, IntMatrix, SmithForm};
use crate::{Error, Result};

/// Homology of one degree together with an explicit, deterministic basis:
/// representing cycles for every generator and coordinates for every cycle.
///
/// The construction is two Smith forms. The first diagonalises `∂_i`; its
/// trailing `V`-columns are a saturated basis `K` of the cycle lattice. The
/// second diagonalises the matrix `X` expressing the columns of `∂_{i+1}`
/// in `K`-coordinates; its `U` puts the quotient `Z^z / im X` in invariant
/// factor form. Generators are ordered free-first-then-torsion to match the
/// group convention. Both Smith forms use lexicographically tie-broken
/// pivoting, so identical inputs give identical bases.
pub struct HomologyBasis {
    group: FgAbelianGroup,
    ambient_rank: usize,
    kernel: IntMatrix,
    snf_boundary: SmithForm,
    snf_relations: SmithForm,
    gen_rows: Vec<usize>,
}

impl HomologyBasis {
    /// Degrees beyond the top of the complex yield the trivial group with an
    /// empty basis; range policing is left to the public entry points.
    pub fn new(complex: &ChainComplex, degree: usize) -> Result<Self> {
        let d_i = complex.boundary(degree);
        let d_next = complex.boundary(degree + 1);
        let ambient_rank = complex.rank(degree);

        let snf_boundary = smith_normal_form(&d_i);
        let z = ambient_rank - snf_boundary.rank;
        let all_rows: Vec<usize> = (0..ambient_rank).collect();
        let kernel_cols: Vec<usize> = (snf_boundary.rank..ambient_rank).collect();
        let kernel = snf_boundary.v.submatrix(&all_rows, &kernel_cols);

        // Columns of ∂_{i+1} are cycles; rewrite them in kernel coordinates.
        let mut x = IntMatrix::zero(z, d_next.cols());
        for j in 0..d_next.cols() {
            let w = cycle_to_kernel_coords(&snf_boundary, z, &d_next.col(j)).map_err(|_| {
                Error::Internal(format!(
                    "boundary column {} in degree {} is not a cycle",
                    j,
                    degree + 1
                ))
            })?;
            x.set_col(j, &w);
        }

        let snf_relations = smith_normal_form(&x);
        let r = snf_relations.rank;

        let mut torsion = Vec::new();
        let mut torsion_rows = Vec::new();
        for (idx, f) in snf_relations.invariant_factors.iter().enumerate() {
            if !f.is_one() {
                torsion.push(f.clone());
                torsion_rows.push(idx);
            }
        }
        let mut gen_rows: Vec<usize> = (r..z).collect();
        gen_rows.extend(torsion_rows);

        let group = FgAbelianGroup::from_parts(z - r, torsion)?;
        Ok(HomologyBasis {
            group,
            ambient_rank,
            kernel,
            snf_boundary,
            snf_relations,
            gen_rows,
        })
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    /// Coordinates of a cycle in the generator basis, canonically reduced.
    /// A chain that is not a cycle is rejected with a witness.
    pub fn class_of(&self, chain: &[BigInt]) -> Result<Vec<BigInt>> {
        if chain.len() != self.ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "chain of length {} in a degree of rank {}",
                chain.len(),
                self.ambient_rank
            )));
        }
        let z = self.kernel.cols();
        let w = cycle_to_kernel_coords(&self.snf_boundary, z, chain)?;
        let y = self.snf_relations.u.mul_vec(&w)?;
        let coords: Vec<BigInt> = self.gen_rows.iter().map(|&row| y[row].clone()).collect();
        self.group.reduce(&coords)
    }

    /// A representing cycle for generator `j`, in ambient coordinates.
    pub fn representative(&self, j: usize) -> Vec<BigInt> {
        assert!(j < self.group.generator_count(), "generator out of range");
        let w = self.snf_relations.u_inv.col(self.gen_rows[j]);
        self.kernel
            .mul_vec(&w)
            .expect("kernel basis applies to relation coordinates")
    }

    /// Applies `class_of` to an integer combination given on the generator
    /// basis of this homology, i.e. a section of the quotient map.
    pub fn chain_for_class(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        if coords.len() != self.group.generator_count() {
            return Err(Error::DimensionMismatch(format!(
                "class vector of length {}, group has {} generators",
                coords.len(),
                self.group.generator_count()
            )));
        }
        let mut chain = vec![BigInt::zero(); self.ambient_rank];
        for (j, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (cell, r) in self.representative(j).into_iter().enumerate() {
                chain[cell] += c * r;
            }
        }
        Ok(chain)
    }
}

/// Coordinates of `chain` in the saturated kernel basis of the first Smith
/// form, or an error if the chain is not a cycle.
fn cycle_to_kernel_coords(
    snf_boundary: &SmithForm,
    kernel_dim: usize,
    chain: &[BigInt],
) -> Result<Vec<BigInt>> {
    let full = snf_boundary.v_inv.mul_vec(chain)?;
    let rank = full.len() - kernel_dim;
    for (i, c) in full.iter().take(rank).enumerate() {
        if !c.is_zero() {
            return Err(Error::NotACycle(format!(
                "nonzero coordinate {} outside the kernel lattice",
                i
            )));
        }
    }
    Ok(full[rank..].to_vec())
}

/// `H_i(C) = ker ∂_i / im ∂_{i+1}` in invariant-factor form.
pub fn homology(complex: &ChainComplex, degree: usize) -> Result<FgAbelianGroup> {
    complex.degree_in_range(degree)?;
    Ok(HomologyBasis::new(complex, degree)?.group().clone())
}

/// All homology groups `H_0 .. H_top`.
pub fn homology_all(complex: &ChainComplex) -> Result<Vec<FgAbelianGroup>> {
    (0..complex.ranks().len())
        .map(|i| homology(complex, i))
        .collect()
}

/// `H^i(C)`: homology of the transposed-boundary complex in the flipped
/// degree. Universal coefficients is deliberately not used here, so tests
/// can hold it up as an independent oracle.
pub fn cohomology(complex: &ChainComplex, degree: usize) -> Result<FgAbelianGroup> {
    complex.degree_in_range(degree)?;
    let top = complex.top_degree() as usize;
    homology(&complex.flip(), top - degree)
}
