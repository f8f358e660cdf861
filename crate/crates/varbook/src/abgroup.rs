//! Finitely generated abelian groups in invariant-factor form, and
//! homomorphisms between them presented by integer matrices on generators.
//!
//! A group is `Z^free_rank ⊕ Z/t_1 ⊕ … ⊕ Z/t_k` with `t_1 | t_2 | … | t_k`
//! and every `t_i ≥ 2`. The classification theorem makes this presentation
//! unique, so isomorphism is literal equality of the normal form. Generators
//! are always ordered free-first-then-torsion; every matrix in this module
//! acts on that generator order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::zlinalg::{self, IntMatrix};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    /// Builds a group whose torsion list is already a divisibility chain of
    /// entries `≥ 2`. Errors if the chain property fails.
    pub fn from_parts(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for t in &torsion {
            if *t < BigInt::from(2) {
                return Err(Error::InvalidGroup(format!(
                    "torsion coefficient {} is below 2; trivial factors must be dropped",
                    t
                )));
            }
        }
        for pair in torsion.windows(2) {
            if !(&pair[1] % &pair[0]).is_zero() {
                return Err(Error::InvalidGroup(format!(
                    "torsion coefficients {} and {} break the divisibility chain",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(FgAbelianGroup { free_rank, torsion })
    }

    /// Normalises an arbitrary list of cyclic orders into invariant-factor
    /// form: `0` means a free summand, `1` is dropped, coprime factors merge
    /// (`[2, 3]` becomes `[6]`). Negative coefficients are rejected.
    pub fn from_torsion_coefficients(free_rank: usize, coefficients: &[BigInt]) -> Result<Self> {
        let mut extra_free = 0;
        let mut finite: Vec<BigInt> = Vec::new();
        for c in coefficients {
            if c.is_negative() {
                return Err(Error::InvalidGroup(format!(
                    "negative torsion coefficient {}",
                    c
                )));
            }
            if c.is_zero() {
                extra_free += 1;
            } else {
                finite.push(c.clone());
            }
        }
        let n = finite.len();
        let diag = IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                finite[i].clone()
            } else {
                BigInt::zero()
            }
        });
        let normalised = zlinalg::cokernel_presentation(&diag);
        FgAbelianGroup::from_parts(
            free_rank + extra_free,
            normalised.torsion.clone(),
        )
    }

    /// Quotient `Z^generators / column span of relations`.
    pub fn from_presentation(generators: usize, relations: &IntMatrix) -> Result<Self> {
        if relations.rows() != generators {
            return Err(Error::DimensionMismatch(format!(
                "presentation with {} generators cannot take relations with {} rows",
                generators,
                relations.rows()
            )));
        }
        Ok(zlinalg::cokernel_presentation(relations))
    }

    pub fn trivial() -> Self {
        FgAbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        match order {
            0 => FgAbelianGroup::free(1),
            1 => FgAbelianGroup::trivial(),
            n => FgAbelianGroup {
                free_rank: 0,
                torsion: vec![BigInt::from(n)],
            },
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Torsion coefficients as machine integers, for compact assertions.
    /// Panics if a coefficient overflows `i64`.
    pub fn torsion_i64(&self) -> Vec<i64> {
        self.torsion
            .iter()
            .map(|t| i64::try_from(t).expect("torsion coefficient exceeds i64"))
            .collect()
    }

    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Order of generator `j` in the free-then-torsion ordering; `None`
    /// means infinite order.
    pub fn generator_order(&self, j: usize) -> Option<&BigInt> {
        if j < self.free_rank {
            None
        } else {
            Some(&self.torsion[j - self.free_rank])
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Columns generate the relation lattice in generator coordinates:
    /// `t_i * e_{free_rank + i}` for each torsion generator.
    pub fn relation_lattice(&self) -> IntMatrix {
        let n = self.generator_count();
        let k = self.torsion.len();
        IntMatrix::from_fn(n, k, |i, j| {
            if i == self.free_rank + j {
                self.torsion[j].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Canonically reduces a coordinate vector: free coordinates untouched,
    /// torsion coordinate `i` reduced into `[0, t_i)`.
    pub fn reduce(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        if coords.len() != self.generator_count() {
            return Err(Error::DimensionMismatch(format!(
                "coordinate vector of length {} for group with {} generators",
                coords.len(),
                self.generator_count()
            )));
        }
        let mut out = coords.to_vec();
        for (i, t) in self.torsion.iter().enumerate() {
            out[self.free_rank + i] = out[self.free_rank + i].mod_floor(t);
        }
        Ok(out)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// True iff the two groups are isomorphic. Invariant factors classify, so
/// this is equality of normal forms.
pub fn groups_isomorphic(a: &FgAbelianGroup, b: &FgAbelianGroup) -> bool {
    a == b
}

/// Homomorphism between finitely generated abelian groups, presented by a
/// matrix on the chosen generators (columns = images of domain generators).
///
/// Construction eagerly checks well-definedness: for every domain generator
/// of finite order `t`, the matrix column scaled by `t` must fall in the
/// codomain's relation lattice. Silent ill-definedness would poison every
/// downstream cokernel, so this is rejected at the door.
#[derive(Clone, Debug)]
pub struct GroupHom {
    domain: FgAbelianGroup,
    codomain: FgAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(
        domain: FgAbelianGroup,
        codomain: FgAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self> {
        if matrix.rows() != codomain.generator_count() || matrix.cols() != domain.generator_count()
        {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.generator_count(),
                domain.generator_count()
            )));
        }
        let lattice = codomain.relation_lattice();
        for j in 0..domain.generator_count() {
            let Some(order) = domain.generator_order(j) else {
                continue;
            };
            let scaled: Vec<BigInt> = matrix.col(j).iter().map(|x| x * order).collect();
            if zlinalg::solve(&lattice, &scaled)?.is_none() {
                return Err(Error::IllDefinedHom(format!(
                    "generator {} has order {} but {} times its image is not a relation",
                    j, order, order
                )));
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(group: &FgAbelianGroup) -> Self {
        GroupHom {
            domain: group.clone(),
            codomain: group.clone(),
            matrix: IntMatrix::identity(group.generator_count()),
        }
    }

    pub fn zero(domain: &FgAbelianGroup, codomain: &FgAbelianGroup) -> Self {
        GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: IntMatrix::zero(codomain.generator_count(), domain.generator_count()),
        }
    }

    pub fn domain(&self) -> &FgAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Matrix with every torsion row canonically reduced; two equal homs
    /// have identical canonical matrices.
    pub fn canonical_matrix(&self) -> IntMatrix {
        let mut m = self.matrix.clone();
        for j in 0..m.cols() {
            let reduced = self
                .codomain
                .reduce(&m.col(j))
                .expect("column length matches codomain");
            m.set_col(j, &reduced);
        }
        m
    }

    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.codomain != self.domain {
            return Err(Error::GroupMismatch(format!(
                "cannot compose: inner codomain {} does not match outer domain {}",
                inner.codomain, self.domain
            )));
        }
        GroupHom::new(
            inner.domain.clone(),
            self.codomain.clone(),
            self.matrix.try_mul(&inner.matrix)?,
        )
    }

    /// Pointwise sum; requires matching domain and codomain.
    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::GroupMismatch(format!(
                "cannot add homs {} -> {} and {} -> {}",
                self.domain, self.codomain, other.domain, other.codomain
            )));
        }
        GroupHom::new(
            self.domain.clone(),
            self.codomain.clone(),
            self.matrix.try_add(&other.matrix)?,
        )
    }

    /// Equality as homomorphisms: same domain and codomain, and matrices
    /// congruent modulo the codomain's relations.
    pub fn equals(&self, other: &GroupHom) -> bool {
        if self.domain != other.domain || self.codomain != other.codomain {
            return false;
        }
        self.canonical_matrix() == other.canonical_matrix()
    }

    /// True iff this is an endomorphism acting as the identity. Asking the
    /// question across two different groups is a structural error rather
    /// than `false`: it always indicates a caller bug.
    pub fn is_identity(&self) -> Result<bool> {
        if self.domain != self.codomain {
            return Err(Error::GroupMismatch(format!(
                "identity test needs an endomorphism, got {} -> {}",
                self.domain, self.codomain
            )));
        }
        Ok(self.equals(&GroupHom::identity(&self.domain)))
    }

    pub fn is_zero(&self) -> bool {
        self.equals(&GroupHom::zero(&self.domain, &self.codomain))
    }

    /// Cokernel `codomain / im(self)`: quotient by the image columns
    /// together with the codomain's own relations.
    pub fn cokernel(&self) -> Result<FgAbelianGroup> {
        let rels = self.matrix.hstack(&self.codomain.relation_lattice())?;
        FgAbelianGroup::from_presentation(self.codomain.generator_count(), &rels)
    }

    /// Applies the hom to a coordinate vector of the domain, returning
    /// canonical codomain coordinates.
    pub fn apply(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        self.codomain.reduce(&self.matrix.mul_vec(coords)?)
    }
}
