use num_bigint::BigInt;

use super::{ChainComplex, HomologyBasis, SubcomplexPair};
use crate::abgroup::{FgAbelianGroup, GroupHom};
use crate::zlinalg::IntMatrix;
use crate::{Error, Result};

/// Degreewise map of chain complexes, `components[i]: C_i(source) → C_i(target)`,
/// commuting with the boundaries. Commutativity is checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: Vec<IntMatrix>,
}

impl ChainMap {
    /// One component per stored source degree; the target may be shorter or
    /// longer, out-of-range target degrees are zero modules.
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: Vec<IntMatrix>,
    ) -> Result<Self> {
        if components.len() != source.ranks().len() {
            return Err(Error::InvalidChainMap(format!(
                "{} components for a source with {} degrees",
                components.len(),
                source.ranks().len()
            )));
        }
        for (i, f) in components.iter().enumerate() {
            if f.rows() != target.rank(i) || f.cols() != source.rank(i) {
                return Err(Error::InvalidChainMap(format!(
                    "component {} must be {}x{}, got {}x{}",
                    i,
                    target.rank(i),
                    source.rank(i),
                    f.rows(),
                    f.cols()
                )));
            }
        }
        for i in 1..components.len() {
            let left = target.boundary(i).try_mul(&components[i])?;
            let right = components[i - 1].try_mul(&source.boundary(i))?;
            if left != right {
                return Err(Error::InvalidChainMap(format!(
                    "square at degree {} does not commute with the boundaries",
                    i
                )));
            }
        }
        Ok(ChainMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(complex: &ChainComplex) -> Self {
        let components = complex
            .ranks()
            .iter()
            .map(|&r| IntMatrix::identity(r))
            .collect();
        ChainMap {
            source: complex.clone(),
            target: complex.clone(),
            components,
        }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn components(&self) -> &[IntMatrix] {
        &self.components
    }

    /// Component in degree `i`, zero-shaped outside the stored range.
    pub fn component(&self, i: usize) -> IntMatrix {
        match self.components.get(i) {
            Some(m) => m.clone(),
            None => IntMatrix::zero(self.target.rank(i), self.source.rank(i)),
        }
    }

    pub fn apply(&self, i: usize, chain: &[BigInt]) -> Result<Vec<BigInt>> {
        self.component(i).mul_vec(chain)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap> {
        if inner.target != self.source {
            return Err(Error::InvalidChainMap(
                "cannot compose: inner target differs from outer source".into(),
            ));
        }
        let components = (0..inner.source.ranks().len())
            .map(|i| self.component(i).try_mul(&inner.component(i)))
            .collect::<Result<_>>()?;
        ChainMap::new(inner.source.clone(), self.target.clone(), components)
    }

    /// Degreewise sum; only defined for maps with equal source and target.
    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::InvalidChainMap(
                "cannot add maps with different endpoints".into(),
            ));
        }
        let components = (0..self.components.len())
            .map(|i| self.components[i].try_add(&other.components[i]))
            .collect::<Result<_>>()?;
        ChainMap::new(self.source.clone(), self.target.clone(), components)
    }

    pub fn is_identity_map(&self) -> bool {
        self.source == self.target && self.components.iter().all(|m| m.is_identity())
    }

    /// Induced map on homology in one degree, with eagerly validated
    /// well-definedness. Representing cycles of the source generators are
    /// pushed through the chain map and read off in the target basis.
    pub fn induced(&self, degree: usize) -> Result<GroupHom> {
        let top = self.source.top_degree().max(self.target.top_degree());
        if degree as isize > top {
            return Err(Error::DegreeOutOfRange { degree, top });
        }
        let src = HomologyBasis::new(&self.source, degree)?;
        let tgt = HomologyBasis::new(&self.target, degree)?;
        let n = src.group().generator_count();
        let mut matrix = IntMatrix::zero(tgt.group().generator_count(), n);
        for j in 0..n {
            let image = self.apply(degree, &src.representative(j))?;
            let class = tgt.class_of(&image).map_err(|e| {
                Error::Internal(format!(
                    "image of a cycle under a chain map is not a cycle in degree {}: {}",
                    degree, e
                ))
            })?;
            matrix.set_col(j, &class);
        }
        GroupHom::new(src.group().clone(), tgt.group().clone(), matrix)
    }

    /// Contravariantly induced map on cohomology in degree `i`: a hom
    /// `H^i(target) → H^i(source)`, computed on the transposed complexes.
    /// Requires source and target to store the same number of degrees so the
    /// flip aligns.
    pub fn induced_on_cohomology(&self, degree: usize) -> Result<GroupHom> {
        if self.source.ranks().len() != self.target.ranks().len() {
            return Err(Error::InvalidChainMap(
                "cohomology action needs complexes of equal length".into(),
            ));
        }
        let n = self.source.ranks().len();
        if degree >= n {
            return Err(Error::DegreeOutOfRange {
                degree,
                top: n as isize - 1,
            });
        }
        let components = (0..n)
            .map(|j| self.component(n - 1 - j).transpose())
            .collect();
        let flipped = ChainMap::new(self.target.flip(), self.source.flip(), components)?;
        flipped.induced(n - 1 - degree)
    }
}

/// Induced homology map, free-function form.
pub fn induced_hom(f: &ChainMap, degree: usize) -> Result<GroupHom> {
    f.induced(degree)
}

/// Mapping cone of `f: S → T`:
///
/// ```text
///   Cone(f)_i = T_i ⊕ S_{i-1},   ∂ = [ ∂T   f  ]
///                                    [ 0   -∂S ]
/// ```
///
/// Its homology sits in the long exact sequence
/// `… → H_i(S) → H_i(T) → H_i(Cone) → H_{i-1}(S) → …`, which is what makes
/// it the right gluing model: the cone over an inclusion computes the
/// quotient, the cone over a quasi-isomorphism is exact.
pub fn mapping_cone(f: &ChainMap) -> ChainComplex {
    let len = (f.target().ranks().len()).max(f.source().ranks().len() + 1);
    let ranks: Vec<usize> = (0..len)
        .map(|i| f.target().rank(i) + if i == 0 { 0 } else { f.source().rank(i - 1) })
        .collect();
    let mut boundaries = Vec::new();
    for i in 1..len {
        let dt = f.target().boundary(i);
        let fs = f.component(i - 1);
        let ds = if i >= 2 {
            f.source().boundary(i - 1)
        } else {
            IntMatrix::zero(0, f.source().rank(0))
        };
        let top = dt.hstack(&fs).expect("cone blocks share row count");
        let bottom = IntMatrix::zero(ds.rows(), dt.cols())
            .hstack(&ds.neg())
            .expect("cone blocks share row count");
        boundaries.push(top.vstack(&bottom).expect("cone blocks share column count"));
    }
    ChainComplex::new(ranks, boundaries).expect("cone of a chain map is a complex")
}

/// `H_i(X, A)` computed on the explicit quotient complex of the pair.
pub fn relative_homology(pair: &SubcomplexPair, degree: usize) -> Result<FgAbelianGroup> {
    pair.ambient().degree_in_range(degree)?;
    super::homology(&pair.quotient_complex(), degree)
}

/// The chain map from the ambient complex of a pair onto its quotient
/// complex: kills marked cells, renumbers the rest.
pub fn quotient_projection(pair: &SubcomplexPair) -> Result<ChainMap> {
    let ambient = pair.ambient();
    let quotient = pair.quotient_complex();
    let comps = (0..ambient.ranks().len())
        .map(|i| {
            let interior = pair.complement_indices(i);
            IntMatrix::from_fn(interior.len(), ambient.rank(i), |r, c| {
                if interior[r] == c {
                    num_traits::One::one()
                } else {
                    num_traits::Zero::zero()
                }
            })
        })
        .collect();
    ChainMap::new(ambient.clone(), quotient, comps)
}
