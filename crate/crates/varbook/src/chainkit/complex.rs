use num_bigint::BigInt;
use num_traits::Zero;

use crate::zlinalg::IntMatrix;
use crate::{Error, Result};

/// Bounded chain complex of finitely generated free abelian groups,
///
/// ```text
///   0 <- C_0 <- C_1 <- ... <- C_top <- 0
/// ```
///
/// `ranks[i]` is the rank of `C_i`; `boundaries[i]` is `∂_{i+1}: C_{i+1} → C_i`.
/// `∂∘∂ = 0` is checked at construction, never assumed. An empty rank list is
/// the zero complex; individual degrees of rank zero are routine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        let expected = ranks.len().saturating_sub(1);
        if boundaries.len() != expected {
            return Err(Error::InvalidComplex(format!(
                "{} degrees need {} boundary maps, got {}",
                ranks.len(),
                expected,
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != ranks[i] || b.cols() != ranks[i + 1] {
                return Err(Error::InvalidComplex(format!(
                    "boundary C_{} -> C_{} must be {}x{}, got {}x{}",
                    i + 1,
                    i,
                    ranks[i],
                    ranks[i + 1],
                    b.rows(),
                    b.cols()
                )));
            }
        }
        for i in 1..boundaries.len() {
            let square = boundaries[i - 1].try_mul(&boundaries[i])?;
            if !square.is_zero() {
                return Err(Error::InvalidComplex(format!(
                    "boundary squared is nonzero from degree {}",
                    i + 1
                )));
            }
        }
        Ok(ChainComplex { ranks, boundaries })
    }

    /// Complex with a single free module in one degree and zero maps.
    pub fn concentrated(degree: usize, rank: usize) -> Self {
        let mut ranks = vec![0; degree + 1];
        ranks[degree] = rank;
        let boundaries = (0..degree)
            .map(|i| IntMatrix::zero(ranks[i], ranks[i + 1]))
            .collect();
        ChainComplex { ranks, boundaries }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.boundaries
    }

    /// Rank of `C_i`, zero outside the stored range.
    pub fn rank(&self, i: usize) -> usize {
        self.ranks.get(i).copied().unwrap_or(0)
    }

    /// Top stored degree; `-1` for the zero complex.
    pub fn top_degree(&self) -> isize {
        self.ranks.len() as isize - 1
    }

    /// `∂_i : C_i → C_{i-1}` for any `i ≥ 0`, with zero modules (and hence
    /// zero-shaped matrices) outside the stored range. `∂_0` maps into the
    /// zero module.
    pub fn boundary(&self, i: usize) -> IntMatrix {
        if i == 0 {
            return IntMatrix::zero(0, self.rank(0));
        }
        match self.boundaries.get(i - 1) {
            Some(b) => b.clone(),
            None => IntMatrix::zero(self.rank(i - 1), self.rank(i)),
        }
    }

    pub fn degree_in_range(&self, i: usize) -> Result<()> {
        if (i as isize) > self.top_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: i,
                top: self.top_degree(),
            });
        }
        Ok(())
    }

    /// Alternating sum of ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| if i % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Degreewise direct sum. Complexes of different lengths are padded with
    /// zero modules.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let len = self.ranks.len().max(other.ranks.len());
        let ranks: Vec<usize> = (0..len).map(|i| self.rank(i) + other.rank(i)).collect();
        let boundaries = (1..len)
            .map(|i| self.boundary(i).block_diag(&other.boundary(i)))
            .collect();
        ChainComplex { ranks, boundaries }
    }

    /// Truncation to degrees `0..=k`: the k-skeleton of the underlying cell
    /// structure. Cycles in degree `k` survive untouched, while boundaries
    /// from degree `k+1` are forgotten, so `H_k` of the skeleton surjects
    /// onto `H_k` of the full complex.
    pub fn skeleton(&self, k: usize) -> ChainComplex {
        let len = self.ranks.len().min(k + 1);
        ChainComplex {
            ranks: self.ranks[..len].to_vec(),
            boundaries: self.boundaries[..len.saturating_sub(1)].to_vec(),
        }
    }

    /// The complex computing cohomology: degrees reversed and boundaries
    /// transposed, so `H^i(C) = H_{top-i}(C.flip())`.
    pub fn flip(&self) -> ChainComplex {
        let n = self.ranks.len();
        let ranks: Vec<usize> = self.ranks.iter().rev().copied().collect();
        let boundaries = (1..n)
            .map(|j| self.boundary(n - j).transpose())
            .collect();
        ChainComplex { ranks, boundaries }
    }

    /// Sanity accessor for tests: a zero chain vector in degree `i`.
    pub fn zero_chain(&self, i: usize) -> Vec<BigInt> {
        vec![BigInt::zero(); self.rank(i)]
    }
}

/// A closed subcomplex marked inside an ambient complex by basis indices.
///
/// Closedness (the boundary of every marked cell stays in marked cells) is
/// exactly what makes the complementary basis a quotient complex; it is
/// validated here with a witness on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcomplexPair {
    ambient: ChainComplex,
    sub_indices: Vec<Vec<usize>>,
}

impl SubcomplexPair {
    /// `sub_indices[i]` lists the marked basis elements of `C_i`, strictly
    /// increasing. A shorter list than the rank list is padded with empty
    /// degrees.
    pub fn new(ambient: ChainComplex, mut sub_indices: Vec<Vec<usize>>) -> Result<Self> {
        if sub_indices.len() > ambient.ranks().len() {
            return Err(Error::InvalidSubcomplex(format!(
                "sub indices given in {} degrees but the complex has {}",
                sub_indices.len(),
                ambient.ranks().len()
            )));
        }
        sub_indices.resize(ambient.ranks().len(), Vec::new());
        for (i, idx) in sub_indices.iter().enumerate() {
            for w in idx.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::InvalidSubcomplex(format!(
                        "degree {} indices are not strictly increasing",
                        i
                    )));
                }
            }
            if let Some(&last) = idx.last() {
                if last >= ambient.rank(i) {
                    return Err(Error::InvalidSubcomplex(format!(
                        "degree {} index {} out of range for rank {}",
                        i,
                        last,
                        ambient.rank(i)
                    )));
                }
            }
        }
        let pair = SubcomplexPair {
            ambient,
            sub_indices,
        };
        pair.check_closed()?;
        Ok(pair)
    }

    fn check_closed(&self) -> Result<()> {
        for i in 1..self.ambient.ranks().len() {
            let b = self.ambient.boundary(i);
            for &j in &self.sub_indices[i] {
                for r in 0..b.rows() {
                    if !b[(r, j)].is_zero() && !self.sub_indices[i - 1].contains(&r) {
                        return Err(Error::InvalidSubcomplex(format!(
                            "cell {} of degree {} has boundary hitting unmarked cell {} of degree {}",
                            j,
                            i,
                            r,
                            i - 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> &ChainComplex {
        &self.ambient
    }

    pub fn sub_indices(&self) -> &[Vec<usize>] {
        &self.sub_indices
    }

    pub fn sub_rank(&self, i: usize) -> usize {
        self.sub_indices.get(i).map_or(0, |v| v.len())
    }

    pub fn is_sub_empty(&self) -> bool {
        self.sub_indices.iter().all(|v| v.is_empty())
    }

    /// Complement of the marked indices in degree `i`, increasing.
    pub fn complement_indices(&self, i: usize) -> Vec<usize> {
        let marked = &self.sub_indices[i];
        (0..self.ambient.rank(i))
            .filter(|j| !marked.contains(j))
            .collect()
    }

    /// The marked cells as a complex in their own right.
    pub fn sub_complex(&self) -> ChainComplex {
        let n = self.ambient.ranks().len();
        let ranks: Vec<usize> = (0..n).map(|i| self.sub_rank(i)).collect();
        let boundaries: Vec<IntMatrix> = (1..n)
            .map(|i| {
                self.ambient
                    .boundary(i)
                    .submatrix(&self.sub_indices[i - 1], &self.sub_indices[i])
            })
            .collect();
        ChainComplex { ranks, boundaries }
    }

    /// The quotient complex on the complementary cells: ambient boundaries
    /// with marked rows and columns deleted. Closedness of the marked part
    /// is what keeps this a complex.
    pub fn quotient_complex(&self) -> ChainComplex {
        let n = self.ambient.ranks().len();
        let comps: Vec<Vec<usize>> = (0..n).map(|i| self.complement_indices(i)).collect();
        let ranks: Vec<usize> = comps.iter().map(|c| c.len()).collect();
        let boundaries: Vec<IntMatrix> = (1..n)
            .map(|i| self.ambient.boundary(i).submatrix(&comps[i - 1], &comps[i]))
            .collect();
        ChainComplex { ranks, boundaries }
    }

    /// Ambient coordinates of a chain given on the quotient basis, putting
    /// zero on every marked cell. This is the canonical lift of a relative
    /// chain.
    pub fn lift_quotient_chain(&self, i: usize, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        let comp = self.complement_indices(i);
        if coords.len() != comp.len() {
            return Err(Error::DimensionMismatch(format!(
                "quotient chain in degree {} has {} cells, got {}",
                i,
                comp.len(),
                coords.len()
            )));
        }
        let mut out = vec![BigInt::zero(); self.ambient.rank(i)];
        for (k, &j) in comp.iter().enumerate() {
            out[j] = coords[k].clone();
        }
        Ok(out)
    }

    /// Quotient coordinates of an ambient chain (marked cells forgotten).
    pub fn project_to_quotient(&self, i: usize, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        if coords.len() != self.ambient.rank(i) {
            return Err(Error::DimensionMismatch(format!(
                "ambient chain in degree {} has {} cells, got {}",
                i,
                self.ambient.rank(i),
                coords.len()
            )));
        }
        Ok(self
            .complement_indices(i)
            .iter()
            .map(|&j| coords[j].clone())
            .collect())
    }

    /// True iff the ambient chain is supported on marked cells.
    pub fn chain_in_sub(&self, i: usize, coords: &[BigInt]) -> bool {
        coords
            .iter()
            .enumerate()
            .all(|(j, c)| c.is_zero() || self.sub_indices[i].contains(&j))
    }
}
