use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;
use crate::{Error, Result};

/// Smith normal form `U * A * V = D` with unimodular certificates.
///
/// `D` is diagonal with nonnegative entries and each diagonal entry divides
/// the next. `invariant_factors` lists the positive diagonal entries of `D`,
/// including any factors equal to 1; converting to a group presentation is
/// where trivial factors get dropped. The inverse transforms are accumulated
/// during elimination so callers can move vectors between the original and
/// the diagonalised bases without re-running an elimination.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    /// Re-checks the whole certificate against the source matrix.
    pub fn verify(&self, a: &IntMatrix) -> Result<()> {
        let ua = self.u.try_mul(a)?;
        let uav = ua.try_mul(&self.v)?;
        if uav != self.d {
            return Err(Error::Internal("smith certificate: U*A*V != D".into()));
        }
        if !self.u.try_mul(&self.u_inv)?.is_identity() {
            return Err(Error::Internal("smith certificate: U*U^-1 != I".into()));
        }
        if !self.v.try_mul(&self.v_inv)?.is_identity() {
            return Err(Error::Internal("smith certificate: V*V^-1 != I".into()));
        }
        for i in 0..self.rank.saturating_sub(1) {
            let a = &self.d[(i, i)];
            let b = &self.d[(i + 1, i + 1)];
            if !b.is_zero() && !(b % a).is_zero() {
                return Err(Error::Internal(
                    "smith certificate: divisibility chain broken".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Elimination workspace keeping `b = u * a * v` as a loop invariant, with
/// `u_inv`, `v_inv` updated by the inverse of every elementary operation.
struct Workspace {
    b: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Workspace {
    fn new(a: &IntMatrix) -> Self {
        Workspace {
            b: a.clone(),
            u: IntMatrix::identity(a.rows()),
            u_inv: IntMatrix::identity(a.rows()),
            v: IntMatrix::identity(a.cols()),
            v_inv: IntMatrix::identity(a.cols()),
        }
    }

    fn swap_rows(&mut self, r: usize, s: usize) {
        if r == s {
            return;
        }
        for m in [&mut self.b, &mut self.u] {
            for j in 0..m.cols() {
                let x = m[(r, j)].clone();
                m[(r, j)] = m[(s, j)].clone();
                m[(s, j)] = x;
            }
        }
        for i in 0..self.u_inv.rows() {
            let x = self.u_inv[(i, r)].clone();
            self.u_inv[(i, r)] = self.u_inv[(i, s)].clone();
            self.u_inv[(i, s)] = x;
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for m in [&mut self.b, &mut self.u] {
            for j in 0..m.cols() {
                let t = q * &m[(src, j)];
                m[(dst, j)] += t;
            }
        }
        for i in 0..self.u_inv.rows() {
            let t = q * &self.u_inv[(i, dst)];
            self.u_inv[(i, src)] -= t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for m in [&mut self.b, &mut self.u] {
            for j in 0..m.cols() {
                let x = -m[(r, j)].clone();
                m[(r, j)] = x;
            }
        }
        for i in 0..self.u_inv.rows() {
            let x = -self.u_inv[(i, r)].clone();
            self.u_inv[(i, r)] = x;
        }
    }

    fn swap_cols(&mut self, c: usize, d: usize) {
        if c == d {
            return;
        }
        for m in [&mut self.b, &mut self.v] {
            for i in 0..m.rows() {
                let x = m[(i, c)].clone();
                m[(i, c)] = m[(i, d)].clone();
                m[(i, d)] = x;
            }
        }
        for j in 0..self.v_inv.cols() {
            let x = self.v_inv[(c, j)].clone();
            self.v_inv[(c, j)] = self.v_inv[(d, j)].clone();
            self.v_inv[(d, j)] = x;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for m in [&mut self.b, &mut self.v] {
            for i in 0..m.rows() {
                let t = q * &m[(i, src)];
                m[(i, dst)] += t;
            }
        }
        for j in 0..self.v_inv.cols() {
            let t = q * &self.v_inv[(dst, j)];
            self.v_inv[(src, j)] -= t;
        }
    }
}

/// Position of a nonzero entry of minimal absolute value in the trailing
/// submatrix starting at `(k, k)`, scanning rows then columns so ties break
/// to the lexicographically first position. Determinism of every downstream
/// basis choice hangs on this tie-break.
fn min_abs_pivot(b: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..b.rows() {
        for j in k..b.cols() {
            let e = &b[(i, j)];
            if e.is_zero() {
                continue;
            }
            match best {
                Some(p) if b[p].abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form by Euclidean elimination with min-abs pivoting.
///
/// Each outer step clears row and column `k` and only advances once the
/// pivot divides every entry of the trailing submatrix, which makes the
/// divisibility chain hold by construction.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut w = Workspace::new(a);
    let steps = a.rows().min(a.cols());
    let mut rank = 0;

    for k in 0..steps {
        let Some((pi, pj)) = min_abs_pivot(&w.b, k) else {
            break;
        };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);

        'reduce: loop {
            // Clear column k below the pivot.
            for i in k + 1..w.b.rows() {
                if !w.b[(i, k)].is_zero() {
                    let q = -(&w.b[(i, k)] / &w.b[(k, k)]);
                    w.add_row(i, k, &q);
                }
            }
            if let Some(i) = (k + 1..w.b.rows()).find(|&i| !w.b[(i, k)].is_zero()) {
                // A nonzero remainder is strictly smaller than the pivot;
                // promote it and run the reduction again.
                w.swap_rows(k, i);
                continue 'reduce;
            }

            // Clear row k to the right of the pivot.
            for j in k + 1..w.b.cols() {
                if !w.b[(k, j)].is_zero() {
                    let q = -(&w.b[(k, j)] / &w.b[(k, k)]);
                    w.add_col(j, k, &q);
                }
            }
            if let Some(j) = (k + 1..w.b.cols()).find(|&j| !w.b[(k, j)].is_zero()) {
                w.swap_cols(k, j);
                continue 'reduce;
            }

            // Fold any non-divisible trailing entry into row k and restart;
            // the pivot shrinks to a divisor of itself and the entry.
            for i in k + 1..w.b.rows() {
                for j in k + 1..w.b.cols() {
                    if !(&w.b[(i, j)] % &w.b[(k, k)]).is_zero() {
                        w.add_row(k, i, &BigInt::one());
                        continue 'reduce;
                    }
                }
            }
            break;
        }

        if w.b[(k, k)].is_negative() {
            w.negate_row(k);
        }
        rank = k + 1;
    }

    let invariant_factors = (0..rank).map(|i| w.b[(i, i)].clone()).collect();
    SmithForm {
        u: w.u,
        d: w.b,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
        rank,
        invariant_factors,
    }
}

/// Basis of the kernel lattice `{x : A x = 0}`, returned as matrix columns.
///
/// The basis is the trailing columns of the Smith certificate `V`, so it is
/// saturated: it extends to a basis of the ambient lattice, and any integer
/// vector killed by `A` is an integer combination of these columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    let cols: Vec<usize> = (s.rank..a.cols()).collect();
    let rows: Vec<usize> = (0..a.cols()).collect();
    s.v.submatrix(&rows, &cols)
}

/// One integer solution of `A x = b`, if any exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: matrix is {}x{}, rhs has length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b)?;
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < s.rank {
            let d = &s.d[(i, i)];
            let (q, r) = ubi.div_rem(d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(s.v.mul_vec(&y)?))
}

/// True iff `a` is square with determinant `±1`, i.e. invertible over the
/// integers. Decided through the Smith form: unimodular exactly when every
/// invariant factor is 1 and the rank is full.
pub fn is_unimodular(a: &IntMatrix) -> bool {
    if !a.is_square() {
        return false;
    }
    let s = smith_normal_form(a);
    s.rank == a.rows() && s.invariant_factors.iter().all(|f| f.is_one())
}

/// Exact inverse of a unimodular matrix; errors if `a` is not unimodular.
pub fn invert_unimodular(a: &IntMatrix) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let s = smith_normal_form(a);
    if s.rank != a.rows() || !s.invariant_factors.iter().all(|f| f.is_one()) {
        return Err(Error::InvalidGroup(format!(
            "matrix is not unimodular, invariant factors {:?}",
            s.invariant_factors
        )));
    }
    // U A V = I  =>  A^{-1} = V U.
    s.v.try_mul(&s.u)
}
