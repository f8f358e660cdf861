//! Univariate integer polynomials, enough for exact minimal-polynomial
//! and cyclotomic-factor computations: multiplication, division by monic
//! divisors, primitive-sequence gcd, and the cyclotomic family.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::zlinalg::{kernel_basis, IntMatrix};
use crate::{Error, Result};

/// Dense integer polynomial, coefficients lowest degree first, no trailing
/// zeros; the zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl std::fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{}", a)?,
                1 if a.is_one() => write!(f, "x")?,
                1 => write!(f, "{}x", a)?,
                _ if a.is_one() => write!(f, "x^{}", k)?,
                _ => write!(f, "{}x^{}", a, k)?,
            }
            first = false;
        }
        Ok(())
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] -= c;
        }
        IntPoly::new(out)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| -a).collect())
    }

    /// Quotient and remainder by a monic divisor; exact over the integers.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        if !divisor.is_monic() {
            return Err(Error::Internal(format!(
                "division needs a monic divisor, got {:?}",
                divisor
            )));
        }
        let d = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((IntPoly::zero(), IntPoly::new(rem)));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            quot[k - d] = c.clone();
            for (j, b) in divisor.coeffs.iter().enumerate() {
                let delta = &c * b;
                rem[k - d + j] -= delta;
            }
        }
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// True iff the monic `divisor` divides self exactly.
    pub fn divisible_by(&self, divisor: &IntPoly) -> Result<bool> {
        Ok(self.div_rem_monic(divisor)?.1.is_zero())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let c = self.content();
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Sign-normalized: positive leading coefficient.
    pub fn normalized(&self) -> IntPoly {
        match self.leading() {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    fn pseudo_rem(&self, other: &IntPoly) -> IntPoly {
        let lead = other.leading().expect("pseudo remainder by zero").clone();
        let d = other.coeffs.len() - 1;
        let mut r = self.clone();
        while r.coeffs.len() > d {
            let c = r.leading().unwrap().clone();
            let k = r.coeffs.len() - 1 - d;
            let mut scaled = r.scale(&lead);
            let mut shifted = vec![BigInt::zero(); k];
            shifted.extend(other.coeffs.iter().map(|b| b * &c));
            let sub = IntPoly::new(shifted);
            scaled = scaled.sub(&sub);
            debug_assert!(scaled.coeffs.len() < r.coeffs.len() + 1);
            if scaled.coeffs.len() >= r.coeffs.len() {
                panic!("pseudo remainder failed to reduce the degree");
            }
            r = scaled;
        }
        r
    }

    /// Greatest common divisor over Z, sign-normalized, computed with a
    /// primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let content = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.coeffs.len() < b.coeffs.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.normalized().scale(&content)
    }

    /// Least common multiple of two monic polynomials; monic.
    pub fn lcm_monic(&self, other: &IntPoly) -> Result<IntPoly> {
        if !self.is_monic() || !other.is_monic() {
            return Err(Error::Internal(
                "least common multiple expects monic polynomials".into(),
            ));
        }
        let g = self.gcd(other);
        let (q, r) = self.div_rem_monic(&g)?;
        if !r.is_zero() {
            return Err(Error::Internal(
                "gcd of monic polynomials failed to divide".into(),
            ));
        }
        Ok(q.mul(other))
    }

    /// Evaluates the polynomial at a square matrix by Horner's rule.
    pub fn apply_matrix(&self, a: &IntMatrix) -> Result<IntMatrix> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut acc = IntMatrix::zero(n, n);
        for c in self.coeffs.iter().rev() {
            acc = a.try_mul(&acc)?;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        Ok(acc)
    }

    fn apply_vector(&self, a: &IntMatrix, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let mut acc = vec![BigInt::zero(); v.len()];
        for c in self.coeffs.iter().rev() {
            acc = a.mul_vec(&acc)?;
            for (x, base) in acc.iter_mut().zip(v) {
                *x += c * base;
            }
        }
        Ok(acc)
    }
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn cyclotomic_cached(n: u64, cache: &mut HashMap<u64, IntPoly>) -> Result<IntPoly> {
    if let Some(p) = cache.get(&n) {
        return Ok(p.clone());
    }
    // x^n - 1 divided by the cyclotomic polynomials of all proper divisors.
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    coeffs[0] = -BigInt::one();
    coeffs[n as usize] = BigInt::one();
    let mut poly = IntPoly::new(coeffs);
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_cached(d, cache)?;
            let (q, r) = poly.div_rem_monic(&phi_d)?;
            if !r.is_zero() {
                return Err(Error::Internal(format!(
                    "cyclotomic recursion failed at index {}",
                    n
                )));
            }
            poly = q;
        }
    }
    cache.insert(n, poly.clone());
    Ok(poly)
}

/// The n-th cyclotomic polynomial, n ≥ 1.
pub fn cyclotomic(n: u64) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::Internal("cyclotomic index must be positive".into()));
    }
    cyclotomic_cached(n, &mut HashMap::new())
}

/// Exact minimal polynomial of a square integer matrix: the monic integer
/// polynomial of least degree annihilating it. Computed as the least
/// common multiple of the minimal annihilators of the basis vectors; each
/// of those is read off the rank-one kernel of the first linearly
/// dependent Krylov family, whose primitive generator is automatically
/// monic up to sign.
pub fn minimal_polynomial(a: &IntMatrix) -> Result<IntPoly> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut mu = IntPoly::one();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        if mu.apply_vector(a, &e)?.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut krylov: Vec<Vec<BigInt>> = vec![e.clone()];
        let local = loop {
            let last = krylov.last().unwrap();
            krylov.push(a.mul_vec(last)?);
            let m = krylov.len();
            let stacked = IntMatrix::from_fn(n, m, |r, c| krylov[c][r].clone());
            let kernel = kernel_basis(&stacked);
            if kernel.cols() == 0 {
                continue;
            }
            if kernel.cols() != 1 {
                return Err(Error::Internal(
                    "first dependent Krylov family must have a rank-one kernel".into(),
                ));
            }
            let mut coeffs = kernel.col(0);
            if coeffs[m - 1].is_zero() {
                return Err(Error::Internal(
                    "Krylov dependence must involve the newest vector".into(),
                ));
            }
            if coeffs[m - 1].is_negative() {
                for c in coeffs.iter_mut() {
                    *c = -std::mem::take(c);
                }
            }
            let poly = IntPoly::new(coeffs);
            if !poly.is_monic() {
                return Err(Error::Internal(format!(
                    "local annihilator {:?} is not monic",
                    poly
                )));
            }
            break poly;
        };
        mu = mu.lcm_monic(&local)?;
    }
    if !mu.apply_matrix(a)?.is_zero() {
        return Err(Error::Internal(
            "computed minimal polynomial does not annihilate the matrix".into(),
        ));
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_round_trips() {
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[1, 1]);
        let (q, r) = a.div_rem_monic(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, IntPoly::from_i64(&[-1, 1]));
        assert_eq!(q.mul(&b), a);
        assert_eq!(a.sub(&a), IntPoly::zero());
        assert!(a.divisible_by(&b).unwrap());
        assert!(!a.divisible_by(&IntPoly::from_i64(&[2, 1])).unwrap());
    }

    #[test]
    fn gcd_of_shifted_squares() {
        // gcd(x^2 - 1, (x - 1)^2) = x - 1
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[1, -2, 1]);
        assert_eq!(a.gcd(&b), IntPoly::from_i64(&[-1, 1]));
        // content flows through
        let a2 = a.scale(&BigInt::from(6));
        let b2 = b.scale(&BigInt::from(4));
        assert_eq!(a2.gcd(&b2), IntPoly::from_i64(&[-2, 2]));
    }

    #[test]
    fn lcm_of_coprime_monics() {
        let a = IntPoly::from_i64(&[-1, 1]);
        let b = IntPoly::from_i64(&[1, 1]);
        assert_eq!(a.lcm_monic(&b).unwrap(), IntPoly::from_i64(&[-1, 0, 1]));
        let sq = IntPoly::from_i64(&[1, -2, 1]);
        assert_eq!(sq.lcm_monic(&a).unwrap(), sq);
    }

    #[test]
    fn cyclotomic_family() {
        assert_eq!(cyclotomic(1).unwrap(), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2).unwrap(), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(3).unwrap(), IntPoly::from_i64(&[1, 1, 1]));
        assert_eq!(cyclotomic(4).unwrap(), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6).unwrap(), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12).unwrap(), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        // product over divisors of 12 recovers x^12 - 1
        let mut prod = IntPoly::one();
        for d in [1u64, 2, 3, 4, 6, 12] {
            prod = prod.mul(&cyclotomic(d).unwrap());
        }
        let mut expect = vec![0i64; 13];
        expect[0] = -1;
        expect[12] = 1;
        assert_eq!(prod, IntPoly::from_i64(&expect));
    }

    #[test]
    fn euler_phi_small_values() {
        let expected = [1u64, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (n, &phi) in expected.iter().enumerate() {
            assert_eq!(euler_phi(n as u64 + 1), phi, "phi({})", n + 1);
        }
    }

    #[test]
    fn minimal_polynomials() {
        assert_eq!(
            minimal_polynomial(&IntMatrix::identity(3)).unwrap(),
            IntPoly::from_i64(&[-1, 1])
        );
        let shear = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(
            minimal_polynomial(&shear).unwrap(),
            IntPoly::from_i64(&[1, -2, 1])
        );
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(
            minimal_polynomial(&rot).unwrap(),
            IntPoly::from_i64(&[1, 0, 1])
        );
        // distinct eigenvalues merge into one squarefree product
        let mixed = IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]]);
        assert_eq!(
            minimal_polynomial(&mixed).unwrap(),
            IntPoly::from_i64(&[-1, 0, 1])
        );
        assert_eq!(
            minimal_polynomial(&IntMatrix::zero(0, 0)).unwrap(),
            IntPoly::one()
        );
    }

    #[test]
    fn minimal_polynomial_of_companion_matrix() {
        // companion of x^3 - 2: minimal = characteristic
        let c = IntMatrix::from_rows(&[vec![0, 0, 2], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(
            minimal_polynomial(&c).unwrap(),
            IntPoly::from_i64(&[-2, 0, 0, 1])
        );
    }
}
