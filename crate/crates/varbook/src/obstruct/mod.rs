//! Verdict layer on top of the homology engine: a torsion obstruction for
//! open books with flexible pages, a triviality filter on the cohomology
//! action of candidate flexible monodromies, and a detector for nontrivial
//! loops of contact structures driven by form-preserving automorphisms of
//! middle cohomology.
//!
//! Geometric hypotheses (vanishing of the first Chern class on spheres,
//! flexibility of the page, preservation of the formal isotopy class) are
//! not computable from chain data. They enter as caller-asserted flags and
//! every verdict echoes them back, so a verdict is always conditional on
//! its recorded assumptions.

mod poly;

pub use poly::{cyclotomic, euler_phi, minimal_polynomial, IntPoly};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::abgroup::{FgAbelianGroup, GroupHom};
use crate::zlinalg::{is_unimodular, IntMatrix};
use crate::{Error, Result};

/// Caller-asserted hypotheses under which the torsion obstruction speaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hypotheses {
    dim: usize,
    c1_vanishes_on_spheres: bool,
    page_flexible: bool,
}

impl Hypotheses {
    pub fn new(dim: usize, c1_vanishes_on_spheres: bool, page_flexible: bool) -> Result<Self> {
        if dim < 3 || dim % 2 == 0 {
            return Err(Error::InvalidHypotheses(format!(
                "manifold dimension must be odd and at least 3, got {}",
                dim
            )));
        }
        Ok(Hypotheses {
            dim,
            c1_vanishes_on_spheres,
            page_flexible,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Middle degree q with dim = 2q + 1.
    pub fn q(&self) -> usize {
        (self.dim - 1) / 2
    }

    pub fn c1_vanishes_on_spheres(&self) -> bool {
        self.c1_vanishes_on_spheres
    }

    pub fn page_flexible(&self) -> bool {
        self.page_flexible
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Obstructed,
    Consistent,
    Inapplicable,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictStatus::Obstructed => "OBSTRUCTED",
            VerdictStatus::Consistent => "CONSISTENT",
            VerdictStatus::Inapplicable => "INAPPLICABLE",
        };
        write!(f, "{}", s)
    }
}

/// Outcome of the torsion obstruction, with the assumptions echoed back.
///
/// Invariant: status OBSTRUCTED carries a nonempty witness, the torsion
/// invariant factors of the middle homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionVerdict {
    status: VerdictStatus,
    witness: Option<Vec<BigInt>>,
    reason: String,
    hypotheses: Hypotheses,
    rule_tags: Vec<&'static str>,
}

impl ObstructionVerdict {
    pub fn status(&self) -> VerdictStatus {
        self.status
    }

    pub fn witness(&self) -> Option<&[BigInt]> {
        self.witness.as_deref()
    }

    pub fn reason(&self) -> &str {
        &self.reason
    }

    pub fn hypotheses(&self) -> &Hypotheses {
        &self.hypotheses
    }

    pub fn rule_tags(&self) -> &[&'static str] {
        &self.rule_tags
    }
}

/// Torsion obstruction for the middle homology of an open book whose page
/// is asserted flexible.
///
/// The rule is one-directional: under all three hypotheses (dimension at
/// least 7, first Chern class vanishing on spheres, flexible page) the
/// middle homology must be torsion free, so torsion refutes the asserted
/// presentation. A missing hypothesis makes the rule silent, never
/// permissive: weakening any flag moves OBSTRUCTED to INAPPLICABLE.
pub fn flexible_obstruction(hq_m: &FgAbelianGroup, hyp: &Hypotheses) -> ObstructionVerdict {
    if hyp.dim < 7 {
        return ObstructionVerdict {
            status: VerdictStatus::Inapplicable,
            witness: None,
            reason: format!(
                "the obstruction needs manifold dimension at least 7, got {}",
                hyp.dim
            ),
            hypotheses: *hyp,
            rule_tags: vec!["dimension-gate"],
        };
    }
    if !hyp.c1_vanishes_on_spheres {
        return ObstructionVerdict {
            status: VerdictStatus::Inapplicable,
            witness: None,
            reason: "vanishing of the first Chern class on spheres is not asserted".into(),
            hypotheses: *hyp,
            rule_tags: vec!["chern-class-gate"],
        };
    }
    if !hyp.page_flexible {
        return ObstructionVerdict {
            status: VerdictStatus::Inapplicable,
            witness: None,
            reason: "flexibility of the page is not asserted".into(),
            hypotheses: *hyp,
            rule_tags: vec!["page-flexibility-gate"],
        };
    }
    let torsion = hq_m.torsion();
    if torsion.is_empty() {
        ObstructionVerdict {
            status: VerdictStatus::Consistent,
            witness: None,
            reason: "middle homology is torsion free; the obstruction is silent and existence \
                     is not asserted"
                .into(),
            hypotheses: *hyp,
            rule_tags: vec!["torsion-free-consistency"],
        }
    } else {
        let factors = torsion
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        ObstructionVerdict {
            status: VerdictStatus::Obstructed,
            witness: Some(torsion.to_vec()),
            reason: format!(
                "middle homology has torsion invariant factors [{}], but a flexible page in \
                 dimension at least 7 with the stated Chern hypothesis forces torsion-free \
                 middle homology",
                factors
            ),
            hypotheses: *hyp,
            rule_tags: vec!["flexible-page-torsion-obstruction"],
        }
    }
}

/// Result of the cohomology-action triviality filter.
///
/// Invariant: `passes` holds exactly when `failing_degrees` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterReport {
    passes: bool,
    failing_degrees: Vec<usize>,
}

impl FilterReport {
    pub fn passes(&self) -> bool {
        self.passes
    }

    pub fn failing_degrees(&self) -> &[usize] {
        &self.failing_degrees
    }
}

/// Checks that a candidate flexible monodromy acts as the identity on
/// cohomology in every degree. The slice is indexed by degree; each entry
/// must be an endomorphism of the corresponding cohomology group. A
/// nontrivial action in any degree rules the monodromy out as an exact
/// symplectomorphism of a flexible page, and the failing degrees are
/// reported.
pub fn flexible_monodromy_filter(actions: &[GroupHom]) -> Result<FilterReport> {
    let mut failing_degrees = Vec::new();
    for (degree, action) in actions.iter().enumerate() {
        let trivial = action.is_identity().map_err(|_| {
            Error::GroupMismatch(format!(
                "degree {}: cohomology action must be an endomorphism, got a map between \
                 distinct groups",
                degree
            ))
        })?;
        if !trivial {
            failing_degrees.push(degree);
        }
    }
    Ok(FilterReport {
        passes: failing_degrees.is_empty(),
        failing_degrees,
    })
}

/// Gram matrix of the pairing on free middle cohomology, with the parity
/// of the middle degree recorded.
///
/// Invariant: the matrix J satisfies Jᵀ = (−1)^q J, so the form is
/// symmetric for even q and antisymmetric for odd q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    matrix: IntMatrix,
    q_odd: bool,
}

impl BilinearForm {
    pub fn new(matrix: IntMatrix, q_odd: bool) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let transposed = matrix.transpose();
        let expected = if q_odd {
            IntMatrix::from_fn(matrix.rows(), matrix.cols(), |i, j| -matrix[(i, j)].clone())
        } else {
            matrix.clone()
        };
        if transposed != expected {
            return Err(Error::InvalidGroup(format!(
                "Gram matrix must satisfy J^T = {}J",
                if q_odd { "-" } else { "" }
            )));
        }
        Ok(BilinearForm { matrix, q_odd })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn q_odd(&self) -> bool {
        self.q_odd
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }
}

/// Standard form on the rank-2g middle cohomology of a g-fold connected
/// sum of sphere products: block diagonal with g blocks [[0,1],[±1,0]],
/// the sign being (−1)^q.
pub fn hyperbolic_form(g: usize, q_odd: bool) -> Result<BilinearForm> {
    if g == 0 {
        return Err(Error::InvalidHypotheses(
            "hyperbolic form needs at least one block".into(),
        ));
    }
    let sign = if q_odd { -1i64 } else { 1 };
    let matrix = IntMatrix::from_fn(2 * g, 2 * g, |i, j| {
        if i % 2 == 0 && j == i + 1 {
            BigInt::one()
        } else if i % 2 == 1 && j + 1 == i {
            BigInt::from(sign)
        } else {
            BigInt::from(0)
        }
    });
    BilinearForm::new(matrix, q_odd)
}

/// True iff A is unimodular and Aᵀ·J·A = J.
pub fn preserves_form(a: &IntMatrix, j: &BilinearForm) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != j.size() {
        return Err(Error::DimensionMismatch(format!(
            "automorphism is {}x{} but the form has size {}",
            a.rows(),
            a.cols(),
            j.size()
        )));
    }
    if !is_unimodular(a) {
        return Ok(false);
    }
    let conjugated = a.transpose().try_mul(j.matrix())?.try_mul(a)?;
    Ok(conjugated == *j.matrix())
}

/// Exact order of a unimodular matrix in GL(n, Z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    pub fn finite_u64(k: u64) -> Order {
        Order::Finite(BigInt::from(k))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{}", k),
            Order::Infinite => write!(f, "INFINITE"),
        }
    }
}

/// A^k for k ≥ 0 by repeated squaring.
pub fn matrix_power(a: &IntMatrix, k: &BigInt) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if k.sign() == num_bigint::Sign::Minus {
        return Err(Error::Internal("matrix power needs a nonnegative exponent".into()));
    }
    let bits = k.magnitude();
    let mut result = IntMatrix::identity(a.rows());
    let mut base = a.clone();
    for i in 0..bits.bits() {
        if bits.bit(i) {
            result = result.try_mul(&base)?;
        }
        if i + 1 < bits.bits() {
            base = base.try_mul(&base)?;
        }
    }
    Ok(result)
}

/// Exact multiplicative order of a unimodular integer matrix.
///
/// The order is finite exactly when the minimal polynomial is a product
/// of distinct cyclotomic polynomials; the order is then the least common
/// multiple of their indices. Candidate indices n are tried once each,
/// restricted to φ(n) at most the remaining degree; every cyclotomic
/// factor of a degree-d minimal polynomial has index below 2d² + 2, so
/// the scan is complete. A finite answer is certified by powering.
pub fn automorphism_order(a: &IntMatrix) -> Result<Order> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !is_unimodular(a) {
        return Err(Error::NotUnimodular(
            "order is defined only for unimodular matrices".into(),
        ));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Order::Finite(BigInt::one()));
    }
    let mu = minimal_polynomial(a)?;
    let d = mu.degree().unwrap_or(0) as u64;
    let mut remaining = mu;
    let mut indices: Vec<u64> = Vec::new();
    for idx in 1..=(2 * d * d + 2) {
        if remaining.is_one() {
            break;
        }
        let left = remaining.degree().unwrap_or(0) as u64;
        if euler_phi(idx) > left {
            continue;
        }
        let phi = cyclotomic(idx)?;
        let (quotient, rem) = remaining.div_rem_monic(&phi)?;
        if rem.is_zero() {
            remaining = quotient;
            indices.push(idx);
        }
    }
    if !remaining.is_one() {
        return Ok(Order::Infinite);
    }
    let order = indices
        .iter()
        .fold(BigInt::one(), |acc, &i| acc.lcm(&BigInt::from(i)));
    if matrix_power(a, &order)? != IntMatrix::identity(n) {
        return Err(Error::Internal(format!(
            "cyclotomic factorization reported order {} but powering disagrees",
            order
        )));
    }
    Ok(Order::Finite(order))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopStatus {
    NontrivialLoop,
    NoConclusion,
}

impl std::fmt::Display for LoopStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LoopStatus::NontrivialLoop => "NONTRIVIAL_LOOP",
            LoopStatus::NoConclusion => "NO_CONCLUSION",
        };
        write!(f, "{}", s)
    }
}

/// Outcome of the loop detector, with the formal-class assumption echoed.
///
/// Invariant: status NONTRIVIAL_LOOP carries the automorphism order; the
/// loop in the space of contact structures inherits that order, infinite
/// included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopVerdict {
    status: LoopStatus,
    order: Option<Order>,
    reason: String,
    formal_class_preserved: bool,
    rule_tags: Vec<&'static str>,
}

impl LoopVerdict {
    pub fn status(&self) -> LoopStatus {
        self.status
    }

    pub fn order(&self) -> Option<&Order> {
        self.order.as_ref()
    }

    pub fn reason(&self) -> &str {
        &self.reason
    }

    pub fn formal_class_preserved(&self) -> bool {
        self.formal_class_preserved
    }

    pub fn rule_tags(&self) -> &[&'static str] {
        &self.rule_tags
    }
}

/// Detects a nontrivial loop of contact structures from an automorphism
/// of free middle cohomology.
///
/// The detector fires exactly when the formal isotopy class is asserted
/// preserved, A preserves the form (so it is realized by a monodromy of
/// the sphere-product page family), and A acts nontrivially on
/// cohomology. The rule is one-directional: every other case is
/// NO_CONCLUSION, never a triviality claim.
pub fn loop_verdict(
    a: &IntMatrix,
    j: &BilinearForm,
    formal_class_preserved: bool,
) -> Result<LoopVerdict> {
    let preserved = preserves_form(a, j)?;
    let free = FgAbelianGroup::free(j.size());
    let action = GroupHom::new(free.clone(), free, a.clone())?;
    let filter = flexible_monodromy_filter(std::slice::from_ref(&action))?;
    if !formal_class_preserved {
        return Ok(LoopVerdict {
            status: LoopStatus::NoConclusion,
            order: None,
            reason: "preservation of the formal isotopy class is not asserted, so the \
                     realization step does not apply"
                .into(),
            formal_class_preserved,
            rule_tags: vec!["formal-class-gate"],
        });
    }
    if !preserved {
        return Ok(LoopVerdict {
            status: LoopStatus::NoConclusion,
            order: None,
            reason: "the automorphism does not preserve the bilinear form, so it is not \
                     realized by a monodromy of the sphere-product page family"
                .into(),
            formal_class_preserved,
            rule_tags: vec!["form-preservation-gate"],
        });
    }
    if filter.passes() {
        return Ok(LoopVerdict {
            status: LoopStatus::NoConclusion,
            order: None,
            reason: "the automorphism acts as the identity on middle cohomology, so no \
                     nontrivial loop is certified"
                .into(),
            formal_class_preserved,
            rule_tags: vec!["trivial-cohomology-action"],
        });
    }
    let order = automorphism_order(a)?;
    let reason = match &order {
        Order::Finite(k) => format!(
            "form-preserving automorphism acting nontrivially on middle cohomology; the \
             induced loop of contact structures is nontrivial and the automorphism has \
             order {}",
            k
        ),
        Order::Infinite => "form-preserving automorphism acting nontrivially on middle \
                            cohomology; the automorphism has infinite order and the induced \
                            loop of contact structures inherits it"
            .into(),
    };
    Ok(LoopVerdict {
        status: LoopStatus::NontrivialLoop,
        order: Some(order),
        reason,
        formal_class_preserved,
        rule_tags: vec![
            "form-preserving-automorphism",
            "nontrivial-cohomology-action",
        ],
    })
}
