//! Orders of tame inertia characters and the resulting bounds for the
//! exceptional case.
//!
//! An exceptional projective image (`A4`, `S4`, `A5`) has elements of order
//! at most 5, so any inertia shape forcing a larger projective order rules
//! it out.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::arith::{is_prime, totient};
use crate::serde_util::big_as_string;

/// Largest element order in `A4`, `S4` or `A5`.
pub const EXCEPTIONAL_MAX_ELEMENT_ORDER: u64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InertiaError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} is too small: p >= 7 is required")]
    SmallPrime(u64),
    #[error("j = {j} is outside [0, {max}]")]
    JOutOfRange { j: u64, max: u64 },
    #[error("{0} must be at least 1")]
    NonPositive(&'static str),
    #[error("unknown v_p(a_p) case {0:?}: expected ord, st or ss")]
    BadVCase(String),
}

fn check_prime(p: u64) -> Result<(), InertiaError> {
    if !is_prime(p) {
        return Err(InertiaError::NotPrime(p));
    }
    if p < 7 {
        return Err(InertiaError::SmallPrime(p));
    }
    Ok(())
}

/// `omega^a` (level 1, order dividing `p - 1`) or `omega_2^a` (level 2,
/// order dividing `p^2 - 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterPower {
    pub p: u64,
    pub level: u8,
    pub exponent: u64,
}

impl CharacterPower {
    pub fn level1(p: u64, exponent: u64) -> Self {
        CharacterPower { p, level: 1, exponent }
    }

    pub fn level2(p: u64, exponent: u64) -> Self {
        CharacterPower { p, level: 2, exponent }
    }

    /// Order of the character itself.
    pub fn order(&self) -> u64 {
        let m = match self.level {
            1 => self.p - 1,
            _ => self.p * self.p - 1,
        };
        m / self.exponent.gcd(&m)
    }

    /// Projective order of the inertia image it describes: `omega^a` on a
    /// line with trivial quotient, or `diag(omega_2^a, omega_2^{pa})`.
    pub fn projective_order(&self) -> u64 {
        match self.level {
            1 => proj_order_level1(self.p, self.exponent),
            _ => proj_order_level2(self.p, self.exponent),
        }
    }
}

impl fmt::Display for CharacterPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            1 => write!(f, "omega^{}", self.exponent),
            _ => write!(f, "omega_2^{}", self.exponent),
        }
    }
}

/// `(p - 1) / gcd(a, p - 1)`.
pub fn proj_order_level1(p: u64, a: u64) -> u64 {
    (p - 1) / a.gcd(&(p - 1))
}

/// `(p + 1) / gcd(a, p + 1)`.
pub fn proj_order_level2(p: u64, a: u64) -> u64 {
    (p + 1) / a.gcd(&(p + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemistableBound {
    pub d: u32,
    /// `3^{4d}`
    #[serde(serialize_with = "big_as_string")]
    pub bound: BigUint,
    /// `|GL_2(F_{3^d})| = (3^{2d} - 1)(3^{2d} - 3^d)`
    #[serde(serialize_with = "big_as_string")]
    pub refined: BigUint,
}

pub fn semistable_index_bound(d: u32) -> Result<SemistableBound, InertiaError> {
    if d == 0 {
        return Err(InertiaError::NonPositive("d"));
    }
    let three = BigUint::from(3u32);
    let q = three.pow(d);
    let q2 = &q * &q;
    let refined = (&q2 - 1u32) * (&q2 - &q);
    Ok(SemistableBound {
        d,
        bound: &q2 * &q2,
        refined,
    })
}

/// `5 * 3^{4d}`.
pub fn exceptional_prime_bound(d: u32) -> Result<BigUint, InertiaError> {
    Ok(semistable_index_bound(d)?.bound * 5u32)
}

/// `60 [K : Q] + 1`.
pub fn serre_ec_bound(degree: u64) -> Result<u64, InertiaError> {
    if degree == 0 {
        return Err(InertiaError::NonPositive("degree"));
    }
    Ok(60 * degree + 1)
}

/// Least prime `p` with `phi(p - 1) > d`: from there on the etale case is
/// ruled out by the degree of the coefficient field.
pub fn case_i_cutoff(d: u64) -> u64 {
    (2u64..)
        .filter(|&p| is_prime(p))
        .find(|&p| totient(p - 1) > d)
        .expect("phi(p - 1) is unbounded")
}

/// Projective order of inertia as far as the shape determines it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjOrder {
    Exact(u64),
    MultipleOf(u64),
    /// Divisible by `p`.
    AtLeastP,
    Undetermined,
}

impl ProjOrder {
    /// Whether the order can be at most 5.
    fn admits_exceptional(self, p: u64) -> bool {
        match self {
            ProjOrder::Exact(n) | ProjOrder::MultipleOf(n) => n <= EXCEPTIONAL_MAX_ELEMENT_ORDER,
            ProjOrder::AtLeastP => p <= EXCEPTIONAL_MAX_ELEMENT_ORDER,
            ProjOrder::Undetermined => true,
        }
    }
}

impl fmt::Display for ProjOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjOrder::Exact(n) => write!(f, "{n}"),
            ProjOrder::MultipleOf(n) => write!(f, "multiple of {n}"),
            ProjOrder::AtLeastP => write!(f, ">= p"),
            ProjOrder::Undetermined => write!(f, "undetermined"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictReason {
    /// Ordinary with trivial Nebentypus: inertia contains `omega`.
    OrderDivisibleByPMinusOne,
    /// The projective order exceeds 5.
    OrderExceedsFive,
    /// A small projective order leaves the exceptional case open; the
    /// Nebentypus then bounds the dimension.
    SmallOrder,
    /// `theta` of order 2: the associated weight-one form would have
    /// exceptional image, which the Artin-conjecture argument excludes.
    ArtinExcluded,
    /// A nonsplit level-1 group scheme forces a `p`-part in inertia.
    PPartForced,
    /// Etale at `p`: inertia gives nothing, only the degree bound applies.
    EtaleDegreeBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VCase {
    /// `v_p(a_p) = 0`
    Ord,
    /// `v_p(a_p) = 1`
    St,
    /// `0 < v_p(a_p) < 1`
    Ss,
}

impl FromStr for VCase {
    type Err = InertiaError;
    fn from_str(s: &str) -> Result<Self, InertiaError> {
        match s {
            "ord" => Ok(VCase::Ord),
            "st" => Ok(VCase::St),
            "ss" => Ok(VCase::Ss),
            _ => Err(InertiaError::BadVCase(s.to_string())),
        }
    }
}

/// Local shapes of a mod-`p` representation restricted to inertia at `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum InertiaShape {
    /// Finite etale group scheme.
    Etale,
    /// A line on which inertia acts by `omega^a`.
    Ordinary { a: u64 },
    /// `omega_2^a + omega_2^{pa}`.
    Level2 { a: u64 },
    /// Nonsplit extension of level-1 characters.
    Level1Nonsplit,
    /// Weight 2, Nebentypus `omega^j`, in one of the three `v_p(a_p)` cases.
    Weight2 { j: u64, vcase: VCase },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalVerdict {
    pub p: u64,
    pub shape: InertiaShape,
    pub exceptional_possible: bool,
    pub proj_inertia_order: ProjOrder,
    pub dimension_lower_bound: Option<u64>,
    pub reason: VerdictReason,
    /// The character whose order is the projective inertia order, if any.
    pub character: Option<CharacterPower>,
    /// For `ss`: the pairs `(m, n)` with `j + 1 = m (p + 1) / n`.
    pub ss_solutions: Vec<(u64, u64)>,
}

impl ExceptionalVerdict {
    fn new(p: u64, shape: InertiaShape, order: ProjOrder, reason: VerdictReason) -> Self {
        ExceptionalVerdict {
            p,
            shape,
            exceptional_possible: order.admits_exceptional(p),
            proj_inertia_order: order,
            dimension_lower_bound: None,
            reason,
            character: None,
            ss_solutions: Vec::new(),
        }
    }
}

/// Verdict for a geometric shape (etale, ordinary line, level 2, nonsplit
/// level 1).
pub fn classify_shape(p: u64, shape: InertiaShape) -> Result<ExceptionalVerdict, InertiaError> {
    check_prime(p)?;
    let with_char = |c: CharacterPower| {
        let order = ProjOrder::Exact(c.projective_order());
        let reason = if order.admits_exceptional(p) {
            VerdictReason::SmallOrder
        } else {
            VerdictReason::OrderExceedsFive
        };
        let mut v = ExceptionalVerdict::new(p, shape, order, reason);
        v.character = Some(c);
        v
    };
    match shape {
        InertiaShape::Etale => {
            let mut v = ExceptionalVerdict::new(
                p,
                shape,
                ProjOrder::Undetermined,
                VerdictReason::EtaleDegreeBound,
            );
            v.dimension_lower_bound = Some(totient(p - 1));
            Ok(v)
        }
        InertiaShape::Ordinary { a } => Ok(with_char(CharacterPower::level1(p, a))),
        InertiaShape::Level2 { a } => Ok(with_char(CharacterPower::level2(p, a))),
        InertiaShape::Level1Nonsplit => Ok(ExceptionalVerdict::new(
            p,
            shape,
            ProjOrder::AtLeastP,
            VerdictReason::PPartForced,
        )),
        InertiaShape::Weight2 { j, vcase } => classify_weight2_local(p, j, vcase),
    }
}

/// Local verdict for a weight-2 newform of level `p` with Nebentypus
/// `omega^j`.
///
/// * `ord`, `j = 0`: inertia contains `omega`, order divisible by `p - 1`.
/// * `ord`, `j >= 1`: projective inertia is `omega^{j+1}`.
/// * `st`: projective inertia is `omega^{j-1}`.
/// * `ss`: projective inertia is `theta = omega_2^{(p-1)(j+1)}` of order
///   `(p + 1) / gcd(j + 1, p + 1)`; order 2 (`j + 1 = (p + 1)/2`) is
///   excluded separately.
///
/// When an exceptional image stays possible the coefficient field contains
/// the values of the Nebentypus, giving `phi(ord(omega^j))` as a lower bound
/// for the dimension.
pub fn classify_weight2_local(
    p: u64,
    j: u64,
    vcase: VCase,
) -> Result<ExceptionalVerdict, InertiaError> {
    check_prime(p)?;
    if j > p - 2 {
        return Err(InertiaError::JOutOfRange { j, max: p - 2 });
    }
    let shape = InertiaShape::Weight2 { j, vcase };
    let nebentypus_dim = totient(proj_order_level1(p, j));
    let level1 = |exponent: u64| {
        let c = CharacterPower::level1(p, exponent);
        let order = ProjOrder::Exact(c.projective_order());
        let mut v = if order.admits_exceptional(p) {
            let mut v = ExceptionalVerdict::new(p, shape, order, VerdictReason::SmallOrder);
            v.dimension_lower_bound = Some(nebentypus_dim);
            v
        } else {
            ExceptionalVerdict::new(p, shape, order, VerdictReason::OrderExceedsFive)
        };
        v.character = Some(c);
        v
    };
    let v = match vcase {
        VCase::Ord if j == 0 => {
            let mut v = ExceptionalVerdict::new(
                p,
                shape,
                ProjOrder::MultipleOf(p - 1),
                VerdictReason::OrderDivisibleByPMinusOne,
            );
            v.character = Some(CharacterPower::level1(p, 1));
            v
        }
        VCase::Ord => level1(j + 1),
        // omega^{-1} when j = 0
        VCase::St => level1((j + p - 2) % (p - 1)),
        VCase::Ss => {
            let c = CharacterPower::level2(p, (p - 1) * (j + 1));
            let t = proj_order_level2(p, j + 1);
            debug_assert_eq!(c.order(), t);
            let order = ProjOrder::Exact(t);
            let mut v = if !order.admits_exceptional(p) {
                ExceptionalVerdict::new(p, shape, order, VerdictReason::OrderExceedsFive)
            } else if 2 * (j + 1) == p + 1 {
                let mut v = ExceptionalVerdict::new(p, shape, order, VerdictReason::ArtinExcluded);
                v.exceptional_possible = false;
                v
            } else {
                let mut v = ExceptionalVerdict::new(p, shape, order, VerdictReason::SmallOrder);
                v.dimension_lower_bound = Some(nebentypus_dim);
                v
            };
            if order.admits_exceptional(p) {
                v.ss_solutions = ss_solutions(p)
                    .into_iter()
                    .filter(|s| s.j == j)
                    .map(|s| (s.m, s.n))
                    .collect();
            }
            v.character = Some(c);
            v
        }
    };
    Ok(v)
}

/// A solution of `j + 1 = m (p + 1) / n`, `1 <= m < n <= 5`, `gcd(m, n) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SsSolution {
    pub j: u64,
    pub m: u64,
    pub n: u64,
}

/// All `j` in `[0, p - 2]` for which `theta` has order at most 5, ordered
/// by `(n, m)`.
pub fn ss_solutions(p: u64) -> Vec<SsSolution> {
    let mut out = Vec::new();
    for n in 2..=EXCEPTIONAL_MAX_ELEMENT_ORDER {
        if !(p + 1).is_multiple_of(n) {
            continue;
        }
        for m in (1..n).filter(|m| m.gcd(&n) == 1) {
            out.push(SsSolution {
                j: m * (p + 1) / n - 1,
                m,
                n,
            });
        }
    }
    out
}

/// An `ss` exponent `j` allowed by the order condition whose gcd with
/// `p - 1` exceeds 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EtaCounterexample {
    pub p: u64,
    pub j: u64,
    pub gcd: u64,
}

fn is_counterexample(p: u64, j: u64) -> Option<EtaCounterexample> {
    let g = j.gcd(&(p - 1));
    (g > 3).then_some(EtaCounterexample { p, j, gcd: g })
}

/// Checks `gcd(j, p - 1) <= 3` for every non-Artin `ss` solution, via the
/// `(m, n)` enumeration.
///
/// A common divisor of `j` and `p - 1` divides `n (j + 1) - m (p + 1) +
/// m (p - 1) - n j = n - 2m`, and `|n - 2m| <= 3`, so the result is always
/// empty; the check confirms it numerically.
pub fn eta_gcd_check(p: u64) -> Result<Vec<EtaCounterexample>, InertiaError> {
    check_prime(p)?;
    Ok(ss_solutions(p)
        .into_iter()
        .filter(|s| !(s.m == 1 && s.n == 2))
        .filter_map(|s| is_counterexample(p, s.j))
        .collect())
}

/// The same check by scanning every `j` in `[1, p - 2]`.
pub fn eta_gcd_check_scan(p: u64) -> Result<Vec<EtaCounterexample>, InertiaError> {
    check_prime(p)?;
    Ok((1..=p - 2)
        .filter(|&j| proj_order_level2(p, j + 1) <= EXCEPTIONAL_MAX_ELEMENT_ORDER)
        .filter(|&j| 2 * (j + 1) != p + 1)
        .filter_map(|j| is_counterexample(p, j))
        .collect())
}
