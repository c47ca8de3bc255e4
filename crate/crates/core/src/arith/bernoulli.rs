//! Bernoulli numbers, exactly and modulo a prime.
//!
//! Both routes run the same recursion
//! `sum_{j=0}^{k} C(k+1, j) B_j = 0`, once over the rationals and once in
//! `F_p`. For `2 <= k <= p-3` every `B_j` involved is `p`-integral (von
//! Staudt–Clausen), and the only division is by `k+1 < p`, so the mod-`p`
//! run never leaves `F_p`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;

use super::prime::is_prime;
use super::rational::ExactRational;
use super::residue::Residue;
use super::ArithError;

/// Largest index accepted by [`bernoulli_exact`].
pub const EXACT_BERNOULLI_MAX: usize = 2000;

trait Recursion {
    type Elem: Clone;
    type Coeff: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn coeff_one(&self) -> Self::Coeff;
    fn coeff_add(&self, a: &Self::Coeff, b: &Self::Coeff) -> Self::Coeff;
    fn mul_add(&self, acc: &mut Self::Elem, c: &Self::Coeff, b: &Self::Elem);
    /// `-x / n`
    fn neg_div(&self, x: Self::Elem, n: u64) -> Self::Elem;
}

struct OverQ;

impl Recursion for OverQ {
    type Elem = ExactRational;
    type Coeff = BigInt;

    fn zero(&self) -> ExactRational {
        ExactRational::zero()
    }
    fn one(&self) -> ExactRational {
        ExactRational::one()
    }
    fn coeff_one(&self) -> BigInt {
        BigInt::from(1)
    }
    fn coeff_add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul_add(&self, acc: &mut ExactRational, c: &BigInt, b: &ExactRational) {
        let term = &ExactRational::from_integer(c.clone()) * b;
        *acc = &*acc + &term;
    }
    fn neg_div(&self, x: ExactRational, n: u64) -> ExactRational {
        -(&x * &ExactRational::new(1, n))
    }
}

struct OverFp(u64);

impl Recursion for OverFp {
    type Elem = Residue;
    type Coeff = Residue;

    fn zero(&self) -> Residue {
        Residue::zero(self.0)
    }
    fn one(&self) -> Residue {
        Residue::one(self.0)
    }
    fn coeff_one(&self) -> Residue {
        Residue::one(self.0)
    }
    fn coeff_add(&self, a: &Residue, b: &Residue) -> Residue {
        *a + *b
    }
    fn mul_add(&self, acc: &mut Residue, c: &Residue, b: &Residue) {
        *acc += *c * *b;
    }
    fn neg_div(&self, x: Residue, n: u64) -> Residue {
        let inv = Residue::new(n, self.0)
            .inverse()
            .expect("k+1 is a unit below p");
        -(x * inv)
    }
}

/// `B_0..=B_max` with `B_1 = -1/2`; odd indices above 1 are set to zero
/// without being summed.
fn run<R: Recursion>(ring: &R, max_k: usize) -> Vec<R::Elem> {
    let mut b = Vec::with_capacity(max_k + 1);
    b.push(ring.one());
    // Pascal row for n = k; rebuilt to n = k + 1 at the top of each step
    let mut row = vec![ring.coeff_one(), ring.coeff_one()];
    for k in 1..=max_k {
        let mut next = Vec::with_capacity(k + 2);
        next.push(ring.coeff_one());
        for j in 1..k + 1 {
            next.push(ring.coeff_add(&row[j - 1], &row[j]));
        }
        next.push(ring.coeff_one());
        row = next;
        if k >= 3 && k % 2 == 1 {
            b.push(ring.zero());
            continue;
        }
        let mut acc = ring.zero();
        for j in 0..k {
            if j >= 3 && j % 2 == 1 {
                continue;
            }
            ring.mul_add(&mut acc, &row[j], &b[j]);
        }
        b.push(ring.neg_div(acc, k as u64 + 1));
    }
    b
}

/// Exact `B_0, ..., B_max`.
pub fn bernoulli_exact_table(max_k: usize) -> Result<Vec<ExactRational>, ArithError> {
    if max_k > EXACT_BERNOULLI_MAX {
        return Err(ArithError::BernoulliIndex(max_k));
    }
    Ok(run(&OverQ, max_k))
}

/// Exact `B_k` with the convention `B_1 = -1/2`.
pub fn bernoulli_exact(k: usize) -> Result<ExactRational, ArithError> {
    Ok(bernoulli_exact_table(k)?.pop().expect("table is nonempty"))
}

/// `B_k mod p` for even `k` in `[2, p-3]`.
#[derive(Clone, Debug, Serialize)]
pub struct BernoulliTableModP {
    p: u64,
    entries: BTreeMap<u64, Residue>,
}

impl BernoulliTableModP {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `B_k mod p`; `None` outside the even range `[2, p-3]`.
    pub fn get(&self, k: u64) -> Option<Residue> {
        self.entries.get(&k).copied()
    }

    pub fn entries(&self) -> &BTreeMap<u64, Residue> {
        &self.entries
    }

    /// Even `k` with `p | B_k`.
    pub fn irregular_indices(&self) -> BTreeSet<u64> {
        self.entries
            .iter()
            .filter(|(_, r)| r.is_zero())
            .map(|(&k, _)| k)
            .collect()
    }
}

pub fn bernoulli_mod_p(p: u64) -> Result<BernoulliTableModP, ArithError> {
    if p < 5 || !is_prime(p) {
        return Err(ArithError::BadBernoulliPrime(p));
    }
    let max_k = (p - 3) as usize;
    let values = run(&OverFp(p), max_k);
    let entries = (2..=max_k)
        .step_by(2)
        .map(|k| (k as u64, values[k]))
        .collect();
    Ok(BernoulliTableModP { p, entries })
}

/// Even `k` in `[2, p-3]` with `B_k = 0 (mod p)`; empty iff `p` is regular.
pub fn irregular_indices(p: u64) -> Result<BTreeSet<u64>, ArithError> {
    Ok(bernoulli_mod_p(p)?.irregular_indices())
}
