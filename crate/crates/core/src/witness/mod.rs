//! Per-prime witnesses: irregular primes (Borel image), level raising at an
//! inert prime, and theta series of class-group characters (dihedral
//! image), plus parallel scans over prime ranges.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{irregular_indices, is_prime, totient, ArithError};
use crate::dims::{dim_j1_prime, dim_s2_new_gamma0, DimsError};
use crate::quad::{
    theta_coefficients, ClassCharacter, ClassGroup, Discriminant, QExpansion, QuadError,
};

mod scan;

pub use scan::{scan, ScanKind, ScanRecord, ScanReport, ScanSummary};

/// Conductor of the CM elliptic curve with multiplication by `Z[i]` used for
/// level raising.
pub const CM_CONDUCTOR: u64 = 64;

/// Default number of theta coefficients in a dihedral witness.
pub const THETA_HEAD: u64 = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WitnessError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} is too small: p >= 7 is required")]
    SmallPrime(u64),
    #[error("p = {0} is regular: no Borel witness")]
    RegularPrime(u64),
    #[error("p = {0} is not 3 mod 4")]
    NotThreeModFour(u64),
    #[error("class group of Q(sqrt(-{0})) is trivial: no nontrivial character")]
    TrivialClassGroup(u64),
    #[error("no admissible prime below p^5.5 for p = {0}")]
    SearchCutoff(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Dims(#[from] DimsError),
}

impl WitnessError {
    /// Short machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            WitnessError::NotPrime(_) => "not_prime",
            WitnessError::SmallPrime(_) => "small_prime",
            WitnessError::RegularPrime(_) => "regular_prime",
            WitnessError::NotThreeModFour(_) => "not_3_mod_4",
            WitnessError::TrivialClassGroup(_) => "trivial_class_group",
            WitnessError::SearchCutoff(_) => "search_cutoff",
            WitnessError::Arith(_) => "arith",
            WitnessError::Quad(_) => "quad",
            WitnessError::Dims(_) => "dims",
        }
    }

    /// Errors that are expected outcomes rather than failures.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            WitnessError::RegularPrime(_) | WitnessError::TrivialClassGroup(_)
        )
    }
}

fn check_prime(p: u64) -> Result<(), WitnessError> {
    if !is_prime(p) {
        return Err(WitnessError::NotPrime(p));
    }
    if p < 7 {
        return Err(WitnessError::SmallPrime(p));
    }
    Ok(())
}

type Provenance = BTreeMap<&'static str, &'static str>;

/// An index `k` with `p | B_k`, and the Nebentypus exponent `k - 2` of the
/// weight-2 form carrying the reducible residual representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BorelIndex {
    pub k: u64,
    pub nebentypus_exponent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorelWitness {
    pub p: u64,
    pub irregular_indices: Vec<BorelIndex>,
    /// `dim J_1(p) = (p - 5)(p - 7)/24`
    pub dim_bound: u64,
    pub provenance: Provenance,
}

pub fn borel_witness(p: u64) -> Result<BorelWitness, WitnessError> {
    check_prime(p)?;
    let ks = irregular_indices(p)?;
    if ks.is_empty() {
        return Err(WitnessError::RegularPrime(p));
    }
    Ok(BorelWitness {
        p,
        irregular_indices: ks
            .into_iter()
            .map(|k| BorelIndex {
                k,
                nebentypus_exponent: k - 2,
            })
            .collect(),
        dim_bound: dim_j1_prime(p)?,
        provenance: BTreeMap::from([
            ("irregular_indices", "B_k mod p by the Bernoulli recursion in F_p"),
            ("dim_bound", "(p-5)(p-7)/24, checked against the genus of X_1(p)"),
        ]),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CartanType {
    Split,
    Nonsplit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LrWitness {
    pub p: u64,
    /// Least prime with `ell = -1 (mod p)` and `ell = 3 (mod 4)`.
    pub ell: u64,
    /// `ell = residue (mod 4p)`
    pub residue: u64,
    pub modulus: u64,
    pub cartan_type: CartanType,
    /// `64 ell`
    pub level: u64,
    /// `dim S_2^new(Gamma_0(64 ell))`
    pub dim_bound: u64,
    /// `dim_bound / level`
    pub dim_ratio: f64,
    /// `ell / p^5.5`
    pub linnik_ratio: f64,
    /// `p^5.5 / ell`
    pub linnik_margin: f64,
    pub provenance: Provenance,
}

pub fn dihedral_lr_witness(p: u64) -> Result<LrWitness, WitnessError> {
    check_prime(p)?;
    let modulus = 4 * p;
    let residue = (0..modulus)
        .find(|r| r % p == p - 1 && r % 4 == 3)
        .expect("CRT class exists for odd p");
    let cutoff = (p as f64).powf(5.5);
    let ell = (0u64..)
        .map(|i| residue + i * modulus)
        .take_while(|&l| (l as f64) < cutoff)
        .find(|&l| is_prime(l))
        .ok_or(WitnessError::SearchCutoff(p))?;
    let level = CM_CONDUCTOR * ell;
    let dim_bound = dim_s2_new_gamma0(level)?;
    Ok(LrWitness {
        p,
        ell,
        residue,
        modulus,
        cartan_type: if p % 4 == 3 {
            CartanType::Nonsplit
        } else {
            CartanType::Split
        },
        level,
        dim_bound,
        dim_ratio: dim_bound as f64 / level as f64,
        linnik_ratio: ell as f64 / cutoff,
        linnik_margin: cutoff / ell as f64,
        provenance: BTreeMap::from([
            ("ell", "least prime in the CRT class of (-1 mod p, 3 mod 4)"),
            ("level", "conductor 2^6 of the CM curve times ell"),
            ("dim_bound", "newform dimension from the genus of X_0(M), M | level"),
        ]),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HidaWitness {
    pub p: u64,
    pub h: u64,
    pub class_group_invariants: Vec<u64>,
    pub h_nontrivial: bool,
    pub h_prime_to_p: bool,
    /// `h <= (p - 1)/2`
    pub h_below_half: bool,
    pub character: ClassCharacter,
    /// `a = (p - 1)/2`
    pub a: u64,
    /// `(p - 3)/2 = a - 1`
    pub nebentypus_exponent: u64,
    pub theta_head: QExpansion,
    /// `phi((p - 1)/2)`
    pub dim_lower: u64,
    /// `(p - 5)(p - 7)/24`
    pub dim_upper: u64,
    pub provenance: Provenance,
}

pub fn dihedral_hida_witness(p: u64) -> Result<HidaWitness, WitnessError> {
    dihedral_hida_witness_with(p, THETA_HEAD)
}

pub fn dihedral_hida_witness_with(p: u64, coeffs: u64) -> Result<HidaWitness, WitnessError> {
    check_prime(p)?;
    if p % 4 != 3 {
        return Err(WitnessError::NotThreeModFour(p));
    }
    let group = ClassGroup::new(Discriminant::minus_prime(p)?)?;
    let h = group.order();
    let character = group
        .first_nontrivial_character()
        .ok_or(WitnessError::TrivialClassGroup(p))?;
    let theta_head = theta_coefficients(&group, &character, coeffs)?;
    let a = (p - 1) / 2;
    Ok(HidaWitness {
        p,
        h,
        class_group_invariants: group.invariants().to_vec(),
        h_nontrivial: h > 1,
        h_prime_to_p: h % p != 0,
        h_below_half: h <= a,
        character,
        a,
        nebentypus_exponent: a - 1,
        theta_head,
        dim_lower: totient(a),
        dim_upper: dim_j1_prime(p)?,
        provenance: BTreeMap::from([
            ("h", "reduced forms, checked against the Dirichlet class number formula"),
            ("character", "first nontrivial exponent tuple on the invariant-factor basis"),
            ("theta_head", "ideal enumeration by norm"),
            ("dim_lower", "phi((p-1)/2), degree of the Nebentypus values"),
            ("dim_upper", "(p-5)(p-7)/24, checked against the genus of X_1(p)"),
        ]),
    })
}
