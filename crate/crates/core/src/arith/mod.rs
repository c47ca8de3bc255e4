//! Integer, modular and rational primitives shared by every other module.

mod bernoulli;
mod prime;
mod rational;
mod residue;
mod symbols;

pub use bernoulli::{
    bernoulli_exact, bernoulli_exact_table, bernoulli_mod_p, irregular_indices,
    BernoulliTableModP, EXACT_BERNOULLI_MAX,
};
pub use prime::{
    divisors, factor, is_prime, primes_between, primes_up_to, sqrt_mod, try_is_prime,
    PRIMALITY_LIMIT,
};
pub use rational::ExactRational;
pub use residue::{inv_mod, mul_mod, pow_mod, Residue};
pub use symbols::{
    kronecker, multiplicative_order, totient, totient_liminf_report, totient_liminf_target,
    PrimorialRatio, EULER_GAMMA,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("primality is only decided below 2^62, got {0}")]
    PrimalityRange(u64),
    #[error("Kronecker symbol (a|0) is undefined")]
    KroneckerZero,
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{a} is not a unit modulo {m}")]
    NotCoprime { a: u64, m: u64 },
    #[error("Bernoulli numbers mod p need a prime p >= 5, got {0}")]
    BadBernoulliPrime(u64),
    #[error("exact Bernoulli index {0} is above the supported range")]
    BernoulliIndex(usize),
    #[error("primorial report covers 3 <= count <= 25, got {0}")]
    ReportSize(usize),
}
