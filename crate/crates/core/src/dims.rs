//! Genera of `X_0(N)` and `X_1(N)` and dimensions of weight-2 newforms.

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{divisors, factor, is_prime, kronecker, totient};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimsError {
    #[error("level must be at least {min}, got {n}")]
    LevelTooSmall { n: u64, min: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Ingredients of the genus formula for `X_0(N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenusData {
    pub n: u64,
    /// Index of `Gamma_0(N)` in `SL_2(Z)`.
    pub mu: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub nu_inf: u64,
    pub genus: u64,
}

fn elliptic_count(n: u64, square: u64, disc: i64) -> u64 {
    if n.is_multiple_of(square) {
        return 0;
    }
    factor(n)
        .iter()
        .map(|&(p, _)| (1 + kronecker(disc, p as i64).expect("p is nonzero")) as u64)
        .product()
}

/// `12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 nu_inf`.
pub fn genus_x0(n: u64) -> Result<GenusData, DimsError> {
    if n == 0 {
        return Err(DimsError::LevelTooSmall { n, min: 1 });
    }
    let f = factor(n);
    let mu = f.iter().fold(n, |acc, &(p, _)| acc / p * (p + 1));
    let nu2 = elliptic_count(n, 4, -4);
    let nu3 = elliptic_count(n, 9, -3);
    let nu_inf = divisors(n).iter().map(|&d| totient(d.gcd(&(n / d)))).sum::<u64>();
    let twelve_g = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * nu_inf as i64;
    if twelve_g < 0 || twelve_g % 12 != 0 {
        return Err(DimsError::Inconsistent(format!(
            "12 g = {twelve_g} for X_0({n})"
        )));
    }
    Ok(GenusData {
        n,
        mu,
        nu2,
        nu3,
        nu_inf,
        genus: (twelve_g / 12) as u64,
    })
}

/// Multiplicative with `beta(q) = -2`, `beta(q^2) = 1`, `beta(q^e) = 0` for
/// `e >= 3`; the inverse of `d(n)` under Dirichlet convolution.
fn beta(n: u64) -> i64 {
    factor(n)
        .iter()
        .map(|&(_, e)| match e {
            1 => -2,
            2 => 1,
            _ => 0,
        })
        .product()
}

/// `dim S_2^new(Gamma_0(N)) = sum_{M | N} beta(N/M) g(X_0(M))`.
pub fn dim_s2_new_gamma0(n: u64) -> Result<u64, DimsError> {
    if n == 0 {
        return Err(DimsError::LevelTooSmall { n, min: 1 });
    }
    let mut total = 0i64;
    for m in divisors(n) {
        let b = beta(n / m);
        if b != 0 {
            total += b * genus_x0(m)?.genus as i64;
        }
    }
    u64::try_from(total)
        .map_err(|_| DimsError::Inconsistent(format!("negative new dimension at level {n}")))
}

/// `24 g = 24 + N^2 prod(1 - p^-2) - 6 sum_{d | N} phi(d) phi(N/d)` for
/// `N >= 5`.
pub fn genus_x1(n: u64) -> Result<u64, DimsError> {
    if n < 5 {
        return Err(DimsError::LevelTooSmall { n, min: 5 });
    }
    let n2 = n as u128 * n as u128;
    // N^2 prod (1 - 1/p^2) = prod p^{2e-2}(p^2 - 1)
    let index = factor(n).iter().fold(n2, |acc, &(p, _)| {
        let p2 = p as u128 * p as u128;
        acc / p2 * (p2 - 1)
    });
    let cusps: u128 = divisors(n)
        .iter()
        .map(|&d| totient(d) as u128 * totient(n / d) as u128)
        .sum();
    let twenty_four_g = 24 + index as i128 - 6 * cusps as i128;
    if twenty_four_g < 0 || twenty_four_g % 24 != 0 {
        return Err(DimsError::Inconsistent(format!(
            "24 g = {twenty_four_g} for X_1({n})"
        )));
    }
    Ok((twenty_four_g / 24) as u64)
}

/// `dim J_1(p) = (p - 5)(p - 7)/24`, checked against [`genus_x1`].
pub fn dim_j1_prime(p: u64) -> Result<u64, DimsError> {
    if !is_prime(p) {
        return Err(DimsError::NotPrime(p));
    }
    if p < 5 {
        return Err(DimsError::LevelTooSmall { n: p, min: 5 });
    }
    let closed = (p - 5) * p.saturating_sub(7) / 24;
    let genus = genus_x1(p)?;
    if closed != genus {
        return Err(DimsError::Inconsistent(format!(
            "(p-5)(p-7)/24 = {closed} but genus of X_1({p}) is {genus}"
        )));
    }
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    #[test]
    fn x0_examples() {
        assert_eq!(genus_x0(1).unwrap().genus, 0);
        let g11 = genus_x0(11).unwrap();
        assert_eq!((g11.mu, g11.nu2, g11.nu3, g11.nu_inf, g11.genus), (12, 0, 0, 2, 1));
        assert_eq!(genus_x0(22).unwrap().genus, 2);
        assert_eq!(genus_x0(37).unwrap().genus, 2);
        assert_eq!(genus_x0(64).unwrap().genus, 3);
        assert_eq!(genus_x0(13).unwrap().nu2, 2);
        assert_eq!(genus_x0(13).unwrap().nu3, 2);
    }

    #[test]
    fn x0_against_slow_counts() {
        // mu by counting P^1(Z/N), elliptic points by counting roots mod N
        for n in 1..200u64 {
            let mu = (0..n)
                .flat_map(|c| (0..n).map(move |d| (c, d)))
                .filter(|&(c, d)| c.gcd(&d).gcd(&n) == 1)
                .count() as u64
                / totient(n);
            let g = genus_x0(n).unwrap();
            assert_eq!(g.mu, mu, "N = {n}");
            let nu2 = (0..n).filter(|&x| (x * x + 1) % n == 0).count() as u64;
            let nu3 = (0..n).filter(|&x| (x * x + x + 1) % n == 0).count() as u64;
            assert_eq!((g.nu2, g.nu3), (nu2, nu3), "N = {n}");
        }
    }

    #[test]
    fn new_dimensions() {
        assert_eq!(dim_s2_new_gamma0(1).unwrap(), 0);
        assert_eq!(dim_s2_new_gamma0(11).unwrap(), 1);
        assert_eq!(dim_s2_new_gamma0(22).unwrap(), 0);
        assert_eq!(dim_s2_new_gamma0(37).unwrap(), 2);
        assert_eq!(dim_s2_new_gamma0(64).unwrap(), 1);
    }

    #[test]
    fn x1_examples() {
        assert_eq!(genus_x1(5).unwrap(), 0);
        assert_eq!(genus_x1(11).unwrap(), 1);
        assert_eq!(genus_x1(13).unwrap(), 2);
        assert_eq!(genus_x1(16).unwrap(), 2);
        assert!(genus_x1(4).is_err());
        assert_eq!(dim_j1_prime(7).unwrap(), 0);
        assert_eq!(dim_j1_prime(11).unwrap(), 1);
        assert_eq!(dim_j1_prime(37).unwrap(), 40);
    }

    #[test]
    fn old_new_decomposition() {
        let d = |n: u64| divisors(n).len() as u64;
        for n in 1..=600u64 {
            let total: u64 = divisors(n)
                .iter()
                .map(|&m| d(n / m) * dim_s2_new_gamma0(m).unwrap())
                .sum();
            assert_eq!(total, genus_x0(n).unwrap().genus, "N = {n}");
        }
    }

    #[test]
    fn j1_closed_form() {
        for p in primes_up_to(1000).into_iter().filter(|&p| p >= 5) {
            assert_eq!(genus_x1(p).unwrap(), (p - 5) * p.saturating_sub(7) / 24);
        }
    }
}
