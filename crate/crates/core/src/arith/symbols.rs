use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use super::prime::{factor, primes_up_to};
use super::residue::pow_mod;
use super::ArithError;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Kronecker symbol `(a|n)`.
pub fn kronecker(a: i64, n: i64) -> Result<i32, ArithError> {
    if n == 0 {
        return Err(ArithError::KroneckerZero);
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut sign = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
        n >>= v;
    }
    // Jacobi symbol for odd positive n
    a = a.rem_euclid(n);
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        (a, n) = (n % a, a);
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1, "totient of zero");
    factor(n)
        .into_iter()
        .fold(n, |acc, (q, _)| acc / q * (q - 1))
}

/// Least `t >= 1` with `a^t = 1 (mod m)`.
pub fn multiplicative_order(a: i64, m: u64) -> Result<u64, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroModulus);
    }
    let a = (a as i128).rem_euclid(m as i128) as u64;
    if m == 1 {
        return Ok(1);
    }
    if a.gcd(&m) != 1 {
        return Err(ArithError::NotCoprime { a, m });
    }
    let mut t = totient(m);
    for (q, _) in factor(t) {
        while t.is_multiple_of(q) && pow_mod(a, t / q, m) == 1 {
            t /= q;
        }
    }
    Ok(t)
}

/// One row of [`totient_liminf_report`].
#[derive(Clone, Debug, Serialize)]
pub struct PrimorialRatio {
    pub k: usize,
    #[serde(serialize_with = "crate::serde_util::big_as_string")]
    pub primorial: BigUint,
    pub ratio: f64,
}

/// `phi(n) ln ln n / n` at the primorials `n = 2*3*...*p_k` for `k = 3..=count`.
///
/// These are the extremal inputs for the totient ratio, whose lim inf is
/// `exp(-EULER_GAMMA)`.
pub fn totient_liminf_report(count: usize) -> Result<Vec<PrimorialRatio>, ArithError> {
    if !(3..=25).contains(&count) {
        return Err(ArithError::ReportSize(count));
    }
    let primes = primes_up_to(100);
    let mut primorial = BigUint::from(1u32);
    let mut density = 1.0f64;
    let mut log_n = 0.0f64;
    let mut out = Vec::new();
    for (i, &q) in primes.iter().take(count).enumerate() {
        primorial *= q;
        density *= 1.0 - 1.0 / q as f64;
        log_n += (q as f64).ln();
        let k = i + 1;
        if k >= 3 {
            out.push(PrimorialRatio {
                k,
                primorial: primorial.clone(),
                ratio: density * log_n.ln(),
            });
        }
    }
    Ok(out)
}

/// `exp(-EULER_GAMMA)`, the limit of [`totient_liminf_report`].
pub fn totient_liminf_target() -> f64 {
    (-EULER_GAMMA).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn legendre_by_squares(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(1, 7).unwrap(), 1);
        assert_eq!(kronecker(-23, 5).unwrap(), -1);
        assert_eq!(kronecker(-23, 2).unwrap(), 1);
        assert_eq!(kronecker(-4, 3).unwrap(), -1);
        assert_eq!(kronecker(5, -1).unwrap(), 1);
        assert_eq!(kronecker(-5, -1).unwrap(), -1);
        assert_eq!(kronecker(6, 4).unwrap(), 0);
        assert!(kronecker(3, 0).is_err());
    }

    #[test]
    fn kronecker_matches_legendre_at_odd_primes() {
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in -60..60 {
                assert_eq!(
                    kronecker(a, p as i64).unwrap(),
                    legendre_by_squares(a, p as i64),
                    "({a}|{p})"
                );
            }
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(1, 13).unwrap(), 1);
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(3, 7).unwrap(), 6);
        assert_eq!(multiplicative_order(-1, 10).unwrap(), 2);
        assert!(multiplicative_order(4, 6).is_err());
    }

    #[test]
    fn order_matches_power_scan() {
        for m in 2..200u64 {
            for a in 1..m {
                if a.gcd(&m) != 1 {
                    continue;
                }
                let mut t = 1;
                let mut x = a % m;
                while x != 1 {
                    x = x * a % m;
                    t += 1;
                }
                assert_eq!(multiplicative_order(a as i64, m).unwrap(), t);
            }
        }
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(11), 10);
        for n in 1..500u64 {
            let direct = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(totient(n), direct);
        }
    }

    #[test]
    fn primorial_ratios() {
        let rows = totient_liminf_report(10).unwrap();
        assert_eq!(rows[0].k, 3);
        assert_eq!(rows[0].primorial, BigUint::from(30u32));
        // (8/30) ln ln 30
        let direct = 8.0 / 30.0 * (30f64).ln().ln();
        assert!((rows[0].ratio - direct).abs() < 1e-12);
        assert!((rows[0].ratio - 0.3264).abs() < 1e-4);
        let k10 = rows.last().unwrap();
        assert_eq!(k10.primorial, BigUint::from(6_469_693_230u64));
        assert!((k10.ratio - 0.49).abs() < 0.01);
        assert!((totient_liminf_target() - 0.56146).abs() < 1e-5);
        assert!(totient_liminf_report(2).is_err());
        assert!(totient_liminf_report(26).is_err());
    }

    proptest! {
        #[test]
        fn reciprocity(m in (1i64..20_000).prop_map(|k| 2 * k + 1), n in (1i64..20_000).prop_map(|k| 2 * k + 1)) {
            prop_assume!(m.gcd(&n) == 1);
            let sign = if (m - 1) / 2 % 2 == 1 && (n - 1) / 2 % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(kronecker(m, n).unwrap() * kronecker(n, m).unwrap(), sign);
        }

        #[test]
        fn order_divides_totient(m in 2u64..100_000, a in 1i64..100_000) {
            prop_assume!((a as u64).gcd(&m) == 1);
            prop_assert_eq!(totient(m) % multiplicative_order(a, m).unwrap(), 0);
        }
    }
}
