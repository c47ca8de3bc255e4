use num_integer::Integer;

use super::residue::{add_mod, mul_mod, pow_mod};
use super::ArithError;

/// Exclusive upper bound for [`is_prime`].
pub const PRIMALITY_LIMIT: u64 = 1 << 62;

// Strong-pseudoprime bases 2..37 are deterministic below 3.3e24.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for `n < 2^62`.
///
/// Panics above [`PRIMALITY_LIMIT`]; use [`try_is_prime`] for untrusted input.
pub fn is_prime(n: u64) -> bool {
    match try_is_prime(n) {
        Ok(b) => b,
        Err(e) => panic!("{e}"),
    }
}

pub fn try_is_prime(n: u64) -> Result<bool, ArithError> {
    if n >= PRIMALITY_LIMIT {
        return Err(ArithError::PrimalityRange(n));
    }
    if n < 2 {
        return Ok(false);
    }
    for &q in &MR_BASES {
        if n == q {
            return Ok(true);
        }
        if n.is_multiple_of(q) {
            return Ok(false);
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// All primes `<= n`, by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Primes in the closed interval `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    if hi <= 50_000_000 {
        return primes_up_to(hi).into_iter().filter(|&p| p >= lo).collect();
    }
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "cannot factor zero");
    let mut primes = Vec::new();
    let mut m = n;
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while m.is_multiple_of(q) {
            primes.push(q);
            m /= q;
        }
    }
    if m > 1 {
        split_into(m, &mut primes);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if n < 53 * 53 || is_prime(n) {
        // no prime factor below 53 survives trial division, so n is prime here
        out.push(n);
        return;
    }
    let mut c = 1;
    let d = loop {
        if let Some(d) = pollard_brent(n, c) {
            break d;
        }
        c += 1;
    };
    split_into(d, out);
    split_into(n / d, out);
}

fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// All positive divisors of `n`, sorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (q, e) in factor(n) {
        let len = out.len();
        let mut pw = 1;
        for _ in 0..e {
            pw *= q;
            for i in 0..len {
                out.push(out[i] * pw);
            }
        }
    }
    out.sort_unstable();
    out
}

/// A square root of `a` modulo an odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}
