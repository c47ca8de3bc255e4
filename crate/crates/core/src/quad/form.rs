use std::fmt;

use serde::Serialize;

use crate::arith::{factor, is_prime, kronecker, sqrt_mod};

use super::QuadError;

/// A negative fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Discriminant(i64);

impl Discriminant {
    /// Any negative fundamental discriminant.
    pub fn new(d: i64) -> Result<Self, QuadError> {
        if d >= 0 || !is_fundamental(d) {
            return Err(QuadError::NotFundamental(d));
        }
        Ok(Discriminant(d))
    }

    /// `-p` for a prime `p = 3 (mod 4)`, `p >= 7`.
    pub fn minus_prime(p: u64) -> Result<Self, QuadError> {
        if p < 7 || p % 4 != 3 || !is_prime(p) {
            return Err(QuadError::BadPrime(p));
        }
        Ok(Discriminant(-(p as i64)))
    }

    pub fn value(self) -> i64 {
        self.0
    }

    /// `Some(p)` when the discriminant is `-p` with `p` prime.
    pub fn prime(self) -> Option<u64> {
        let p = self.0.unsigned_abs();
        (p % 4 == 3 && is_prime(p)).then_some(p)
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn squarefree(n: u64) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}

fn is_fundamental(d: i64) -> bool {
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// The binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    /// The identity of the class group: `(1, b, (b^2 - D)/4)` with `b = D mod 2`.
    pub fn principal(d: Discriminant) -> Self {
        let b = d.0.rem_euclid(2);
        QuadForm::new(1, b, (b * b - d.0) / 4)
    }

    pub fn discriminant(&self) -> i64 {
        let d = self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128;
        d as i64
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        let (x, y) = (x as i128, y as i128);
        (self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y) as i64
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        if a <= 0 || b.abs() > a || a > c {
            return false;
        }
        if b.abs() == a || a == c {
            return b >= 0;
        }
        true
    }

    /// The unique reduced form properly equivalent to a positive definite form.
    pub fn reduce(&self) -> Self {
        debug_assert!(self.a > 0 && self.discriminant() < 0);
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if b <= -a || b > a {
                // x -> x + k y moves b into (-a, a]
                let k = (a - b).div_euclid(2 * a);
                c += (a * k + b) * k;
                b += 2 * a * k;
            }
            if a > c {
                (a, b, c) = (c, -b, a);
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        QuadForm::new(a as i64, b as i64, c as i64)
    }

    /// The inverse class `(a, -b, c)`, reduced.
    pub fn inverse(&self) -> Self {
        QuadForm::new(self.a, -self.b, self.c).reduce()
    }

    /// Dirichlet composition followed by reduction.
    pub fn compose(&self, other: &QuadForm) -> Result<QuadForm, QuadError> {
        let d = self.discriminant();
        if d != other.discriminant() {
            return Err(QuadError::DiscriminantMismatch(d, other.discriminant()));
        }
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2, c2) = (other.a as i128, other.b as i128, other.c as i128);
        let beta = (b1 + b2) / 2;
        // v a2 + w beta = g (the a1 coefficient is not needed)
        let (g1, _, v1) = xgcd(a1, a2);
        let (g, u2, w) = xgcd(g1, beta);
        let v = u2 * v1;
        let a3 = a1 * a2 / (g * g);
        let b3 = b2 + 2 * (a2 / g) * (v * (beta - b2) - w * c2);
        let b3 = {
            // representative in (-a3, a3]
            let m = 2 * a3;
            let r = b3.rem_euclid(m);
            if r > a3 {
                r - m
            } else {
                r
            }
        };
        let num = b3 * b3 - d as i128;
        debug_assert_eq!(num % (4 * a3), 0, "composition left the discriminant");
        let c3 = num / (4 * a3);
        Ok(QuadForm::new(a3 as i64, b3 as i64, c3 as i64).reduce())
    }
}

/// `(g, x, y)` with `g = gcd(a, b) = x a + y b`, `g >= 0`.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Every reduced form of discriminant `d < -4`, in lexicographic order.
pub fn reduced_forms(d: Discriminant) -> Result<Vec<QuadForm>, QuadError> {
    let dv = d.value();
    if dv >= -4 {
        return Err(QuadError::SmallDiscriminant(dv));
    }
    let mut out = Vec::new();
    let abs = dv.unsigned_abs() as i64;
    let mut a = 1i64;
    // 3 a^2 <= |D| for reduced forms
    while 3 * a * a <= abs {
        let parity = dv.rem_euclid(2);
        let mut b = -a + 1;
        if (b - parity).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - dv;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let f = QuadForm::new(a, b, c);
                if f.is_reduced() {
                    out.push(f);
                }
            }
            b += 2;
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// `h(D)` as the number of reduced forms.
pub fn class_number(d: Discriminant) -> Result<u64, QuadError> {
    Ok(reduced_forms(d)?.len() as u64)
}

/// `h(-p)` from the Dirichlet class number formula
/// `h = (2 - (2|p))^{-1} * sum_{0<a<p/2} (a|p)`, for `p = 3 (mod 4)`.
pub fn class_number_analytic(d: Discriminant) -> Result<u64, QuadError> {
    let p = d.prime().ok_or(QuadError::NotMinusPrime(d.value()))? as i64;
    let two = kronecker(2, p).expect("p is nonzero") as i64;
    let sum: i64 = (1..=(p - 1) / 2)
        .map(|a| kronecker(a, p).expect("p is nonzero") as i64)
        .sum();
    let den = 2 - two;
    if sum <= 0 || sum % den != 0 {
        return Err(QuadError::Inconsistent(format!(
            "Dirichlet sum {sum} for p = {p} is not a positive multiple of {den}"
        )));
    }
    Ok((sum / den) as u64)
}

/// Both class-number routes, required to agree.
pub fn checked_class_number(d: Discriminant) -> Result<u64, QuadError> {
    let forms = class_number(d)?;
    let analytic = class_number_analytic(d)?;
    if forms != analytic {
        return Err(QuadError::Inconsistent(format!(
            "h({d}): {forms} reduced forms but Dirichlet formula gives {analytic}"
        )));
    }
    Ok(forms)
}

/// How a rational prime decomposes in the order of discriminant `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Splitting {
    Inert,
    /// The class of the unique prime above `l`.
    Ramified { class: QuadForm },
    /// The classes of the two conjugate primes above `l`.
    Split { prime: QuadForm, conjugate: QuadForm },
}

/// Splitting type of the prime `l` together with the classes of the primes
/// above it.
///
/// A prime above a split `l` is sent to the reduction of
/// `(l, b, (b^2 - D)/4l)` with `b` the least root of `b^2 = D (mod 4l)` in
/// `(0, 2l)`.
pub fn prime_ideal_class(d: Discriminant, l: u64) -> Result<Splitting, QuadError> {
    if !is_prime(l) {
        return Err(QuadError::NotPrime(l));
    }
    let dv = d.value();
    let symbol = kronecker(dv, l as i64).expect("l is nonzero");
    if symbol == -1 {
        return Ok(Splitting::Inert);
    }
    let b = least_root(dv, l, symbol == 0).ok_or_else(|| {
        QuadError::Inconsistent(format!("no square root of {dv} modulo {}", 4 * l))
    })?;
    let li = l as i64;
    let c = (b * b - dv) / (4 * li);
    let form = QuadForm::new(li, b, c).reduce();
    if symbol == 0 {
        Ok(Splitting::Ramified { class: form })
    } else {
        Ok(Splitting::Split {
            prime: form,
            conjugate: QuadForm::new(li, -b, c).reduce(),
        })
    }
}

/// Least `b` in `[0, 2l)` (in `(0, 2l)` unless ramified) with `b^2 = D (mod 4l)`.
fn least_root(d: i64, l: u64, ramified: bool) -> Option<i64> {
    let li = l as i64;
    let m = 4 * li;
    let ok = |b: i64| (b * b - d).rem_euclid(m) == 0;
    if l == 2 || ramified {
        return (0..2 * li).filter(|&b| ramified || b > 0).find(|&b| ok(b));
    }
    let r = sqrt_mod(d.rem_euclid(li) as u64, l)? as i64;
    let mut cands = [r, li - r, r + li, 2 * li - r];
    cands.sort_unstable();
    cands.into_iter().find(|&b| b > 0 && b < 2 * li && ok(b))
}

/// `r_Q(n) = #{(x, y) != (0, 0) : Q(x, y) = n}` for `0 <= n <= bound`;
/// index 0 is always zero.
pub fn representation_counts(q: &QuadForm, bound: u64) -> Vec<u64> {
    let d = q.discriminant();
    assert!(q.a > 0 && d < 0, "form must be positive definite");
    let (a, b) = (q.a as i128, q.b as i128);
    let abs_d = -(d as i128);
    let bound_i = bound as i128;
    let mut out = vec![0u64; bound as usize + 1];
    // 4a Q(x,y) = (2ax + by)^2 + |D| y^2
    let y_max = isqrt(4 * a * bound_i / abs_d);
    for y in -y_max..=y_max {
        let room = 4 * a * bound_i - abs_d * y * y;
        if room < 0 {
            continue;
        }
        let s = isqrt(room);
        let x_lo = (-s - b * y).div_euclid(2 * a) - 1;
        let x_hi = (s - b * y).div_euclid(2 * a) + 1;
        for x in x_lo..=x_hi {
            if x == 0 && y == 0 {
                continue;
            }
            let v = q.eval(x as i64, y as i64) as i128;
            if v >= 1 && v <= bound_i {
                out[v as usize] += 1;
            }
        }
    }
    out
}

fn isqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    #[test]
    fn discriminant_validation() {
        assert!(Discriminant::new(-23).is_ok());
        assert!(Discriminant::new(-4).is_ok());
        assert!(Discriminant::new(-84).is_ok());
        assert!(Discriminant::new(-12).is_err());
        assert!(Discriminant::new(-25).is_err());
        assert!(Discriminant::new(-22).is_err());
        assert!(Discriminant::new(5).is_err());
        assert!(Discriminant::minus_prime(23).is_ok());
        assert!(Discriminant::minus_prime(3).is_err());
        assert!(Discriminant::minus_prime(13).is_err());
    }

    #[test]
    fn reduced_form_examples() {
        assert_eq!(reduced_forms(disc(-7)).unwrap(), vec![QuadForm::new(1, 1, 2)]);
        assert_eq!(
            reduced_forms(disc(-23)).unwrap(),
            vec![
                QuadForm::new(1, 1, 6),
                QuadForm::new(2, -1, 3),
                QuadForm::new(2, 1, 3)
            ]
        );
        assert_eq!(reduced_forms(disc(-47)).unwrap().len(), 5);
        assert!(reduced_forms(disc(-4)).is_err());
    }

    #[test]
    fn reduced_forms_by_exhaustive_search() {
        // every form with a, |b|, c in a generous box, filtered by the reduction rules
        for p in [7i64, 23, 31, 47, 71, 103] {
            let d = -p;
            let mut brute = Vec::new();
            for a in 1..=p {
                for b in -a..=a {
                    let num = b * b - d;
                    if num % (4 * a) == 0 {
                        let f = QuadForm::new(a, b, num / (4 * a));
                        if f.is_reduced() {
                            brute.push(f);
                        }
                    }
                }
            }
            brute.sort();
            assert_eq!(reduced_forms(disc(d)).unwrap(), brute, "D = {d}");
        }
    }

    #[test]
    fn class_numbers_two_ways() {
        for (p, h) in [(7u64, 1u64), (23, 3), (71, 7), (47, 5), (163, 1)] {
            let d = Discriminant::minus_prime(p).unwrap();
            assert_eq!(class_number(d).unwrap(), h);
            assert_eq!(class_number_analytic(d).unwrap(), h);
            assert_eq!(checked_class_number(d).unwrap(), h);
        }
    }

    #[test]
    fn reduction_is_idempotent_and_preserves_discriminant() {
        let f = QuadForm::new(23, 23, 6);
        let r = f.reduce();
        assert!(r.is_reduced());
        assert_eq!(r.discriminant(), -23);
        assert_eq!(r.reduce(), r);
        assert_eq!(QuadForm::new(6, -1, 1).reduce(), QuadForm::new(1, 1, 6));
    }

    #[test]
    fn composition_examples() {
        let d = disc(-23);
        let e = QuadForm::principal(d);
        let f = QuadForm::new(2, 1, 3);
        let g = QuadForm::new(2, -1, 3);
        assert_eq!(e, QuadForm::new(1, 1, 6));
        assert_eq!(e.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&g).unwrap(), e);
        assert_eq!(f.compose(&f).unwrap(), g);
        assert_eq!(f.inverse(), g);
        assert!(f.compose(&QuadForm::new(1, 1, 2)).is_err());
    }

    #[test]
    fn splitting_examples() {
        let d = disc(-23);
        assert_eq!(prime_ideal_class(d, 5).unwrap(), Splitting::Inert);
        assert_eq!(
            prime_ideal_class(d, 2).unwrap(),
            Splitting::Split {
                prime: QuadForm::new(2, 1, 3),
                conjugate: QuadForm::new(2, -1, 3)
            }
        );
        // (23, 23, 6) reduces to the principal form
        assert_eq!(
            prime_ideal_class(d, 23).unwrap(),
            Splitting::Ramified {
                class: QuadForm::new(1, 1, 6)
            }
        );
        let gauss = disc(-4);
        assert_eq!(prime_ideal_class(gauss, 7).unwrap(), Splitting::Inert);
        assert!(matches!(
            prime_ideal_class(gauss, 5).unwrap(),
            Splitting::Split { .. }
        ));
        assert!(matches!(
            prime_ideal_class(gauss, 2).unwrap(),
            Splitting::Ramified { .. }
        ));
        assert!(prime_ideal_class(d, 9).is_err());
    }

    #[test]
    fn split_classes_are_mutually_inverse() {
        let d = disc(-47);
        for l in crate::arith::primes_up_to(300) {
            if let Splitting::Split { prime, conjugate } = prime_ideal_class(d, l).unwrap() {
                assert_eq!(prime.compose(&conjugate).unwrap(), QuadForm::principal(d));
                // the class of l represents l
                assert!(representation_counts(&prime, l)[l as usize] > 0);
            }
        }
    }

    #[test]
    fn representation_examples() {
        let q = QuadForm::new(1, 1, 6);
        let r = representation_counts(&q, 10);
        assert_eq!(r[0], 0);
        assert_eq!(r[1], 2);
        assert_eq!(r[6], 4);
        let q2 = QuadForm::new(2, 1, 3);
        assert_eq!(representation_counts(&q2, 10)[1], 0);
    }

    #[test]
    fn representation_counts_match_box_scan() {
        for q in [QuadForm::new(2, 1, 3), QuadForm::new(3, 2, 5), QuadForm::new(1, 0, 1)] {
            let bound = 150;
            let fast = representation_counts(&q, bound);
            let mut slow = vec![0u64; bound as usize + 1];
            for x in -40i64..=40 {
                for y in -40i64..=40 {
                    let v = q.eval(x, y);
                    if (x, y) != (0, 0) && v <= bound as i64 {
                        slow[v as usize] += 1;
                    }
                }
            }
            assert_eq!(fast, slow, "{q}");
        }
    }
}
