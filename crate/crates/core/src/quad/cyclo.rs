//! Exact elements of `Z[zeta_m]`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::divisors;

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u64, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

fn moebius(n: u64) -> i64 {
    let f = crate::arith::factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact quotient by `x^d - 1`.
fn div_by_xd_minus_1(a: &[i64], d: usize) -> Vec<i64> {
    let n = a.len() - 1;
    let mut rem = a.to_vec();
    let mut q = vec![0i64; n - d + 1];
    for i in (d..=n).rev() {
        let c = rem[i];
        q[i - d] = c;
        rem[i] = 0;
        rem[i - d] += c;
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Coefficients of the `m`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(m: u64) -> Rc<Vec<i64>> {
    PHI_CACHE.with(|cache| {
        if let Some(p) = cache.borrow().get(&m) {
            return p.clone();
        }
        // Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)}
        let mut num = vec![1i64];
        let mut den = Vec::new();
        for d in divisors(m) {
            let mut xd = vec![0i64; d as usize + 1];
            xd[0] = -1;
            xd[d as usize] = 1;
            match moebius(m / d) {
                1 => num = poly_mul(&num, &xd),
                -1 => den.push(d as usize),
                _ => {}
            }
        }
        for d in den {
            num = div_by_xd_minus_1(&num, d);
        }
        let phi = Rc::new(num);
        cache.borrow_mut().insert(m, phi.clone());
        phi
    })
}

/// An element of `Z[zeta_m]`, stored in the power basis `1, z, ..., z^{phi(m)-1}`
/// of `Z[x]/Phi_m(x)`. The representation is canonical, so `==` is equality
/// of algebraic integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloValue {
    order: u64,
    coeffs: Vec<i64>,
}

impl CycloValue {
    /// Reduce an arbitrary polynomial in `zeta_m`.
    pub fn from_poly(order: u64, poly: &[i64]) -> Self {
        assert!(order >= 1, "order must be positive");
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        let mut work = poly.to_vec();
        if work.len() < deg {
            work.resize(deg, 0);
        }
        for i in (deg..work.len()).rev() {
            let c = work[i];
            if c == 0 {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate() {
                work[i - deg + j] -= c * pj;
            }
        }
        work.truncate(deg);
        CycloValue {
            order,
            coeffs: work,
        }
    }

    pub fn from_int(order: u64, n: i64) -> Self {
        CycloValue::from_poly(order, &[n])
    }

    pub fn zero(order: u64) -> Self {
        CycloValue::from_int(order, 0)
    }

    pub fn one(order: u64) -> Self {
        CycloValue::from_int(order, 1)
    }

    /// `zeta_m^k`.
    pub fn zeta_pow(order: u64, k: u64) -> Self {
        let mut poly = vec![0i64; order as usize];
        poly[(k % order) as usize] = 1;
        CycloValue::from_poly(order, &poly)
    }

    /// `sum_k counts[k] zeta_m^k`.
    pub fn from_exponent_counts(order: u64, counts: &[i64]) -> Self {
        debug_assert_eq!(counts.len() as u64, order);
        CycloValue::from_poly(order, counts)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `Some(n)` if the value is the rational integer `n`.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..]
            .iter()
            .all(|&c| c == 0)
            .then(|| self.coeffs[0])
    }

    /// Complex conjugation, `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.order as usize;
        let mut poly = vec![0i64; m];
        for (i, &c) in self.coeffs.iter().enumerate() {
            poly[(m - i) % m] += c;
        }
        CycloValue::from_poly(self.order, &poly)
    }

    /// The same number viewed in `Z[zeta_n]` for a multiple `n` of the order.
    pub fn lift(&self, n: u64) -> Self {
        assert_eq!(n % self.order, 0, "target order must be a multiple");
        let step = (n / self.order) as usize;
        let mut poly = vec![0i64; (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            poly[i * step] += c;
        }
        CycloValue::from_poly(n, &poly)
    }

    /// Embedding with `zeta_m = exp(2 pi i / m)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (i, &c)| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / m;
                (re + c as f64 * t.cos(), im + c as f64 * t.sin())
            })
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.order, other.order, "cyclotomic orders differ");
    }
}

impl Add for &CycloValue {
    type Output = CycloValue;
    fn add(self, rhs: &CycloValue) -> CycloValue {
        self.check(rhs);
        CycloValue {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycloValue {
    type Output = CycloValue;
    fn sub(self, rhs: &CycloValue) -> CycloValue {
        self + &(-rhs)
    }
}

impl Neg for &CycloValue {
    type Output = CycloValue;
    fn neg(self) -> CycloValue {
        CycloValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycloValue {
    type Output = CycloValue;
    fn mul(self, rhs: &CycloValue) -> CycloValue {
        self.check(rhs);
        CycloValue::from_poly(self.order, &poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "z{}", self.order)?,
                (_, 1) => write!(f, "z{}^{i}", self.order)?,
                (1, _) => write!(f, "{a}*z{}", self.order)?,
                _ => write!(f, "{a}*z{}^{i}", self.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloValue({self})")
    }
}

impl Serialize for CycloValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CycloValue", 2)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}
