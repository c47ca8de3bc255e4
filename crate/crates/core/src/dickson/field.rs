use std::fmt;

use serde::Serialize;

use crate::arith::{factor, inv_mod, is_prime, kronecker};

use super::DicksonError;

/// The field `F_q` with `q = p` or `q = p^2`.
///
/// For `r = 2` the field is `F_p[t]/(t^2 - n)` with `n` the least quadratic
/// nonresidue mod `p`, so `p` must be odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GFq {
    p: u64,
    r: u32,
    #[serde(skip)]
    nonres: u64,
}

/// An element `c0 + c1 t`; `c1 = 0` in the prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    pub c0: u64,
    pub c1: u64,
}

impl GFq {
    pub fn new(p: u64, r: u32) -> Result<Self, DicksonError> {
        if !is_prime(p) || p > 1 << 20 {
            return Err(DicksonError::BadField(format!("{p} is not a prime below 2^20")));
        }
        let nonres = match r {
            1 => 0,
            2 if p == 2 => {
                return Err(DicksonError::BadField("F_4 is not supported".into()));
            }
            2 => (2..p)
                .find(|&n| kronecker(n as i64, p as i64) == Ok(-1))
                .expect("odd primes have nonresidues"),
            _ => return Err(DicksonError::BadField(format!("degree {r} is not 1 or 2"))),
        };
        Ok(GFq { p, r, nonres })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// The field size `q`.
    pub fn order(&self) -> u64 {
        self.p.pow(self.r)
    }

    /// `t^2` for `r = 2`.
    pub fn nonresidue(&self) -> u64 {
        self.nonres
    }

    pub fn zero(&self) -> Fq {
        Fq { c0: 0, c1: 0 }
    }

    pub fn one(&self) -> Fq {
        Fq { c0: 1, c1: 0 }
    }

    pub fn from_int(&self, n: i64) -> Fq {
        Fq {
            c0: n.rem_euclid(self.p as i64) as u64,
            c1: 0,
        }
    }

    pub fn elem(&self, c0: i64, c1: i64) -> Fq {
        assert!(self.r == 2 || c1 == 0, "c1 must vanish in a prime field");
        Fq {
            c0: c0.rem_euclid(self.p as i64) as u64,
            c1: c1.rem_euclid(self.p as i64) as u64,
        }
    }

    /// The generator `t` of `F_{p^2}` over `F_p`.
    pub fn t(&self) -> Fq {
        assert_eq!(self.r, 2);
        Fq { c0: 0, c1: 1 }
    }

    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        Fq {
            c0: (x.c0 + y.c0) % self.p,
            c1: (x.c1 + y.c1) % self.p,
        }
    }

    pub fn neg(&self, x: Fq) -> Fq {
        Fq {
            c0: (self.p - x.c0) % self.p,
            c1: (self.p - x.c1) % self.p,
        }
    }

    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        // p < 2^20, so every product below stays under 2^41
        let p = self.p;
        if self.r == 1 {
            return Fq {
                c0: x.c0 * y.c0 % p,
                c1: 0,
            };
        }
        let c1c1 = x.c1 * y.c1 % p;
        Fq {
            c0: (x.c0 * y.c0 + c1c1 * self.nonres) % p,
            c1: (x.c0 * y.c1 + x.c1 * y.c0) % p,
        }
    }

    pub fn pow(&self, x: Fq, mut e: u64) -> Fq {
        let mut acc = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x^p`.
    pub fn frobenius(&self, x: Fq) -> Fq {
        Fq {
            c0: x.c0,
            c1: (self.p - x.c1) % self.p,
        }
    }

    /// Norm to `F_p`, `x * x^p`.
    fn norm(&self, x: Fq) -> u64 {
        self.mul(x, self.frobenius(x)).c0
    }

    pub fn inv(&self, x: Fq) -> Option<Fq> {
        if x.is_zero() {
            return None;
        }
        let n_inv = inv_mod(self.norm(x), self.p)?;
        let conj = self.frobenius(x);
        Some(self.mul(conj, self.from_int(n_inv as i64)))
    }

    pub fn div(&self, x: Fq, y: Fq) -> Option<Fq> {
        Some(self.mul(x, self.inv(y)?))
    }

    /// Nonzero squares, by Euler's criterion.
    pub fn is_square(&self, x: Fq) -> bool {
        !x.is_zero() && self.pow(x, (self.order() - 1) / 2) == self.one()
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: Fq) -> u64 {
        assert!(!x.is_zero());
        let mut n = self.order() - 1;
        for (l, e) in factor(n) {
            for _ in 0..e {
                if self.pow(x, n / l) == self.one() {
                    n /= l;
                } else {
                    break;
                }
            }
        }
        n
    }

    /// The least generator of `F_q^*` in the order of [`Self::elements`].
    pub fn primitive_element(&self) -> Fq {
        let n = self.order() - 1;
        self.elements()
            .find(|&x| !x.is_zero() && self.element_order(x) == n)
            .expect("F_q^* is cyclic")
    }

    /// All `q` elements, ordered by `(c1, c0)`.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        let p = self.p;
        let c1_max = if self.r == 2 { p } else { 1 };
        (0..c1_max).flat_map(move |c1| (0..p).map(move |c0| Fq { c0, c1 }))
    }

    pub fn display(&self, x: Fq) -> String {
        if self.r == 1 || x.c1 == 0 {
            x.c0.to_string()
        } else if x.c0 == 0 {
            format!("{}t", x.c1)
        } else {
            format!("{}+{}t", x.c0, x.c1)
        }
    }
}

impl Fq {
    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }
}

impl fmt::Display for GFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order())
    }
}
