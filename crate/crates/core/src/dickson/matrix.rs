use std::fmt;
use std::hash::{Hash, Hasher};

use rustc_hash::FxHashSet;

use super::field::{Fq, GFq};
use super::DicksonError;

/// A 2x2 matrix `[[a, b], [c, d]]` over `F_q`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Mat2 {
    field: GFq,
    /// `[a, b, c, d]`
    e: [Fq; 4],
}

// the field is left out of the hash: closures never mix fields
impl Hash for Mat2 {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.e.hash(state);
    }
}

impl Mat2 {
    pub fn new(field: GFq, e: [Fq; 4]) -> Self {
        Mat2 { field, e }
    }

    /// Entries given as prime-field integers.
    pub fn from_ints(field: GFq, e: [i64; 4]) -> Self {
        Mat2::new(field, e.map(|x| field.from_int(x)))
    }

    pub fn identity(field: GFq) -> Self {
        Mat2::from_ints(field, [1, 0, 0, 1])
    }

    pub fn scalar(field: GFq, s: Fq) -> Self {
        Mat2::new(field, [s, field.zero(), field.zero(), s])
    }

    pub fn field(&self) -> GFq {
        self.field
    }

    pub fn entries(&self) -> [Fq; 4] {
        self.e
    }

    pub fn det(&self) -> Fq {
        let f = &self.field;
        let [a, b, c, d] = self.e;
        f.sub(f.mul(a, d), f.mul(b, c))
    }

    pub fn trace(&self) -> Fq {
        self.field.add(self.e[0], self.e[3])
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let f = &self.field;
        let [a, b, c, d] = self.e;
        let [w, x, y, z] = o.e;
        Mat2::new(
            self.field,
            [
                f.add(f.mul(a, w), f.mul(b, y)),
                f.add(f.mul(a, x), f.mul(b, z)),
                f.add(f.mul(c, w), f.mul(d, y)),
                f.add(f.mul(c, x), f.mul(d, z)),
            ],
        )
    }

    pub fn pow(&self, mut n: u64) -> Mat2 {
        let mut acc = Mat2::identity(self.field);
        let mut base = *self;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let f = &self.field;
        let di = f.inv(self.det())?;
        let [a, b, c, d] = self.e;
        Some(Mat2::new(
            self.field,
            [f.mul(d, di), f.mul(f.neg(b), di), f.mul(f.neg(c), di), f.mul(a, di)],
        ))
    }

    pub fn scale(&self, s: Fq) -> Mat2 {
        let f = &self.field;
        Mat2::new(self.field, self.e.map(|x| f.mul(x, s)))
    }

    pub fn is_scalar(&self) -> bool {
        self.e[1].is_zero() && self.e[2].is_zero() && self.e[0] == self.e[3]
    }

    /// Representative of the class in `PGL_2`: the first nonzero entry is 1.
    pub fn normalized(&self) -> Mat2 {
        let lead = self
            .e
            .iter()
            .find(|x| !x.is_zero())
            .copied()
            .expect("zero matrix has no projective class");
        if lead == self.field.one() {
            return *self;
        }
        self.scale(self.field.inv(lead).expect("nonzero"))
    }

    /// Least `t >= 1` with `m^t` scalar.
    pub fn projective_order(&self) -> Result<u64, DicksonError> {
        if !self.is_invertible() {
            return Err(DicksonError::Singular(self.to_string()));
        }
        // element orders in PGL_2(F_q) are at most q + 1 or p
        let limit = self.field.order() * self.field.order();
        let mut x = *self;
        for t in 1..=limit {
            if x.is_scalar() {
                return Ok(t);
            }
            x = x.mul(self);
        }
        unreachable!("projective order exceeds |PGL_2|");
    }

    /// `Q o g` for the binary quadratic form `Q = (A, B, C)`, i.e.
    /// `Q(a x + b y, c x + d y)`.
    pub(crate) fn act_on_form(&self, q: [Fq; 3]) -> [Fq; 3] {
        let f = &self.field;
        let [a, b, c, d] = self.e;
        let [qa, qb, qc] = q;
        let two = f.from_int(2);
        let m = |x: Fq, y: Fq| f.mul(x, y);
        [
            f.add(f.add(m(qa, m(a, a)), m(qb, m(a, c))), m(qc, m(c, c))),
            f.add(
                f.add(m(m(two, qa), m(a, b)), m(qb, f.add(m(a, d), m(b, c)))),
                m(m(two, qc), m(c, d)),
            ),
            f.add(f.add(m(qa, m(b, b)), m(qb, m(b, d))), m(qc, m(d, d))),
        ]
    }

    /// The form `c x^2 + (d - a) x y - b y^2` vanishing on the fixed points
    /// `(x : y)` of the matrix; zero for scalars.
    pub(crate) fn fixed_point_form(&self) -> [Fq; 3] {
        let f = &self.field;
        let [a, b, c, d] = self.e;
        [c, f.sub(d, a), f.neg(b)]
    }

    /// Does the matrix fix the point `(x : y)` of `P^1`?
    pub(crate) fn fixes(&self, x: Fq, y: Fq) -> bool {
        let f = &self.field;
        let [a, b, c, d] = self.e;
        let u = f.add(f.mul(a, x), f.mul(b, y));
        let v = f.add(f.mul(c, x), f.mul(d, y));
        f.mul(u, y) == f.mul(v, x)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.e.map(|x| self.field.display(x));
        write!(f, "[[{}, {}], [{}, {}]]", s[0], s[1], s[2], s[3])
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field)
    }
}

/// Result of a bounded closure in `PGL_2(F_q)`.
#[derive(Clone, Debug)]
pub enum Closure {
    /// Normalized elements in breadth-first order, identity first.
    Complete(Vec<Mat2>),
    /// More than `budget` elements were found.
    Overflow { budget: usize },
}

impl Closure {
    pub fn elements(&self) -> Option<&[Mat2]> {
        match self {
            Closure::Complete(v) => Some(v),
            Closure::Overflow { .. } => None,
        }
    }
}

pub(crate) fn check_generators(gens: &[Mat2]) -> Result<Option<GFq>, DicksonError> {
    let field = gens.first().map(|g| g.field());
    for g in gens {
        if Some(g.field()) != field {
            return Err(DicksonError::MixedFields);
        }
        if !g.is_invertible() {
            return Err(DicksonError::Singular(g.to_string()));
        }
    }
    Ok(field)
}

/// Log and antilog tables of `F_q^*`, so that products in a closure need
/// no division.
struct LogTables {
    field: GFq,
    /// Indexed by `c0 + c1 p`; entry 0 (the zero element) is unused.
    log: Vec<u32>,
    /// `g^i` for `0 <= i < 2(q - 1)`, doubled to skip a reduction.
    exp: Vec<Fq>,
}

impl LogTables {
    const MAX_ORDER: u64 = (1 << 16) - 1;

    fn new(field: GFq) -> Option<Self> {
        let q = field.order();
        if q > Self::MAX_ORDER {
            return None;
        }
        let g = field.primitive_element();
        let mut log = vec![0u32; q as usize];
        let mut exp = Vec::with_capacity(2 * (q as usize - 1));
        let mut x = field.one();
        for i in 0..q - 1 {
            log[(x.c0 + x.c1 * field.p()) as usize] = i as u32;
            exp.push(x);
            x = field.mul(x, g);
        }
        exp.extend_from_within(..);
        Some(LogTables { field, log, exp })
    }

    fn log(&self, x: Fq) -> usize {
        self.log[(x.c0 + x.c1 * self.field.p()) as usize] as usize
    }

    fn mul(&self, x: Fq, y: Fq) -> Fq {
        if x.is_zero() || y.is_zero() {
            return self.field.zero();
        }
        self.exp[self.log(x) + self.log(y)]
    }

    fn add(&self, x: Fq, y: Fq) -> Fq {
        let p = self.field.p();
        let r = |a: u64| if a >= p { a - p } else { a };
        Fq {
            c0: r(x.c0 + y.c0),
            c1: r(x.c1 + y.c1),
        }
    }

    /// The entries as base-`q` digits; injective since `q^4 <= 2^64`.
    fn code(&self, m: &Mat2) -> u64 {
        let (p, q) = (self.field.p(), self.field.order());
        m.e.iter().fold(0, |acc, x| acc * q + x.c0 + x.c1 * p)
    }

    /// `(x y).normalized()`.
    fn mul_normalized(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let [a, b, c, d] = x.e;
        let [w, u, v, z] = y.e;
        let e = [
            self.add(self.mul(a, w), self.mul(b, v)),
            self.add(self.mul(a, u), self.mul(b, z)),
            self.add(self.mul(c, w), self.mul(d, v)),
            self.add(self.mul(c, u), self.mul(d, z)),
        ];
        let lead = *e.iter().find(|x| !x.is_zero()).expect("invertible product");
        let shift = self.exp.len() / 2 - self.log(lead);
        let e = e.map(|x| {
            if x.is_zero() {
                x
            } else {
                self.exp[self.log(x) + shift]
            }
        });
        Mat2::new(self.field, e)
    }
}

/// Breadth-first closure of the projective images of `gens`. With no
/// generators the result is the trivial group over `F_field`.
pub fn closure(field: GFq, gens: &[Mat2], budget: usize) -> Result<Closure, DicksonError> {
    match LogTables::new(field) {
        Some(t) => closure_with(
            field,
            gens,
            budget,
            |x, g| t.mul_normalized(x, g),
            |m| t.code(m),
        ),
        None => closure_with(field, gens, budget, |x, g| x.mul(g).normalized(), |m| *m),
    }
}

fn closure_with<K: Hash + Eq>(
    field: GFq,
    gens: &[Mat2],
    budget: usize,
    step: impl Fn(&Mat2, &Mat2) -> Mat2,
    key: impl Fn(&Mat2) -> K,
) -> Result<Closure, DicksonError> {
    if let Some(f) = check_generators(gens)? {
        if f != field {
            return Err(DicksonError::MixedFields);
        }
    }
    let gens: Vec<Mat2> = gens.iter().map(|g| g.normalized()).collect();
    let id = Mat2::identity(field);
    let mut seen = FxHashSet::from_iter([key(&id)]);
    // `order` doubles as the queue: everything past `next` is unexpanded
    let mut order = vec![id];
    let mut next = 0;
    while let Some(&x) = order.get(next) {
        next += 1;
        for g in &gens {
            let y = step(&x, g);
            if seen.insert(key(&y)) {
                if seen.len() > budget {
                    return Ok(Closure::Overflow { budget });
                }
                order.push(y);
            }
        }
    }
    Ok(Closure::Complete(order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> GFq {
        GFq::new(7, 1).unwrap()
    }

    #[test]
    fn projective_orders() {
        let f = f7();
        assert_eq!(Mat2::identity(f).projective_order().unwrap(), 1);
        assert_eq!(Mat2::from_ints(f, [3, 0, 0, 1]).projective_order().unwrap(), 6);
        assert_eq!(Mat2::from_ints(f, [1, 3, 1, 1]).projective_order().unwrap(), 8);
        assert_eq!(Mat2::from_ints(f, [1, 1, 0, 1]).projective_order().unwrap(), 7);
        assert!(Mat2::from_ints(f, [1, 2, 2, 4]).projective_order().is_err());
    }

    #[test]
    fn nonsplit_torus_element_powers() {
        // (1 + sqrt 3)^8 = 5 in F_7
        let f = f7();
        let m = Mat2::from_ints(f, [1, 3, 1, 1]);
        assert_eq!(m.pow(8), Mat2::scalar(f, f.from_int(5)));
    }

    #[test]
    fn closures() {
        let f = f7();
        let c = closure(f, &[], 10).unwrap();
        assert_eq!(c.elements().unwrap().len(), 1);
        let c = closure(f, &[Mat2::from_ints(f, [3, 0, 0, 1])], 100).unwrap();
        assert_eq!(c.elements().unwrap().len(), 6);
        let sl2 = [
            Mat2::from_ints(f, [1, 1, 0, 1]),
            Mat2::from_ints(f, [0, -1, 1, 0]),
        ];
        assert_eq!(closure(f, &sl2, 1000).unwrap().elements().unwrap().len(), 168);
        assert!(matches!(
            closure(f, &sl2, 100).unwrap(),
            Closure::Overflow { budget: 100 }
        ));
    }

    #[test]
    fn inverse_and_normal_form() {
        let f = GFq::new(11, 2).unwrap();
        let m = Mat2::new(f, [f.t(), f.one(), f.from_int(3), f.elem(2, 5)]);
        assert_eq!(m.mul(&m.inverse().unwrap()), Mat2::identity(f));
        let s = f.elem(4, 7);
        assert_eq!(m.scale(s).normalized(), m.normalized());
    }

    #[test]
    fn tables_agree_with_generic_arithmetic() {
        for (p, r) in [(7u64, 1u32), (13, 1), (7, 2), (11, 2)] {
            let f = GFq::new(p, r).unwrap();
            for c in crate::dickson::families::corpus(f) {
                let fast = closure(f, &c.generators, 1 << 20).unwrap();
                let slow =
                    closure_with(f, &c.generators, 1 << 20, |x, g| x.mul(g).normalized(), |m| *m)
                        .unwrap();
                assert_eq!(fast.elements(), slow.elements(), "{}", c.name);
            }
        }
    }
}
