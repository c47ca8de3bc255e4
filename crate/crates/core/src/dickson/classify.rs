use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use super::field::{Fq, GFq};
use super::matrix::{check_generators, closure, Closure, Mat2};
use super::DicksonError;

/// Default closure budget, in projective elements.
pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExceptionalType {
    A4,
    S4,
    A5,
}

impl ExceptionalType {
    pub fn order(self) -> u64 {
        match self {
            ExceptionalType::A4 => 12,
            ExceptionalType::S4 => 24,
            ExceptionalType::A5 => 60,
        }
    }

    /// Number of elements of each order.
    pub fn order_histogram(self) -> BTreeMap<u64, u64> {
        let pairs: &[(u64, u64)] = match self {
            ExceptionalType::A4 => &[(1, 1), (2, 3), (3, 8)],
            ExceptionalType::S4 => &[(1, 1), (2, 9), (3, 8), (4, 6)],
            ExceptionalType::A5 => &[(1, 1), (2, 15), (3, 20), (5, 24)],
        };
        pairs.iter().copied().collect()
    }

    pub const ALL: [ExceptionalType; 3] =
        [ExceptionalType::A4, ExceptionalType::S4, ExceptionalType::A5];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LargeKind {
    #[serde(rename = "PSL")]
    Psl,
    #[serde(rename = "PGL")]
    Pgl,
}

/// `PSL_2(F_Q)` or `PGL_2(F_Q)` for a subfield `F_Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LargeImage {
    pub kind: LargeKind,
    pub subfield_order: u64,
}

impl LargeImage {
    pub fn group_order(&self) -> u64 {
        let q = self.subfield_order;
        let pgl = q * (q * q - 1);
        match self.kind {
            LargeKind::Psl => pgl / 2,
            LargeKind::Pgl => pgl,
        }
    }
}

impl fmt::Display for LargeImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            LargeKind::Psl => "PSL",
            LargeKind::Pgl => "PGL",
        };
        write!(f, "{k}2(F_{})", self.subfield_order)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DicksonFlags {
    /// A common fixed point on `P^1(F_q)`.
    pub reducible: bool,
    /// Contained in a split torus.
    pub split_cartan: bool,
    /// Contained in a nonsplit torus.
    pub nonsplit_cartan: bool,
    /// Preserves a pair of `F_q`-rational lines.
    pub in_normalizer_split: bool,
    /// Preserves a pair of conjugate lines defined over `F_{q^2}` only.
    pub in_normalizer_nonsplit: bool,
    pub exceptional: Option<ExceptionalType>,
    pub large: Option<LargeImage>,
}

/// The first matching Dickson type, in the order Borel, Cartan or dihedral,
/// exceptional, large.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DicksonLabel {
    Borel,
    NonsplitCartan,
    DihedralAmbiguous,
    NormalizerSplitCartan,
    NormalizerNonsplitCartan,
    Exceptional(ExceptionalType),
    Large(LargeImage),
}

impl fmt::Display for DicksonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DicksonLabel::Borel => write!(f, "borel"),
            DicksonLabel::NonsplitCartan => write!(f, "nonsplit-cartan"),
            DicksonLabel::DihedralAmbiguous => write!(f, "dihedral-ambiguous"),
            DicksonLabel::NormalizerSplitCartan => write!(f, "normalizer-split-cartan"),
            DicksonLabel::NormalizerNonsplitCartan => write!(f, "normalizer-nonsplit-cartan"),
            DicksonLabel::Exceptional(t) => write!(f, "exceptional-{t:?}"),
            DicksonLabel::Large(l) => write!(f, "large-{l}"),
        }
    }
}

impl Serialize for DicksonLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Isomorphism type read off from the closure alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    Cyclic(u64),
    /// Dihedral of order `2n`; `n = 2` is the Klein group.
    Dihedral(u64),
    Exceptional(ExceptionalType),
    Large(LargeImage),
    Other,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Cyclic(n) => write!(f, "C{n}"),
            Structure::Dihedral(n) => write!(f, "D{n}"),
            Structure::Exceptional(t) => write!(f, "{t:?}"),
            Structure::Large(l) => write!(f, "{l}"),
            Structure::Other => write!(f, "other"),
        }
    }
}

impl Serialize for Structure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DicksonReport {
    pub field: GFq,
    pub group_order: u64,
    pub flags: DicksonFlags,
    pub label: DicksonLabel,
    pub structure: Structure,
    /// Projective element order -> number of elements.
    pub order_histogram: BTreeMap<u64, u64>,
}

/// Tests that look only at the generators, so they work even when the
/// closure is too large to enumerate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StructuralTests {
    pub common_fixed_point: bool,
    pub split_cartan: bool,
    pub nonsplit_cartan: bool,
    pub preserved_split_pairs: usize,
    pub preserved_nonsplit_pairs: usize,
}

fn proportional(f: &GFq, u: [Fq; 3], v: [Fq; 3]) -> bool {
    (0..3).all(|i| (0..3).all(|j| f.mul(u[i], v[j]) == f.mul(u[j], v[i])))
}

fn form_disc(f: &GFq, q: [Fq; 3]) -> Fq {
    let [a, b, c] = q;
    f.sub(f.mul(b, b), f.mul(f.from_int(4), f.mul(a, c)))
}

/// Nondegenerate binary quadratic forms over `F_q` up to scalars, i.e.
/// unordered pairs of distinct lines over `F_{q^2}` stable under Frobenius.
fn nondegenerate_forms(f: &GFq) -> Vec<[Fq; 3]> {
    let elems: Vec<Fq> = f.elements().collect();
    let (zero, one) = (f.zero(), f.one());
    let mut out = Vec::new();
    let mut push = |q: [Fq; 3]| {
        if !form_disc(f, q).is_zero() {
            out.push(q);
        }
    };
    for &b in &elems {
        for &c in &elems {
            push([one, b, c]);
        }
    }
    for &c in &elems {
        push([zero, one, c]);
    }
    push([zero, zero, one]);
    out
}

pub fn structural_tests(field: GFq, gens: &[Mat2]) -> Result<StructuralTests, DicksonError> {
    if let Some(f) = check_generators(gens)? {
        if f != field {
            return Err(DicksonError::MixedFields);
        }
    }
    let f = &field;
    let mut out = StructuralTests::default();

    let mut points = vec![(f.one(), f.zero())];
    points.extend(f.elements().map(|x| (x, f.one())));
    out.common_fixed_point = points.into_iter().any(|(x, y)| gens.iter().all(|g| g.fixes(x, y)));

    // a group inside a torus: all fixed-point forms proportional to one
    // nondegenerate form
    let moving: Vec<[Fq; 3]> = gens
        .iter()
        .filter(|g| !g.is_scalar())
        .map(|g| g.fixed_point_form())
        .collect();
    if let Some(&q0) = moving.first() {
        if moving.iter().all(|&q| proportional(f, q, q0)) {
            let disc = form_disc(f, q0);
            if !disc.is_zero() {
                if f.is_square(disc) {
                    out.split_cartan = true;
                } else {
                    out.nonsplit_cartan = true;
                }
            }
        }
    } else {
        out.split_cartan = true;
    }

    for q in nondegenerate_forms(f) {
        if gens.iter().all(|g| proportional(f, g.act_on_form(q), q)) {
            if f.is_square(form_disc(f, q)) {
                out.preserved_split_pairs += 1;
            } else {
                out.preserved_nonsplit_pairs += 1;
            }
        }
    }
    Ok(out)
}

/// Non-scalar elements with the same `tr^2 / det` have eigenvalue ratios
/// `rho`, `1/rho` with `rho + 1/rho + 2 = tr^2 / det`, hence the same
/// projective order; each such class is powered out once.
fn histogram(elements: &[Mat2]) -> Result<BTreeMap<u64, u64>, DicksonError> {
    let mut by_class: HashMap<Fq, u64> = HashMap::new();
    let mut h = BTreeMap::new();
    for m in elements {
        let order = if m.is_scalar() {
            1
        } else {
            let f = m.field();
            let t = m.trace();
            let u = f
                .div(f.mul(t, t), m.det())
                .ok_or_else(|| DicksonError::Singular(m.to_string()))?;
            match by_class.entry(u) {
                Entry::Occupied(o) => *o.get(),
                Entry::Vacant(v) => *v.insert(m.projective_order()?),
            }
        };
        *h.entry(order).or_insert(0) += 1;
    }
    Ok(h)
}

fn large_image(p: u64, r: u32, n: u64) -> Option<LargeImage> {
    (1..=r).find_map(|s| {
        let q = p.pow(s);
        [LargeKind::Psl, LargeKind::Pgl]
            .into_iter()
            .map(|kind| LargeImage {
                kind,
                subfield_order: q,
            })
            .find(|l| l.group_order() == n)
    })
}

/// Isomorphism type from the element-order statistics of a closure.
pub fn identify_structure(elements: &[Mat2], hist: &BTreeMap<u64, u64>) -> Structure {
    let n = elements.len() as u64;
    let max_order = hist.keys().copied().max().unwrap_or(1);
    if max_order == n {
        return Structure::Cyclic(n);
    }
    let m = n / 2;
    let central = u64::from(m.is_multiple_of(2));
    if n.is_multiple_of(2) && max_order == m && hist.get(&2).copied() == Some(m + central) {
        return Structure::Dihedral(m);
    }
    if let Some(t) = ExceptionalType::ALL
        .into_iter()
        .find(|t| t.order() == n && &t.order_histogram() == hist)
    {
        return Structure::Exceptional(t);
    }
    if let Some(f) = elements.first().map(|e| e.field()) {
        if n.is_multiple_of(f.p()) {
            if let Some(l) = large_image(f.p(), f.r(), n) {
                return Structure::Large(l);
            }
        }
    }
    Structure::Other
}

/// Dickson type of the subgroup of `PGL_2(F_q)` generated by `gens`.
pub fn classify(field: GFq, gens: &[Mat2], budget: usize) -> Result<DicksonReport, DicksonError> {
    if field.p() < 7 {
        return Err(DicksonError::SmallCharacteristic(field.p()));
    }
    let tests = structural_tests(field, gens)?;
    let elements = match closure(field, gens, budget)? {
        Closure::Complete(v) => v,
        Closure::Overflow { budget } => return Err(DicksonError::Overflow { budget }),
    };
    let n = elements.len() as u64;
    let order_histogram = histogram(&elements)?;
    let structure = identify_structure(&elements, &order_histogram);

    let mut flags = DicksonFlags {
        reducible: tests.common_fixed_point,
        split_cartan: tests.split_cartan,
        nonsplit_cartan: tests.nonsplit_cartan,
        in_normalizer_split: tests.preserved_split_pairs > 0,
        in_normalizer_nonsplit: tests.preserved_nonsplit_pairs > 0,
        exceptional: None,
        large: None,
    };
    let pairs = tests.preserved_split_pairs + tests.preserved_nonsplit_pairs;
    let irreducible = !tests.common_fixed_point;
    if irreducible && pairs == 0 {
        if n.is_multiple_of(field.p()) {
            flags.large = large_image(field.p(), field.r(), n);
            if flags.large.is_none() {
                return Err(DicksonError::Unclassified(format!(
                    "irreducible group of order {n} divisible by {} is not PSL_2 or PGL_2 of a subfield",
                    field.p()
                )));
            }
        } else {
            flags.exceptional = ExceptionalType::ALL
                .into_iter()
                .find(|t| t.order() == n && t.order_histogram() == order_histogram);
            if flags.exceptional.is_none() {
                return Err(DicksonError::Unclassified(format!(
                    "irreducible group of order {n} prime to {} is not A4, S4 or A5",
                    field.p()
                )));
            }
        }
    }

    let label = if tests.common_fixed_point {
        DicksonLabel::Borel
    } else if tests.nonsplit_cartan {
        DicksonLabel::NonsplitCartan
    } else if pairs >= 2 {
        DicksonLabel::DihedralAmbiguous
    } else if tests.preserved_split_pairs == 1 {
        DicksonLabel::NormalizerSplitCartan
    } else if tests.preserved_nonsplit_pairs == 1 {
        DicksonLabel::NormalizerNonsplitCartan
    } else if let Some(t) = flags.exceptional {
        DicksonLabel::Exceptional(t)
    } else {
        DicksonLabel::Large(flags.large.expect("set above"))
    };

    Ok(DicksonReport {
        field,
        group_order: n,
        flags,
        label,
        structure,
        order_histogram,
    })
}
