//! Generator sets with a known Dickson type, for testing and demos.

use super::classify::{DicksonLabel, ExceptionalType, LargeImage, LargeKind};
use super::field::{Fq, GFq};
use super::matrix::{closure, Mat2};

/// A generator set and the label it must receive.
#[derive(Clone, Debug)]
pub struct Construction {
    pub name: String,
    pub field: GFq,
    pub generators: Vec<Mat2>,
    pub expected: DicksonLabel,
    pub expected_order: u64,
}

fn unipotent(f: GFq, x: Fq) -> Mat2 {
    Mat2::new(f, [f.one(), x, f.zero(), f.one()])
}

/// The full upper-triangular group, of projective order `q(q-1)`.
pub fn borel(f: GFq) -> Construction {
    let g = f.primitive_element();
    Construction {
        name: format!("borel over {f}"),
        field: f,
        generators: vec![
            Mat2::new(f, [g, f.zero(), f.zero(), f.one()]),
            unipotent(f, f.one()),
        ],
        expected: DicksonLabel::Borel,
        expected_order: f.order() * (f.order() - 1),
    }
}

/// Dihedral group of order `2n` normalizing the diagonal torus; `n` must
/// divide `q - 1` and be at least 3.
pub fn split_normalizer(f: GFq, n: u64) -> Option<Construction> {
    let q = f.order();
    if n < 3 || !(q - 1).is_multiple_of(n) {
        return None;
    }
    let z = f.pow(f.primitive_element(), (q - 1) / n);
    Some(Construction {
        name: format!("split normalizer D{n} over {f}"),
        field: f,
        generators: vec![
            Mat2::new(f, [z, f.zero(), f.zero(), f.one()]),
            Mat2::from_ints(f, [0, 1, 1, 0]),
        ],
        expected: DicksonLabel::NormalizerSplitCartan,
        expected_order: 2 * n,
    })
}

/// A nonsplit torus element `[[x, e y], [y, x]]` (`e` a nonsquare of `F_q`)
/// of projective order `n`, the least in `(y, x)` order.
pub fn nonsplit_torus_element(f: GFq, n: u64) -> Option<Mat2> {
    let e = f.elements().find(|&x| !x.is_zero() && !f.is_square(x))?;
    let elems: Vec<Fq> = f.elements().collect();
    elems.iter().filter(|y| !y.is_zero()).find_map(|&y| {
        elems.iter().find_map(|&x| {
            let m = Mat2::new(f, [x, f.mul(e, y), y, x]);
            (m.projective_order().ok()? == n).then_some(m)
        })
    })
}

/// Dihedral group of order `2n` normalizing a nonsplit torus; `n` must
/// divide `q + 1` and be at least 3.
pub fn nonsplit_normalizer(f: GFq, n: u64) -> Option<Construction> {
    if n < 3 || !(f.order() + 1).is_multiple_of(n) {
        return None;
    }
    Some(Construction {
        name: format!("nonsplit normalizer D{n} over {f}"),
        field: f,
        generators: vec![
            nonsplit_torus_element(f, n)?,
            Mat2::from_ints(f, [1, 0, 0, -1]),
        ],
        expected: DicksonLabel::NormalizerNonsplitCartan,
        expected_order: 2 * n,
    })
}

/// Generators of `SL_2(F_q)`, whose image is `PSL_2(F_q)`.
pub fn sl2(f: GFq) -> Construction {
    let mut generators = vec![unipotent(f, f.one()), Mat2::from_ints(f, [0, -1, 1, 0])];
    if f.r() == 2 {
        generators.push(unipotent(f, f.t()));
    }
    let l = LargeImage {
        kind: LargeKind::Psl,
        subfield_order: f.order(),
    };
    Construction {
        name: format!("SL2 over {f}"),
        field: f,
        generators,
        expected: DicksonLabel::Large(l),
        expected_order: l.group_order(),
    }
}

/// `SL_2(F_p)` inside `GL_2(F_q)`: image `PSL_2(F_p)`.
pub fn sl2_prime_subfield(f: GFq) -> Construction {
    let l = LargeImage {
        kind: LargeKind::Psl,
        subfield_order: f.p(),
    };
    Construction {
        name: format!("SL2(F_{}) inside GL2 over {f}", f.p()),
        field: f,
        generators: vec![unipotent(f, f.one()), Mat2::from_ints(f, [0, -1, 1, 0])],
        expected: DicksonLabel::Large(l),
        expected_order: l.group_order(),
    }
}

/// Generators of `GL_2(F_q)`, whose image is `PGL_2(F_q)`.
pub fn gl2(f: GFq) -> Construction {
    let mut c = sl2(f);
    let g = f.primitive_element();
    c.generators.push(Mat2::new(f, [g, f.zero(), f.zero(), f.one()]));
    let l = LargeImage {
        kind: LargeKind::Pgl,
        subfield_order: f.order(),
    };
    c.name = format!("GL2 over {f}");
    c.expected = DicksonLabel::Large(l);
    c.expected_order = l.group_order();
    c
}

/// A pair `(a, b)` with `a^2 = b^3 = (ab)^k = 1` projectively, `k = 3, 4, 5`
/// for `A4, S4, A5`; such a pair generates the exceptional group. `None` if
/// `PGL_2(F_q)` has no such subgroup (e.g. `A5` needs `q = +-1 mod 5`).
pub fn exceptional(f: GFq, t: ExceptionalType) -> Option<Construction> {
    let k = match t {
        ExceptionalType::A4 => 3,
        ExceptionalType::S4 => 4,
        ExceptionalType::A5 => 5,
    };
    let a = Mat2::from_ints(f, [0, -1, 1, 0]);
    let elems: Vec<Fq> = f.elements().collect();
    // b = [[1, y], [z, w]] up to scalars
    for &y in &elems {
        for &z in &elems {
            for &w in &elems {
                let b = Mat2::new(f, [f.one(), y, z, w]);
                if !b.is_invertible() || b.projective_order().ok()? != 3 {
                    continue;
                }
                if a.mul(&b).projective_order().ok()? != k {
                    continue;
                }
                let gens = vec![a, b];
                let n = closure(f, &gens, 100).ok()?.elements()?.len() as u64;
                if n == t.order() {
                    return Some(Construction {
                        name: format!("{t:?} over {f}"),
                        field: f,
                        generators: gens,
                        expected: DicksonLabel::Exceptional(t),
                        expected_order: n,
                    });
                }
            }
        }
    }
    None
}

/// Every construction above that exists over `f`.
pub fn corpus(f: GFq) -> Vec<Construction> {
    let q = f.order();
    let mut out = vec![borel(f)];
    for n in [3u64, 4, 5, 6, 8, 12] {
        out.extend(split_normalizer(f, n));
        out.extend(nonsplit_normalizer(f, n));
    }
    out.extend(split_normalizer(f, q - 1));
    out.extend(nonsplit_normalizer(f, q + 1));
    out.push(sl2(f));
    if f.r() == 2 {
        out.push(sl2_prime_subfield(f));
    }
    out.push(gl2(f));
    for t in ExceptionalType::ALL {
        out.extend(exceptional(f, t));
    }
    out
}
