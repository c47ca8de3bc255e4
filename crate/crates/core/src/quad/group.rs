use std::collections::HashMap;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::factor;

use super::cyclo::CycloValue;
use super::form::{reduced_forms, Discriminant, QuadForm};
use super::QuadError;

/// The form class group of a negative fundamental discriminant, with an
/// invariant-factor basis and discrete logarithms of every class.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    disc: Discriminant,
    forms: Vec<QuadForm>,
    index: HashMap<QuadForm, usize>,
    invariants: Vec<u64>,
    generators: Vec<usize>,
    coords: Vec<Vec<u64>>,
}

impl ClassGroup {
    /// Builds the group by brute force over element orders.
    pub fn new(disc: Discriminant) -> Result<Self, QuadError> {
        let forms = reduced_forms(disc)?;
        let index = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut group = ClassGroup {
            disc,
            forms,
            index,
            invariants: Vec::new(),
            generators: Vec::new(),
            coords: Vec::new(),
        };
        group.decompose()?;
        Ok(group)
    }

    pub fn discriminant(&self) -> Discriminant {
        self.disc
    }

    /// The class number.
    pub fn order(&self) -> u64 {
        self.forms.len() as u64
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> QuadForm {
        self.forms[i]
    }

    /// Index of the principal class (the lexicographically least form).
    pub fn identity(&self) -> usize {
        0
    }

    /// Index of the class containing `f`.
    pub fn class_of(&self, f: &QuadForm) -> Option<usize> {
        if f.discriminant() != self.disc.value() {
            return None;
        }
        self.index.get(&f.reduce()).copied()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let f = self.forms[i]
            .compose(&self.forms[j])
            .expect("forms share a discriminant");
        self.index[&f]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.index[&self.forms[i].inverse()]
    }

    pub fn pow(&self, i: usize, mut e: u64) -> usize {
        let mut acc = self.identity();
        let mut base = i;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut t = 1;
        let mut x = i;
        while x != self.identity() {
            x = self.mul(x, i);
            t += 1;
        }
        t
    }

    /// Invariant factors `d_1 | d_2 | ... | d_r`; empty for the trivial group.
    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    /// Class indices of the generators matching [`Self::invariants`].
    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<QuadForm> {
        self.generators.iter().map(|&i| self.forms[i]).collect()
    }

    /// Exponents `c` with `class = prod g_i^{c_i}`, `0 <= c_i < d_i`.
    pub fn coordinates(&self, i: usize) -> &[u64] {
        &self.coords[i]
    }

    /// All characters, as exponent tuples in lexicographic order; the first
    /// one is trivial.
    pub fn characters(&self) -> Vec<ClassCharacter> {
        let mut out = Vec::with_capacity(self.forms.len());
        let mut tuple = vec![0u64; self.invariants.len()];
        loop {
            out.push(ClassCharacter::new(self.invariants.clone(), tuple.clone()));
            // odometer, last coordinate fastest
            let mut pos = tuple.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < self.invariants[pos] {
                    break;
                }
                tuple[pos] = 0;
            }
        }
    }

    /// The first nontrivial character in lexicographic order.
    pub fn first_nontrivial_character(&self) -> Option<ClassCharacter> {
        self.characters().into_iter().find(|c| !c.is_trivial())
    }

    pub fn value(&self, psi: &ClassCharacter, i: usize) -> CycloValue {
        psi.value(self.coordinates(i))
    }

    fn decompose(&mut self) -> Result<(), QuadError> {
        let h = self.order();
        self.coords = vec![Vec::new(); h as usize];
        if h == 1 {
            return Ok(());
        }
        let orders: Vec<u64> = (0..h as usize).map(|i| self.element_order(i)).collect();
        // primary parts: (q, exponents descending, generators)
        let mut primary: Vec<(u64, Vec<u32>, Vec<usize>)> = Vec::new();
        for (q, _) in factor(h) {
            let exps = primary_type(q, &orders);
            let gens = self
                .primary_basis(q, &exps, &orders)
                .ok_or_else(|| QuadError::Inconsistent(format!("no {q}-primary basis found")))?;
            primary.push((q, exps, gens));
        }
        let rank = primary.iter().map(|(_, e, _)| e.len()).max().unwrap_or(0);
        let mut invariants = Vec::with_capacity(rank);
        let mut generators = Vec::with_capacity(rank);
        for t in 0..rank {
            let mut d = 1u64;
            let mut g = self.identity();
            for (q, exps, gens) in &primary {
                if let Some(&e) = exps.get(t) {
                    d *= q.pow(e);
                    g = self.mul(g, gens[t]);
                }
            }
            invariants.push(d);
            generators.push(g);
        }
        invariants.reverse();
        generators.reverse();
        self.invariants = invariants;
        self.generators = generators;

        let mut seen = vec![false; h as usize];
        let mut tuple = vec![0u64; rank];
        loop {
            let mut x = self.identity();
            for (k, &c) in tuple.iter().enumerate() {
                x = self.mul(x, self.pow(self.generators[k], c));
            }
            if seen[x] {
                return Err(QuadError::Inconsistent(
                    "generators do not give a direct product".into(),
                ));
            }
            seen[x] = true;
            self.coords[x] = tuple.clone();
            let mut pos = rank;
            loop {
                if pos == 0 {
                    return Ok(());
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < self.invariants[pos] {
                    break;
                }
                tuple[pos] = 0;
            }
        }
    }

    /// Generators of the `q`-primary part with orders `q^exps[i]`, chosen
    /// greedily by index with backtracking.
    fn primary_basis(&self, q: u64, exps: &[u32], orders: &[u64]) -> Option<Vec<usize>> {
        let h = self.forms.len();
        let mut in_sub = vec![false; h];
        in_sub[self.identity()] = true;
        let mut chosen = Vec::new();
        if self.extend_basis(q, exps, orders, &mut in_sub, &mut chosen) {
            Some(chosen)
        } else {
            None
        }
    }

    fn extend_basis(
        &self,
        q: u64,
        exps: &[u32],
        orders: &[u64],
        in_sub: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
    ) -> bool {
        let Some(&e) = exps.get(chosen.len()) else {
            return true;
        };
        let target = q.pow(e);
        for x in 0..self.forms.len() {
            if orders[x] != target || in_sub[self.pow(x, target / q)] {
                continue;
            }
            // <H, x> = H <x> since the intersection is trivial
            let members: Vec<usize> = (0..in_sub.len()).filter(|&y| in_sub[y]).collect();
            let mut next = in_sub.clone();
            let mut xp = x;
            for _ in 1..target {
                for &y in &members {
                    next[self.mul(y, xp)] = true;
                }
                xp = self.mul(xp, x);
            }
            chosen.push(x);
            let saved = std::mem::replace(in_sub, next);
            if self.extend_basis(q, exps, orders, in_sub, chosen) {
                return true;
            }
            *in_sub = saved;
            chosen.pop();
        }
        false
    }
}

/// Exponents of the cyclic factors of the `q`-primary part, descending, read
/// off from the sizes of the `q^i`-torsion subgroups.
fn primary_type(q: u64, orders: &[u64]) -> Vec<u32> {
    let log_q = |mut n: u64| {
        let mut e = 0u32;
        while n > 1 {
            n /= q;
            e += 1;
        }
        e
    };
    let mut layers = Vec::new();
    let mut prev = 0u32;
    let mut i = 1u32;
    loop {
        let qi = q.pow(i);
        let count = orders.iter().filter(|&&o| qi.is_multiple_of(o)).count() as u64;
        let lg = log_q(count);
        if lg == prev {
            break;
        }
        layers.push(lg - prev);
        prev = lg;
        i += 1;
    }
    // layers[i-1] = #{j : e_j >= i}
    let rank = layers.first().copied().unwrap_or(0);
    (1..=rank)
        .map(|j| layers.iter().filter(|&&c| c >= j).count() as u32)
        .collect()
}

/// A character of the class group: generator `g_i` goes to
/// `exp(2 pi i e_i / d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCharacter {
    moduli: Vec<u64>,
    exponents: Vec<u64>,
    order: u64,
}

impl ClassCharacter {
    pub fn new(moduli: Vec<u64>, exponents: Vec<u64>) -> Self {
        assert_eq!(moduli.len(), exponents.len());
        let order = moduli
            .iter()
            .zip(&exponents)
            .map(|(&d, &e)| d / e.gcd(&d))
            .fold(1u64, |acc, o| acc.lcm(&o));
        ClassCharacter {
            moduli,
            exponents,
            order,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `k` with `psi(class) = zeta_order^k`.
    pub fn exponent_at(&self, coords: &[u64]) -> u64 {
        let m = self.order;
        let mut k = 0u64;
        for ((&d, &e), &c) in self.moduli.iter().zip(&self.exponents).zip(coords) {
            // e c / d is a multiple of 1/m
            let num = (e * c % d) as u128 * m as u128;
            debug_assert_eq!(num % d as u128, 0);
            k = (k + (num / d as u128) as u64) % m;
        }
        k
    }

    pub fn value(&self, coords: &[u64]) -> CycloValue {
        CycloValue::zeta_pow(self.order, self.exponent_at(coords))
    }

    pub fn conj(&self) -> ClassCharacter {
        let exps = self
            .moduli
            .iter()
            .zip(&self.exponents)
            .map(|(&d, &e)| (d - e) % d)
            .collect();
        ClassCharacter::new(self.moduli.clone(), exps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(d: i64) -> ClassGroup {
        ClassGroup::new(Discriminant::new(d).unwrap()).unwrap()
    }

    #[test]
    fn small_groups() {
        let g7 = group(-7);
        assert_eq!(g7.order(), 1);
        assert!(g7.invariants().is_empty());
        assert_eq!(g7.characters().len(), 1);
        assert!(g7.characters()[0].is_trivial());

        let g23 = group(-23);
        assert_eq!(g23.invariants(), &[3]);
        let chars = g23.characters();
        assert_eq!(chars.len(), 3);
        assert_eq!(chars.iter().filter(|c| !c.is_trivial()).count(), 2);
        assert!(chars.iter().skip(1).all(|c| c.order() == 3));
    }

    #[test]
    fn non_cyclic_groups() {
        // Q(sqrt(-21)): (Z/2)^2
        let g = group(-84);
        assert_eq!(g.invariants(), &[2, 2]);
        // D = -3299: Z/3 x Z/9
        let g = group(-3299);
        assert_eq!(g.order(), 27);
        assert_eq!(g.invariants(), &[3, 9]);
        // D = -4027: h = 9, cyclic? read off from element orders
        let g = group(-4027);
        let max_order = (0..g.order() as usize).map(|i| g.element_order(i)).max();
        assert_eq!(*g.invariants().last().unwrap(), max_order.unwrap());
        assert_eq!(g.invariants().iter().product::<u64>(), g.order());
    }

    #[test]
    fn coordinates_are_a_bijection() {
        for d in [-23i64, -84, -3299, -2383, -420] {
            let g = group(d);
            let mut seen = std::collections::HashSet::new();
            for i in 0..g.order() as usize {
                let c = g.coordinates(i).to_vec();
                let mut x = g.identity();
                for (k, &e) in c.iter().enumerate() {
                    x = g.mul(x, g.pow(g.generator_indices()[k], e));
                }
                assert_eq!(x, i);
                assert!(seen.insert(c));
            }
            for w in g.invariants().windows(2) {
                assert_eq!(w[1] % w[0], 0);
            }
        }
    }

    #[test]
    fn characters_are_homomorphisms() {
        for d in [-23i64, -84, -3299, -71] {
            let g = group(d);
            let n = g.order() as usize;
            for psi in g.characters() {
                assert_eq!(g.value(&psi, g.identity()), CycloValue::one(psi.order()));
                for i in 0..n {
                    for j in 0..n {
                        let lhs = g.value(&psi, g.mul(i, j));
                        let rhs = &g.value(&psi, i) * &g.value(&psi, j);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn composition_is_an_abelian_group_law() {
        let ps = [
            23u64, 31, 47, 59, 71, 79, 83, 103, 107, 127, 131, 139, 151, 167, 191, 199, 211, 223,
            227, 239,
        ];
        for p in ps {
            let d = Discriminant::minus_prime(p).unwrap();
            let forms = reduced_forms(d).unwrap();
            let e = QuadForm::principal(d);
            let c = |x: &QuadForm, y: &QuadForm| x.compose(y).unwrap();
            for f in &forms {
                assert_eq!(c(&e, f), *f);
                assert_eq!(c(f, &f.inverse()), e);
                for g in &forms {
                    let fg = c(f, g);
                    assert!(fg.is_reduced() && forms.contains(&fg));
                    assert_eq!(fg, c(g, f));
                    for k in forms.iter().take(6) {
                        assert_eq!(c(&fg, k), c(f, &c(g, k)));
                    }
                }
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        // sum over the group of a nontrivial character vanishes
        let g = group(-3299);
        for psi in g.characters().into_iter().filter(|c| !c.is_trivial()) {
            let mut counts = vec![0i64; psi.order() as usize];
            for i in 0..g.order() as usize {
                counts[psi.exponent_at(g.coordinates(i)) as usize] += 1;
            }
            assert!(CycloValue::from_exponent_counts(psi.order(), &counts).is_zero());
        }
    }
}
