use std::collections::hash_map::Entry;
use std::collections::HashMap;

use serde::Serialize;

use crate::arith::{factor, is_prime};

use super::cyclo::CycloValue;
use super::form::{checked_class_number, prime_ideal_class, Discriminant, Splitting};
use super::group::{ClassCharacter, ClassGroup};
use super::QuadError;

/// The first `bound` coefficients of `f_psi = sum_A psi(A) q^N(A)`.
#[derive(Clone, Debug, Serialize)]
pub struct QExpansion {
    discriminant: Discriminant,
    character: ClassCharacter,
    bound: u64,
    /// `a_1, ..., a_bound`
    coefficients: Vec<CycloValue>,
}

impl QExpansion {
    pub fn discriminant(&self) -> Discriminant {
        self.discriminant
    }

    pub fn character(&self) -> &ClassCharacter {
        &self.character
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// `a_n` for `1 <= n <= bound`.
    pub fn coefficient(&self, n: u64) -> &CycloValue {
        assert!(n >= 1 && n <= self.bound, "coefficient index {n} out of range");
        &self.coefficients[n as usize - 1]
    }

    pub fn coefficients(&self) -> &[CycloValue] {
        &self.coefficients
    }
}

/// Theta coefficients by enumerating integral ideals of each norm.
///
/// For every `n <= bound` the prime-power factors of `n` are expanded into
/// the ideals of that norm (none, one or `e + 1` of them depending on the
/// splitting type), the classes are multiplied out and the character values
/// summed exactly.
pub fn theta_coefficients(
    group: &ClassGroup,
    psi: &ClassCharacter,
    bound: u64,
) -> Result<QExpansion, QuadError> {
    if bound == 0 {
        return Err(QuadError::Inconsistent("theta bound must be positive".into()));
    }
    let d = group.discriminant();
    let m = psi.order();
    let mut splitting: HashMap<u64, (Splitting, Vec<usize>)> = HashMap::new();
    let mut coefficients = Vec::with_capacity(bound as usize);
    for n in 1..=bound {
        // classes of all ideals of norm n, with multiplicity
        let mut ideals = vec![group.identity()];
        for (l, e) in factor(n) {
            if let Entry::Vacant(slot) = splitting.entry(l) {
                let s = prime_ideal_class(d, l)?;
                let classes = match s {
                    Splitting::Inert => Vec::new(),
                    Splitting::Ramified { class } => vec![class_index(group, &class)?],
                    Splitting::Split { prime, conjugate } => {
                        vec![class_index(group, &prime)?, class_index(group, &conjugate)?]
                    }
                };
                slot.insert((s, classes));
            }
            let (s, classes) = &splitting[&l];
            let local: Vec<usize> = match s {
                Splitting::Inert if e % 2 == 0 => vec![group.identity()],
                Splitting::Inert => Vec::new(),
                Splitting::Ramified { .. } => vec![group.pow(classes[0], e as u64)],
                Splitting::Split { .. } => (0..=e as u64)
                    .map(|i| {
                        group.mul(group.pow(classes[0], i), group.pow(classes[1], e as u64 - i))
                    })
                    .collect(),
            };
            ideals = ideals
                .iter()
                .flat_map(|&x| local.iter().map(move |&y| (x, y)))
                .map(|(x, y)| group.mul(x, y))
                .collect();
            if ideals.is_empty() {
                break;
            }
        }
        let mut counts = vec![0i64; m as usize];
        for c in ideals {
            counts[psi.exponent_at(group.coordinates(c)) as usize] += 1;
        }
        coefficients.push(CycloValue::from_exponent_counts(m, &counts));
    }
    Ok(QExpansion {
        discriminant: d,
        character: psi.clone(),
        bound,
        coefficients,
    })
}

fn class_index(group: &ClassGroup, f: &super::QuadForm) -> Result<usize, QuadError> {
    group
        .class_of(f)
        .ok_or_else(|| QuadError::Inconsistent(format!("form {f} is not in the class group")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrauerSiegelRow {
    pub p: u64,
    pub h: u64,
    /// `ln h / ln sqrt(p)`
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrauerSiegelReport {
    pub rows: Vec<BrauerSiegelRow>,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

pub fn brauer_siegel_row(p: u64) -> Result<BrauerSiegelRow, QuadError> {
    let h = checked_class_number(Discriminant::minus_prime(p)?)?;
    let ratio = (h as f64).ln() / (p as f64).sqrt().ln();
    Ok(BrauerSiegelRow { p, h, ratio })
}

/// `h(-p)` against `sqrt(p)` for every prime `p = 3 (mod 4)`, `7 <= p` in
/// `[from, to]`.
pub fn brauer_siegel_report(from: u64, to: u64) -> Result<BrauerSiegelReport, QuadError> {
    let rows = (from.max(7)..=to)
        .filter(|&p| p % 4 == 3 && is_prime(p))
        .map(brauer_siegel_row)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BrauerSiegelReport::from_rows(rows))
}

impl BrauerSiegelReport {
    pub fn from_rows(rows: Vec<BrauerSiegelRow>) -> Self {
        let min_ratio = rows.iter().map(|r| r.ratio).reduce(f64::min);
        let max_ratio = rows.iter().map(|r| r.ratio).reduce(f64::max);
        BrauerSiegelReport {
            rows,
            min_ratio,
            max_ratio,
        }
    }
}
