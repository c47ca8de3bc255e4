use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::thread;

use serde::Serialize;

use crate::arith::primes_between;
use crate::inertia::{eta_gcd_check, EtaCounterexample};
use crate::quad::{brauer_siegel_row, BrauerSiegelRow};

use super::{
    borel_witness, dihedral_hida_witness, dihedral_lr_witness, BorelWitness, HidaWitness,
    LrWitness, WitnessError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    Borel,
    Lr,
    Hida,
    Eta,
    BrauerSiegel,
}

impl FromStr for ScanKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "borel" => Ok(ScanKind::Borel),
            "lr" => Ok(ScanKind::Lr),
            "hida" => Ok(ScanKind::Hida),
            "eta" => Ok(ScanKind::Eta),
            "brauer_siegel" | "brauer-siegel" => Ok(ScanKind::BrauerSiegel),
            _ => Err(format!(
                "unknown scan kind {s:?}: expected borel, lr, hida, eta or brauer_siegel"
            )),
        }
    }
}

impl fmt::Display for ScanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ScanKind::Borel => "borel",
            ScanKind::Lr => "lr",
            ScanKind::Hida => "hida",
            ScanKind::Eta => "eta",
            ScanKind::BrauerSiegel => "brauer_siegel",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaRecord {
    pub p: u64,
    pub counterexamples: Vec<EtaCounterexample>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ScanRecord {
    Borel(BorelWitness),
    Lr(LrWitness),
    Hida(Box<HidaWitness>),
    Eta(EtaRecord),
    BrauerSiegel(BrauerSiegelRow),
}

impl ScanRecord {
    pub fn p(&self) -> u64 {
        match self {
            ScanRecord::Borel(w) => w.p,
            ScanRecord::Lr(w) => w.p,
            ScanRecord::Hida(w) => w.p,
            ScanRecord::Eta(r) => r.p,
            ScanRecord::BrauerSiegel(r) => r.p,
        }
    }
}

/// Extremes over the records of a scan; only the fields relevant to the
/// kind are set.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScanSummary {
    pub primes_examined: u64,
    pub records: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub irregular_primes: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_linnik_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_linnik_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_counterexamples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_brauer_siegel_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_brauer_siegel_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub kind: ScanKind,
    pub from: u64,
    pub to: u64,
    pub records: Vec<ScanRecord>,
    /// Error tag -> number of primes skipped for that reason.
    pub skipped: BTreeMap<&'static str, u64>,
    pub summary: ScanSummary,
}

fn in_domain(kind: ScanKind, p: u64) -> bool {
    match kind {
        ScanKind::Hida | ScanKind::BrauerSiegel => p >= 7 && p % 4 == 3,
        _ => p >= 7,
    }
}

fn run_one(kind: ScanKind, p: u64) -> Result<ScanRecord, WitnessError> {
    Ok(match kind {
        ScanKind::Borel => ScanRecord::Borel(borel_witness(p)?),
        ScanKind::Lr => ScanRecord::Lr(dihedral_lr_witness(p)?),
        ScanKind::Hida => ScanRecord::Hida(Box::new(dihedral_hida_witness(p)?)),
        ScanKind::Eta => ScanRecord::Eta(EtaRecord {
            p,
            counterexamples: eta_gcd_check(p).map_err(|_| WitnessError::SmallPrime(p))?,
        }),
        ScanKind::BrauerSiegel => ScanRecord::BrauerSiegel(brauer_siegel_row(p)?),
    })
}

/// Runs the per-prime operation over the primes in `[from, to]` that lie in
/// its domain (`p >= 7`, and `p = 3 mod 4` for `hida` and `brauer_siegel`).
///
/// The primes are split into `jobs` contiguous chunks processed on scoped
/// threads and merged back in order, so the report does not depend on
/// `jobs`. Expected outcomes (`regular_prime`, `trivial_class_group`) are
/// counted in `skipped`; any other error aborts the scan.
pub fn scan(kind: ScanKind, from: u64, to: u64, jobs: usize) -> Result<ScanReport, WitnessError> {
    let primes: Vec<u64> = primes_between(from, to)
        .into_iter()
        .filter(|&p| in_domain(kind, p))
        .collect();
    let jobs = jobs.max(1);
    let chunk = primes.len().div_ceil(jobs).max(1);
    let results: Vec<Result<ScanRecord, WitnessError>> = thread::scope(|s| {
        let handles: Vec<_> = primes
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(|&p| run_one(kind, p)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });

    let mut records = Vec::new();
    let mut skipped = BTreeMap::new();
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) if e.is_domain_error() => *skipped.entry(e.tag()).or_insert(0) += 1,
            Err(e) => return Err(e),
        }
    }
    let summary = summarize(kind, primes.len() as u64, &records);
    Ok(ScanReport {
        kind,
        from,
        to,
        records,
        skipped,
        summary,
    })
}

fn summarize(kind: ScanKind, examined: u64, records: &[ScanRecord]) -> ScanSummary {
    let mut s = ScanSummary {
        primes_examined: examined,
        records: records.len() as u64,
        ..ScanSummary::default()
    };
    let fold = |xs: Vec<f64>, f: fn(f64, f64) -> f64| xs.into_iter().reduce(f);
    match kind {
        ScanKind::Borel => s.irregular_primes = Some(records.iter().map(|r| r.p()).collect()),
        ScanKind::Lr => {
            let lr: Vec<&LrWitness> = records
                .iter()
                .filter_map(|r| match r {
                    ScanRecord::Lr(w) => Some(w),
                    _ => None,
                })
                .collect();
            s.max_linnik_ratio = fold(lr.iter().map(|w| w.linnik_ratio).collect(), f64::max);
            s.min_linnik_margin = fold(lr.iter().map(|w| w.linnik_margin).collect(), f64::min);
        }
        ScanKind::Eta => {
            s.eta_counterexamples = Some(
                records
                    .iter()
                    .map(|r| match r {
                        ScanRecord::Eta(e) => e.counterexamples.len() as u64,
                        _ => 0,
                    })
                    .sum(),
            )
        }
        ScanKind::BrauerSiegel => {
            let ratios: Vec<f64> = records
                .iter()
                .filter_map(|r| match r {
                    ScanRecord::BrauerSiegel(b) => Some(b.ratio),
                    _ => None,
                })
                .collect();
            s.min_brauer_siegel_ratio = fold(ratios.clone(), f64::min);
            s.max_brauer_siegel_ratio = fold(ratios, f64::max);
        }
        ScanKind::Hida => {}
    }
    s
}
