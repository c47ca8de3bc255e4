//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line before asserting, so `--nocapture` gives a summary.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gil_core::arith::{
    bernoulli_exact_table, bernoulli_mod_p, divisors, is_prime, kronecker, multiplicative_order,
    pow_mod, primes_up_to, totient_liminf_report,
};
use gil_core::dickson::{classify, families, Fq, GFq, Mat2, DEFAULT_BUDGET};
use gil_core::dims::{dim_s2_new_gamma0, genus_x0, genus_x1};
use gil_core::inertia::{
    classify_weight2_local, eta_gcd_check_scan, exceptional_prime_bound, proj_order_level1,
    proj_order_level2, semistable_index_bound, ProjOrder, VCase,
};
use gil_core::quad::{
    class_number, class_number_analytic, representation_counts, theta_coefficients, ClassGroup,
    CycloValue, Discriminant,
};
use gil_core::witness::{
    borel_witness, dihedral_hida_witness, dihedral_lr_witness, scan, ScanKind, ScanRecord,
    WitnessError,
};

fn verdict(id: &str, name: &str, ok: bool, elapsed: Duration, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("{status} [{id}] {name} ({:.2}s) {detail}", elapsed.as_secs_f64());
}

fn check(id: &str, name: &str, limit: Option<Duration>, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let result = result.and_then(|d| match limit {
        Some(l) if elapsed > l => Err(format!("{d}; took {elapsed:?}, limit {l:?}")),
        _ => Ok(d),
    });
    match &result {
        Ok(d) => verdict(id, name, true, elapsed, d),
        Err(d) => verdict(id, name, false, elapsed, d),
    }
    if let Err(d) = result {
        panic!("criterion {id} failed: {d}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const SECS: fn(u64) -> Option<Duration> = |s| Some(Duration::from_secs(s));

#[test]
fn c1_bernoulli_oracle() {
    check("1", "Bernoulli mod p against exact rationals", SECS(10), || {
        let exact = bernoulli_exact_table(300).map_err(|e| e.to_string())?;
        let mut pairs = 0;
        for p in primes_up_to(200).into_iter().filter(|&p| p >= 5) {
            let table = bernoulli_mod_p(p).map_err(|e| e.to_string())?;
            for k in (2..=p - 3).step_by(2) {
                let want = exact[k as usize].reduce_mod(p);
                ensure(table.get(k) == want, || format!("B_{k} mod {p}"))?;
                pairs += 1;
            }
        }
        // irregular primes below 300 by exact divisibility of numerators
        let mut oracle: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        for p in primes_up_to(299).into_iter().filter(|&p| p >= 5) {
            let pb = BigInt::from(p);
            let ks: BTreeSet<u64> = (2..=p - 3)
                .step_by(2)
                .filter(|&k| exact[k as usize].numerator().is_multiple_of(&pb))
                .collect();
            if !ks.is_empty() {
                oracle.insert(p, ks);
            }
        }
        let report = scan(ScanKind::Borel, 2, 299, 4).map_err(|e| e.to_string())?;
        let scanned: BTreeMap<u64, BTreeSet<u64>> = report
            .records
            .iter()
            .map(|r| match r {
                ScanRecord::Borel(w) => (w.p, w.irregular_indices.iter().map(|i| i.k).collect()),
                _ => unreachable!(),
            })
            .collect();
        ensure(scanned == oracle, || format!("scan {scanned:?} != oracle {oracle:?}"))?;
        ensure(oracle.get(&37) == Some(&BTreeSet::from([32])), || "37 -> {32}".into())?;
        ensure(exact[12].numerator().is_multiple_of(&BigInt::from(691)), || "691 | B_12".into())?;
        Ok(format!("{pairs} (p, k) pairs, {} irregular primes below 300", oracle.len()))
    });
}

#[test]
fn c2_class_numbers() {
    check("2", "class numbers by forms and by Dirichlet", SECS(60), || {
        let mut n = 0;
        for p in primes_up_to(4999).into_iter().filter(|&p| p >= 7 && p % 4 == 3) {
            let d = Discriminant::minus_prime(p).map_err(|e| e.to_string())?;
            let h = class_number(d).map_err(|e| e.to_string())?;
            let h2 = class_number_analytic(d).map_err(|e| e.to_string())?;
            ensure(h == h2, || format!("p = {p}: forms {h}, formula {h2}"))?;
            ensure(h <= (p - 1) / 2, || format!("p = {p}: h = {h} > (p-1)/2"))?;
            ensure(h.gcd(&p) == 1, || format!("p = {p}: p | h"))?;
            n += 1;
        }
        Ok(format!("{n} primes"))
    });
}

/// `a_n` straight from the representation numbers of the reduced forms.
fn lattice_oracle(g: &ClassGroup, psi: &gil_core::quad::ClassCharacter, bound: u64) -> Vec<CycloValue> {
    let m = psi.order() as usize;
    let mut counts = vec![vec![0i64; m]; bound as usize + 1];
    for (i, f) in g.forms().iter().enumerate() {
        let k = psi.exponent_at(g.coordinates(i)) as usize;
        for (n, r) in representation_counts(f, bound).into_iter().enumerate() {
            counts[n][k] += r as i64;
        }
    }
    // two units in Q(sqrt(-p)) for p > 3
    counts[1..]
        .iter()
        .map(|c| {
            let half: Vec<i64> = c.iter().map(|x| x / 2).collect();
            CycloValue::from_exponent_counts(psi.order(), &half)
        })
        .collect()
}

#[test]
fn c3_theta() {
    check("3", "theta series of class-group characters", SECS(30), || {
        const B: u64 = 200;
        let mut checked = 0;
        let mut a2_at_23 = None;
        for p in [23u64, 31, 47, 59, 71] {
            let g = ClassGroup::new(Discriminant::minus_prime(p).unwrap()).unwrap();
            let d = -(p as i64);
            for psi in g.characters().into_iter().filter(|c| !c.is_trivial()) {
                let f = theta_coefficients(&g, &psi, B).map_err(|e| e.to_string())?;
                let a = |n: u64| f.coefficient(n);
                ensure(*a(1) == CycloValue::one(psi.order()), || format!("p = {p}: a_1"))?;
                for m in 1..=B {
                    for n in 1..=B / m {
                        if m.gcd(&n) == 1 {
                            ensure(a(m * n) == &(a(m) * a(n)), || {
                                format!("p = {p}: a_{} != a_{m} a_{n}", m * n)
                            })?;
                        }
                    }
                }
                for l in primes_up_to(B) {
                    if kronecker(d, l as i64).unwrap() == -1 {
                        ensure(a(l).is_zero(), || format!("p = {p}: a_{l} at inert {l}"))?;
                    }
                }
                let direct = lattice_oracle(&g, &psi, B);
                let conj: Vec<CycloValue> = direct.iter().map(CycloValue::conj).collect();
                ensure(f.coefficients() == &direct[..] || f.coefficients() == &conj[..], || {
                    format!("p = {p}, psi = {:?}: lattice oracle", psi.exponents())
                })?;
                if p == 23 {
                    a2_at_23 = a(2).as_integer();
                }
                checked += 1;
            }
        }
        ensure(a2_at_23 == Some(-1), || format!("a_2 at p = 23 is {a2_at_23:?}"))?;
        Ok(format!("{checked} characters, {B} coefficients each"))
    });
}

#[test]
fn c4_dimensions() {
    check("4", "genus and newform dimension identities", SECS(30), || {
        for p in primes_up_to(999).into_iter().filter(|&p| p >= 5) {
            let closed = (p as i64 - 5) * (p as i64 - 7) / 24;
            let g = genus_x1(p).map_err(|e| e.to_string())? as i64;
            ensure(g == closed, || format!("g(X_1({p})) = {g}, closed form {closed}"))?;
        }
        ensure(dim_s2_new_gamma0(22) == Ok(0), || "dim S_2^new(22) != 0".into())?;
        const N: u64 = 5000;
        let new: Vec<u64> = (0..=N)
            .map(|n| if n == 0 { Ok(0) } else { dim_s2_new_gamma0(n) })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for n in 1..=N {
            let total: u64 = divisors(n)
                .iter()
                .map(|&m| divisors(n / m).len() as u64 * new[m as usize])
                .sum();
            let g = genus_x0(n).map_err(|e| e.to_string())?.genus;
            ensure(total == g, || format!("N = {n}: old + new = {total}, genus {g}"))?;
        }
        Ok(format!("X_1 for p < 1000, old/new for N <= {N}"))
    });
}

#[test]
fn c5_eta() {
    check("5", "gcd(j, p - 1) <= 3 on the ss branch", SECS(60), || {
        let r = scan(ScanKind::Eta, 7, 99_999, 4).map_err(|e| e.to_string())?;
        let n = r.summary.eta_counterexamples.unwrap_or(u64::MAX);
        ensure(n == 0, || format!("{n} counterexamples"))?;
        ensure(r.records.len() as u64 == r.summary.primes_examined, || "missing primes".into())?;
        // the j-scan agrees on the low range
        for p in primes_up_to(3000).into_iter().filter(|&p| p >= 7) {
            let s = eta_gcd_check_scan(p).map_err(|e| e.to_string())?;
            ensure(s.is_empty(), || format!("j-scan at p = {p}: {s:?}"))?;
        }
        Ok(format!("{} primes below 10^5", r.summary.primes_examined))
    });
}

#[test]
fn c6_exceptional_bounds() {
    check("6", "exceptional bound calculus", None, || {
        for d in 1..=50u32 {
            let want = BigUint::from(5u32) * BigUint::from(3u32).pow(4 * d);
            let got = exceptional_prime_bound(d).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("d = {d}"))?;
            let semi = semistable_index_bound(d).map_err(|e| e.to_string())?;
            ensure(got == semi.bound * 5u32, || format!("d = {d}: ratio"))?;
        }
        for p in primes_up_to(99).into_iter().filter(|&p| p >= 7) {
            let g = (2..p).find(|&g| multiplicative_order(g as i64, p) == Ok(p - 1)).unwrap();
            for a in 0..p {
                let want = multiplicative_order(pow_mod(g, a, p) as i64, p).unwrap();
                ensure(proj_order_level1(p, a) == want, || format!("level 1, p = {p}, a = {a}"))?;
            }
            let f = GFq::new(p, 2).unwrap();
            let x = f.primitive_element();
            for a in 0..p * p - 1 {
                let want = f.element_order(f.pow(x, a * (p - 1)));
                ensure(proj_order_level2(p, a) == want, || format!("level 2, p = {p}, a = {a}"))?;
            }
        }
        let mut verdicts = 0;
        for p in primes_up_to(400).into_iter().filter(|&p| p >= 7) {
            for j in 0..=p - 2 {
                for vcase in [VCase::Ord, VCase::St, VCase::Ss] {
                    let v = classify_weight2_local(p, j, vcase).map_err(|e| e.to_string())?;
                    if v.exceptional_possible {
                        let small = matches!(
                            v.proj_inertia_order,
                            ProjOrder::Exact(n) | ProjOrder::MultipleOf(n) if n <= 5
                        );
                        ensure(small, || format!("p = {p}, j = {j}, {vcase:?}: {v:?}"))?;
                    }
                    verdicts += 1;
                }
            }
        }
        Ok(format!("d <= 50, level orders for p < 100, {verdicts} local verdicts"))
    });
}

fn random_invertible(f: GFq, elems: &[Fq], rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let e = [0; 4].map(|_: u8| elems[rng.gen_range(0..elems.len())]);
        let m = Mat2::new(f, e);
        if m.is_invertible() {
            return m;
        }
    }
}

#[test]
fn c7_dickson_corpus() {
    check("7", "Dickson classifier on constructed groups", SECS(60), || {
        const TRIALS: usize = 100;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut runs = 0;
        for (p, r) in [(7u64, 1u32), (11, 1), (13, 1), (7, 2)] {
            let f = GFq::new(p, r).unwrap();
            let elems: Vec<Fq> = f.elements().collect();
            let units: Vec<Fq> = elems.iter().copied().filter(|x| !x.is_zero()).collect();
            for c in families::corpus(f) {
                let base = classify(f, &c.generators, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                ensure(base.label == c.expected, || {
                    format!("{}: label {} expected {}", c.name, base.label, c.expected)
                })?;
                ensure(base.group_order == c.expected_order, || {
                    format!("{}: order {} expected {}", c.name, base.group_order, c.expected_order)
                })?;
                for _ in 0..TRIALS {
                    let g = random_invertible(f, &elems, &mut rng);
                    let gi = g.inverse().unwrap();
                    let conj: Vec<Mat2> =
                        c.generators.iter().map(|m| gi.mul(m).mul(&g)).collect();
                    let scaled: Vec<Mat2> = c
                        .generators
                        .iter()
                        .map(|m| m.scale(units[rng.gen_range(0..units.len())]))
                        .collect();
                    for gens in [conj, scaled] {
                        let rep = classify(f, &gens, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                        ensure(rep.label == base.label && rep.group_order == base.group_order, || {
                            format!("{}: {} after conjugation or scaling", c.name, rep.label)
                        })?;
                        runs += 1;
                    }
                }
            }
        }
        Ok(format!("{runs} conjugated or rescaled generator sets"))
    });
}

#[test]
fn c8_witnesses() {
    check("8", "witness reproduction", None, || {
        let lr = |p| dihedral_lr_witness(p).map_err(|e| e.to_string());
        let w7 = lr(7)?;
        let w11 = lr(11)?;
        let w13 = lr(13)?;
        ensure(w7.ell == 83 && w11.ell == 43 && w13.ell == 103, || "ell values".into())?;
        ensure(w13.cartan_type == gil_core::witness::CartanType::Split, || "13 split".into())?;

        let r = scan(ScanKind::Lr, 2, 1999, 4).map_err(|e| e.to_string())?;
        for rec in &r.records {
            let ScanRecord::Lr(w) = rec else { unreachable!() };
            let (p, l) = (w.p, w.ell);
            ensure(is_prime(l) && l % p == p - 1 && l % 4 == 3, || format!("p = {p}: ell = {l}"))?;
            let smaller = (w.residue..l).step_by(w.modulus as usize).any(is_prime);
            ensure(!smaller, || format!("p = {p}: ell = {l} is not least"))?;
            ensure((l as f64) < (p as f64).powf(5.5), || format!("p = {p}: ell >= p^5.5"))?;
        }

        let h = dihedral_hida_witness(23).map_err(|e| e.to_string())?;
        ensure((h.dim_lower, h.dim_upper) == (10, 12), || {
            format!("hida(23) bounds [{}, {}]", h.dim_lower, h.dim_upper)
        })?;

        let irregular = [37u64, 59, 67];
        for p in primes_up_to(99) {
            let res = borel_witness(p);
            let want_err = !irregular.contains(&p);
            ensure(res.is_err() == want_err, || format!("borel_witness({p})"))?;
            if p >= 7 && want_err {
                ensure(matches!(res, Err(WitnessError::RegularPrime(_))), || {
                    format!("borel_witness({p}) should be regular_prime")
                })?;
            }
        }
        Ok(format!("{} lr witnesses below 2000", r.records.len()))
    });
}

/// The margin requirement is stated separately from the rest of criterion 8
/// because it does not hold at the smallest primes.
#[test]
fn c8_linnik_margin() {
    check("8", "ell below p^5.5 with margin >= 10^3 for p < 2000", None, || {
        let r = scan(ScanKind::Lr, 2, 1999, 4).map_err(|e| e.to_string())?;
        let low: Vec<String> = r
            .records
            .iter()
            .filter_map(|rec| match rec {
                ScanRecord::Lr(w) if w.linnik_margin < 1e3 => {
                    Some(format!("p = {} (ell = {}, margin {:.1})", w.p, w.ell, w.linnik_margin))
                }
                _ => None,
            })
            .collect();
        ensure(low.is_empty(), || format!("margin below 10^3 at {}", low.join(", ")))?;
        Ok(format!("min margin {:.3e}", r.summary.min_linnik_margin.unwrap_or(f64::NAN)))
    });
}

#[test]
fn c9_totient_ratios() {
    check("9", "totient ratios at primorials", None, || {
        let rows = totient_liminf_report(20).map_err(|e| e.to_string())?;
        let primes = primes_up_to(71);
        let mut ratios = BTreeMap::new();
        for row in rows.iter().filter(|r| r.k >= 5) {
            // phi(n)/n exactly, then ln ln n of the integer itself
            let ps = &primes[..row.k];
            let n: BigUint = ps.iter().map(|&q| BigUint::from(q)).product();
            let phi: BigUint = ps.iter().map(|&q| BigUint::from(q - 1)).product();
            ensure(n == row.primorial && !phi.is_zero(), || format!("k = {}: primorial", row.k))?;
            let oracle = phi.to_f64().unwrap() / n.to_f64().unwrap() * n.to_f64().unwrap().ln().ln();
            ensure((oracle - row.ratio).abs() < 1e-12, || format!("k = {}: ratio", row.k))?;
            ensure(row.ratio > 0.3 && row.ratio < 0.5615, || {
                format!("k = {}: ratio {} outside (0.3, 0.5615)", row.k, row.ratio)
            })?;
            ratios.insert(row.k, row.ratio);
        }
        ensure(ratios.len() == 16, || "k = 5..20".into())?;
        ensure(ratios[&20] > ratios[&10], || "k = 20 not above k = 10".into())?;
        Ok(format!("k = 10: {:.5}, k = 20: {:.5}", ratios[&10], ratios[&20]))
    });
}
