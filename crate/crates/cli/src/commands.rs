use std::fmt::Write as _;

use serde_json::{json, Value};

use gil_core::arith::{irregular_indices, primes_up_to};
use gil_core::dickson::{classify, DicksonError, Fq, GFq, Mat2, DEFAULT_BUDGET};
use gil_core::dims::{dim_j1_prime, dim_s2_new_gamma0, genus_x0, genus_x1};
use gil_core::inertia::{
    case_i_cutoff, classify_weight2_local, exceptional_prime_bound, semistable_index_bound, VCase,
};
use gil_core::quad::{
    checked_class_number, class_number_analytic, theta_coefficients, ClassGroup, Discriminant,
};
use gil_core::witness::{
    borel_witness, dihedral_hida_witness, dihedral_lr_witness, scan, ScanKind, ScanRecord,
    ScanReport, WitnessError,
};

use crate::report::{to_value, Report, Table};
use crate::{
    BoundsCommand, Command, DicksonCommand, DimsArgs, Failure, InertiaCommand, WitnessKind,
    MAX_CLOSURE_VAR,
};

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Self {
        if e.is_domain_error() {
            Failure::Domain {
                tag: e.tag(),
                message: e.to_string(),
            }
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

pub fn dispatch(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Irregular { max } => irregular(*max),
        Command::Classgroup { p } => classgroup(*p),
        Command::Theta { p, coeffs, index } => theta(*p, *coeffs, *index),
        Command::Dickson {
            command: DicksonCommand::Classify { field, gens },
        } => dickson(field, gens),
        Command::Inertia {
            command: InertiaCommand::Local { p, j, vcase },
        } => inertia_local(*p, *j, *vcase),
        Command::Inertia {
            command: InertiaCommand::Eta { max },
        } => inertia_eta(*max),
        Command::Bounds {
            command: BoundsCommand::Exceptional { d },
        } => bounds(*d),
        Command::Dims(args) => dims(args),
        Command::Witness { kind, p } => witness(*kind, *p),
        Command::Scan {
            kind,
            from,
            to,
            jobs,
        } => scan_range(*kind, *from, *to, *jobs),
    }
}

fn irregular(max: u64) -> Result<Report, Failure> {
    let mut r = Report::new("irregular", json!({ "max": max }));
    let mut count = 0u64;
    for p in primes_up_to(max).into_iter().filter(|&p| p >= 5) {
        let ks = irregular_indices(p).map_err(usage)?;
        if ks.is_empty() {
            continue;
        }
        count += 1;
        let list: Vec<String> = ks.iter().map(u64::to_string).collect();
        writeln!(r.text, "{p}: {}", list.join(" ")).unwrap();
        r.records.push(json!({ "p": p, "indices": ks }));
    }
    writeln!(r.text, "{count} irregular primes up to {max}").unwrap();
    r.summary = Some(json!({ "irregular_primes": count }));
    r.notes.push("indices k: even, 2 <= k <= p - 3, B_k = 0 mod p".into());
    Ok(r)
}

fn class_group(p: u64) -> Result<ClassGroup, Failure> {
    let d = Discriminant::minus_prime(p).map_err(usage)?;
    ClassGroup::new(d).map_err(usage)
}

fn invariants_text(inv: &[u64]) -> String {
    if inv.is_empty() {
        return "trivial".into();
    }
    inv.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join(" x ")
}

fn classgroup(p: u64) -> Result<Report, Failure> {
    let g = class_group(p)?;
    let d = g.discriminant();
    let h = checked_class_number(d).map_err(usage)?;
    let analytic = class_number_analytic(d).map_err(usage)?;
    let mut r = Report::new("classgroup", json!({ "p": p }));
    r.records.push(json!({
        "p": p,
        "discriminant": d,
        "h": h,
        "h_analytic": analytic,
        "invariants": g.invariants(),
        "generators": to_value(&g.generators()),
        "reduced_forms": to_value(&g.forms()),
    }));
    let forms: Vec<String> = g.forms().iter().map(|f| f.to_string()).collect();
    let gens: Vec<String> = g.generators().iter().map(|f| f.to_string()).collect();
    r.text = format!(
        "h({}) = {h} ({})\nforms: {}\ngenerators: {}\n",
        d.value(),
        invariants_text(g.invariants()),
        forms.join(" "),
        if gens.is_empty() { "none".into() } else { gens.join(" ") },
    );
    r.notes.push("h from reduced forms, checked against the Dirichlet class number formula".into());
    Ok(r)
}

fn theta(p: u64, coeffs: u64, index: usize) -> Result<Report, Failure> {
    let g = class_group(p)?;
    let chars = g.characters();
    let psi = match chars.get(index) {
        Some(c) => c.clone(),
        None if chars.len() == 1 => return Err(WitnessError::TrivialClassGroup(p).into()),
        None => {
            return Err(Failure::Usage(format!(
                "--char {index} is out of range: the class group has {} characters",
                chars.len()
            )))
        }
    };
    let f = theta_coefficients(&g, &psi, coeffs).map_err(usage)?;
    let mut r = Report::new(
        "theta",
        json!({ "p": p, "coeffs": coeffs, "char": index }),
    );
    writeln!(
        r.text,
        "theta series of psi = {:?} (order {}) on Cl({}); z{} = exp(2 pi i/{})",
        psi.exponents(),
        psi.order(),
        g.discriminant().value(),
        psi.order(),
        psi.order()
    )
    .unwrap();
    for (i, a) in f.coefficients().iter().enumerate() {
        let n = i as u64 + 1;
        writeln!(r.text, "a_{n} = {a}").unwrap();
        r.records.push(json!({ "n": n, "a": to_value(a) }));
    }
    r.summary = Some(json!({
        "character": to_value(&psi),
        "invariants": g.invariants(),
    }));
    r.notes.push("a_n = sum of psi over integral ideals of norm n".into());
    Ok(r)
}

fn parse_field(s: &str) -> Result<GFq, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<u64>()
            .map_err(|_| Failure::Usage(format!("--field {s:?}: expected p or p,r")))
    };
    let (p, r) = match parts.as_slice() {
        [p] => (num(p)?, 1),
        [p, r] => (num(p)?, num(r)?),
        _ => return Err(Failure::Usage(format!("--field {s:?}: expected p or p,r"))),
    };
    let r = u32::try_from(r).map_err(|_| Failure::Usage(format!("--field {s:?}: r too large")))?;
    GFq::new(p, r).map_err(usage)
}

/// `x`, `yt`, `x+yt` or `x-yt`, with `t` the generator of `F_{p^2}`.
fn parse_entry(f: &GFq, s: &str) -> Result<Fq, Failure> {
    let bad = || Failure::Usage(format!("malformed matrix entry {s:?}"));
    let s = s.trim();
    let int = |t: &str| t.parse::<i64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix('t') else {
        return Ok(f.from_int(int(s)?));
    };
    if f.r() == 1 {
        return Err(Failure::Usage(format!(
            "matrix entry {s:?} uses t but the field is F_{}",
            f.order()
        )));
    }
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    let (c0, c1) = match split {
        Some(i) => (int(&body[..i])?, &body[i..]),
        None => (0, body),
    };
    let c1 = match c1 {
        "" | "+" => 1,
        "-" => -1,
        t => int(t.strip_prefix('+').unwrap_or(t))?,
    };
    Ok(f.elem(c0, c1))
}

fn parse_matrix(f: &GFq, s: &str) -> Result<Mat2, Failure> {
    let entries = s
        .split(',')
        .map(|e| parse_entry(f, e))
        .collect::<Result<Vec<_>, _>>()?;
    let e: [Fq; 4] = entries.try_into().map_err(|_| {
        Failure::Usage(format!("malformed matrix {s:?}: expected four entries a,b,c,d"))
    })?;
    Ok(Mat2::new(*f, e))
}

fn closure_budget() -> Result<usize, Failure> {
    match std::env::var(MAX_CLOSURE_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!("{MAX_CLOSURE_VAR}={v:?} is not a positive integer"))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn dickson(field: &str, gens: &[String]) -> Result<Report, Failure> {
    let f = parse_field(field)?;
    let mats = gens
        .iter()
        .map(|g| parse_matrix(&f, g))
        .collect::<Result<Vec<_>, _>>()?;
    let budget = closure_budget()?;
    let rep = classify(f, &mats, budget).map_err(|e| match e {
        DicksonError::Overflow { budget } => Failure::Usage(format!(
            "the generated group has more than {budget} elements; raise {MAX_CLOSURE_VAR}"
        )),
        e => usage(e),
    })?;
    let mut r = Report::new(
        "dickson classify",
        json!({ "field": field, "gen": gens }),
    );
    let hist: Vec<String> = rep
        .order_histogram
        .iter()
        .map(|(o, n)| format!("{o}:{n}"))
        .collect();
    r.text = format!(
        "{}: image of order {} in PGL_2({}), structure {}\nelement orders: {}\n",
        rep.label,
        rep.group_order,
        rep.field,
        rep.structure,
        hist.join(" ")
    );
    r.records.push(to_value(&rep));
    Ok(r)
}

fn inertia_local(p: u64, j: u64, vcase: VCase) -> Result<Report, Failure> {
    let v = classify_weight2_local(p, j, vcase).map_err(usage)?;
    let mut r = Report::new(
        "inertia local",
        json!({ "p": p, "j": j, "vcase": to_value(&vcase) }),
    );
    let vc = to_value(&vcase);
    let reason = to_value(&v.reason);
    writeln!(
        r.text,
        "p = {p}, j = {j}, {}: exceptional {} ({})",
        vc.as_str().unwrap_or_default(),
        if v.exceptional_possible { "possible" } else { "excluded" },
        reason.as_str().unwrap_or_default()
    )
    .unwrap();
    writeln!(r.text, "projective inertia order: {}", v.proj_inertia_order).unwrap();
    if let Some(d) = v.dimension_lower_bound {
        writeln!(r.text, "dimension >= {d}").unwrap();
    }
    r.records.push(to_value(&v));
    Ok(r)
}

fn inertia_eta(max: u64) -> Result<Report, Failure> {
    let rep = scan(ScanKind::Eta, 7, max, default_jobs())?;
    let mut r = Report::new("inertia eta", json!({ "max": max }));
    for rec in &rep.records {
        if let ScanRecord::Eta(e) = rec {
            for c in &e.counterexamples {
                writeln!(r.text, "p = {}, j = {}: gcd(j, p - 1) = {}", c.p, c.j, c.gcd).unwrap();
                r.records.push(to_value(c));
            }
        }
    }
    let n = r.records.len();
    writeln!(
        r.text,
        "{n} counterexamples among {} primes 7 <= p <= {max}",
        rep.summary.primes_examined
    )
    .unwrap();
    r.summary = Some(json!({
        "primes_examined": rep.summary.primes_examined,
        "counterexamples": n,
    }));
    r.notes.push("ss exponents j with theta of order <= 5, excluding j + 1 = (p + 1)/2".into());
    Ok(r)
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn bounds(d: u32) -> Result<Report, Failure> {
    let semi = semistable_index_bound(d).map_err(usage)?;
    let bound = exceptional_prime_bound(d).map_err(usage)?;
    let cutoff = case_i_cutoff(d as u64);
    let mut r = Report::new("bounds exceptional", json!({ "d": d }));
    r.text = format!(
        "d = {d}\nexceptional image only for p <= 5 * 3^(4d) = {bound}\n\
         semistable index bound 3^(4d) = {}, |GL_2(F_3^d)| = {}\n\
         etale case excluded from p = {cutoff} on (phi(p - 1) > d)\n",
        semi.bound, semi.refined
    );
    r.records.push(json!({
        "d": d,
        "exceptional_prime_bound": bound.to_string(),
        "semistable_index_bound": semi.bound.to_string(),
        "semistable_refined": semi.refined.to_string(),
        "case_i_cutoff": cutoff,
    }));
    r.notes.push("big integers are decimal strings".into());
    Ok(r)
}

fn dims(args: &DimsArgs) -> Result<Report, Failure> {
    let (key, n, value, label) = if let Some(n) = args.x0 {
        let g = genus_x0(n).map_err(usage)?;
        ("x0", n, to_value(&g), format!("g(X_0({n})) = {}", g.genus))
    } else if let Some(n) = args.x1 {
        let g = genus_x1(n).map_err(usage)?;
        ("x1", n, json!({ "n": n, "genus": g }), format!("g(X_1({n})) = {g}"))
    } else if let Some(n) = args.new {
        let d = dim_s2_new_gamma0(n).map_err(usage)?;
        (
            "new",
            n,
            json!({ "n": n, "dim": d }),
            format!("dim S_2^new(Gamma_0({n})) = {d}"),
        )
    } else if let Some(p) = args.j1 {
        let d = dim_j1_prime(p).map_err(usage)?;
        ("j1", p, json!({ "p": p, "dim": d }), format!("dim J_1({p}) = {d}"))
    } else {
        return Err(Failure::Usage("one of --x0, --x1, --new, --j1 is required".into()));
    };
    let mut r = Report::new("dims", json!({ key: n }));
    r.text = label;
    r.records.push(value);
    Ok(r)
}

fn witness(kind: WitnessKind, p: u64) -> Result<Report, Failure> {
    let (name, value, text) = match kind {
        WitnessKind::Borel => {
            let w = borel_witness(p)?;
            let ks: Vec<String> = w.irregular_indices.iter().map(|i| i.k.to_string()).collect();
            let text = format!(
                "p = {p}: B_k = 0 mod p for k in {{{}}}; dim J_1(p) = {}\n",
                ks.join(", "),
                w.dim_bound
            );
            ("witness borel", to_value(&w), text)
        }
        WitnessKind::Lr => {
            let w = dihedral_lr_witness(p)?;
            let text = format!(
                "p = {p}: ell = {} ({} Cartan), level {}, dim S_2^new = {}, ell/p^5.5 = {:e}\n",
                w.ell,
                to_value(&w.cartan_type).as_str().unwrap_or_default(),
                w.level,
                w.dim_bound,
                w.linnik_ratio
            );
            ("witness lr", to_value(&w), text)
        }
        WitnessKind::Hida => {
            let w = dihedral_hida_witness(p)?;
            let text = format!(
                "p = {p}: h = {} ({}), psi = {:?}, dimension in [{}, {}]\n",
                w.h,
                invariants_text(&w.class_group_invariants),
                w.character.exponents(),
                w.dim_lower,
                w.dim_upper
            );
            ("witness hida", to_value(&w), text)
        }
    };
    let mut r = Report::new(name, json!({ "p": p }));
    if let Some(prov) = value.get("provenance").and_then(Value::as_object) {
        for (k, v) in prov {
            r.notes.push(format!("{k}: {}", v.as_str().unwrap_or_default()));
        }
    }
    r.records.push(value);
    r.text = text;
    Ok(r)
}

fn scan_range(kind: ScanKind, from: u64, to: u64, jobs: usize) -> Result<Report, Failure> {
    if from > to {
        return Err(Failure::Usage(format!("--from {from} exceeds --to {to}")));
    }
    let rep = scan(kind, from, to, jobs)?;
    // jobs is deliberately absent: it must not change the output
    let mut r = Report::new(
        "scan",
        json!({ "kind": kind.to_string(), "from": from, "to": to }),
    );
    r.records = rep.records.iter().map(to_value).collect();
    let mut summary = to_value(&rep.summary);
    summary["skipped"] = to_value(&rep.skipped);
    r.summary = Some(summary);
    r.text = scan_text(&rep);
    r.csv = Some(scan_table(&rep));
    Ok(r)
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn scan_table(rep: &ScanReport) -> Table {
    let header = match rep.kind {
        ScanKind::Borel => vec!["p", "irregular_indices", "dim_bound"],
        ScanKind::Lr => vec![
            "p",
            "ell",
            "residue",
            "modulus",
            "cartan_type",
            "level",
            "dim_bound",
            "dim_ratio",
            "linnik_ratio",
            "linnik_margin",
        ],
        ScanKind::Hida => vec![
            "p",
            "h",
            "invariants",
            "character",
            "character_order",
            "a",
            "nebentypus_exponent",
            "dim_lower",
            "dim_upper",
        ],
        ScanKind::Eta => vec!["p", "counterexamples"],
        ScanKind::BrauerSiegel => vec!["p", "h", "ratio"],
    };
    let rows = rep
        .records
        .iter()
        .map(|rec| match rec {
            ScanRecord::Borel(w) => vec![
                w.p.to_string(),
                join(w.irregular_indices.iter().map(|i| i.k)),
                w.dim_bound.to_string(),
            ],
            ScanRecord::Lr(w) => vec![
                w.p.to_string(),
                w.ell.to_string(),
                w.residue.to_string(),
                w.modulus.to_string(),
                to_value(&w.cartan_type).as_str().unwrap_or_default().to_string(),
                w.level.to_string(),
                w.dim_bound.to_string(),
                w.dim_ratio.to_string(),
                w.linnik_ratio.to_string(),
                w.linnik_margin.to_string(),
            ],
            ScanRecord::Hida(w) => vec![
                w.p.to_string(),
                w.h.to_string(),
                join(&w.class_group_invariants),
                join(w.character.exponents()),
                w.character.order().to_string(),
                w.a.to_string(),
                w.nebentypus_exponent.to_string(),
                w.dim_lower.to_string(),
                w.dim_upper.to_string(),
            ],
            ScanRecord::Eta(e) => vec![e.p.to_string(), e.counterexamples.len().to_string()],
            ScanRecord::BrauerSiegel(b) => {
                vec![b.p.to_string(), b.h.to_string(), b.ratio.to_string()]
            }
        })
        .collect();
    Table { header, rows }
}

fn scan_text(rep: &ScanReport) -> String {
    let mut t = String::new();
    for rec in &rep.records {
        match rec {
            ScanRecord::Borel(w) => {
                writeln!(t, "{}: {}", w.p, join(w.irregular_indices.iter().map(|i| i.k))).unwrap()
            }
            ScanRecord::Lr(w) => writeln!(
                t,
                "{}: ell = {}, level {}, dim {}, ell/p^5.5 = {:e}",
                w.p, w.ell, w.level, w.dim_bound, w.linnik_ratio
            )
            .unwrap(),
            ScanRecord::Hida(w) => writeln!(
                t,
                "{}: h = {} ({}), dimension in [{}, {}]",
                w.p,
                w.h,
                invariants_text(&w.class_group_invariants),
                w.dim_lower,
                w.dim_upper
            )
            .unwrap(),
            ScanRecord::Eta(e) => {
                for c in &e.counterexamples {
                    writeln!(t, "{}: j = {}, gcd = {}", c.p, c.j, c.gcd).unwrap();
                }
            }
            ScanRecord::BrauerSiegel(b) => {
                writeln!(t, "{}: h = {}, ln h / ln sqrt(p) = {:.4}", b.p, b.h, b.ratio).unwrap()
            }
        }
    }
    let s = &rep.summary;
    write!(
        t,
        "{} scan over [{}, {}]: {} primes examined, {} records",
        rep.kind, rep.from, rep.to, s.primes_examined, s.records
    )
    .unwrap();
    for (tag, n) in &rep.skipped {
        write!(t, ", {n} {tag}").unwrap();
    }
    t.push('\n');
    if let Some(n) = s.eta_counterexamples {
        writeln!(t, "{n} counterexamples").unwrap();
    }
    if let (Some(r), Some(m)) = (s.max_linnik_ratio, s.min_linnik_margin) {
        writeln!(t, "max ell/p^5.5 = {r:e}, min p^5.5/ell = {m:.1}").unwrap();
    }
    if let (Some(lo), Some(hi)) = (s.min_brauer_siegel_ratio, s.max_brauer_siegel_ratio) {
        writeln!(t, "ln h / ln sqrt(p) in [{lo:.4}, {hi:.4}]").unwrap();
    }
    t
}
