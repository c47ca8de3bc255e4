use std::process::Command;

use gil_cli::{run, Outcome};
use serde_json::Value;

fn gil(args: &str) -> Outcome {
    run(std::iter::once("gil").chain(args.split_whitespace()))
}

fn gil_args(args: &[&str]) -> Outcome {
    run(std::iter::once("gil").chain(args.iter().copied()))
}

fn ok(args: &str) -> String {
    let out = gil(args);
    assert_eq!(out.code, 0, "gil {args}: {}", out.stderr);
    out.stdout
}

fn json(args: &str) -> Value {
    serde_json::from_str(&ok(&format!("{args} --format json"))).unwrap()
}

#[test]
fn borel_37_json() {
    let v = json("witness borel -p 37");
    assert_eq!(v["command"], "witness borel");
    let rec = &v["records"][0];
    let ks: Vec<u64> = rec["irregular_indices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["k"].as_u64().unwrap())
        .collect();
    assert_eq!(ks, vec![32]);
    assert_eq!(rec["dim_bound"], 40);
}

#[test]
fn dims_j1_7_is_zero() {
    assert_eq!(ok("dims --j1 7").trim(), "dim J_1(7) = 0");
    assert_eq!(json("dims --j1 7")["records"][0]["dim"], 0);
    assert_eq!(json("dims --x0 37")["records"][0]["genus"], 2);
    assert_eq!(json("dims --new 22")["records"][0]["dim"], 0);
    assert_eq!(json("dims --x1 13")["records"][0]["genus"], 2);
}

#[test]
fn eta_up_to_1000() {
    assert!(ok("inertia eta --max 1000").contains("0 counterexamples"));
    let v = json("inertia eta --max 1000");
    assert_eq!(v["summary"]["counterexamples"], 0);
    assert_eq!(v["records"], Value::Array(vec![]));
}

#[test]
fn json_round_trips() {
    let commands = [
        "witness borel -p 691",
        "witness lr -p 13",
        "witness hida -p 47",
        "classgroup -p 3299",
        "theta -p 3299 --coeffs 60 --char 5",
        "dickson classify --field 11 --gen 2,1,0,1",
        "inertia local -p 11 -j 5 --vcase ss",
        "bounds exceptional -d 50",
        "dims --x0 5000",
        "irregular --max 300",
        "scan lr --from 5 --to 300",
        "scan brauer_siegel --from 5 --to 500",
        "scan hida --from 5 --to 200",
    ];
    for c in commands {
        let out = ok(&format!("{c} --format json"));
        let v: Value = serde_json::from_str(&out).unwrap();
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again, out, "{c}");
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
        for key in ["command", "parameters", "records", "notes"] {
            assert!(v.get(key).is_some(), "{c}: missing {key}");
        }
    }
}

#[test]
fn jobs_never_change_bytes() {
    for kind in ["borel", "lr", "hida", "eta", "brauer_siegel"] {
        for format in ["json", "csv", "text"] {
            let base = ok(&format!("scan {kind} --from 2 --to 400 --format {format}"));
            for jobs in [2, 3, 8] {
                let other = ok(&format!(
                    "scan {kind} --from 2 --to 400 --jobs {jobs} --format {format}"
                ));
                assert_eq!(other, base, "{kind} {format} jobs {jobs}");
            }
        }
    }
}

#[test]
fn cyclotomic_values_are_exact() {
    let v = json("theta -p 23 --coeffs 5");
    let a2 = &v["records"][1]["a"];
    assert_eq!(a2["order"], 3);
    assert_eq!(a2["coeffs"], serde_json::json!([-1, 0]));
    let a3 = &v["records"][2]["a"];
    assert_eq!(v["records"][2]["n"], 3);
    assert_eq!(a3["order"], 3);
}

#[test]
fn exit_codes() {
    let cases: &[(&str, i32)] = &[
        ("witness borel -p 7", 2),
        ("witness hida -p 7", 2),
        ("theta -p 7", 2),
        ("witness borel -p 8", 1),
        ("witness hida -p 13", 1),
        ("witness lr -p 5", 1),
        ("classgroup -p 13", 1),
        ("theta -p 23 --char 3", 1),
        ("inertia local -p 11 -j 10 --vcase ss", 1),
        ("inertia local -p 11 -j 1 --vcase xx", 1),
        ("bounds exceptional -d 0", 1),
        ("dims --x0 5 --x1 5", 1),
        ("dims", 1),
        ("scan nope --from 1 --to 2", 1),
        ("scan borel --from 9 --to 2", 1),
        ("witness borel -p 37 --frobnicate", 1),
        ("classgroup -p 23 --format csv", 1),
        ("dickson classify --field 7 --gen 1,2,3", 1),
        ("dickson classify --field 7 --gen 1,2,2,4", 1),
        ("dickson classify --field 7 --gen t,0,0,1", 1),
        ("dickson classify --field 5 --gen 2,0,0,1", 1),
        ("dickson classify --field 7,3 --gen 2,0,0,1", 1),
        ("--help", 0),
        ("--version", 0),
    ];
    for &(args, code) in cases {
        let out = gil(args);
        assert_eq!(out.code, code, "gil {args}: {}{}", out.stdout, out.stderr);
        if code != 0 {
            assert!(out.stdout.is_empty() && !out.stderr.is_empty(), "gil {args}");
        }
    }
    assert!(gil("witness borel -p 7").stderr.contains("regular_prime"));
    assert!(gil("witness hida -p 7").stderr.contains("trivial_class_group"));
}

#[test]
fn dickson_over_f49() {
    let field = ["--field", "7,2"];
    let classify = |gens: &[&str]| {
        let mut args = vec!["dickson", "classify"];
        args.extend(field);
        for g in gens {
            args.extend(["--gen", g]);
        }
        args.extend(["--format", "json"]);
        let out = gil_args(&args);
        assert_eq!(out.code, 0, "{gens:?}: {}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        v["records"][0].clone()
    };
    let borel = classify(&["t,1,0,1"]);
    assert_eq!(borel["label"], "borel");
    // t, -t, 3+2t, 3-2t all parse, and so does a negative integer
    let r = classify(&["t,0,0,-t", "3+2t,0,0,3-2t", "-1,0,0,1"]);
    assert!(r["group_order"].as_u64().unwrap() >= 2);
    let sl2 = classify(&["1,1,0,1", "1,0,1,1"]);
    assert_eq!(sl2["label"], "large-PSL2(F_7)");
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("borel.json");
    let p = path.to_str().unwrap();
    let out = gil_args(&["witness", "borel", "-p", "37", "--format", "json", "--out", p]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, ok("witness borel -p 37 --format json"));

    let missing = dir.path().join("no/such/dir/x.json");
    let out = gil_args(&["dims", "--j1", "7", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.code, 1);
}

#[test]
fn scan_csv_is_flat() {
    let csv = ok("scan borel --from 2 --to 100 --format csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p,irregular_indices,dim_bound");
    assert_eq!(&lines[1..], &["37,32,40", "59,44,117", "67,58,155"]);
    let csv = ok("scan eta --from 7 --to 50 --format csv");
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",0")));
}

fn binary(args: &[&str], budget: Option<&str>) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gil"));
    cmd.args(args).env_remove("GIL_MAX_CLOSURE");
    if let Some(b) = budget {
        cmd.env("GIL_MAX_CLOSURE", b);
    }
    cmd.output().unwrap()
}

#[test]
fn binary_exit_codes_and_closure_budget() {
    let sl2 = ["dickson", "classify", "--field", "7", "--gen", "1,1,0,1", "--gen", "1,0,1,1"];
    let out = binary(&sl2, None);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("large-PSL2(F_7)"));

    let out = binary(&sl2, Some("50"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("GIL_MAX_CLOSURE"));

    assert_eq!(binary(&sl2, Some("many")).status.code(), Some(1));
    assert_eq!(binary(&["witness", "borel", "-p", "7"], None).status.code(), Some(2));
    assert_eq!(binary(&["witness", "borel"], None).status.code(), Some(1));
}
