use std::path::PathBuf;
use std::process::Command;

use stickel_cli::{run, TSV_HEADER};
use stickel_core::norm_solver::NormVerdict;
use stickel_core::stickelberger::Reason;
use stickel_core::{KummerBasis, MembershipResult, NormStatus, ResidueGenerationVerdict};

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn stickel(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("stickel").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn binary(args: &[&str], table: Option<&PathBuf>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stickel"));
    cmd.args(args).env_remove("STICKELBERGER_TABLE");
    if let Some(t) = table {
        cmd.env("STICKELBERGER_TABLE", t);
    }
    let o = cmd.output().unwrap();
    Output {
        code: o.status.code().unwrap(),
        out: String::from_utf8(o.stdout).unwrap(),
        err: String::from_utf8(o.stderr).unwrap(),
    }
}

#[test]
fn resgen_table_for_23() {
    let o = stickel(&["resgen", "--ell", "23"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let rows: Vec<Vec<&str>> = o.out.lines().skip(2).take(4).map(|l| l.split_whitespace().collect()).collect();
    let got: Vec<(&str, &str)> = rows.iter().map(|r| (r[0], r[1])).collect();
    assert_eq!(got, [("1", "IN_R"), ("2", "NOT_IN_R"), ("11", "NOT_IN_R"), ("22", "NOT_IN_R")]);
    assert!(o.out.contains("R = {1}\n"));
}

#[test]
fn resgen_single_verdict_json_certificate() {
    let o = stickel(&["resgen", "--ell", "23", "--f", "11", "--json"]);
    assert_eq!(o.code, 0);
    assert!(o.out.ends_with("}\n"));
    let v: ResidueGenerationVerdict = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v.representatives.as_deref(), Some(&[1, 5][..]));
    let theta = v.tested_element().unwrap();
    let fresh = KummerBasis::build_matrix(stickel_core::CyclotomicModulus::new(23).unwrap()).unwrap();
    match &v.reason {
        Reason::ThetaNotInS(r @ MembershipResult::NotInS { .. }) => r.verify(&fresh, &theta).unwrap(),
        other => panic!("{other:?}"),
    }
    assert!(v.assumptions.iter().any(|a| a == "index_h_minus"));
    let again: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(serde_json::to_value(&v).unwrap(), again);
}

#[test]
fn resgen_preconditions() {
    let o = stickel(&["resgen", "--ell", "4"]);
    assert_eq!(o.code, 2);
    assert!(o.err.contains("4 is not an odd prime"), "{}", o.err);
    assert!(o.out.is_empty());

    let o = stickel(&["resgen", "--ell", "101"]);
    assert_eq!(o.code, 2);
    assert!(o.err.contains("h_l^+ = 1 for l < 100"), "{}", o.err);

    let o = stickel(&["resgen", "--ell", "101", "--assume-h-plus-one"]);
    assert_eq!(o.code, 2);
    assert!(o.err.contains("no record for ell = 101"), "{}", o.err);

    assert_eq!(stickel(&["resgen", "--ell", "23", "--f", "3"]).code, 2);
    assert_eq!(stickel(&["resgen", "--ell", "23", "--json", "--tsv"]).code, 2);
    assert_eq!(stickel(&["resgen"]).code, 2);
}

#[test]
fn resgen_tsv_and_stress() {
    let o = stickel(&["resgen", "--ell", "29", "--format", "tsv", "--stress", "10", "--seed", "3"]);
    assert_eq!(o.code, 0);
    let mut lines = o.out.lines();
    assert_eq!(lines.next(), Some(TSV_HEADER));
    assert_eq!(lines.count(), 6);
    assert!(o.err.lines().all(|l| l.starts_with("stress:")));
    assert!(o.err.contains("ell = 29, f = 14"));
}

#[test]
fn table_override_through_env() {
    let dir = std::env::temp_dir().join(format!("stickel-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.txt");
    // arbitrary h_minus for 101; only the parser and the gate are exercised
    let text = format!("{}\n101 1 7\n", stickel_core::class_data::BUILTIN_TABLE);
    std::fs::write(&path, text).unwrap();

    let o = binary(&["resgen", "--ell", "101", "--f", "2", "--assume-h-plus-one", "--json"], Some(&path));
    assert_eq!(o.code, 0, "{}", o.err);
    let v: ResidueGenerationVerdict = serde_json::from_str(&o.out).unwrap();
    assert!(v.assumptions.iter().any(|a| a == "h_plus_user_assumed"));

    std::fs::write(&path, "23 1 3\n").unwrap();
    let o = binary(&["resgen", "--ell", "23"], Some(&path));
    assert_eq!(o.code, 2);
    assert!(o.err.contains("no record for ell = 3"), "{}", o.err);

    let o = binary(&["--table", "/nonexistent/table.txt", "resgen", "--ell", "23"], None);
    assert_eq!(o.code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scan_rows_and_ranges() {
    let o = stickel(&["scan", "--ell-min", "3", "--ell-max", "29", "--tsv"]);
    assert_eq!(o.code, 0);
    let rows: Vec<Vec<&str>> = o.out.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    let has = |ell: &str, f: &str, s: &str| rows.iter().any(|r| r[0] == ell && r[1] == f && r[2] == s);
    assert!(has("23", "2", "NOT_IN_R"));
    assert!(has("29", "14", "NOT_IN_R"));
    let keys: Vec<(u64, u64)> = rows.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);

    let o = stickel(&["scan", "--ell-min", "3", "--ell-max", "19", "--json", "--parallel"]);
    let verdicts: Vec<ResidueGenerationVerdict> = serde_json::from_str(&o.out).unwrap();
    assert!(!verdicts.is_empty());
    assert!(verdicts.iter().all(|v| v.status.to_string() == "IN_R"));

    let o = stickel(&["scan", "--ell-min", "30", "--ell-max", "20", "--tsv"]);
    assert_eq!((o.code, o.out.as_str()), (0, format!("{TSV_HEADER}\n").as_str()));
    let o = stickel(&["scan", "--ell-min", "24", "--ell-max", "28"]);
    assert_eq!((o.code, o.out.as_str()), (0, ""));

    let o = stickel(&["scan", "--ell-min", "90", "--ell-max", "110"]);
    assert_eq!(o.code, 2);
    assert!(o.out.is_empty());
}

#[test]
fn stickelberger_member() {
    let o = stickel(&["stickelberger", "--ell", "23", "member", "--element", "{1,5}"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("NotInS"), "{}", o.out);

    let o = stickel(&["stickelberger", "--ell", "23", "--json", "member", "--element", "N"]);
    let r: MembershipResult = serde_json::from_str(&o.out).unwrap();
    let mut want = vec![0i64; 11];
    want.push(1);
    assert_eq!(r, MembershipResult::InS { coeffs: want.into_iter().map(Into::into).collect() });

    let o = stickel(&["stickelberger", "--ell", "23", "member", "--element", "1*s1 + 1*s5"]);
    assert!(o.out.contains("NotInS"));
    let o = stickel(&["stickelberger", "--ell", "23", "member", "--element", "-2*s3"]);
    assert_eq!(o.code, 0, "{}", o.err);

    for bad in ["{1,23}", "{1,1}", "s0", "garbage", "7"] {
        let o = stickel(&["stickelberger", "--ell", "23", "member", "--element", bad]);
        assert_eq!(o.code, 2, "{bad}");
    }
}

#[test]
fn stickelberger_basis_json() {
    let o = stickel(&["stickelberger", "--ell", "5", "--json", "basis"]);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["rank"], 3);
    assert_eq!(v["columns"].as_array().unwrap().len(), 3);
    assert_eq!(v["columns"][2]["name"], "N");
}

#[test]
fn norm_check_examples() {
    for (a, want) in [
        ("2048", NormStatus::Solvable),
        ("-1", NormStatus::NotSolvable),
        ("1/2048", NormStatus::Solvable),
        ("32", NormStatus::NotSolvable),
        ("-4", NormStatus::NotSolvable),
        ("0", NormStatus::Solvable),
    ] {
        let o = stickel(&["norm-check", "--ell", "23", "--a", a, "--json"]);
        assert_eq!(o.code, 0, "{a}: {}", o.err);
        let v: NormVerdict = serde_json::from_str(&o.out).unwrap();
        assert_eq!(v.status, want, "{a}");
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", o.out);
    }
    let o = stickel(&["norm-check", "--ell", "23", "--a", "2048"]);
    assert!(o.out.starts_with("ell = 23, a = 2048: SOLVABLE\n"));
    let o = stickel(&["norm-check", "--ell", "23", "--a", "2048", "--tsv"]);
    assert_eq!(o.out.lines().nth(1), Some("23\t2048\tSOLVABLE\tR-BEZOUT"));

    for bad in ["1/0", "abc", "2/"] {
        assert_eq!(stickel(&["norm-check", "--ell", "23", "--a", bad]).code, 2, "{bad}");
    }
}

#[test]
fn report_matches_golden() {
    let o = stickel(&["report", "--paper"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.out, include_str!("golden/report_23.txt"));
    assert_eq!(stickel(&["report"]).code, 2);
}

#[test]
fn binary_exit_codes() {
    assert_eq!(binary(&["resgen", "--ell", "4"], None).code, 2);
    let o = binary(&["--help"], None);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("resgen"));
}
