use std::process::Command;

use oddtors_cli::{parse_hyper, run, Report, Status, SCHEMA_VERSION};

fn report(args: &[&str]) -> (i32, Report) {
    let argv: Vec<&str> = std::iter::once("oddtors").chain(args.iter().copied()).collect();
    let (code, out) = run(argv);
    (code, out.expect("a report"))
}

fn binary(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_oddtors")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn x0_27_curve_over_q_has_z3() {
    let (code, r) = report(&["torsion", "-d", "2", "--curve", "[0,0,1,0,-7]", "--field", "Q"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["group"], "Z3");
    assert_eq!(r.results["invariants"], serde_json::json!([3]));
    assert!(!r.artifacts.primes_used.is_empty());
    assert!(r.results["proof"]["bound"].as_u64().unwrap() % 3 == 0);
}

#[test]
fn z9_curve_grows_over_k_sqrt_minus_3() {
    let curve = "[-619/27-950/27*w,-210862/243+16720/243*w,-210862/243+16720/243*w,0,0]";
    let (code, r) = report(&["torsion", "-d", "2", "--curve", curve, "--extend", "-3", "--expect", "Z3+Z9"]);
    assert_eq!(code, 0, "{:?}", r.results);
    assert_eq!(r.results["group"], "Z9");
    assert_eq!(r.results["extension"]["group"], "Z3+Z9");
}

#[test]
fn verify_remark4_and_table2_pass() {
    for item in ["remark4", "table2"] {
        let (code, r) = report(&["verify", item]);
        assert_eq!(code, 0, "{item}: {:?}", r.results);
        assert_eq!(r.status, Status::Ok);
        assert_eq!(r.results["items"][0]["passed"], true);
    }
}

#[test]
fn verify_model_and_identity() {
    let (code, r) = report(&["verify", "model", "X0(77)"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["all_on_model"], true);
    let (code, r) = report(&["verify", "identity", "v"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["holds"], true);
}

#[test]
fn jacobian_verb_reports_counts_and_structure() {
    let (code, r) = report(&["jacobian", "--model", "X0(35)", "-p", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["invariant_factors"], serde_json::json!([2, 24]));
    assert_eq!(r.results["order"], 48);
    let l: Vec<i64> = serde_json::from_value(r.results["L_coeffs"].clone()).unwrap();
    assert_eq!(l.iter().sum::<i64>(), 48);
    assert_eq!(r.results["counts"].as_array().unwrap().len(), 3);
}

#[test]
fn inline_models_match_registry() {
    let named = parse_hyper("X0(77)+").unwrap();
    assert_eq!(parse_hyper("[1,2,7,8,7,2,1]").unwrap(), named);
    assert_eq!(parse_hyper("y^2 = x^6 + 2x^5 + 7x^4 + 8x^3 + 7x^2 + 2x + 1").unwrap(), named);
    let mixed = parse_hyper("y^2 + (-x^4 - x^2 - 1)y = 2x^6 - 2x^5 + 11x^4 - 10x^3 + 20x^2 - 11x + 8").unwrap();
    assert_eq!(mixed, parse_hyper("X0(33)").unwrap());
    assert!(parse_hyper("y^3 = x").is_err());
}

#[test]
fn search_verb() {
    let (code, r) = report(&["search", "--model", "X0(77)+", "--height", "20"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["points"].as_array().unwrap().len(), 6);
    assert_eq!(r.artifacts.heights, vec![20]);
}

#[test]
fn isogeny_verb_table2_row() {
    let (code, r) = report(&["isogeny", "--field", "Q", "--curve", "[20/441,-16/27783]", "--orders", "3,7"]);
    assert_eq!(code, 0);
    let k = &r.results["kernels"][0];
    assert_eq!(k["kernel_degree"], 10);
    assert_eq!(k["signature"]["degrees"], serde_json::json!([1, 3, 6]));
    assert_eq!(k["quadratic_feasible"], false);
}

#[test]
fn classify_verb() {
    let curve = "[-4265/27-2072/27*w,377548/243-949568/243*w,377548/243-949568/243*w,0,0]";
    let (code, r) = report(&["classify", "-d", "11", "--curve", curve]);
    assert_eq!(code, 0);
    assert_eq!(r.results["base"]["group"], "Z9");
    assert_eq!(r.results["findings"][0]["extension"], "Z3+Z9");
}

#[test]
fn reports_round_trip_through_json() {
    for args in [
        vec!["jacobian", "--model", "Ctilde", "-p", "5"],
        vec!["verify", "identity", "iv"],
        vec!["torsion", "--field", "Q", "--curve", "[1,0,0,-4,-1]"],
    ] {
        let (_, r) = report(&args);
        assert_eq!(r.schema_version, SCHEMA_VERSION);
        let text = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn reports_are_deterministic_for_a_seed() {
    let args = ["--seed", "42", "jacobian", "--model", "X0(33)", "-p", "7"];
    let (_, mut a) = report(&args);
    let (_, mut b) = report(&args);
    a.wall_time_ms = 0;
    b.wall_time_ms = 0;
    assert_eq!(a, b);
    assert_eq!(a.artifacts.seed, 42);
}

#[test]
fn exit_codes() {
    let (code, _, err) = binary(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.contains("frobnicate"));
    let (code, _, _) = binary(&["torsion", "-d", "2"]);
    assert_eq!(code, 1, "missing --curve is a usage error");
    let (code, out, _) = binary(&["verify", "model", "X0(99)"]);
    assert_eq!(code, 1);
    let r: Report = serde_json::from_str(&out).unwrap();
    assert_eq!(r.status, Status::Error);
    let (code, out, _) = binary(&["jacobian", "--model", "Ctilde", "-p", "5", "--expect", "104"]);
    assert_eq!(code, 2, "wrong expected structure is a mismatch");
    let r: Report = serde_json::from_str(&out).unwrap();
    assert_eq!(r.status, Status::Mismatch);
    let (code, out, _) = binary(&["torsion", "--field", "Q", "--curve", "[0,0,1,0,-7]", "--expect", "Z3"]);
    assert_eq!(code, 0);
    assert!(serde_json::from_str::<Report>(&out).is_ok());
}

#[test]
fn bad_prime_and_unsupported_field_are_errors() {
    let (code, r) = report(&["jacobian", "--model", "X0(35)", "-p", "5"]);
    assert_eq!(code, 1);
    assert_eq!(r.status, Status::Error);
    let (code, _) = report(&["torsion", "-d", "5", "--curve", "[0,1]"]);
    assert_eq!(code, 1);
}

#[test]
fn human_rendering() {
    let (code, out, _) = binary(&["verify", "table2", "--human"]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS table2"));
}
