use std::process::{Command, Output};

use serde_json::Value;

fn newred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newred")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn golden_ratio_third_iterate() {
    let o = newred(&["--json", "check", "--poly", "x^2-x-1", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["newly_reducible"], true);
    let factors: Vec<Value> = v["witness"]["factors"]["factors"].as_array().unwrap().clone();
    let polys: Vec<Value> = factors.iter().map(|f| f["poly"].clone()).collect();
    // ascending coefficients of x^4-3x^3+4x-1 and x^4-x^3-3x^2+x+1
    assert_eq!(polys, vec![serde_json::json!(["-1", "4", "0", "-3", "1"]), serde_json::json!(["1", "1", "-3", "-1", "1"])]);
    let human = stdout(&newred(&["check", "--poly", "x^2-x-1", "--n", "3"]));
    assert!(human.contains("x^4 - 3*x^3 + 4*x - 1") && human.contains("x^4 - x^3 - 3*x^2 + x + 1"));
}

#[test]
fn golden_ratio_second_iterate_is_not_newly_reducible() {
    let o = newred(&["check", "--poly", "x^2-x-1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "not newly reducible");
    let j = newred(&["--json", "check", "--poly", "x^2-x-1", "--n", "2", "--factor-only"]);
    assert_eq!(json_lines(&j)[0]["newly_reducible"], false);
}

#[test]
fn quartic_family_closed_form() {
    let o = newred(&["--json", "family", "quartic_t", "--params", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    let want = stdout(&newred(&["--json", "iterate", "--poly", "(x+185)^4-192", "--n", "1"]));
    let want: Value = serde_json::from_str(want.trim()).unwrap();
    assert_eq!(v["member"]["f"]["coeffs"], want["coeffs"]);
    assert_eq!(v["verification"]["ok"], true);
}

#[test]
fn family_json_lines_one_per_member() {
    let o = newred(&["--json", "family", "quad_n22", "--params", "3", "--params", "-1/2", "--params", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[2]["member"]["predicted"]["newly_reducible"], false);
    let g = newred(&["--json", "family", "genbigd", "--d", "6", "--p", "3", "--count", "2"]);
    assert_eq!(json_lines(&g).len(), 2);
}

#[test]
fn iterate_and_factor_over_finite_fields() {
    let o = newred(&["iterate", "--poly", "x^2+x+1", "--n", "2", "--field", "q=4"]);
    assert_eq!(stdout(&o).trim(), "x^4 + x + 1");
    let f = newred(&["--json", "factor", "--poly", "x^4+1", "--field", "p=2"]);
    let v = &json_lines(&f)[0];
    assert_eq!(v["factorization"]["factors"][0]["mult"], 4);
    let bad = newred(&["factor", "--poly", "x^2+1", "--field", "p=9"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(newred(&["bogus"]).status.code(), Some(1));
    assert_eq!(newred(&["check", "--poly", "x^2+", "--n", "2"]).status.code(), Some(1));
    assert_eq!(newred(&["family", "no_such_family", "--params", "1"]).status.code(), Some(1));
    assert_eq!(newred(&["--help"]).status.code(), Some(0));
}

#[test]
fn box_search_with_checkpoint_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let out = dir.path().join("hits.jsonl");
    let csv = dir.path().join("hits.csv");
    let args = |extra: &[&str]| {
        let mut v: Vec<String> = ["--json", "search", "box", "--a", "5", "--b", "20", "--n", "3", "--chunk", "2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        v.push("--checkpoint".into());
        v.push(ck.to_str().unwrap().into());
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    let partial = newred(&args(&["--stop-after", "2"]).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(json_lines(&partial)[0]["summary"]["complete"], false);
    let full = newred(
        &args(&["--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap()])
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    );
    let v = &json_lines(&full)[0];
    assert_eq!(v["summary"]["complete"], true);
    let hits: Vec<(String, String)> = v["hits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| (h["a"].as_str().unwrap().to_string(), h["b"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(hits, vec![("-5".to_string(), "9".to_string()), ("-1".to_string(), "-1".to_string())]);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 2);
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("a,b,gamma,m,n,degree_pattern,provenance"));
    assert!(csv_text.contains("-1,-1,1/2,-7/4,3,4 4,brute"));
}

#[test]
fn oversized_box_is_refused_without_override() {
    let o = newred(&["search", "box", "--a", "100000", "--b", "1000000000", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn surface_search_finds_golden_ratio() {
    let o = newred(&["--json", "search", "surface", "--height", "1", "--box-a", "5", "--box-b", "5"]);
    let v = &json_lines(&o)[0];
    let hit = &v["hits"][0];
    assert_eq!((hit["a"].as_str(), hit["b"].as_str()), (Some("-1"), Some("-1")));
    assert_eq!(hit["in_box"], true);
}

#[test]
fn finite_field_commands() {
    let c = newred(&["--json", "ff", "classify", "--q", "2", "--n", "2"]);
    assert_eq!(json_lines(&c)[0]["member"], false);
    let csv = newred(&["ff", "classify", "--q", "4", "--n", "2", "--csv"]);
    assert!(stdout(&csv).starts_with("q,d,n,member,witness_count\n4,2,2,true,"));
    let a = newred(&["ff", "ahmadi", "--q", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(newred(&["ff", "ahmadi", "--q", "9"]).status.code(), Some(1));
}

#[test]
fn verify_paper_is_deterministic() {
    let run = || {
        let o = newred(&["--json", "verify-paper", "--claims", "1,2,6,9"]);
        assert_eq!(o.status.code(), Some(2), "criteria 6 and 9 fail literally");
        json_lines(&o)
            .into_iter()
            .map(|v| (v["id"].as_u64().unwrap(), v["pass"].as_bool().unwrap(), v["detail"].as_str().unwrap().to_string()))
            .collect::<Vec<_>>()
    };
    let first = run();
    assert_eq!(first.iter().map(|(id, pass, _)| (*id, *pass)).collect::<Vec<_>>(), vec![(1, true), (2, true), (6, false), (9, false)]);
    assert_eq!(first, run());
    let ok = newred(&["verify-paper", "--claims", "1,3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("PASS  1"));
    assert_eq!(newred(&["verify-paper", "--claims", "13"]).status.code(), Some(1));
}
