use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use totalpos_cli::report::Report;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_totalpos"));
    c.env_remove("TOTALPOS_CAP");
    c
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}{}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TN_EXAMPLE: &str = "# totally non-negative, singular\n3 3\n2 1 1\n2 1 1\n1 1 1\n";

#[test]
fn check_lcp_tp_on_positive_matrix_holds() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", "2 2\n2 1\n1 1\n");
    let o = run(&[
        "check",
        s(&p),
        "--method",
        "lcp",
        "--class",
        "tp",
        "--k",
        "2",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"]["holds"], true);
    assert_eq!(v["method"], "lcp");
    assert!(v["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn check_minors_tn_on_singular_example_holds() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", TN_EXAMPLE);
    let o = run(&[
        "check",
        s(&p),
        "--method",
        "minors",
        "--class",
        "tn",
        "--k",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    let o = run(&[
        "check",
        s(&p),
        "--method",
        "minors",
        "--class",
        "tp",
        "--k",
        "2",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn check_snr_reports_sign_reversed_vector() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", "2 2\n1 2\n2 1\n");
    let o = run(&[
        "check",
        s(&p),
        "--method",
        "snr",
        "--class",
        "tp",
        "--k",
        "2",
    ]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"]["holds"], false);
    assert_eq!(
        v["verdict"]["certificate"]["x"],
        serde_json::json!(["1", "-2"])
    );
}

#[test]
fn every_method_agrees_on_a_tp_matrix() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", "3 3\n1 1 1\n1 2 4\n1 3 9\n");
    for m in ["minors", "contiguous", "snr", "vd", "lcp"] {
        let o = run(&["check", s(&p), "--method", m]);
        assert_eq!(code(&o), 0, "{m}");
    }
}

#[test]
fn tn_lcp_is_labelled_sufficient_only() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", TN_EXAMPLE);
    let o = run(&[
        "check",
        s(&p),
        "--method",
        "lcp",
        "--class",
        "tn",
        "--k",
        "3",
    ]);
    assert_eq!(json(&o)["label"], "sufficient-only");
}

#[test]
fn unsupported_combinations_and_bad_orders_are_input_errors() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", "2 2\n1 1\n1 2\n");
    assert_eq!(
        code(&run(&[
            "check",
            s(&p),
            "--method",
            "contiguous",
            "--class",
            "tn"
        ])),
        2
    );
    assert_eq!(
        code(&run(&["check", s(&p), "--method", "minors", "--k", "3"])),
        2
    );
    assert_eq!(
        code(&run(&["check", s(&p), "--method", "vd", "--k", "1"])),
        2
    );
    let missing = d.path().join("missing.txt");
    assert_eq!(code(&run(&["check", s(&missing), "--method", "minors"])), 2);
}

#[test]
fn parse_errors_carry_position() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", "2 2\n1 x\n3 4\n");
    let o = run(&["check", s(&p), "--method", "minors"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("column 3"), "{err}");
}

#[test]
fn lcp_solve_singular_tn_instance_is_infinite() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", &format!("{TN_EXAMPLE}-3 -3 -2\n"));
    let o = run(&["lcp", "solve", s(&p)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["lcp"]["status"], "infinite");
    let sols = v["lcp"]["solutions"].as_array().unwrap();
    assert!(sols.contains(&serde_json::json!(["1", "0", "1"])));
    assert!(sols.contains(&serde_json::json!(["0", "3", "0"])));
}

#[test]
fn lcp_solve_empty_and_unique() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", "2 2\n0 1\n0 0\n0 -1\n");
    assert_eq!(
        json(&run(&["lcp", "solve", s(&p)]))["lcp"]["status"],
        "empty"
    );

    let a = write(&d, "i.txt", "2 2\n1 0\n0 1\n");
    let q = write(&d, "q.txt", "-1 -2\n");
    let v = json(&run(&["lcp", "solve", s(&a), "--q", s(&q)]));
    assert_eq!(v["lcp"]["status"], "unique");
    assert_eq!(v["lcp"]["solutions"], serde_json::json!([["1", "2"]]));
}

#[test]
fn lcp_cap_comes_from_flag_or_environment() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", &format!("{TN_EXAMPLE}-3 -3 -2\n"));
    assert_eq!(code(&run(&["lcp", "solve", s(&p), "--cap", "2"])), 2);
    let o = bin()
        .args(["lcp", "solve", s(&p)])
        .env("TOTALPOS_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = bin()
        .args(["lcp", "solve", s(&p), "--cap", "3"])
        .env("TOTALPOS_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn generated_karlin_matrix_rechecks() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("k.txt");
    let o = run(&[
        "generate",
        "karlin",
        "--n",
        "3",
        "--out",
        s(&out),
        "--seed",
        "4",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["generated"]["seed"], 4);
    assert_eq!(
        code(&run(&["check", s(&out), "--method", "minors", "--k", "2"])),
        0
    );
    assert_eq!(
        code(&run(&["check", s(&out), "--method", "minors", "--k", "3"])),
        1
    );
    assert_eq!(
        code(&run(&["check", s(&out), "--method", "lcp", "--k", "3"])),
        1
    );
    assert_eq!(code(&run(&["compare", s(&out)])), 0);
}

#[test]
fn generated_cauchy_matrix_is_tp() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("c.txt");
    assert_eq!(
        code(&run(&["generate", "cauchy", "--n", "4", "--out", s(&out)])),
        0
    );
    assert_eq!(
        code(&run(&[
            "check",
            s(&out),
            "--method",
            "contiguous",
            "--k",
            "4"
        ])),
        0
    );
    let v = json(&run(&["compare", s(&out)]));
    assert_eq!(v["comparison"]["agreement"], true);
    let results = v["comparison"]["results"].as_array().unwrap();
    assert!(results
        .iter()
        .filter(|r| r["class"] == "tp")
        .all(|r| r["holds"] == true));
}

#[test]
fn karlin_below_three_is_rejected() {
    assert_eq!(code(&run(&["generate", "karlin", "--n", "2"])), 2);
}

#[test]
fn compare_on_tn_example_agrees() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", TN_EXAMPLE);
    let o = run(&["compare", s(&p)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let results = v["comparison"]["results"].as_array().unwrap();
    let find = |method: &str, class: &str, k: u64| {
        results
            .iter()
            .find(|r| r["method"] == method && r["class"] == class && r["k"] == k)
            .unwrap()["holds"]
            .clone()
    };
    assert_eq!(find("minors", "tp", 1), true);
    assert_eq!(find("minors", "tp", 2), false);
    assert_eq!(find("minors", "tn", 3), true);
    assert_eq!(find("snr", "tn", 3), true);
}

#[test]
fn compare_rejects_large_matrices() {
    let d = TempDir::new().unwrap();
    let mut body = String::from("7 7\n");
    for i in 0..7 {
        let row: Vec<String> = (0..7)
            .map(|j| if i == j { "1" } else { "0" }.into())
            .collect();
        body += &(row.join(" ") + "\n");
    }
    let p = write(&d, "a.txt", &body);
    assert_eq!(code(&run(&["compare", s(&p)])), 2);
}

fn gaussian_file(d: &TempDir) -> PathBuf {
    // c_i = 2^(-i^2) for i in -6..=6, written exactly.
    let coeffs: Vec<String> = (-6i64..=6)
        .map(|i| format!("1/{}", 1u64 << (i * i)))
        .collect();
    write(d, "g.txt", &format!("-6 6\n{}\n", coeffs.join(" ")))
}

#[test]
fn pf_gaussian_holds() {
    let d = TempDir::new().unwrap();
    let p = gaussian_file(&d);
    let o = run(&["pf", s(&p), "--k", "3", "--l-min", "-3", "--l-max", "3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn pf_indicator_fails_with_window() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "ind.txt", "-4 4\n0 0 0 0 1 1 1 0 0\n");
    let o = run(&["pf", s(&p), "--k", "2", "--l-min", "-2", "--l-max", "2"]);
    assert_eq!(code(&o), 1);
    let c = &json(&o)["verdict"]["certificate"];
    assert!(c["offset"].is_i64() && c["size"].is_u64(), "{c}");
}

#[test]
fn pf_empty_range_is_an_input_error() {
    let d = TempDir::new().unwrap();
    let p = gaussian_file(&d);
    let o = run(&["pf", s(&p), "--k", "2", "--l-min", "2", "--l-max", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn quiet_prints_nothing_and_keeps_exit_code() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", "2 2\n1 2\n2 1\n");
    let o = run(&["check", s(&p), "--method", "minors", "--quiet"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty() && o.stderr.is_empty());
}

#[test]
fn json_false_prints_a_summary() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", "2 2\n1 2\n2 1\n");
    let o = run(&["check", s(&p), "--method", "snr", "--json", "false"]);
    assert_eq!(code(&o), 1);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.starts_with("check (snr): TP_2 fails"), "{out}");
}

#[test]
fn reports_round_trip_modulo_timing() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "a.txt", TN_EXAMPLE);
    let l = write(&d, "l.txt", &format!("{TN_EXAMPLE}-3 -3 -2\n"));
    let g = gaussian_file(&d);
    let runs: Vec<Vec<&str>> = vec![
        vec!["check", s(&a), "--method", "snr", "--class", "tp"],
        vec!["check", s(&a), "--method", "lcp", "--class", "tn"],
        vec!["lcp", "solve", s(&l)],
        vec!["compare", s(&a)],
        vec!["generate", "karlin", "--n", "3"],
        vec!["pf", s(&g), "--k", "2", "--l-min", "-2", "--l-max", "2"],
    ];
    for args in runs {
        let o = run(&args);
        let text = String::from_utf8(o.stdout).unwrap();
        let mut report: Report = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&report).unwrap();
        let mut original: Value = serde_json::from_str(&text).unwrap();
        let mut reparsed: Value = serde_json::from_str(&again).unwrap();
        original["timing"] = Value::Null;
        reparsed["timing"] = Value::Null;
        assert_eq!(original, reparsed, "{args:?}");
        report.timing.elapsed_ms = 0.0;
        let zeroed = serde_json::to_string_pretty(&report).unwrap();
        let back: Report = serde_json::from_str(&zeroed).unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), zeroed);
    }
}

#[test]
fn identical_inputs_share_a_digest() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "a.txt", "2 2\n2 1\n1 1\n");
    let q = write(&d, "b.txt", "2 2\n2 1\n1 1\n");
    let a = json(&run(&["check", s(&p), "--method", "minors"]));
    let b = json(&run(&["check", s(&q), "--method", "contiguous"]));
    assert_eq!(a["input_digest"], b["input_digest"]);
}
