use std::process::{Command, Output};

use serde_json::Value;

fn qlap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlap"))
        .args(args)
        .output()
        .expect("run qlap")
}

fn code(args: &[&str]) -> i32 {
    qlap(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = qlap(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn compute_series() {
    let v = json(&["compute", "--builtin", "poincare", "--terms", "10"]);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["series"]["basis"], "ZHS");
    assert_eq!(v["series"]["coeffs"].as_array().unwrap().len(), 10);

    let text = qlap(&[
        "compute",
        "--builtin",
        "fig8-f2",
        "--terms",
        "10",
        "--basis",
        "m2",
        "--out",
        "text",
    ]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("basis M2"));
    assert!(text.contains("a_0 = 1\n"));
    assert!(text.contains("a_1 = v^-3\n"));
    assert!(text.contains("a_9 = v^-99\n"));

    let text = String::from_utf8(
        qlap(&[
            "compute",
            "--builtin",
            "whitehead-2-m1",
            "--terms",
            "5",
            "--out",
            "text",
        ])
        .stdout,
    )
    .unwrap();
    assert!(text.contains("a_4 = v^-24\n"));

    assert_eq!(
        code(&["compute", "--builtin", "poincare", "--basis", "m2"]),
        2
    );
    assert_eq!(code(&["compute", "--builtin", "whitehead-m1-m4"]), 3);
}

#[test]
fn eval_values() {
    let v = json(&["eval", "--builtin", "fig8-f2", "--order", "12"]);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["algebraic_integer"], true);
    let v = json(&[
        "eval",
        "--builtin",
        "fig8-f2",
        "--order",
        "16",
        "--refined",
        "0",
    ]);
    assert_eq!(v["refined"], 0);
    assert_eq!(v["order"], 16);
    assert_eq!(code(&["eval", "--builtin", "fig8-f2", "--order", "2"]), 3);
    assert_eq!(
        code(&[
            "eval",
            "--builtin",
            "fig8-f2",
            "--order",
            "7",
            "--refined",
            "0"
        ]),
        3
    );
}

#[test]
fn compare_universal_with_state_sums() {
    assert_eq!(
        code(&[
            "compare",
            "--builtin",
            "poincare",
            "--orders",
            "3,5,7,9,11,13,15"
        ]),
        0
    );
    assert_eq!(
        code(&["compare", "--builtin", "poincare", "--orders", "4,8,12,16"]),
        0
    );
    assert_eq!(
        code(&["compare", "--builtin", "fig8-zhs", "--orders", "3,5,8,9"]),
        0
    );
    assert_eq!(
        code(&[
            "compare",
            "--builtin",
            "fig8-f2",
            "--orders",
            "8,12,16,20,24"
        ]),
        0
    );
    assert_eq!(
        code(&[
            "compare",
            "--builtin",
            "whitehead-m1-m4",
            "--refined",
            "--orders",
            "8,16,24,32"
        ]),
        0
    );
    assert_eq!(
        code(&[
            "compare",
            "--builtin",
            "lens-b-1",
            "--b",
            "-8",
            "--refined",
            "--orders",
            "12,16"
        ]),
        0
    );
    let v = json(&[
        "compare",
        "--builtin",
        "whitehead-2-m1",
        "--orders",
        "5,12",
        "--out",
        "json",
    ]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_suites() {
    assert_eq!(code(&["verify", "--suite", "lemmas", "--kmax", "25"]), 0);
    assert_eq!(
        code(&["verify", "--suite", "laplace-tables", "--rmax", "32"]),
        0
    );
    assert_eq!(code(&["verify", "--suite", "taylor"]), 0);
}

#[test]
fn integrality_suite_reports_counterexamples() {
    let out = qlap(&["verify", "--suite", "integrality", "--rmax", "24"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL lens-2-1: (1-v)τ'_σ algebraic integer, cohomological orders"));
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() > 10);
    assert!(text
        .lines()
        .any(|l| l.starts_with("PASS fig8-f2") && l.contains("spin")));
}

#[test]
fn bad_input() {
    assert_eq!(code(&["eval", "--builtin", "nope", "--order", "5"]), 2);
    assert_eq!(
        code(&["eval", "--manifold", "/nonexistent.json", "--order", "5"]),
        2
    );
    assert_eq!(code(&["eval", "--order", "5"]), 2);
    assert_eq!(
        code(&[
            "eval",
            "--builtin",
            "poincare",
            "--order",
            "5",
            "--refined",
            "2"
        ]),
        2
    );
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn manifold_file() {
    let dir = std::env::temp_dir().join(format!("qlap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    std::fs::write(&path, r#"{"components":[{"framing":2},{"framing":-1}],"coeffs":{"kind":"builtin","name":"whitehead"}}"#).unwrap();
    let p = path.to_str().unwrap();
    let from_file = json(&["eval", "--manifold", p, "--order", "12"]);
    let builtin = json(&["eval", "--builtin", "whitehead-2-m1", "--order", "12"]);
    assert_eq!(from_file["value"], builtin["value"]);
    std::fs::write(&path, "{").unwrap();
    assert_eq!(code(&["eval", "--manifold", p, "--order", "12"]), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["compute", "--builtin", "whitehead-2-m1", "--terms", "6"][..],
        &[
            "eval",
            "--builtin",
            "lens-b-1",
            "--b",
            "-8",
            "--order",
            "16",
            "--refined",
            "1",
        ],
        &[
            "verify",
            "--suite",
            "integrality",
            "--rmax",
            "16",
            "--out",
            "json",
        ],
    ] {
        let a = qlap(args);
        let b = qlap(args);
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}
