use std::process::{Command, Output};

use serde_json::Value;

fn nambu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nambu"))
        .args(args)
        .env_remove("NAMBU_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_cfz_at_two_i_is_clean() {
    let out = nambu(&[
        "verify",
        "--algebra",
        "cfz",
        "--z",
        "2i",
        "--mode",
        "symbolic",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["clean"], true);
    assert_eq!(v["report"]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_cfz_at_one_reports_window_witnesses() {
    let out = nambu(&[
        "verify",
        "--algebra",
        "cfz",
        "--z",
        "1",
        "--mode",
        "window",
        "--window",
        "-2..2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let violations = v["report"]["violations"].as_array().unwrap();
    assert!(!violations.is_empty());
    // 32 family patterns, 5 degrees per slot
    assert_eq!(v["report"]["checked"], 32 * 5usize.pow(5));
    // witnesses are concrete degree tuples
    let first = violations[0]["pattern"].as_str().unwrap();
    assert!(
        first.starts_with('(') && first.chars().any(|c| c.is_ascii_digit()),
        "{first}"
    );
}

#[test]
fn classify_qvw_symbolic_finds_only_beta() {
    let out = nambu(&["classify", "--algebra", "qvw", "--z", "symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["report"]["nontrivial"],
        serde_json::json!(["beta"])
    );
}

#[test]
fn classify_qvw_at_two_i_adds_scaling() {
    let out = nambu(&["classify", "--algebra", "qvw", "--z", "2i"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let mut shapes: Vec<&str> = v["report"]["nontrivial"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    shapes.sort();
    assert_eq!(shapes, ["beta", "scaling"]);
}

#[test]
fn input_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["verify", "--algebra", "nope"],
        &["verify", "--algebra", "qvw", "--q", "0"],
        &["verify", "--algebra", "cfz", "--z", "2+"],
        &["verify", "--algebra", "cfz", "--twist", "spin"],
        &[
            "verify",
            "--algebra",
            "cfz",
            "--z",
            "1",
            "--mode",
            "window",
            "--window",
            "3..1",
        ],
        &["verify", "--algebra", "cfz", "--mode", "window"],
        &["jacobian-demo", "--gamma", "rotate"],
        &["realize", "--lambda", "0"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = nambu(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn reports_are_byte_identical_across_runs_and_pool_sizes() {
    let args = ["jacobian-demo", "--samples", "40", "--seed", "7"];
    let a = nambu(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_nambu"))
        .args(args)
        .env("NAMBU_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let c = ["classify", "--algebra", "cfz", "--z", "2i"];
    assert_eq!(nambu(&c).stdout, nambu(&c).stdout);
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_nambu"))
        .args(["verify", "--algebra", "witt"])
        .env("NAMBU_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn untwist_beta_reports_nilpotency() {
    let out = nambu(&["untwist", "--algebra", "qvw", "--twist", "beta"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["report"]["untwistable"], false);
    assert_eq!(v["report"]["nilpotent_order"], 2);
}

#[test]
fn untwist_scaling_recovers_cfz() {
    let out = nambu(&[
        "untwist",
        "--algebra",
        "qvw",
        "--z",
        "2i",
        "--twist",
        "scaling",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["equals_cfz"], true);
}

#[test]
fn out_flag_writes_file_and_text_format_renders() {
    let dir = std::env::temp_dir().join(format!("nambu-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let out = nambu(&[
        "verify",
        "--algebra",
        "witt",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("algebra: witt"), "{text}");
    assert!(text.contains("violations:"), "{text}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn realize_passes_at_quarter() {
    let out = nambu(&[
        "realize",
        "--lambda",
        "1/4",
        "--window=-2..2",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["recovery"]["passed"], true);
}
