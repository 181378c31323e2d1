use std::fs;
use std::process::{Command, Output};

fn gft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gft"))
        .args(args)
        .env_remove("GFT_DEFAULT_ORDER")
        .output()
        .expect("gft runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("valid JSON")
}

fn real_parts(v: &serde_json::Value) -> Vec<f64> {
    v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c[0].as_f64().unwrap())
        .collect()
}

#[test]
fn kernel_examples() {
    let out = gft(&["kernel", "--sigma", "1", "--n", "1", "--order", "4"]);
    assert!(out.status.success());
    assert_eq!(real_parts(&json(&out)), vec![0.0, 1.0, 1.0, 1.0, 1.0]);

    let out = gft(&["kernel", "--sigma", "1", "--n", "0", "--order", "4"]);
    assert_eq!(real_parts(&json(&out)), vec![0.0, 1.0, 2.0, 3.0, 4.0]);

    let out = gft(&["kernel", "--sigma", "1", "--n", "0", "--order", "4", "--inverse"]);
    let inv = real_parts(&json(&out));
    for (got, want) in inv.iter().zip([0.0, 1.0, 0.5, 1.0 / 3.0, 0.25]) {
        assert!((got - want).abs() < 1e-15);
    }
}

#[test]
fn invalid_parameters_exit_two() {
    let out = gft(&["kernel", "--sigma", "0.5", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    assert_eq!(gft(&["verify", "--theorem", "99"]).status.code(), Some(2));
    assert_eq!(gft(&["verify", "--theorem", "7", "--sigma", "1"]).status.code(), Some(2));
    assert_eq!(gft(&["bounds", "--r", "0.5,,0.9"]).status.code(), Some(2));
    assert_eq!(gft(&["bounds", "--r", "1.5"]).status.code(), Some(2));
    assert_eq!(gft(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn default_order_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_gft"))
        .args(["kernel", "--sigma", "2", "--n", "1"])
        .env("GFT_DEFAULT_ORDER", "7")
        .output()
        .unwrap();
    assert_eq!(json(&out)["order"], 7);

    let out = gft(&["kernel", "--sigma", "2", "--n", "1"]);
    assert_eq!(json(&out)["order"], 64);
}

#[test]
fn apply_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.json");
    let mid = dir.path().join("g.json");
    let back = dir.path().join("h.json");
    let text = r#"{"order":4,"coeffs":[[0,0],[1,0],[0.5,-0.25],[0.1,0],[0,0.3]]}"#;
    fs::write(&input, text).unwrap();

    let args = |op: &str, from: &std::path::Path, to: &std::path::Path| {
        gft(&[
            "apply", "--op", op, "--sigma", "2.5", "--n", "2", "--in",
            from.to_str().unwrap(), "--out", to.to_str().unwrap(),
        ])
    };
    assert!(args("l", &input, &mid).status.success());
    assert!(args("L", &mid, &back).status.success());
    let original: serde_json::Value = serde_json::from_str(text).unwrap();
    let result: serde_json::Value = serde_json::from_str(&fs::read_to_string(&back).unwrap()).unwrap();
    for k in 0..=4 {
        for part in 0..2 {
            let a = original["coeffs"][k][part].as_f64().unwrap();
            let b = result["coeffs"][k][part].as_f64().unwrap();
            assert!((a - b).abs() < 1e-12, "k={k}");
        }
    }
}

#[test]
fn apply_differential_and_bernardi() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.json");
    fs::write(&input, r#"{"order":2,"coeffs":[[0,0],[1,0],[1,0]]}"#).unwrap();
    let path = input.to_str().unwrap();

    let out = gft(&["apply", "--op", "L", "--sigma", "1", "--n", "1", "--in", path]);
    assert_eq!(real_parts(&json(&out)), vec![0.0, 1.0, 2.0]);

    let out = gft(&["apply", "--op", "bernardi", "--c", "1", "--in", path]);
    let g = real_parts(&json(&out));
    assert!((g[2] - 2.0 / 3.0).abs() < 1e-15);

    assert_eq!(gft(&["apply", "--op", "bernardi", "--in", path]).status.code(), Some(2));
    fs::write(&input, r#"{"order":2,"coeffs":[[0,0],[2,0],[1,0]]}"#).unwrap();
    assert_eq!(gft(&["apply", "--op", "L", "--sigma", "1", "--in", path]).status.code(), Some(2));
}

#[test]
fn iterate_and_inverse() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.json");
    let out_path = dir.path().join("q.json");
    fs::write(&input, r#"{"order":3,"coeffs":[[1,0],[2,0],[2,0],[2,0]]}"#).unwrap();
    let out = gft(&[
        "iterate", "--sigma", "1", "--n", "1", "--in", input.to_str().unwrap(),
        "--out", out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let q: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let got = real_parts(&q);
    for (g, w) in got.iter().zip([1.0, 1.0, 2.0 / 3.0, 0.5]) {
        assert!((g - w).abs() < 1e-15);
    }
    let out = gft(&["iterate", "--sigma", "1", "--n", "1", "--inverse", "--in", out_path.to_str().unwrap()]);
    for (g, w) in real_parts(&json(&out)).iter().zip([1.0, 2.0, 2.0, 2.0]) {
        assert!((g - w).abs() < 1e-14);
    }
}

#[test]
fn bounds_csv() {
    let out = gft(&["bounds", "--sigma", "1", "--n", "0,1", "--beta", "0", "--r", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sigma,n,beta,r,m_lower,M_upper,growth_lower,growth_upper,covering_constant"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][8], "");
    let m: f64 = rows[1][4].parse().unwrap();
    let big_m: f64 = rows[1][5].parse().unwrap();
    let c: f64 = rows[1][8].parse().unwrap();
    assert!((m - 1.0 / 3.0).abs() < 1e-12 && (big_m - 3.0).abs() < 1e-12);
    assert!((c - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-10);
}

#[test]
fn extremal_kinds() {
    let up = real_parts(&json(&gft(&["extremal", "--sigma", "1", "--n", "1", "--order", "3"])));
    assert_eq!(up, vec![0.0, 1.0, 1.0, 2.0 / 3.0]);
    let lo = real_parts(&json(&gft(&[
        "extremal", "--sigma", "1", "--n", "1", "--order", "3", "--kind", "lower",
    ])));
    assert_eq!(lo, vec![0.0, 1.0, -1.0, 2.0 / 3.0]);
    let it = real_parts(&json(&gft(&[
        "extremal", "--sigma", "1", "--n", "1", "--order", "2", "--kind", "iterate-minus",
    ])));
    assert_eq!(it, vec![1.0, -1.0, 2.0 / 3.0]);
}

#[test]
fn verify_report_shape_and_skips() {
    let out = gft(&[
        "verify", "--theorem", "10", "--sigma", "1", "--n", "0,1", "--beta", "0", "--trials", "5",
    ]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["theorem"], "10");
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["trials"], 5);
    assert_eq!(report["lattice"].as_array().unwrap().len(), 2);
    let notes = report["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().starts_with("skipped sigma=1 n=0")));
}

#[test]
fn failing_suite_exits_one() {
    let out = gft(&[
        "verify", "--theorem", "6", "--sigma", "2", "--n", "1", "--beta", "0", "--trials", "20",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "fail");
}

#[test]
fn verify_all_is_an_array() {
    let out = gft(&[
        "verify", "--theorem", "all", "--sigma", "1", "--n", "1", "--beta", "0.25", "--trials", "3",
    ]);
    let reports = json(&out);
    let ids: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["theorem"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 13);
    assert!(ids.contains(&"salagean"));
    assert_eq!(out.status.code(), Some(0));
}
