use std::io::Write;
use std::process::{Command, Output};

fn polyfisher(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyfisher"))
        .args(args)
        .env_remove("POLYFISHER_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn table_charlier_sweep() {
    let out = polyfisher(&["table", "charlier", "--a", "1:5:3", "--n", "0:2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("family,params,n,closed,numeric,rel_err,converged"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0][1], "a=1");
    assert_eq!(rows[0][2], "0");
    assert_eq!(rows[0][3].parse::<f64>().unwrap(), 1.0);
    let keys: Vec<_> = rows.iter().map(|r| (r[1].clone(), r[2].clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn table_krawtchouk_binomial_case() {
    let out = polyfisher(&["table", "--family", "krawtchouk", "--p", "0.5", "--N", "10", "--n", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][3].parse::<f64>().unwrap(), 40.0);
    assert_eq!(rows[0][6], "true");
}

#[test]
fn table_json() {
    let out = polyfisher(&["table", "meixner", "--beta", "1", "--c", "0.5", "--n", "0:1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    // (2n^2 + (2n+1) beta) / (c (c-1)^2) at n = 1
    assert!((rows[1]["closed"].as_f64().unwrap() - 40.0).abs() < 1e-12);
}

#[test]
fn table_errors() {
    assert_eq!(polyfisher(&["table", "charlier", "--a", "1", "--n", "3:1"]).status.code(), Some(2));
    assert_eq!(polyfisher(&["table", "charlier", "--n", "0"]).status.code(), Some(2));
    assert_eq!(polyfisher(&["table", "charlier", "--a", "-1"]).status.code(), Some(2));
    assert_eq!(polyfisher(&["table", "bessel", "--a", "1"]).status.code(), Some(2));
    assert_eq!(
        polyfisher(&["table", "krawtchouk", "--p", "0.5", "--N", "4", "--n", "0:5"]).status.code(),
        Some(2)
    );
}

#[test]
fn table_not_converged_exits_one() {
    let out = polyfisher(&["table", "charlier", "--a", "2", "--n", "3", "--max-terms", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(csv_rows(&stdout(&out))[0][6], "false");
    let out = polyfisher(&["table", "krawtchouk", "--p", "0.3", "--N", "4", "--n", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn table_output_is_byte_stable_and_can_go_to_a_file() {
    let args = ["table", "meixner-pollaczek", "--lambda", "0.5:2:2", "--phi", "1", "--n", "0:3"];
    let a = polyfisher(&args);
    let b = polyfisher(&args);
    assert_eq!(a.stdout, b.stdout);
    let dir = std::env::temp_dir().join(format!("polyfisher-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let c = polyfisher(&with_out);
    assert_eq!(c.status.code(), Some(0));
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn summand_charlier_nonnegative() {
    let out = polyfisher(&["summand", "charlier", "--a", "2", "--n", "1", "--x", "0:20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("x,summand,rho_n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r[1].parse::<f64>().unwrap() >= 0.0));
}

#[test]
fn summand_krawtchouk_sums_to_closed_form() {
    let out = polyfisher(&["summand", "krawtchouk", "--p", "0.5", "--N", "5", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 6);
    let total: f64 = rows.iter().map(|r| r[1].parse::<f64>().unwrap()).sum();
    // (2 - 3 N) / (p (p - 1)) with N = 5
    assert!((total - 52.0).abs() < 1e-12, "{total}");
    let mass: f64 = rows.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
    assert!((mass - 1.0).abs() < 1e-14);
}

#[test]
fn summand_degree_zero_recovers_poisson_information() {
    let out = polyfisher(&["summand", "charlier", "--a", "3", "--n", "0", "--x", "0:80"]);
    let total: f64 = csv_rows(&stdout(&out)).iter().map(|r| r[1].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0 / 3.0).abs() < 1e-13);
}

#[test]
fn summand_meixner_pollaczek_grid() {
    let out = polyfisher(&["summand", "meixner-pollaczek", "--lambda", "1", "--phi", "1.2", "--n", "2", "--x", "-40:40:4001"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 4001);
    assert_eq!(rows[0][0], "-40");
    // trapezoid on a fine grid is good enough to see the closed form
    let total: f64 = rows.iter().map(|r| r[1].parse::<f64>().unwrap()).sum::<f64>() * 0.02;
    let expected = 2.0 * (4.0 + 5.0) / 1.2f64.sin().powi(2);
    assert!((total - expected).abs() / expected < 1e-6, "{total} {expected}");
}

#[test]
fn summand_errors() {
    for args in [
        &["summand", "charlier", "--a", "2", "--n", "1", "--x", "5:1"][..],
        &["summand", "charlier", "--a", "2", "--n", "1", "--x", "-1:3"],
        &["summand", "charlier", "--a", "2", "--n", "1"],
        &["summand", "krawtchouk", "--p", "0.5", "--N", "5", "--n", "1", "--x", "0:6"],
        &["summand", "krawtchouk", "--p", "0.5", "--N", "5", "--n", "5"],
        &["summand", "meixner-pollaczek", "--lambda", "1", "--phi", "1", "--n", "1", "--x", "1:0:0"],
        &["summand", "charlier", "--a", "1:2:2", "--n", "1", "--x", "0:3"],
    ] {
        assert_eq!(polyfisher(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_default_run_passes_and_is_deterministic() {
    let a = polyfisher(&["verify"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let text = stdout(&a);
    let lines: Vec<_> = text.lines().collect();
    assert!(lines.len() >= 400, "{}", lines.len());
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true, "{line}");
        assert!(v["m"].is_null() || v["m"].is_u64());
        assert!(v["params"].is_object());
    }
    let b = polyfisher(&["verify"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_tight_tolerance_fails() {
    let out = polyfisher(&["verify", "--tol-discrete", "1e-15"]);
    assert_eq!(out.status.code(), Some(1));
    let failed = stdout(&out)
        .lines()
        .filter(|l| l.contains("\"passed\":false"))
        .count();
    assert!(failed > 0);
}

#[test]
fn verify_config_file_and_env() {
    assert_eq!(polyfisher(&["verify", "--config", "/nonexistent/polyfisher.toml"]).status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("polyfisher-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::File::create(&bad).unwrap().write_all(b"no_such_key = 1\n").unwrap();
    assert_eq!(polyfisher(&["verify", "--config", bad.to_str().unwrap()]).status.code(), Some(2));

    let tight = dir.join("tight.toml");
    std::fs::File::create(&tight)
        .unwrap()
        .write_all(b"# quadrature only\ntol_quad = 1e-16\n")
        .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_polyfisher"))
        .arg("verify")
        .env("POLYFISHER_CONFIG", &tight)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().filter(|l| l.contains("\"passed\":false")) {
        assert!(line.contains("meixner-pollaczek"), "{line}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn help_exits_zero() {
    let out = polyfisher(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("table"));
}
