//! End-to-end tests of the binary: output schemas, exit codes, and
//! byte-identical output across thread counts.

use std::process::{Command, Output};

fn whittaker(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whittaker"))
        .args(args)
        .env_remove("WHITTAKER_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn padic_example() {
    let out = whittaker(&[
        "eval",
        "padic",
        "--lambda",
        "[1,0]",
        "--alpha",
        r#"["1/2","3"]"#,
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["q_exponent"], "-1/2");
    assert_eq!(v["value"], "7/2");
}

#[test]
fn spherical_matches_bessel() {
    let out = whittaker(&[
        "eval",
        "spherical-c",
        "--n",
        "2",
        "--nu",
        "[0,0]",
        "--a",
        "[1]",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let re = v["value"]["re"].as_f64().unwrap();
    // K_0(4 pi)
    assert!((re - 1.2212054943616304e-6).abs() < 1e-14);
}

#[test]
fn malformed_weight_exits_2() {
    let out = whittaker(&[
        "eval",
        "padic",
        "--lambda",
        "[0,1]",
        "--alpha",
        r#"["1","2"]"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["error"]["kind"], "schema");
}

#[test]
fn pole_exits_3() {
    // s at a pole of Gamma_R(s + kappa).
    let out = whittaker(&[
        "eval", "asai-l", "--n", "2", "--nu", "[0,0]", "--kappa", "0", "--s", "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["error"]["kind"], "pole");
}

#[test]
fn params_echo_round_trips() {
    let out = whittaker(&[
        "eval",
        "minimal-c",
        "--n",
        "2",
        "--nu",
        "[[0.1,0.0],[-0.1,0.05]]",
        "--kappa",
        "1",
        "--ell",
        "[1,0]",
        "--a",
        "[0.75]",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let echo = &v["params_echo"];
    assert_eq!(echo["nu"][1]["im"].as_f64().unwrap(), 0.05);
    assert_eq!(echo["a"][0].as_f64().unwrap(), 0.75);
    // Re-evaluating from the echoed parameters reproduces the value bit for bit.
    let nu_echo = serde_json::to_string(&echo["nu"]).unwrap();
    let out2 = whittaker(&[
        "eval",
        "minimal-c",
        "--n",
        "2",
        "--nu",
        &nu_echo,
        "--kappa",
        "1",
        "--ell",
        "[1,0]",
        "--a",
        "[0.75]",
    ]);
    let v2: serde_json::Value = serde_json::from_str(stdout(&out2).trim()).unwrap();
    assert_eq!(v["value"], v2["value"]);
}

#[test]
fn thread_count_output_identical() {
    let run = |threads: &str| {
        let out = whittaker(&[
            "eval",
            "minimal-c",
            "--n",
            "3",
            "--nu",
            "[[0.1,0],[0,0.05],[-0.1,0]]",
            "--kappa",
            "1",
            "--ell",
            "[0,1,0]",
            "--a",
            "[1.0,0.8]",
            "--threads",
            threads,
        ]);
        assert!(out.status.success(), "{}", stdout(&out));
        stdout(&out)
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn env_threads_fallback() {
    let out = Command::new(env!("CARGO_BIN_EXE_whittaker"))
        .args([
            "eval",
            "spherical-c",
            "--n",
            "2",
            "--nu",
            "[0.2,0]",
            "--a",
            "[0.9]",
        ])
        .env("WHITTAKER_THREADS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn table_monotone_for_real_nu() {
    let out = whittaker(&[
        "table",
        "spherical-c",
        "--nu",
        "[0,0]",
        "--from",
        "0.1",
        "--to",
        "10",
        "--steps",
        "50",
        "--log",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "a,value_re,value_im");
    let values: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 50);
    for w in values.windows(2) {
        assert!(w[1] < w[0], "K-type decay must be monotone: {w:?}");
    }
}

#[test]
fn table_empty_grid_header_only() {
    let out = whittaker(&["table", "spherical-c", "--nu", "[0,0]", "--steps", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "a,value_re,value_im");
}

#[test]
fn verify_shintani_passes() {
    let out = whittaker(&["verify", "shintani"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("ALL PASS"));
    assert!(!text.contains("FAIL ["));
}

#[test]
fn verify_unknown_suite_exits_2() {
    let out = whittaker(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_round_trip() {
    let dir = std::env::temp_dir().join("whittaker-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(
        &path,
        r#"{"tolerance": 1e-6, "mb_step": 0.1, "mb_height": 24.0, "quad_window": 30.0, "threads": 2, "output_format": "csv"}"#,
    )
    .unwrap();
    let out = whittaker(&[
        "eval",
        "spherical-c",
        "--n",
        "2",
        "--nu",
        "[0,0]",
        "--a",
        "[1]",
        "--config",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("value_re,value_im"), "{text}");
}
