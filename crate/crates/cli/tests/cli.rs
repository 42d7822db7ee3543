use std::path::Path;
use std::process::{Command, Output};

fn polycurve(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycurve"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn verify_r_circle_reports_small_triharmonic_residual() {
    let dir = tempfile::tempdir().unwrap();
    let out = polycurve(dir.path(), &["verify", "--family", "r-circle", "--r", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ode = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "residual_triharmonic_ode")
        .unwrap();
    assert!(ode["max_norm"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn classify_single_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let out = polycurve(dir.path(), &["classify", "--K", "1", "--r", "2", "--k", "1", "--tau", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let row = rdr.records().next().unwrap().unwrap();
    let idx = headers.iter().position(|h| h == "satisfied").unwrap();
    assert_eq!(&row[idx], "true");
}

#[test]
fn classify_appends_columns_to_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("in.csv"), "K,r,k,tau,label\n1,2,1,0,circle\n-1,2,1,1,hyperbolic\n").unwrap();
    let out = polycurve(dir.path(), &["classify", "--input", "in.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "K,r,k,tau,label,satisfied,lhs,rhs");
    assert!(lines[1].starts_with("1,2,1,0,circle,true"));
    assert!(lines[2].starts_with("-1,2,1,1,hyperbolic,false"));
}

#[test]
fn malformed_curve_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"type\": \"ansatz\", \"terms\": [").unwrap();
    let out = polycurve(dir.path(), &["residual", "--curve", "bad.json", "--out", "report.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("report.json").exists());
    assert!(!out.stderr.is_empty());
}

#[test]
fn curve_off_the_sphere_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"type":"ansatz","terms":[{"a":1,"e_cos":[0.5,0,0],"e_sin":[0,0.5,0]}],"e0":[0,0,0]}"#;
    std::fs::write(dir.path().join("c.json"), text).unwrap();
    let out = polycurve(dir.path(), &["residual", "--curve", "c.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = polycurve(dir.path(), &["residual", "--curve", "absent.json"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.json"));
}

#[test]
fn empty_grid_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = polycurve(dir.path(), &["sweep", "--a-count", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_lagrangian_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        polycurve(dir.path(), &["curve", "--family", "r-circle", "--r", "2", "--out", "c.json"]).status.code(),
        Some(0)
    );
    let out = polycurve(
        dir.path(),
        &["residual", "--curve", "c.json", "--kind", "euler-lagrange", "--lagrangian", "quintic"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_verification_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = polycurve(dir.path(), &["verify", "--family", "r-circle", "--r", "3", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn single_frequency_sweep_has_minima_at_the_roots() {
    let dir = tempfile::tempdir().unwrap();
    let out = polycurve(dir.path(), &["sweep", "--family", "single-freq", "--r", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut minima = Vec::new();
    let mut previous = f64::NEG_INFINITY;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let a: f64 = rec[0].parse().unwrap();
        assert!(a > previous, "rows sorted by grid coordinate");
        previous = a;
        if &rec[6] == "true" {
            minima.push(a);
        }
    }
    assert_eq!(minima, vec![1.0, 3.0]);
}

#[test]
fn two_frequency_sweep_vanishes_only_on_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = polycurve(
        dir.path(),
        &[
            "sweep", "--family", "two-freq", "--a-min", "1.1", "--a-max", "1.9", "--a-count", "9", "--b-min", "0.1",
            "--b-max", "0.9", "--b-count", "9",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut on_line = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        if &rec[3] != "true" {
            continue;
        }
        let a: f64 = rec[0].parse().unwrap();
        let b: f64 = rec[1].parse().unwrap();
        let res: f64 = rec[4].parse().unwrap();
        if (a + b - 2.0).abs() < 1e-9 {
            on_line += 1;
            assert!(res <= 1e-8, "({a}, {b}): {res}");
        } else {
            assert!(res > 1e-3, "({a}, {b}): {res}");
        }
    }
    assert_eq!(on_line, 9);
}

#[test]
fn minimize_writes_trace_and_csv_projection() {
    let dir = tempfile::tempdir().unwrap();
    let out = polycurve(
        dir.path(),
        &["minimize", "--r", "2", "--N", "64", "--mode", "restricted", "--alpha-sq", "0.3", "--out", "trace.json"],
    );
    assert_eq!(out.status.code(), Some(0));
    let trace: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("trace.json")).unwrap()).unwrap();
    assert!((trace["final_alpha_sq"].as_f64().unwrap() - 0.5).abs() < 0.01);
    assert_eq!(trace["final_curve"]["type"], "discrete");
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(csv.starts_with("step,energy\n0,"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["solve", "--system", "triharmonic-two-freq", "--seed-stride", "50"],
        &["minimize", "--mode", "full", "--r", "2", "--N", "32", "--max-iters", "5", "--seed", "9"],
        &["sweep", "--family", "two-freq", "--a-count", "5", "--b-count", "5"],
    ];
    for args in runs {
        let first = polycurve(dir.path(), args);
        let second = Command::new(env!("CARGO_BIN_EXE_polycurve"))
            .args(args)
            .current_dir(dir.path())
            .env("POLYCURVE_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn run_config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.toml"), "command = \"probe\"\ncolour = \"red\"\n").unwrap();
    std::fs::write(dir.path().join("b.toml"), "command = \"probe\"\n[params]\nalpha = 1.0\nbeta = 2.0\ngamma = 3.0\n").unwrap();
    for cfg in ["a.toml", "b.toml"] {
        assert_eq!(polycurve(dir.path(), &["run", cfg]).status.code(), Some(2), "{cfg}");
    }
}

#[test]
fn run_config_matches_command_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "command = \"verify\"\noutput = \"from_config.json\"\n[params]\nfamily = \"r-circle\"\nr = 4\n",
    )
    .unwrap();
    assert_eq!(polycurve(dir.path(), &["run", "run.toml"]).status.code(), Some(0));
    let cli = polycurve(
        dir.path(),
        &["verify", "--family", "r-circle", "--r", "4", "--out", "from_cli.json"],
    );
    assert_eq!(cli.status.code(), Some(0));
    let a = std::fs::read(dir.path().join("from_config.json")).unwrap();
    let b = std::fs::read(dir.path().join("from_cli.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn invalid_thread_count_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_polycurve"))
        .args(["probe", "--alpha", "1", "--beta", "2"])
        .current_dir(dir.path())
        .env("POLYCURVE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
