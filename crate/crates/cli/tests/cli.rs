use std::path::PathBuf;
use std::process::{Command, Output};

fn network(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../networks").join(name)
}

fn crnkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crnkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(name: &str) -> String {
    network(name).to_str().unwrap().to_owned()
}

#[test]
fn parse_prints_tables_and_matrices() {
    let o = crnkit(&["parse", &path("abcd.crn")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("species (4): A B C D"));
    assert!(out.contains("complexes (2):"));
    assert!(out.contains("reactions (1, 2 directed, 1 reversible):"));
    for m in ["A (4 x 2):", "B (2 x 4):", "S (4 x 2):", "E (2 x 2):"] {
        assert!(out.contains(m), "{m} missing");
    }
}

#[test]
fn missing_file_is_an_input_error() {
    let o = crnkit(&["parse", "/no/such/file.crn"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot read"));
}

#[test]
fn syntax_error_cites_its_line() {
    let dir = std::env::temp_dir().join(format!("crnkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.crn");
    std::fs::write(&file, "R1: A -> B ; kf=1\n# comment\nR2: B => C ; kf=1\n").unwrap();
    let o = crnkit(&["parse", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn feasibility_verdicts_and_exit_codes() {
    let o = crnkit(&["feasibility", &path("abcd.crn"), "--nu", "+"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("FEASIBLE"));
    assert!(stdout(&o).contains("gamma = "));

    let o = crnkit(&["feasibility", &path("triangle.crn"), "--nu", "+,+,+"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("LOOP"));
    assert!(stdout(&o).contains("z = "));

    let o = crnkit(&["feasibility", &path("triangle.crn"), "--nu", "0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gamma = (0, 0, 0)"));

    let o = crnkit(&["feasibility", &path("triangle.crn"), "--nu", "+,+"]);
    assert_eq!(o.status.code(), Some(2));

    let o = crnkit(&["feasibility", &path("chain.crn"), "--nu", "-,+"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn injectivity_flags_and_exit_codes() {
    let o = crnkit(&["injectivity", &path("abcd.crn")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["sig condition: holds", "span condition: true", "weakly reversible: true", "deficiency: 0"] {
        assert!(out.contains(line), "{line} missing from {out}");
    }

    let o = crnkit(&["injectivity", &path("chain.crn")]);
    assert!(stdout(&o).contains("weakly reversible: false"));
    let expected = if stdout(&o).contains("sig condition: holds") { 0 } else { 4 };
    assert_eq!(o.status.code(), Some(expected));

    let o = crnkit(&["injectivity", &path("autocatalytic.crn")]);
    assert_eq!(o.status.code(), Some(4));

    let o = crnkit(&["injectivity", &path("chain15.crn")]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("capacity"));
}

#[test]
fn simulate_writes_csv_with_derivatives() {
    let o = crnkit(&["simulate", &path("abcd.crn"), "--x0", "1,1,1,1", "--kappa", "1,0.5", "--t-end", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,x_1,x_2,x_3,x_4,dx_1,dx_2,dx_3,dx_4"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[5] + 0.5).abs() < 1e-12);
    assert!(stderr(&o).contains("final state"));
}

#[test]
fn simulate_flow_reactor_reaches_steady_state() {
    let o = crnkit(&[
        "simulate", &path("abcd.crn"), "--x0", "1,1,1,1", "--t-end", "200", "--feed", "1,1,1,1", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let residual = v["dynamics"]["final_residual"].as_f64().unwrap();
    assert!(residual < 1e-8, "{residual}");
    assert_eq!(v["network"]["r_directed"], 3);
}

#[test]
fn simulate_rejects_nonpositive_state() {
    let o = crnkit(&["simulate", &path("abcd.crn"), "--x0", "1,0,1,1", "--t-end", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn multistart_on_detailed_balance_finds_one_cluster() {
    let o = crnkit(&["multistart", &path("abcd.crn"), "--x0", "2,2,0.5,0.5", "--trials", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max clusters per class: 1"));

    let o = crnkit(&["multistart", &path("abcd.crn"), "--x0", "2,2,0.5,0.5", "--trials", "1"]);
    let out = stdout(&o);
    assert!(out.contains("max clusters per class: 1") || out.contains("max clusters per class: 0"));
}

#[test]
fn fixed_seed_gives_identical_bytes() {
    let args = [
        "multistart", &path("triangle.crn"), "--x0", "1,2,3", "--trials", "10", "--kappa-draws", "3", "--seed", "9",
        "--json",
    ];
    let a = crnkit(&args);
    let b = crnkit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("crnkit-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("report.json");
    let o = crnkit(&["injectivity", &path("abcd.crn"), "--json", "--out", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["injectivity"]["sig_condition"]["holds"], true);
    assert_eq!(v["matrices"]["A"][0][0], "-1");
}

#[test]
fn json_reports_match_schema() {
    let schema_path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../report.schema.json");
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let runs: Vec<Vec<String>> = vec![
        vec!["parse".into(), path("abcd.crn")],
        vec!["feasibility".into(), path("abcd.crn"), "--nu".into(), "-".into()],
        vec!["feasibility".into(), path("triangle.crn"), "--nu".into(), "+,+,+".into()],
        vec!["injectivity".into(), path("abcd.crn")],
        vec!["injectivity".into(), path("autocatalytic.crn")],
        vec!["simulate".into(), path("triangle.crn"), "--x0".into(), "1,2,3".into(), "--t-end".into(), "5".into()],
        vec![
            "simulate".into(), path("chain.crn"), "--x0".into(), "1,1,1".into(), "--feed".into(), "1,2,3".into(),
            "--t-end".into(), "5".into(),
        ],
        vec!["multistart".into(), path("abcd.crn"), "--x0".into(), "1,2,3,4".into(), "--trials".into(), "5".into()],
    ];
    for mut args in runs {
        args.push("--json".into());
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = crnkit(&refs);
        assert!(matches!(o.status.code(), Some(0 | 3 | 4)), "{args:?}: {}", stderr(&o));
        let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| format!("{} at {}", e, e.instance_path)).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:#?}");
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let schema_path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../report.schema.json");
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let o = crnkit(&["parse", &path("abcd.crn"), "--json"]);
    let good: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(validator.is_valid(&good));
    let mut bad = good.clone();
    bad["matrices"]["A"][0][0] = serde_json::json!("1.5");
    assert!(!validator.is_valid(&bad));
    let mut bad = good;
    bad["extra"] = serde_json::json!(1);
    assert!(!validator.is_valid(&bad));
}

#[test]
fn tighter_tolerances_reach_a_sharper_steady_state() {
    let file = path("triangle.crn");
    let run = |extra: &[&str]| {
        let mut args = vec!["simulate", &file, "--x0", "1,2,3", "--feed", "1,1,2", "--t-end", "300", "--json"];
        args.extend_from_slice(extra);
        let o = crnkit(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["dynamics"]["final_residual"].as_f64().unwrap()
    };
    assert!(run(&["--rtol", "1e-12", "--atol", "1e-14"]) <= 1e-10);
    let o = crnkit(&["simulate", &path("triangle.crn"), "--x0", "1,2,3", "--t-end", "1", "--rtol", "0"]);
    assert_eq!(o.status.code(), Some(2));
}
