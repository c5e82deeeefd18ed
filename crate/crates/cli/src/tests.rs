use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::Value;

use crate::try_execute;

const IDENTITY: &str = r#"{"matrix":[[1,0,0],[0,1,0],[0,0,1]],"t":[0,0,0]}"#;
const QUARTER_SCREW: &str = r#"{"matrix":[[0,-1,0],[1,0,0],[0,0,1]],"t":[0,0,1]}"#;

fn scratch() -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let n = NEXT.fetch_add(1, Ordering::Relaxed);
    let dir = std::env::temp_dir().join(format!("motionforge-cli-{}-{n}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Runs a command with `--output` and `--report` redirected to fresh files.
struct Run {
    output: String,
    report: Option<Value>,
}

fn invoke(args: &[&str]) -> Run {
    let dir = scratch();
    let (out, rep) = (dir.join("out"), dir.join("report.json"));
    let mut argv = vec!["motionforge"];
    argv.extend(args);
    argv.extend(["--output", out.to_str().unwrap(), "--report", rep.to_str().unwrap()]);
    let code = try_execute(&argv).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    assert_eq!(code, 0, "{args:?}");
    let report = std::fs::read_to_string(&rep)
        .ok()
        .map(|s| serde_json::from_str(&s).unwrap());
    Run {
        output: std::fs::read_to_string(&out).unwrap(),
        report,
    }
}

fn failure(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["motionforge"];
    argv.extend(args);
    let e = try_execute(&argv).expect_err("command should fail");
    (e.exit_code, e.kind)
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn numbers(v: &Value) -> Vec<f64> {
    match v {
        Value::Array(a) => a.iter().flat_map(numbers).collect(),
        Value::Number(n) => vec![n.as_f64().unwrap()],
        _ => vec![],
    }
}

#[test]
fn convert_identity() {
    let run = invoke(&["convert", "--pose", IDENTITY]);
    let v: Value = serde_json::from_str(&run.output).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"study": [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]})
    );
    assert_eq!(run.report.unwrap()["ratio"], 0);
}

#[test]
fn convert_round_trip() {
    let study = invoke(&["convert", "--pose", QUARTER_SCREW]);
    assert!(study.report.unwrap()["ratio"].as_u64().unwrap() < 4);
    let back: Value = serde_json::from_str(&invoke(&["convert", "--pose", &study.output]).output).unwrap();
    let expected: Value = serde_json::from_str(QUARTER_SCREW).unwrap();
    for key in ["matrix", "t"] {
        for (a, b) in numbers(&back[key]).iter().zip(numbers(&expected[key])) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn cubic_reaches_end_pose() {
    let run = invoke(&[
        "interpolate",
        "--method",
        "cubic",
        "--start",
        IDENTITY,
        "--end",
        QUARTER_SCREW,
        "--samples",
        "5",
    ]);
    assert!(run
        .output
        .starts_with("t,r11,r12,r13,r21,r22,r23,r31,r32,r33,a1,a2,a3\n"));
    let data = rows(&run.output);
    assert_eq!(data.len(), 5);
    let expected = [1.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
    for (a, b) in data[4].iter().zip(expected) {
        assert!((a - b).abs() < 1e-9);
    }
    assert_eq!(run.report.unwrap()["provenance"]["kind"], "cubic");
}

#[test]
fn study_output_columns() {
    let path = scratch().join("s.csv");
    invoke(&[
        "interpolate",
        "--method",
        "helical",
        "--start",
        IDENTITY,
        "--end",
        QUARTER_SCREW,
        "--samples",
        "3",
        "--study-output",
        path.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("t,p0,p1,p2,p3,q0,q1,q2,q3\n"));
    let last = rows(&csv).pop().unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (a, b) in last[1..].iter().zip([s, 0.0, 0.0, s, 0.5 * s, 0.0, 0.0, -0.5 * s]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn darboux_transmission_is_a_sine_law() {
    let run = invoke(&[
        "transmission",
        "--method",
        "darboux",
        "--s-b",
        "0.5",
        "--start",
        IDENTITY,
        "--end",
        QUARTER_SCREW,
        "--samples",
        "50",
    ]);
    assert!(run.output.starts_with("t,omega,z\n"));
    assert_eq!(rows(&run.output).len(), 50);
    let report = run.report.unwrap();
    assert_eq!(report["law"]["kind"], "sine");
    assert!(report["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn cubic_transmission_is_a_tangent_law() {
    let run = invoke(&[
        "transmission",
        "--m",
        "0.9,0.1,-0.2,0.3",
        "--a-ess",
        "0.2",
        "--b-ess",
        "-0.4",
        "--start",
        IDENTITY,
        "--end",
        QUARTER_SCREW,
    ]);
    let report = run.report.unwrap();
    assert_eq!(report["law"]["kind"], "tangent");
    assert!(report["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn trajectory_report() {
    let run = invoke(&[
        "trajectory",
        "--start",
        IDENTITY,
        "--end",
        QUARTER_SCREW,
        "--point",
        "1,0.5,-0.25",
        "--samples",
        "4",
    ]);
    assert_eq!(rows(&run.output).len(), 4);
    let report = run.report.unwrap();
    assert_eq!(report["trajectory"]["degree"], 3);
    assert!(report["trajectory"]["circle"]["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn helical_trajectory_is_sampled() {
    let run = invoke(&[
        "trajectory",
        "--method",
        "helical",
        "--start",
        IDENTITY,
        "--end",
        QUARTER_SCREW,
        "--point",
        "1,0,0",
    ]);
    let last = rows(&run.output).pop().unwrap();
    assert!(last[1].abs() < 1e-12 && (last[2] - 1.0).abs() < 1e-12 && (last[3] - 1.0).abs() < 1e-12);
    assert_eq!(run.report.unwrap()["algebraic"], false);
}

#[test]
fn bezier_from_control_file() {
    let control = scratch().join("control.json");
    std::fs::write(
        &control,
        format!(
            r#"{{"poses": [{IDENTITY}, {{"matrix":[[0.8,-0.6,0],[0.6,0.8,0],[0,0,1]],"t":[1,0,0]}}, {QUARTER_SCREW}]}}"#
        ),
    )
    .unwrap();
    let run = invoke(&["bezier", "--control", control.to_str().unwrap(), "--samples", "3"]);
    let data = rows(&run.output);
    assert_eq!(data.len(), 3);
    assert!((data[2][12] - 1.0).abs() < 1e-9);
    assert_eq!(run.report.unwrap()["degree"], 2);
}

#[test]
fn bezier_offsets_must_match_poses() {
    let control = scratch().join("control.json");
    std::fs::write(
        &control,
        format!(r#"{{"poses": [{IDENTITY}, {QUARTER_SCREW}], "offsets": [[0,0,0,0,0,0]]}}"#),
    )
    .unwrap();
    assert_eq!(
        failure(&["bezier", "--control", control.to_str().unwrap()]),
        (2, "InvalidSpec".into())
    );
}

#[test]
fn fiber_points_share_one_image() {
    let run = invoke(&[
        "fiber",
        "--pose",
        QUARTER_SCREW,
        "--m",
        "0.5,-0.3,0.7,0.2",
        "--samples",
        "4",
    ]);
    let data = rows(&run.output);
    assert_eq!(data.len(), 4);
    for row in data {
        assert!(row.last().unwrap().abs() < 1e-9);
    }
    assert_eq!(run.report.unwrap()["basis"]["vectors"].as_array().unwrap().len(), 6);
}

#[test]
fn json_format() {
    let run = invoke(&[
        "interpolate",
        "--start",
        IDENTITY,
        "--end",
        QUARTER_SCREW,
        "--samples",
        "2",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&run.output).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["a3"], 1.0);
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        vec![
            "interpolate",
            "--start",
            IDENTITY,
            "--end",
            QUARTER_SCREW,
            "--samples",
            "1",
        ],
        vec![
            "convert",
            "--pose",
            r#"{"matrix":[[1,1,0],[0,1,0],[0,0,1]],"t":[0,0,0]}"#,
        ],
        vec![
            "interpolate",
            "--start",
            IDENTITY,
            "--end",
            QUARTER_SCREW,
            "--m",
            "0,0,0,0",
        ],
        vec![
            "interpolate",
            "--start",
            IDENTITY,
            "--end",
            QUARTER_SCREW,
            "--tolerance",
            "0",
        ],
        vec!["convert", "--pose", "/nonexistent/pose.json"],
        vec!["check", "--criterion", "12"],
        vec!["frobnicate"],
    ] {
        assert_eq!(failure(&args).0, 2, "{args:?}");
    }
}

#[test]
fn math_errors_exit_3() {
    let pole = failure(&[
        "interpolate",
        "--start",
        IDENTITY,
        "--end",
        QUARTER_SCREW,
        "--a-ess",
        "0",
        "--b-ess",
        "-3",
    ]);
    assert_eq!(pole, (3, "PoleInDomain".into()));
    let zero = failure(&[
        "interpolate",
        "--start",
        IDENTITY,
        "--end",
        QUARTER_SCREW,
        "--m",
        "0,1,0,0",
    ]);
    assert_eq!(zero, (3, "ZeroImage".into()));
}

#[test]
fn pole_can_be_allowed() {
    let run = invoke(&[
        "interpolate",
        "--start",
        IDENTITY,
        "--end",
        QUARTER_SCREW,
        "--a-ess",
        "0",
        "--b-ess",
        "-3",
        "--allow-pole",
        "--samples",
        "2",
    ]);
    assert_eq!(rows(&run.output).len(), 2);
}

#[test]
fn single_check_suite() {
    let run = invoke(&["check", "--criterion", "2"]);
    assert!(run.output.starts_with("criterion  2 PASS"));
    assert!(run.output.ends_with("1 of 1 suites passed\n"));
    assert_eq!(run.report.unwrap()["suites"][0]["id"], 2);
}

#[test]
fn outputs_are_deterministic() {
    let args = ["fiber", "--pose", QUARTER_SCREW, "--m", "1,2,3,4", "--seed", "7"];
    assert_eq!(invoke(&args).output, invoke(&args).output);
}
