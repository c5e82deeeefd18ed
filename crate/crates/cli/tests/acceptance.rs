//! One line per acceptance criterion, with the measured values behind each.

use std::path::Path;
use std::process::{Command, Output};

use motionforge::verify::{run_criterion, Check, CriterionReport, DEFAULT_SEED};

const BIN: &str = env!("CARGO_BIN_EXE_motionforge");
const IDENTITY: &str = r#"{"matrix":[[1,0,0],[0,1,0],[0,0,1]],"t":[0,0,0]}"#;
const QUARTER_SCREW: &str = r#"{"matrix":[[0,-1,0],[1,0,0],[0,0,1]],"t":[0,0,1]}"#;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("MOTIONFORGE_TOL")
        .output()
        .expect("binary runs")
}

/// Every documented example command, with the files it writes.
fn documented_examples() -> Vec<(Vec<&'static str>, Vec<&'static str>)> {
    vec![
        (vec!["convert", "--pose", IDENTITY], vec![]),
        (
            vec![
                "interpolate",
                "--method",
                "cubic",
                "--start",
                IDENTITY,
                "--end",
                QUARTER_SCREW,
                "--samples",
                "5",
                "--output",
                "poses.csv",
                "--study-output",
                "study.csv",
                "--report",
                "report.json",
            ],
            vec!["poses.csv", "study.csv", "report.json"],
        ),
        (
            vec![
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
                "101",
                "--output",
                "omega.csv",
                "--report",
                "law.json",
            ],
            vec!["omega.csv", "law.json"],
        ),
        (
            vec![
                "trajectory",
                "--start",
                IDENTITY,
                "--end",
                QUARTER_SCREW,
                "--point",
                "1,0.5,0",
                "--samples",
                "21",
                "--output",
                "path.csv",
                "--report",
                "path.json",
            ],
            vec!["path.csv", "path.json"],
        ),
        (vec!["check", "--report", "check.json"], vec!["check.json"]),
    ]
}

fn snapshot(args: &[&str], files: &[&str], dir: &Path) -> (Output, Vec<Vec<u8>>) {
    let out = run(args, dir);
    let contents = files
        .iter()
        .map(|f| std::fs::read(dir.join(f)).unwrap_or_default())
        .collect();
    (out, contents)
}

fn criterion_11() -> CriterionReport {
    let root = std::env::temp_dir().join(format!("motionforge-acceptance-{}", std::process::id()));
    let (a, b) = (root.join("a"), root.join("b"));
    std::fs::create_dir_all(&a).unwrap();
    std::fs::create_dir_all(&b).unwrap();

    let check = run(&["check"], &a);
    let mut differing = 0;
    for (args, files) in documented_examples() {
        let (out_a, files_a) = snapshot(&args, &files, &a);
        let (out_b, files_b) = snapshot(&args, &files, &b);
        if out_a.stdout != out_b.stdout || out_a.status != out_b.status || files_a != files_b {
            differing += 1;
        }
    }
    let _ = std::fs::remove_dir_all(&root);
    CriterionReport {
        id: 11,
        title: "command line",
        checks: vec![
            Check::count(
                "check exits with a non-zero status",
                usize::from(!check.status.success()),
            ),
            Check::count("documented commands with differing output across two runs", differing),
        ],
    }
}

fn summary(r: &CriterionReport) -> String {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    let failed: Vec<&str> = r
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.label.as_str())
        .collect();
    if failed.is_empty() {
        format!("acceptance {:>2}: {status} {}", r.id, r.title)
    } else {
        format!(
            "acceptance {:>2}: {status} {} [failed: {}]",
            r.id,
            r.title,
            failed.join("; ")
        )
    }
}

#[test]
fn acceptance() {
    let mut reports: Vec<CriterionReport> = (1..=10).filter_map(|id| run_criterion(id, DEFAULT_SEED)).collect();
    reports.push(criterion_11());
    for r in &reports {
        println!("{}", summary(r));
    }
    for r in reports.iter().filter(|r| !r.passed()) {
        println!("\n{r}");
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
    assert!(failed.is_empty(), "criteria not met: {failed:?}");
}
