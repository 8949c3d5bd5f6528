use std::path::PathBuf;
use std::process::{Command, Output};

fn ditent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ditent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ditent-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const SWEEP: &[&str] = &[
    "sweep",
    "--sites",
    "6",
    "--partition",
    "DABBCD",
    "--param",
    "J/h=0.5:1.5:0.25",
];

#[test]
fn sweep_csv_layout() {
    let text = stdout(&ditent(SWEEP));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    let header: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(header[..3], ["J/h", "E0", "gap"]);
    assert_eq!(
        header[header.len() - 7..],
        ["S_weak", "S_strong", "S_delta", "I_weak", "I_strong", "I_delta", "eta"]
    );
    assert!(lines[1..]
        .iter()
        .all(|l| l.split(',').count() == header.len()));
    assert!(lines[1].starts_with("0.5,"));
}

#[test]
fn sweep_is_reproducible() {
    assert_eq!(ditent(SWEEP).stdout, ditent(SWEEP).stdout);
}

#[test]
fn report_matches_sweep_row() {
    let report = stdout(&ditent(&[
        "report",
        "--sites",
        "6",
        "--partition",
        "DABBCD",
        "--J",
        "0.75",
    ]));
    let sweep = stdout(&ditent(SWEEP));
    let row = report.lines().nth(1).unwrap();
    let swept = sweep.lines().nth(2).unwrap();
    assert_eq!(swept.split_once(',').unwrap().1, row);
}

#[test]
fn paired_boundaries_and_records() {
    let text = stdout(&ditent(&[
        "sweep",
        "--sites",
        "6",
        "--partition",
        "DABBCD",
        "--bc",
        "both",
        "--param",
        "J=1:1:1",
    ]));
    let header = text.lines().next().unwrap();
    assert!(
        header.contains("E0_pbc") && header.contains("E0_obc") && header.contains("S_delta_obc")
    );

    let records = stdout(&ditent(&[
        "sweep",
        "--sites",
        "6",
        "--partition",
        "DABBCD",
        "--bc",
        "both",
        "--param",
        "J=1:1.5:0.5",
        "--format",
        "records",
    ]));
    let lines: Vec<serde_json::Value> = records
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1]["boundary"], "obc");
    assert!(lines[0]["values"]["S_delta"].as_f64().unwrap() > 0.0);
}

#[test]
fn two_dimensional_grid() {
    let text = stdout(&ditent(&[
        "sweep",
        "--model",
        "rydberg",
        "--sites",
        "6",
        "--partition",
        "DABBCD",
        "--param",
        "detuning/rabi=0:1:0.5",
        "--param",
        "rb-ratio=1:1.5:0.5",
    ]));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[1].starts_with("0.0,1.5,"));
    assert!(rows[2].starts_with("0.5,1.0,"));
}

#[test]
fn sample_then_ingest() {
    let counts = scratch("bell.txt");
    let out = ditent(&[
        "sample",
        "--sites",
        "6",
        "--J",
        "0.5",
        "--shots",
        "20000",
        "--seed",
        "4",
        "--out",
        counts.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&counts).unwrap();
    assert!(text.starts_with("# d=2 N=6\n"));
    let total: u64 = text
        .lines()
        .skip(1)
        .map(|l| l.split_once(',').unwrap().1.parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 20000);

    let report = stdout(&ditent(&[
        "ingest",
        counts.to_str().unwrap(),
        "--partition",
        "DABBCD",
    ]));
    let mut lines = report.lines();
    assert!(lines.next().unwrap().starts_with("shots,H,I_A"));
    assert!(lines.next().unwrap().starts_with("20000.0,"));

    let filtered = stdout(&ditent(&[
        "filter-sweep",
        "--counts",
        counts.to_str().unwrap(),
        "--partition",
        "DABBCD",
        "--quantity",
        "strong",
    ]));
    assert_eq!(filtered.lines().count(), 61);
    assert!(filtered.lines().last().unwrap().starts_with("1.0,0.0,"));
}

#[test]
fn malformed_counts_fail() {
    let counts = scratch("bad.txt");
    std::fs::write(&counts, "# d=2 N=2\n00,5\n02,10\n").unwrap();
    let out = ditent(&["ingest", counts.to_str().unwrap(), "--partition", "ABCD"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn rotation_and_critical_point() {
    let text = stdout(&ditent(&[
        "rotate-sweep",
        "--sites",
        "6",
        "--partition",
        "DABBCD",
        "--region",
        "AB",
        "--steps",
        "8",
    ]));
    assert_eq!(text.lines().count(), 10);
    assert_eq!(text.lines().next().unwrap(), "phi,I,S");

    let text = stdout(&ditent(&[
        "critical-point",
        "--sites",
        "8",
        "--partition",
        "DDABBBCD",
        "--param",
        "J/h=0.5:1.5:0.1",
    ]));
    assert!(text.contains("S_delta peak at 1.0 ± 0.1"), "{text}");
}

#[test]
fn usage_errors() {
    let bad_param = ditent(&[
        "sweep",
        "--sites",
        "6",
        "--partition",
        "DABBCD",
        "--param",
        "lambda=0:1:0.5",
    ]);
    assert_eq!(bad_param.status.code(), Some(2));
    let preset = ditent(&[
        "report",
        "--sites",
        "6",
        "--partition",
        "DABBCD",
        "--lab-defaults",
    ]);
    assert_eq!(preset.status.code(), Some(2));
    let missing = ditent(&["report", "--partition", "DABBCD"]);
    assert!(!missing.status.success());
}

#[test]
fn lab_defaults_preset() {
    let text = stdout(&ditent(&[
        "report",
        "--model",
        "rydberg",
        "--lab-defaults",
        "--rb-ratio",
        "1.5",
        "--sites",
        "6",
        "--partition",
        "DABBCD",
    ]));
    let explicit = stdout(&ditent(&[
        "report",
        "--model",
        "rydberg",
        "--rabi",
        "1",
        "--detuning",
        "3.5",
        "--rb-ratio",
        "1.5",
        "--sites",
        "6",
        "--partition",
        "DABBCD",
    ]));
    assert_eq!(text, explicit);
}
