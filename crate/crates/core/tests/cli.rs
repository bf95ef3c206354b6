use std::process::{Command, Output};

use nsg_core::bounds;

fn nsg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsg"))
        .args(args)
        .env_remove("NSG_MAX_GENUS_HARD_CAP")
        .output()
        .expect("run nsg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_csv_small() {
    let o = nsg(&["count", "--max-genus", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "g,lower_2Fg,n_g,upper_1p3x2gm3,catalan");
    assert_eq!(lines[4], "3,4,4,4,5");
    assert_eq!(lines[5], "4,6,7,7,14");
}

#[test]
fn count_genus_thirty_json() {
    let o = nsg(&["count", "--max-genus", "30", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<bounds::GenusRow> = serde_json::from_slice(&o.stdout).unwrap();
    let last = rows.last().unwrap();
    assert_eq!(
        (last.lower, last.count, last.upper),
        (Some(1664080), Some(5646773), Some(402653185))
    );
    // blank cells are omitted keys
    let raw: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(raw[0].get("lower_2Fg").is_none());
    assert!(raw[2].get("upper_1p3x2gm3").is_none());
}

#[test]
fn csv_round_trips_through_parser() {
    let o = nsg(&[
        "count",
        "--max-genus",
        "20",
        "--format",
        "csv",
        "--workers",
        "2",
    ]);
    let rows = bounds::read_csv(o.stdout.as_slice()).unwrap();
    let counts: Vec<u64> = rows.iter().map(|r| r.count.unwrap()).collect();
    assert_eq!(rows, bounds::genus_table(20, Some(&counts)).unwrap());
    assert_eq!(rows, bounds::genus_table(20, None).unwrap());
}

#[test]
fn verify_exit_codes() {
    let o = nsg(&["verify", "--suite", "lemma4", "--max-genus", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[PASS] lemma4 g=10"));
    let o = nsg(&["verify", "--suite", "lemma3", "--max-genus", "16"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard 15"));
    let o = nsg(&["verify", "--suite", "oracle", "--max-genus", "10"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn env_cap_lifts_guard() {
    let o = Command::new(env!("CARGO_BIN_EXE_nsg"))
        .args(["verify", "--suite", "lemma4", "--max-genus", "18"])
        .env("NSG_MAX_GENUS_HARD_CAP", "18")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn tree_dot_and_guard() {
    let o = nsg(&["tree", "--max-genus", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("digraph"));
    assert_eq!(text.lines().filter(|l| l.contains("[label=\"{")).count(), 8);
    assert_eq!(nsg(&["tree", "--max-genus", "9"]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_identical() {
    let a = nsg(&["count", "--max-genus", "22", "--workers", "1"]);
    let b = nsg(&["count", "--max-genus", "22", "--workers", "1"]);
    let c = nsg(&["count", "--max-genus", "22", "--workers", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}
