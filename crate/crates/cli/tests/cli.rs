use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramsey-forge")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn p4_game_against_red_greedy_meets_the_bound() {
    let o = forge(&["play", "--builder", "p4", "--painter", "red-greedy", "--n", "10"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("outcome=blue_win"));
    assert!(stdout(&o).contains("bound=13"));
}

#[test]
fn pk_game_with_random_painter() {
    let o = forge(&["play", "--builder", "pk", "--k", "5", "--n", "20", "--painter", "random", "--seed", "9"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn invalid_parameters_are_usage_errors() {
    assert_eq!(code(&forge(&["play", "--builder", "p4", "--n", "9"])), 64);
    assert_eq!(code(&forge(&["play", "--builder", "pk", "--k", "4", "--n", "20"])), 64);
    assert_eq!(code(&forge(&["play", "--builder", "p4"])), 64);
    assert_eq!(code(&forge(&["frobnicate"])), 64);
    assert_eq!(code(&forge(&["--help"])), 0);
}

#[test]
fn solve_small_values() {
    let o = forge(&["solve", "--k", "3", "--n", "3"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "3".to_string()));
    let o = forge(&["solve", "--k", "4", "--n", "4"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "5".to_string()));
}

#[test]
fn solve_writes_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = forge(&["solve", "--k", "3", "--n", "5", "--out", path(&out)]);
    assert_eq!(code(&o), 0);
    let rec: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rec["value"]["exact"], 5);
    assert!(rec["nodes_expanded"].as_u64().unwrap() > 0);
}

#[test]
fn solve_node_limit_gives_a_bracket() {
    let o = forge(&["solve", "--k", "3", "--n", "5", "--max-nodes", "1"]);
    assert_eq!(code(&o), 3);
    assert_eq!(stdout(&o).trim(), "bracket [5, 9]");
    assert_eq!(code(&forge(&["solve", "--k", "3", "--n", "5", "--budget", "4"])), 64);
}

#[test]
fn solve_round_budget_gives_a_bracket() {
    let o = forge(&["solve", "--k", "4", "--n", "9", "--budget", "10"]);
    assert_eq!(code(&o), 3);
    assert_eq!(stdout(&o).trim(), "bracket [11, 19]");
}

#[test]
fn scripted_play_replays_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let o = forge(&["play", "--builder", "p4", "--n", "12", "--painter", "script", "--script", "0110100", "--out", path(&t)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = forge(&["replay", "--in", path(&t)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let last = stdout(&r).lines().last().unwrap().to_string();
    assert!(stdout(&o).starts_with(&last), "{last}");
    assert_eq!(last, "outcome=blue_win rounds=16");
    // the same script yields the same transcript byte for byte
    let t2 = dir.path().join("t2.json");
    forge(&["play", "--builder", "p4", "--n", "12", "--painter", "script", "--script", "0110100", "--out", path(&t2)]);
    assert_eq!(fs::read(&t).unwrap(), fs::read(&t2).unwrap());
}

#[test]
fn replay_rejects_a_flipped_forced_color() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    assert_eq!(code(&forge(&["play", "--builder", "p4", "--n", "10", "--out", path(&t)])), 0);
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&t).unwrap()).unwrap();
    let mv = &mut v["moves"][2];
    assert_eq!((mv["r"].as_u64(), mv["forced"].as_bool(), mv["c"].as_str()), (Some(3), Some(true), Some("B")));
    mv["c"] = "R".into();
    fs::write(&t, v.to_string()).unwrap();
    assert_eq!(code(&forge(&["replay", "--in", path(&t)])), 4);
}

#[test]
fn replay_rejects_unreadable_input() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    fs::write(&empty, "").unwrap();
    assert_eq!(code(&forge(&["replay", "--in", path(&empty)])), 66);
    assert_eq!(code(&forge(&["replay", "--in", path(&dir.path().join("missing.json"))])), 66);
}

#[test]
fn exhaustive_verify_refuses_large_bounds() {
    let o = forge(&["verify", "--builder", "p4", "--mode", "exhaustive", "--n-range", "10..40"]);
    assert_eq!(code(&o), 65);
}

#[test]
fn exhaustive_verify_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = forge(&[
        "verify", "--builder", "p4", "--mode", "exhaustive", "--n-range", "10..12", "--format", "csv", "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "builder,k,n,mode,max_rounds,bound,leaves,status");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.ends_with(",pass")), "{text}");
    assert_eq!(fs::read_to_string(dir.path().join("report.csv")).unwrap(), text);
}

#[test]
fn randomized_verify_reports_json() {
    let o = forge(&["verify", "--builder", "pk", "--mode", "randomized", "--n-range", "10..11", "--k", "5", "--trials", "20"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let reports: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["status"] == "pass"));
}
