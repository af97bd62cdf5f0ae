use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snakeladder"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn dice_file(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "dice", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn missing_board_names_the_path() {
    let out = run(&["expectations", "--board", "/definitely/missing.toml"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/definitely/missing.toml"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_board_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.toml");
    fs::write(&path, "size = 20\nredirects = [[4, 9], [9, 4]]\n").unwrap();
    let out = run(&["expectations", "--board", path.to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn expectations_csv_has_one_row_per_state() {
    let text = stdout(&["expectations", "--board", "mini10"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("state,expected_moves,expected_moves_exact"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.last().unwrap().starts_with("10,0"));
}

#[test]
fn full_board_expectations_json() {
    let text = stdout(&["expectations", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 82);
    let e0 = rows[0]["expected_moves"].as_f64().unwrap();
    let exact = rows[0]["expected_moves_exact"].as_f64().unwrap();
    assert!((e0 - exact).abs() < 1e-9);
}

#[test]
fn cycles_report_best_triangle_first() {
    let text = stdout(&["cycles"]);
    let first = text.lines().nth(1).unwrap();
    assert!(first.starts_with("69,79,73,"), "{first}");
}

#[test]
fn cycles_with_unreachable_threshold_is_empty() {
    let text = stdout(&["cycles", "--cmin", "1"]);
    assert_eq!(text.trim(), "i,j,k,edge_ij,edge_jk,edge_ki,c");
}

#[test]
fn winmatrix_is_square() {
    let text = stdout(&["winmatrix", "--board", "mini10", "--matrix", "x"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert!(lines.iter().all(|l| l.split(',').count() == 10));
}

#[test]
fn simulate_writes_identical_files_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for n in 0..2 {
        let edges = dir.path().join(format!("edges{n}.csv"));
        let hist = dir.path().join(format!("hist{n}.csv"));
        stdout(&[
            "simulate",
            "--board",
            "mini10",
            "--states",
            "0,4,9",
            "--games",
            "5000",
            "--seed",
            "12",
            "--out",
            edges.to_str().unwrap(),
            "--histogram-out",
            hist.to_str().unwrap(),
        ]);
        outputs.push((fs::read(&edges).unwrap(), fs::read(&hist).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let edges = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(edges.lines().count(), 4);
    assert!(edges.starts_with("i,j,win,loss,draw,edge,stderr,method,games,seed"));
}

#[test]
fn simulate_seed_changes_output() {
    let a = stdout(&["simulate", "--board", "mini10", "--states", "0,9", "--games", "2000", "--seed", "1"]);
    let b = stdout(&["simulate", "--board", "mini10", "--states", "0,9", "--games", "2000", "--seed", "2"]);
    assert_ne!(a, b);
}

#[test]
fn simulate_rejects_redirect_squares() {
    let out = run(&["simulate", "--board", "mini10", "--states", "0,3", "--games", "10"]);
    assert!(!out.status.success());
}

#[test]
fn dice_three_face_example() {
    let text = stdout(&["dice", &dice_file("three-face.toml")]);
    assert!(text.contains("win 5/9"));
    assert!(text.contains("cycle: holds"));
}

#[test]
fn dice_weighted_example_reports_exact_edge() {
    let text = stdout(&["dice", &dice_file("weighted.toml"), "--format", "csv"]);
    let row = text.lines().find(|l| l.starts_with("B,C,")).unwrap();
    assert_eq!(row.split(',').nth(5), Some("2/27"));
}

#[test]
fn dice_ties_example_json() {
    let text = stdout(&["dice", &dice_file("ties.toml"), "--format", "json"]);
    assert!(text.contains("\"1/2\"") && text.contains("\"1/6\"") && text.contains("\"1/3\""));
}

#[test]
fn dice_needs_three_dice() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.toml");
    fs::write(&path, "[[dice]]\nlabel = \"A\"\nfaces = [1, 2]\n").unwrap();
    let out = run(&["dice", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 dice"));
}

#[test]
fn dice_search_finds_nothing_for_one_one_two() {
    let text = stdout(&["dice-search", "--faces", "1,1,2", "--max-value", "4", "--max-den", "6"]);
    assert_eq!(text.lines().count(), 1, "{text}");
}

#[test]
fn text_format_is_dice_only() {
    let out = run(&["expectations", "--format", "text"]);
    assert!(!out.status.success());
}
