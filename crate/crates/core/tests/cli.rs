use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dilemma_core::examples;
use dilemma_core::game::ActionProfile;
use dilemma_core::io;
use serde_json::Value;
use tempfile::TempDir;

fn dilemma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilemma")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(TempDir::new().unwrap())
    }

    fn example(&self, name: &str) -> String {
        let path = self.0.path().join(format!("{name}.json"));
        let p = path.to_str().unwrap().to_owned();
        let o = dilemma(&["generate", "example", name, "-o", &p]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        p
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.0.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_owned()
    }
}

#[test]
fn classify_reports_kind_and_exit_code() {
    let dir = Scratch::new();
    let o = dilemma(&["classify", &dir.example("pd")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("Strict"));

    let o = dilemma(&["classify", &dir.example("too-many-cooks")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NotDilemma (condition i violated)"));
}

#[test]
fn missing_profile_is_named() {
    let dir = Scratch::new();
    let text = fs::read_to_string(dir.example("cyclical-3pd")).unwrap();
    let kept: Vec<&str> = text.lines().filter(|l| !l.contains("\"CDC\"")).collect();
    let path = dir.write("broken.json", &kept.join("\n"));
    let o = dilemma(&["classify", &path]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("\"CDC\""), "{}", stderr(&o));

    let o = dilemma(&["classify", &dir.write("bad.json", "{\"players\": 2")]);
    assert_eq!(o.status.code(), Some(3));
}

fn level_of(o: &Output) -> f64 {
    let v: Value = serde_json::from_str(&stdout(o)).unwrap();
    v["level"].as_f64().unwrap()
}

#[test]
fn solve_examples() {
    let dir = Scratch::new();
    let o = dilemma(&["solve", &dir.example("cyclical-3pd")]);
    assert_eq!(o.status.code(), Some(0));
    assert!((level_of(&o) - 0.75).abs() < 1e-9);

    let tmc = dir.example("too-many-cooks");
    let o = dilemma(&["solve", &tmc, "--target", "DCC"]);
    assert_eq!(o.status.code(), Some(1));
    let o = dilemma(&["solve", &tmc, "--target", "DCC", "--force"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((level_of(&o) - 3.0 / 11.0).abs() < 1e-7);
    let o = dilemma(&["solve", &tmc, "--target", "DCC", "--force", "--mode", "symmetric"]);
    assert_eq!(o.status.code(), Some(2));

    let o = dilemma(&["solve", &dir.example("scaled-pd"), "--allow-excess", "--force"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["level"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert!((v["excess"][0].as_f64().unwrap() - 8.0 / 18.0).abs() < 1e-3);
    assert_eq!(v["mode"], "general-with-excess");

    let o = dilemma(&["solve", &dir.example("cyclical-3pd"), "--generator", "2,3,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!((level_of(&o) - 0.75).abs() < 1e-9);

    let o = dilemma(&["solve", &dir.example("pd"), "--target", "CCC"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn solve_then_verify_accepts_own_output() {
    let dir = Scratch::new();
    for (name, extra) in [
        ("pd", vec!["--mode", "symmetric"]),
        ("chicken", vec![]),
        ("arbitrary", vec![]),
        ("symmetrical-3pd", vec!["--second-stage", "max-diagonal"]),
        ("too-many-cooks", vec!["--target", "DCC", "--force"]),
        ("scaled-pd", vec!["--allow-excess", "--force"]),
    ] {
        let game = dir.example(name);
        let out = dir.0.path().join(format!("{name}.result.json"));
        let out = out.to_str().unwrap();
        let mut args = vec!["solve", game.as_str(), "-o", out];
        args.extend(extra);
        assert_eq!(dilemma(&args).status.code(), Some(0), "{name}");
        let o = dilemma(&["verify", &game, out]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn verify_identity_fails_on_strict_dilemma() {
    let dir = Scratch::new();
    let id = dir.write("id.json", "[[1, 0], [0, 1]]");
    let o = dilemma(&["verify", &dir.example("pd"), &id]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not dominant"));

    let id3 = dir.write("id3.json", "[[1, 0, 0], [0, 1, 0], [0, 0, 1]]");
    assert_eq!(dilemma(&["verify", &dir.example("pd"), &id3]).status.code(), Some(3));
    assert_eq!(dilemma(&["transform", &dir.example("pd"), &id3]).status.code(), Some(3));
}

#[test]
fn generate_matches_tables() {
    let o = dilemma(&["generate", "graph", "--graph", "symmetrical", "--base", "pd", "-n", "3", "-c", "3", "-d", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let g = io::parse_game(&stdout(&o)).unwrap();
    assert!(g.max_abs_diff(&examples::symmetrical_3pd()).unwrap() < 1e-12);

    let o = dilemma(&["generate", "functional", "-n", "5", "-c", "3"]);
    let g = io::parse_game(&stdout(&o)).unwrap();
    let all_c = g.rewards(ActionProfile::parse("CCCCC").unwrap()).to_vec();
    for (k, r) in all_c.iter().enumerate() {
        assert!((r - (k + 1) as f64).abs() < 1e-12);
    }

    let o = dilemma(&["generate", "graph", "--graph", "cyclical", "--base", "pd", "-n", "3", "-c", "1", "-d", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("requires c > d"), "{}", stderr(&o));
}

#[test]
fn generated_files_are_byte_stable() {
    for args in [
        vec!["generate", "example", "pd"],
        vec!["generate", "example", "scaled-pd"],
        vec!["generate", "graph", "--graph", "tycoon", "--base", "chicken", "-n", "4", "-c", "5", "-d", "2"],
        vec!["generate", "functional", "-n", "4", "-c", "3"],
    ] {
        let text = stdout(&dilemma(&args));
        assert_eq!(io::write_game(&io::parse_game(&text).unwrap()), text, "{args:?}");
    }
}

#[test]
fn golden_files() {
    let o = dilemma(&["generate", "example", "pd"]);
    assert_eq!(stdout(&o), fs::read_to_string(golden("pd.json")).unwrap());
    let o = dilemma(&["solve", golden("pd.json").to_str().unwrap(), "--mode", "symmetric"]);
    assert_eq!(stdout(&o), fs::read_to_string(golden("pd.symmetric.json")).unwrap());
}

#[test]
fn transform_reproduces_reference_tables() {
    let dir = Scratch::new();
    let t = dir.write("exchange.json", "[[0.75, 0.25], [0.25, 0.75]]");
    let o = dilemma(&["transform", &dir.example("pd"), &t]);
    let g = io::parse_game(&stdout(&o)).unwrap();
    for (key, want) in [("CC", [3.0, 3.0]), ("CD", [1.0, 3.0]), ("DC", [3.0, 1.0]), ("DD", [1.0, 1.0])] {
        let got = g.rewards(ActionProfile::parse(key).unwrap());
        assert!(got.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12), "{key}: {got:?}");
    }

    let t = dir.write(
        "arbitrary_t.json",
        "[[0.487, 0.209, 0.304], [0.426, 0.487, 0.087], [0.426, 0.087, 0.487]]",
    );
    let o = dilemma(&["transform", &dir.example("arbitrary"), &t]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let g = io::parse_game(&stdout(&o)).unwrap();
    let table = [
        ("CCC", [9.92, 5.41, 6.67]),
        ("CDC", [7.79, 5.41, 4.80]),
        ("DCC", [9.01, 4.31, 6.68]),
        ("DDC", [2.74, 1.69, 1.57]),
        ("CCD", [8.16, 4.17, 6.67]),
        ("CDD", [2.98, 2.61, 1.41]),
        ("DCD", [8.16, 3.34, 6.50]),
        ("DDD", [1.34, 1.18, 0.48]),
    ];
    for (key, want) in table {
        let got = g.rewards(ActionProfile::parse(key).unwrap());
        for (a, b) in got.iter().zip(want) {
            // the reference matrix is itself rounded to 3 decimals
            assert!((a - b).abs() < 0.01, "{key}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn analytic_levels() {
    let o = dilemma(&["analytic", "--graph", "cyclical", "--base", "pd", "-n", "5", "-c", "3", "-d", "1", "--matrix"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("0.75"), "{text}");
    let o = dilemma(&["analytic", "--graph", "circular", "-n", "6"]);
    assert!(stdout(&o).contains("limit"));
}

#[test]
fn bench_rows_and_cap() {
    let o = dilemma(&["bench", "--n-min", "8", "--n-max", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].contains("ratio"));

    let o = dilemma(&["bench", "--n-min", "3", "--n-max", "5", "--csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,seconds,g_star"));
    assert_eq!(lines.count(), 3);

    let o = dilemma(&["bench", "--n-max", "30"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(dilemma(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(dilemma(&["classify"]).status.code(), Some(3));
    assert_eq!(dilemma(&["classify", "/nonexistent/game.json"]).status.code(), Some(3));
    assert_eq!(dilemma(&["--help"]).status.code(), Some(0));
}
