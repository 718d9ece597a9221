//! End-to-end tests of the `hog` binary: exit codes, output formats,
//! stream discipline, and determinism across worker counts.

use std::path::PathBuf;
use std::process::{Command, Output};

fn hog() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hog"))
}

fn games_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("..")
        .join("games")
}

fn game(name: &str) -> String {
    games_dir().join(format!("{name}.hog")).display().to_string()
}

fn run(args: &[&str]) -> Output {
    hog().args(args).output().expect("spawn hog")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn solve_prints_the_contest_table() {
    let out = run(&["solve", &game("keynes_max_fix_fix")]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "\
Strategy | Outcome | Nash | Defects | Selection | Defects
AAA | A | yes |  | yes |
AAB | A | yes |  | - | J3
ABA | A | yes |  | - | J2
ABB | B | yes |  | yes |
BAA | A | yes |  | yes |
BAB | B | - | J1 | - | J1,J2
BBA | B | - | J1 | - | J1,J3
BBB | B | yes |  | yes |
"
    );
    assert!(stderr(&out).is_empty());
}

#[test]
fn solve_selection_csv_of_the_coordination_game() {
    let out = run(&[
        "solve",
        &game("coordination"),
        "--kind",
        "selection",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "strategy,outcome,selection,selection_defectors");
    assert_eq!(lines.len(), 9);
    let yes: Vec<&str> = lines[1..]
        .iter()
        .filter(|l| l.split(',').nth(2) == Some("yes"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(yes, ["AAA", "BBB"]);
}

#[test]
fn missing_file_exits_2_with_stderr_only() {
    let out = run(&["solve", "no_such_game.hog"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn parse_error_exits_2() {
    let dir = std::env::temp_dir();
    let path = dir.join("hog_cli_parse_error.hog");
    std::fs::write(&path, "game g\nfrobnicate\n").unwrap();
    let out = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("unknown directive"));
    assert!(stderr(&out).contains("line 2"));
}

#[test]
fn elaboration_error_exits_3() {
    let dir = std::env::temp_dir();
    let path = dir.join("hog_cli_elab_error.hog");
    std::fs::write(
        &path,
        "game g\nplayers J1 J2 J3\nmoves J1 : A B\nmoves J2 : A B\nmoves J3 : A B\n\
         outcomes : A B\noutcome builtin majority\nagent J1 : argmax order(A < A)\n\
         agent J2 : fix\nagent J3 : fix\n",
    )
    .unwrap();
    let out = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("cycle"));
}

#[test]
fn non_total_agent_exits_3_for_solve_but_is_reported_by_check() {
    let dir = std::env::temp_dir();
    let path = dir.join("hog_cli_totality.hog");
    std::fs::write(
        &path,
        "game g\nplayers J1 J2 J3\nmoves J1 : A B\nmoves J2 : A B\nmoves J3 : A B\n\
         outcomes : A B\noutcome builtin majority\nagent J1 : prefer { A }\n\
         agent J2 : fix\nagent J3 : fix\n",
    )
    .unwrap();
    let solve = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(solve.status.code(), Some(3));
    assert!(stderr(&solve).contains("empty on reachable context"));

    let check = run(&["check", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(1));
    let text = stdout(&check);
    assert!(text.contains("agent J1: NOT total, empty on reachable context {A -> B, B -> B}"));
    assert!(text.contains("result: failed"));
}

#[test]
fn budget_overrun_exits_4() {
    let out = run(&["solve", &game("coordination"), "--budget", "7"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn hog_budget_env_is_the_fallback() {
    let out = hog()
        .args(["solve", &game("coordination")])
        .env("HOG_BUDGET", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = hog()
        .args(["solve", &game("coordination"), "--budget", "100"])
        .env("HOG_BUDGET", "7")
        .output()
        .unwrap();
    assert!(out.status.success(), "--budget overrides the environment");
}

#[test]
fn output_is_identical_across_worker_counts() {
    for format in ["table", "csv", "json"] {
        let one = run(&["solve", &game("bos_extended"), "--format", format, "--jobs", "1"]);
        let many = run(&["solve", &game("bos_extended"), "--format", format, "--jobs", "8"]);
        assert!(one.status.success() && many.status.success());
        assert_eq!(stdout(&one), stdout(&many), "format {format}");
    }
}

#[test]
fn compile_then_solve_reproduces_the_selection_set() {
    let dir = std::env::temp_dir();
    let out_path = dir.join("hog_cli_compiled.hog");
    let compile = run(&[
        "compile",
        &game("keynes_max_fix_fix"),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert!(compile.status.success());
    let summary = stdout(&compile);
    assert!(summary.contains("equal: true"));
    assert!(summary.contains("equilibria: 4"));

    let solve = run(&["solve", out_path.to_str().unwrap(), "--kind", "nash", "--format", "csv"]);
    assert!(solve.status.success());
    let nash: Vec<String> = stdout(&solve)
        .lines()
        .skip(1)
        .filter(|l| l.split(',').map(str::to_string).any(|f| f == "yes"))
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(nash, ["AAA", "ABB", "BAA", "BBB"]);
}

#[test]
fn compile_without_out_writes_game_to_stdout_and_summary_to_stderr() {
    let out = run(&["compile", &game("anticoordination")]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("game anticoordination_compiled\n"));
    let summary = stderr(&out);
    assert!(summary.contains("equal: true"));
    assert!(summary.contains("equilibria: 6"));
}

#[test]
fn check_passes_on_every_bundled_game() {
    for name in [
        "keynes_max_max_min",
        "keynes_max_fix_fix",
        "coordination",
        "anticoordination",
        "bos_classic",
        "bos_extended",
        "bos_qualitative",
        "compile_table_hand",
    ] {
        let out = run(&["check", &game(name)]);
        assert!(out.status.success(), "check failed on {name}: {}", stdout(&out));
        assert!(stdout(&out).contains("result: ok"));
    }
}

#[test]
fn check_reports_argmax_agents_as_context_independent() {
    let out = run(&["check", &game("bos_classic")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("agent W: quantifier context-independent"));
    assert!(text.contains("agent H: quantifier context-independent"));
}

#[test]
fn unknown_flags_are_rejected_before_io() {
    let out = run(&["solve", &game("coordination"), "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
}
