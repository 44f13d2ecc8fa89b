//! End-to-end tests of the `nurikabe` binary: flag grammar, output shapes,
//! exit codes, and byte determinism.

use std::io::Write;
use std::process::{Command, Output};

fn nurikabe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nurikabe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn count_mobius_loop() {
    let out = nurikabe(&["count", "--surface", "mobius:4", "--rule", "loop"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("count=10"), "{}", stdout(&out));
}

#[test]
fn count_with_constraint() {
    let out = nurikabe(&[
        "count",
        "--surface",
        "mobius:7",
        "--rule",
        "loop",
        "--constraint",
        "water=1,7",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("count=9"), "{}", stdout(&out));
}

#[test]
fn count_json_lines() {
    let out = nurikabe(&[
        "count",
        "--surface",
        "klein:4",
        "--rule",
        "loop",
        "--format",
        "json-lines",
    ]);
    assert_eq!(code(&out), 0);
    let line = stdout(&out);
    let record: serde_json::Value = serde_json::from_str(line.trim()).expect("valid json");
    assert_eq!(record["record"], "count");
    assert_eq!(record["count"], 7);
    assert_eq!(record["surface"], "klein:4");
}

#[test]
fn enumerate_lists_ascending() {
    let out = nurikabe(&["enumerate", "--surface", "mobius:2", "--rule", "loop"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let masks: Vec<u64> = text
        .lines()
        .filter(|l| l.starts_with("coloring"))
        .map(|l| {
            l.split_whitespace()
                .find_map(|tok| tok.strip_prefix("mask="))
                .unwrap()
                .parse()
                .unwrap()
        })
        .collect();
    assert_eq!(masks, vec![0, 1, 2]);
}

#[test]
fn verify_klein_small_range_exits_zero() {
    let out = nurikabe(&[
        "verify", "--family", "klein", "--rule", "loop", "--max-n", "6",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    for oracle in ["1", "3", "6", "7", "15", "22"] {
        assert!(text.contains(oracle));
    }
    assert!(text.contains("mismatches=0"));
}

#[test]
fn verify_klein_divergence_exits_two_with_three_columns() {
    let out = nurikabe(&[
        "verify", "--family", "klein", "--rule", "loop", "--max-n", "10",
    ]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
    let text = stdout(&out);
    // the n = 7 rows must show oracle, closed form, and structural chain
    assert!(text.contains("loop_klein_thm"), "{text}");
    assert!(text.contains("loop_klein_lemma_chain"), "{text}");
    let row7: Vec<&str> = text
        .lines()
        .filter(|l| l.trim().starts_with("7 "))
        .collect();
    assert_eq!(row7.len(), 2, "{text}");
    assert!(row7[0].contains("40") && row7[0].contains("36") && row7[0].contains("NO"));
    assert!(row7[1].contains("loop_klein_lemma_chain") && row7[1].contains("yes"));
}

#[test]
fn verify_rectangle_agrees() {
    let out = nurikabe(&[
        "verify",
        "--family",
        "rectangle",
        "--rule",
        "square",
        "--max-n",
        "8",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn bfile_jacobsthal() {
    let out = nurikabe(&["bfile", "--formula", "J_closed", "--max-n", "10"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "1 1\n2 1\n3 3\n4 5\n5 11\n6 21\n7 43\n8 85\n9 171\n10 341\n"
    );
}

#[test]
fn bfile_oracle() {
    let out = nurikabe(&[
        "bfile", "--family", "mobius", "--rule", "loop", "--max-n", "4",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 2\n2 3\n3 7\n4 10\n");
}

#[test]
fn bijection_suite_passes() {
    let out = nurikabe(&["bijection", "--check", "loop-odd", "--k", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("PASS"), "{text}");
    assert!(text.contains("domain=7"), "{text}");
}

#[test]
fn solve_unique_solution() {
    let out = nurikabe(&[
        "solve",
        "--surface",
        "mobius:4",
        "--rule",
        "square",
        "--clue",
        "1=1",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("solutions=1"), "{text}");
    assert!(text.contains("cells=.###"), "{text}");

    let out = nurikabe(&[
        "solve",
        "--surface",
        "mobius:4",
        "--rule",
        "loop",
        "--clue",
        "1=1",
    ]);
    assert!(stdout(&out).contains("solutions=0"));
}

#[test]
fn solve_all_land() {
    let out = nurikabe(&[
        "solve",
        "--surface",
        "rectangle:2x3",
        "--rule",
        "loop",
        "--clue",
        "1=6",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("solutions=1"), "{text}");
    assert!(text.contains("cells=......"), "{text}");
}

#[test]
fn describe_reports_topology() {
    let out = nurikabe(&["describe", "--surface", "klein:5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("euler-characteristic=0"), "{text}");
    assert!(text.contains("boundary-slots=0"), "{text}");
    assert!(text.contains("1-5"), "adjacency wrap edge: {text}");
    assert!(text.contains("2-4"), "{text}");
}

#[test]
fn render_rectangle_rows() {
    let out = nurikabe(&["render", "--surface", "rectangle:2x3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| l.trim() == "...").collect();
    assert_eq!(rows.len(), 2, "{text}");
}

#[test]
fn render_svg_output() {
    let out = nurikabe(&[
        "render",
        "--surface",
        "mobius:4",
        "--water",
        "2,3",
        "--format",
        "svg",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("<svg"));
    assert!(text.contains("marker-end"));
}

#[test]
fn spec_file_round_trip() {
    let dir = std::env::temp_dir();
    let path = dir.join("nurikabe-cli-test-surface.txt");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "# three-square projective-style gluing").unwrap();
    writeln!(file, "squares 3").unwrap();
    writeln!(file, "glue 1.E 2.W").unwrap();
    writeln!(file, "glue 2.E 3.W").unwrap();
    writeln!(file, "glue 1.N 3.S rev").unwrap();
    writeln!(file, "glue 2.N 2.S rev").unwrap();
    writeln!(file, "glue 3.N 1.S rev").unwrap();
    drop(file);
    let path_str = path.to_str().unwrap();

    let direct = nurikabe(&["count", "--surface", "mobius:3", "--rule", "loop"]);
    let via_spec = nurikabe(&["count", "--spec", path_str, "--rule", "loop"]);
    assert_eq!(code(&via_spec), 0);
    let count_of = |out: &Output| {
        stdout(out)
            .split_whitespace()
            .find_map(|tok| tok.strip_prefix("count=").map(str::to_string))
            .unwrap()
    };
    assert_eq!(count_of(&direct), count_of(&via_spec));
    std::fs::remove_file(&path).ok();
}

#[test]
fn malformed_spec_reports_line_number() {
    let dir = std::env::temp_dir();
    let path = dir.join("nurikabe-cli-test-bad-surface.txt");
    std::fs::write(&path, "squares 2\nglue 1.E 1.E\n").unwrap();
    let out = nurikabe(&["describe", "--spec", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn shipped_puzzles_have_unique_solutions() {
    let genus2 = concat!(env!("CARGO_MANIFEST_DIR"), "/../../puzzles/genus2.surface");
    let out = nurikabe(&["solve", "--spec", genus2, "--rule", "loop", "--clue", "1=1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("solutions=1"), "{text}");
    assert!(text.contains("cells=.##"), "{text}");

    let out = nurikabe(&[
        "solve",
        "--surface",
        "klein:7",
        "--rule",
        "loop",
        "--clue",
        "1=2",
        "--clue",
        "5=2",
    ]);
    let text = stdout(&out);
    assert!(text.contains("solutions=1"), "{text}");
    assert!(text.contains("cells=.##..#."), "{text}");
}

#[test]
fn usage_errors_exit_one() {
    let out = nurikabe(&["count", "--surface", "mobius:4"]);
    assert_eq!(code(&out), 1, "missing --rule");
    let out = nurikabe(&["count", "--surface", "nonsense:4", "--rule", "loop"]);
    assert_eq!(code(&out), 1);
    let out = nurikabe(&["count", "--surface", "mobius:0", "--rule", "loop"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn over_cap_requires_override_flag() {
    let out = nurikabe(&["count", "--surface", "mobius:27", "--rule", "loop"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn outputs_are_byte_deterministic() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["describe", "--surface", "klein:6"],
        vec!["enumerate", "--surface", "mobius:5", "--rule", "loop"],
        vec![
            "verify", "--family", "mobius", "--rule", "loop", "--max-n", "8",
        ],
        vec!["render", "--surface", "staircase:3", "--format", "svg"],
        vec!["bijection", "--check", "square-odd", "--k", "3"],
    ];
    for args in runs {
        let a = nurikabe(&args);
        let b = nurikabe(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), code(&b));
    }
}

#[test]
fn workers_flag_does_not_change_results() {
    let base = nurikabe(&["count", "--surface", "klein:12", "--rule", "loop"]);
    for workers in ["1", "2", "4"] {
        let out = nurikabe(&[
            "count",
            "--surface",
            "klein:12",
            "--rule",
            "loop",
            "--workers",
            workers,
        ]);
        assert_eq!(out.stdout, base.stdout);
    }
}

#[test]
fn constraint_reproduces_refined_counts() {
    // one water square in the last column of the 2x3 rectangle: squares 3, 6
    let a = nurikabe(&[
        "count",
        "--surface",
        "rectangle:2x3",
        "--rule",
        "square",
        "--constraint",
        "water=3",
        "land=6",
    ]);
    let b = nurikabe(&[
        "count",
        "--surface",
        "rectangle:2x3",
        "--rule",
        "square",
        "--constraint",
        "water=6",
        "land=3",
    ]);
    let get = |out: &Output| -> u64 {
        stdout(out)
            .split_whitespace()
            .find_map(|tok| tok.strip_prefix("count="))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(get(&a) + get(&b), 14, "refined last-column count at k=3");
}
