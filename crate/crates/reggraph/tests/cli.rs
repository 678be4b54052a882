//! End-to-end CLI matrix: exit codes and byte-exact stdout for each
//! subcommand over the checked-in fixtures.

use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reggraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn check(args: &[&str], want_code: i32, want_stdout: &str) -> Output {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(want_code),
        "exit code for {args:?}; stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        want_stdout,
        "stdout for {args:?}"
    );
    out
}

#[test]
fn validate_subcommand() {
    check(&["validate", &fixture("five_cycle.rg")], 0, "valid\n");
    check(&["validate", &fixture("orientable.rg")], 0, "valid\n");
    check(&["validate", &fixture("selfloop.rg")], 1, "self loop at '1'\n");
    let out = run(&["validate", &fixture("no-such-file.rg")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn independences_subcommand() {
    check(
        &["independences", &fixture("five_cycle.rg")],
        0,
        "{1} _||_ {4} | {3, 5}\n\
         {1} _||_ {5} | {3, 4}\n\
         {2} _||_ {3} | {4, 5}\n\
         {2} _||_ {4} | {3, 5}\n\
         {3} _||_ {5} | {}\n",
    );
}

#[test]
fn separate_subcommand() {
    let f = fixture("five_cycle.rg");
    check(&["separate", &f, "--a", "3", "--b", "5", "--c", ""], 0, "separated\n");
    check(&["separate", &f, "--a", "3", "--b", "5", "--c", "4"], 1, "connected\n");
    check(&["separate", &f, "--a", "1,2", "--b", "3,4,5"], 1, "connected\n");
    // unknown label is a domain error
    let out = run(&["separate", &f, "--a", "9", "--b", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown label"));
}

#[test]
fn equivalent_subcommand() {
    let a = fixture("five_cycle.rg");
    let c = fixture("five_cycle_arrow.rg");
    check(&["equivalent", &a, &a], 0, "equivalent\n");
    check(
        &["equivalent", &a, &c],
        1,
        "not equivalent: collision V (1,2,5) in one graph only\n",
    );
}

#[test]
fn classify_subcommand() {
    check(
        &["classify", &fixture("five_cycle.rg")],
        0,
        "dag_orientable: false\n\
         concentration_equivalent: false\n\
         covariance_equivalent: false\n\
         cov_con_equivalent: false\n\
         amp_same_components: false\n\
         lwf_same_components: false\n",
    );
    check(
        &["classify", &fixture("orientable.rg")],
        0,
        "dag_orientable: true\n\
         concentration_equivalent: false\n\
         covariance_equivalent: false\n\
         cov_con_equivalent: false\n\
         amp_same_components: true\n\
         lwf_same_components: true\n",
    );
}

#[test]
fn orient_subcommand() {
    check(
        &["orient", &fixture("dashed4path.rg")],
        1,
        "NotOrientable: chordless collision path 1~2~3~4\n",
    );
    let out = check(
        &["orient", &fixture("orientable.rg"), "--trace"],
        0,
        "nodes: a b c d u v\n\
         context:\n\
         b -> a\n\
         c -> a\n\
         c -> b\n\
         c -> d\n\
         u -> a\n\
         u -> v\n",
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(
        stderr,
        "step 2: u -- v => u -> v\n\
         step 3: b ~~ a => b -> a\n\
         step 3: c ~~ a => c -> a\n\
         step 5: c ~~ b => c -> b\n"
    );
    // without --trace the rewrite log stays silent
    let out = run(&["orient", &fixture("orientable.rg")]);
    assert!(out.stderr.is_empty());
}

#[test]
fn gaussian_check_subcommand() {
    check(
        &["gaussian-check", &fixture("five_cycle.rg")],
        0,
        "checked 80 statements over 5 draws, 0 violations\n",
    );
    check(
        &[
            "gaussian-check",
            &fixture("orientable.rg"),
            "--seed",
            "7",
            "--draws",
            "3",
        ],
        0,
        "checked 240 statements over 3 draws, 0 violations\n",
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["separate", &fixture("five_cycle.rg"), "--a", "3"]).status.code(), Some(2));
}
