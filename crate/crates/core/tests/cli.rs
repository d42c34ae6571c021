// Copyright 2026 The stv-guarantees Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

mod common;

use std::path::Path;

use common::{fixture, read_fixture};
use stv_guarantees::cli::{
    run, EXIT_COUNTEREXAMPLE, EXIT_IO, EXIT_PARSE, EXIT_REFUSED, EXIT_SEMANTIC, EXIT_USAGE,
};
use stv_guarantees::io::{read_report, read_round_log};

struct Output {
    status: i32,
    stdout: String,
    stderr: String,
}

fn stvg(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let status = run(
        std::iter::once("stvg").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Output {
        status,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn fx(path: &str) -> String {
    fixture(path).to_str().unwrap().to_string()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tabulate_prints_rounds_and_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("log.json");
    let args = [
        "tabulate",
        "--contest",
        &fx("table1/contest.json"),
        "--ballots",
        &fx("table1/ballots.csv"),
        "--out",
        path_str(&log_path),
    ];
    let first = stvg(&args);
    assert_eq!(first.status, 0, "{}", first.stderr);
    assert!(first.stdout.contains("quota 19"));
    assert!(first
        .stdout
        .contains("round 2: elect c3, transfer value 6/25 (0.24) | c2=15 c3=25 c4=15"));
    assert!(first
        .stdout
        .contains("round 4: seat c2 as last standing, with quota | c2=32"));
    assert!(first.stdout.ends_with("pattern: e q e q\n"));
    let log_text = std::fs::read_to_string(&log_path).unwrap();
    assert_eq!(read_round_log(&log_text).unwrap().seated.len(), 2);

    let second = stvg(&args);
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(std::fs::read_to_string(&log_path).unwrap(), log_text);
}

#[test]
fn tabulate_shows_value_increase() {
    let out = stvg(&[
        "tabulate",
        "--contest",
        &fx("example1/contest.json"),
        "--ballots",
        &fx("example1/ballots.csv"),
    ]);
    assert_eq!(out.status, 0);
    for tv in [
        "31/41 (0.756)",
        "1/101 (0.0099)",
        "21/41 (0.512)",
        "111/511 (0.217)",
    ] {
        assert!(out.stdout.contains(tv), "{tv}");
    }
    assert!(out.stdout.contains(
        "value increase: 101 papers (BTL b>a3>c) from 1/101 (0.0099) to 111/511 (0.217) at round 4"
    ));
    assert!(out.stdout.contains("round 5: elect c | a4=89 c=108"));

    let precise = stvg(&[
        "tabulate",
        "--contest",
        &fx("example1/contest.json"),
        "--ballots",
        &fx("example1/ballots.csv"),
        "--precision",
        "5",
    ]);
    assert!(precise.stdout.contains("111/511 (0.21722)"));
}

#[test]
fn analyze_prints_prefix_from_events_or_log() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = stvg(&[
        "analyze",
        "--contest",
        &fx("example1/contest.json"),
        "--summary",
        &fx("example1/summary.csv"),
        "--events",
        &fx("example1/events.json"),
        "--out",
        path_str(&report_path),
    ]);
    assert_eq!(out.status, 0, "{}", out.stderr);
    assert!(out.stdout.contains("guaranteed prefix: 4 (a1, b, a2, a3)"));
    assert!(out
        .stdout
        .contains("round 4: elect a3, tally in [210, 211], guaranteed"));
    let report = read_report(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report.guaranteed_prefix_length, 4);

    let log_path = dir.path().join("log.json");
    assert_eq!(
        stvg(&[
            "tabulate",
            "--contest",
            &fx("example1/contest.json"),
            "--ballots",
            &fx("example1/ballots.csv"),
            "--out",
            path_str(&log_path),
        ])
        .status,
        0
    );
    let via_log = stvg(&[
        "analyze",
        "--contest",
        &fx("example1/contest.json"),
        "--summary",
        &fx("example1/summary.csv"),
        "--log",
        path_str(&log_path),
    ]);
    assert_eq!(via_log.stdout, out.stdout);

    let pattern = stvg(&[
        "pattern",
        "--log",
        path_str(&log_path),
        "--report",
        path_str(&report_path),
        "--expect",
        "[q q q q] q …",
    ]);
    assert_eq!(pattern.status, 0);
    assert_eq!(pattern.stdout, "[q q q q] q …\nmatches\n");
    let wrong = stvg(&[
        "pattern",
        "--log",
        path_str(&log_path),
        "--expect",
        "q q q q q q",
    ]);
    assert_eq!(wrong.status, EXIT_SEMANTIC);
    assert!(wrong
        .stdout
        .contains("differs at token 6: expected q, found …"));
}

#[test]
fn verify_confirms_and_refutes() {
    let base = [
        "verify",
        "--contest",
        &fx("example1/contest.json"),
        "--summary",
        &fx("example1/summary.csv"),
        "--events",
        &fx("example1/events.json"),
    ];
    let refused = stvg(&base);
    assert_eq!(refused.status, EXIT_REFUSED);
    assert!(refused.stderr.contains("3 groups exceeds the limit of 2"));

    let mut wide = base.to_vec();
    wide.extend(["--max-groups", "3", "--max-completions", "600000"]);
    let out = stvg(&wide);
    assert_eq!(out.status, 0, "{}", out.stderr);
    assert_eq!(
        out.stdout,
        "checking: a1, b, a2, a3\nconfirmed (531380 completions)\n"
    );

    let dir = tempfile::tempdir().unwrap();
    let verdict = dir.path().join("verdict.json");
    let mut claim = wide.clone();
    claim.extend(["--claim", "c", "--out", path_str(&verdict)]);
    let out = stvg(&claim);
    assert_eq!(out.status, EXIT_COUNTEREXAMPLE);
    assert!(out.stdout.contains("c not seated"));
    assert!(out.stdout.contains("kind,preferences,papers\nATL,A,410\n"));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&verdict).unwrap()).unwrap();
    assert_eq!(doc["format"], "stv-oracle-verdict");
    assert_eq!(doc["result"], "counterexample");
    assert_eq!(doc["counterexample"]["missing"][0], "c");
}

#[test]
fn summarize_matches_fixture() {
    let out = stvg(&[
        "summarize",
        "--contest",
        &fx("example1/contest.json"),
        "--ballots",
        &fx("example1/ballots.csv"),
    ]);
    assert_eq!(out.status, 0);
    assert_eq!(out.stdout, read_fixture("example1/summary.csv"));
}

#[test]
fn exit_statuses() {
    assert_eq!(stvg(&[]).status, EXIT_USAGE);
    assert_eq!(stvg(&["tabulate", "--contest"]).status, EXIT_USAGE);
    assert_eq!(stvg(&["--help"]).status, 0);
    let missing = stvg(&[
        "tabulate",
        "--contest",
        "/nonexistent/contest.json",
        "--ballots",
        &fx("table1/ballots.csv"),
    ]);
    assert_eq!(missing.status, EXIT_IO);
    let malformed = stvg(&[
        "tabulate",
        "--contest",
        &fx("table1/ballots.csv"),
        "--ballots",
        &fx("table1/ballots.csv"),
    ]);
    assert_eq!(malformed.status, EXIT_PARSE);
    // Ballots naming candidates of another contest.
    let mismatch = stvg(&[
        "summarize",
        "--contest",
        &fx("table1/contest.json"),
        "--ballots",
        &fx("example1/ballots.csv"),
    ]);
    assert_eq!(mismatch.status, EXIT_PARSE);
    assert!(mismatch.stderr.contains("line 2"));
    // Both outcome sources at once.
    let both = stvg(&[
        "analyze",
        "--contest",
        &fx("example1/contest.json"),
        "--summary",
        &fx("example1/summary.csv"),
        "--events",
        &fx("example1/events.json"),
        "--log",
        &fx("example1/events.json"),
    ]);
    assert_eq!(both.status, EXIT_USAGE);
}

#[test]
fn log_from_another_contest_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("log.json");
    stvg(&[
        "tabulate",
        "--contest",
        &fx("table1/contest.json"),
        "--ballots",
        &fx("table1/ballots.csv"),
        "--out",
        path_str(&log_path),
    ]);
    let out = stvg(&[
        "analyze",
        "--contest",
        &fx("example1/contest.json"),
        "--summary",
        &fx("example1/summary.csv"),
        "--log",
        path_str(&log_path),
    ]);
    assert_eq!(out.status, EXIT_SEMANTIC);
}
