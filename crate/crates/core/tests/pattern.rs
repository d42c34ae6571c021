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

use common::read_fixture;
use num_traits::Zero;
use stv_guarantees::bounds::GuaranteeReport;
use stv_guarantees::io::{parse_ballots, parse_contest, parse_events, parse_summary};
use stv_guarantees::pattern::{
    compare_pattern, parse_pattern, render_pattern, render_pattern_with, PatternComparison,
    PatternOptions, Token,
};
use stv_guarantees::{
    analyze, tabulate, AnalyzerOptions, BigRational, CandidateIndex, CountLog, EventKind, Quota,
    RoundEvent,
};

/// A log with one event per character of `shape`: `q` elected, `Q` seated
/// last-standing with a quota, `s` seated without one, `e` eliminated.
/// `standing` candidates are never touched.
fn synthetic_log(shape: &str, standing: usize) -> CountLog {
    let mut events = Vec::new();
    let mut seated = Vec::new();
    for (i, ch) in shape.chars().enumerate() {
        let candidate = CandidateIndex(i);
        let kind = match ch {
            'q' => EventKind::Elect {
                candidate,
                transfer_value: None,
            },
            'Q' | 's' => EventKind::SeatWithoutQuota {
                candidate,
                has_quota: ch == 'Q',
            },
            'e' => EventKind::Eliminate { candidate },
            _ => unreachable!(),
        };
        if kind.is_seating() {
            seated.push(candidate);
        }
        events.push(RoundEvent {
            round: i + 1,
            kind,
            tallies: Vec::new(),
            exhausted: BigRational::zero(),
            rounding_loss: BigRational::zero(),
        });
    }
    let n = events.len() + standing;
    CountLog {
        contest_name: "synthetic".into(),
        candidates: (0..n).map(|i| format!("c{i}")).collect(),
        groups: Vec::new(),
        seats: seated.len(),
        total_papers: 0,
        quota: Quota(1),
        events,
        seated,
        anomalies: Vec::new(),
    }
}

fn prefix(len: usize) -> GuaranteeReport {
    GuaranteeReport {
        quota: Quota(1),
        per_event: Vec::new(),
        guaranteed_prefix_length: len,
        trace: Vec::new(),
    }
}

fn shape(parts: &[(&str, usize)]) -> String {
    parts.iter().map(|(s, n)| s.repeat(*n)).collect()
}

#[test]
fn four_candidate_pattern() {
    let contest = parse_contest(&read_fixture("table1/contest.json")).unwrap();
    let ballots = parse_ballots(&read_fixture("table1/ballots.csv"), &contest).unwrap();
    let log = tabulate(&contest, &ballots.ballots).unwrap();
    let p = render_pattern(&log, None);
    assert_eq!(p.to_string(), "e q e q");
    assert!(!p.trailing_standing);
    assert_eq!(p.seats(), 2);
}

#[test]
fn example1_pattern_has_a_standing_candidate() {
    let contest = parse_contest(&read_fixture("example1/contest.json")).unwrap();
    let ballots = parse_ballots(&read_fixture("example1/ballots.csv"), &contest).unwrap();
    let summary = parse_summary(&read_fixture("example1/summary.csv"), &contest).unwrap();
    let events = parse_events(&read_fixture("example1/events.json"), &contest).unwrap();
    let log = tabulate(&contest, &ballots.ballots).unwrap();
    let report = analyze(&summary, &events, &contest, AnalyzerOptions::default()).unwrap();
    let p = render_pattern(&log, Some(&report));
    // Five seats with a quota; a4 is still standing when the last is filled.
    assert_eq!(p.tokens[..5], [Token::Quota; 5]);
    assert!(p.trailing_standing);
    assert_eq!(p.to_string(), "q q q q q …");
    assert_eq!(p.annotated(), "[q q q q] q …");
}

#[test]
fn long_count_with_two_elimination_runs() {
    // 79 candidates, 6 seats: 4 quotas, 60 eliminations, a quota, 13
    // eliminations, and a final seat without a quota.
    let log = synthetic_log(
        &shape(&[("q", 4), ("e", 60), ("q", 1), ("e", 13), ("s", 1)]),
        0,
    );
    assert_eq!(log.candidates.len(), 79);
    let p = render_pattern(&log, Some(&prefix(4)));
    assert_eq!(p.to_string(), "q q q q e … q e … s");
    assert_eq!(p.annotated(), "[q q q q] e … q e … s");
    assert_eq!(p.runs, vec![60, 13]);
    assert_eq!(p.expand(), stv_guarantees::pattern::raw_tokens(&log));
    assert_eq!(
        compare_pattern(&p, "[q q q q] e … q e … s").unwrap(),
        PatternComparison::Match
    );
}

#[test]
fn short_runs_are_written_out() {
    let log = synthetic_log(
        &shape(&[("q", 4), ("e", 30), ("q", 1), ("e", 4), ("q", 1)]),
        0,
    );
    let p = render_pattern(&log, Some(&prefix(4)));
    assert_eq!(p.to_string(), "q q q q e … q e e e e q");
    let tight = render_pattern_with(
        &log,
        None,
        PatternOptions {
            min_elimination_run: 2,
        },
    );
    assert_eq!(tight.to_string(), "q q q q e … q e … q");
}

#[test]
fn comparison_reports_first_difference() {
    // 105 candidates, 6 seats, 99 eliminations.
    let log = synthetic_log(&shape(&[("q", 4), ("e", 99), ("q", 1), ("Q", 1)]), 0);
    let p = render_pattern(&log, Some(&prefix(4)));
    assert_eq!(
        compare_pattern(&p, "[q q q q] e ... q q").unwrap(),
        PatternComparison::Match
    );
    assert_eq!(
        compare_pattern(&p, "[q q q] q e … q q").unwrap(),
        PatternComparison::BoldDiff {
            expected: 3,
            found: 4
        }
    );
    assert_eq!(
        compare_pattern(&p, "q q q q e … q e q").unwrap(),
        PatternComparison::TokenDiff {
            position: 8,
            expected: Some(Token::Eliminated),
            found: Some(Token::Quota),
        }
    );
    assert_eq!(
        compare_pattern(&p, "q q q q e … q q …").unwrap(),
        PatternComparison::TokenDiff {
            position: 9,
            expected: Some(Token::Ellipsis),
            found: None,
        }
    );
}

#[test]
fn two_seat_territory_patterns() {
    let log = synthetic_log("qq", 17);
    let p = render_pattern(&log, Some(&prefix(2)));
    assert_eq!(p.annotated(), "[q q] …");
    let log = synthetic_log(&shape(&[("q", 1), ("e", 15), ("q", 1)]), 5);
    let p = render_pattern(&log, Some(&prefix(1)));
    assert_eq!(p.annotated(), "[q] e … q …");
    let parsed = parse_pattern("[q] e … q …").unwrap();
    assert_eq!(parsed.tokens, p.tokens);
    assert_eq!(parsed.bold_prefix, 1);
    assert!(parsed.trailing_standing);
}

#[test]
fn guarantee_never_extends_past_leading_quotas() {
    let log = synthetic_log(&shape(&[("q", 2), ("e", 5), ("q", 1)]), 1);
    let p = render_pattern(&log, Some(&prefix(5)));
    assert_eq!(p.bold_prefix, 2);
}
