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

//! Summarizes a count as a pattern of seatings and eliminations, with the
//! guaranteed prefix in brackets, and compares it with a published one.
//!
//! ```text
//! cargo run --example pattern_strings
//! ```

use stv_guarantees::io::{parse_ballots, parse_contest, parse_summary, read_text};
use stv_guarantees::pattern::{compare_pattern, render_pattern};
use stv_guarantees::{analyze, tabulate, AnalyzerOptions, EventSequence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for dir in ["table1", "example1"] {
        let dir = root.join(dir);
        let contest = parse_contest(&read_text(&dir.join("contest.json"))?)?;
        let ballots = parse_ballots(&read_text(&dir.join("ballots.csv"))?, &contest)?.ballots;
        let log = tabulate(&contest, &ballots)?;
        let summary = stv_guarantees::io::summarize(&ballots, &contest);
        let report = analyze(
            &summary,
            &EventSequence::from_log(&log),
            &contest,
            AnalyzerOptions::default(),
        )?;
        let pattern = render_pattern(&log, Some(&report));
        println!("{:<28} {}", contest.name(), pattern.annotated());
    }

    let dir = root.join("example1");
    let contest = parse_contest(&read_text(&dir.join("contest.json"))?)?;
    let ballots = parse_ballots(&read_text(&dir.join("ballots.csv"))?, &contest)?.ballots;
    let summary = parse_summary(&read_text(&dir.join("summary.csv"))?, &contest)?;
    let log = tabulate(&contest, &ballots)?;
    let report = analyze(
        &summary,
        &EventSequence::from_log(&log),
        &contest,
        AnalyzerOptions::default(),
    )?;
    let pattern = render_pattern(&log, Some(&report));
    for expected in ["[q q q q] q …", "[q q q q q]", "q q q q e"] {
        println!("{expected:<16} {:?}", compare_pattern(&pattern, expected)?);
    }
    Ok(())
}
