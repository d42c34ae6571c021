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

//! Which seats follow from first preferences alone?
//!
//! Starting from exact ATL/BTL first-preference counts, the analyzer
//! replays a reported outcome and widens each candidate's tally interval to
//! cover every possible later preference. A seating is guaranteed when the
//! lower end already reaches the quota.
//!
//! ```text
//! cargo run --example guaranteed_prefix
//! ```

use stv_guarantees::io::{parse_contest, parse_events, parse_summary, read_text};
use stv_guarantees::rational::format_fraction;
use stv_guarantees::{analyze, AnalyzerOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/example1");
    let contest = parse_contest(&read_text(&dir.join("contest.json"))?)?;
    let summary = parse_summary(&read_text(&dir.join("summary.csv"))?, &contest)?;
    let events = parse_events(&read_text(&dir.join("events.json"))?, &contest)?;

    let report = analyze(&summary, &events, &contest, AnalyzerOptions::default())?;
    println!("quota {}", report.quota.value());
    for e in &report.per_event {
        println!(
            "round {}: {:<3} tally in [{}, {}]{}",
            e.round,
            contest.candidate_name(e.event.candidate()),
            format_fraction(&e.tally.lo),
            format_fraction(&e.tally.hi),
            if e.guaranteed { "  guaranteed" } else { "" },
        );
    }
    let names: Vec<&str> = report
        .guaranteed_candidates()
        .into_iter()
        .map(|c| contest.candidate_name(c))
        .collect();
    println!("guaranteed: {}", names.join(", "));
    Ok(())
}
