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

//! Counts a small all-BTL contest and prints each round.
//!
//! ```text
//! cargo run --example count_contest
//! ```

use stv_guarantees::io::{parse_ballots, parse_contest, read_text};
use stv_guarantees::rational::format_significant;
use stv_guarantees::{tabulate, EventKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/table1");
    let contest = parse_contest(&read_text(&dir.join("contest.json"))?)?;
    let ballots = parse_ballots(&read_text(&dir.join("ballots.csv"))?, &contest)?;

    let log = tabulate(&contest, &ballots.ballots)?;
    println!(
        "{} papers, {} seats, quota {}",
        log.total_papers,
        log.seats,
        log.quota.value()
    );
    for event in &log.events {
        let who = contest.candidate_name(event.kind.candidate());
        let what = match &event.kind {
            EventKind::Elect {
                transfer_value: Some(tv),
                ..
            } => {
                format!(
                    "{who} elected, transfer value {tv} ({})",
                    format_significant(tv, 3)
                )
            }
            EventKind::Elect { .. } => format!("{who} elected"),
            EventKind::Eliminate { .. } => format!("{who} eliminated"),
            EventKind::SeatWithoutQuota { .. } => format!("{who} seated as last standing"),
        };
        let tallies: Vec<String> = event
            .tallies
            .iter()
            .map(|(c, t)| format!("{}:{t}", contest.candidate_name(*c)))
            .collect();
        println!("round {}  {:<40} {}", event.round, what, tallies.join(" "));
    }
    Ok(())
}
