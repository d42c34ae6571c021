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

//! Papers can gain value when they leave an elected candidate: every paper
//! in the pile departs at the same transfer value, whatever it arrived with.
//!
//! ```text
//! cargo run --example value_increase
//! ```

use stv_guarantees::contest::Preferences;
use stv_guarantees::engine::detect_value_increases;
use stv_guarantees::rational::format_significant;
use stv_guarantees::{tabulate, Ballot, CandidateIndex, Contest, GroupIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let contest = Contest::new(
        "four quotas",
        5,
        ["a1", "a2", "a3", "a4", "b", "c"]
            .map(String::from)
            .to_vec(),
        vec![
            (
                "A".into(),
                ["a1", "a2", "a3", "a4"].map(String::from).to_vec(),
            ),
            ("B".into(), vec!["b".into()]),
            ("C".into(), vec!["c".into()]),
        ],
    )?;
    let c = |name: &str| contest.candidate_index(name).unwrap();
    let ballots = vec![
        Ballot::atl(vec![GroupIndex(0)], 410),
        Ballot::btl(vec![c("b"), c("a3"), c("c")], 101),
        Ballot::btl(vec![c("c")], 87),
    ];

    let log = tabulate(&contest, &ballots)?;
    let names = |cs: &[CandidateIndex]| {
        cs.iter()
            .map(|c| contest.candidate_name(*c))
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!("seated: {}", names(&log.seated));
    for inc in detect_value_increases(&log) {
        let Preferences::Candidates(ranking) = &inc.ballot.prefs else {
            continue;
        };
        println!(
            "round {}: {} papers [{}] rise from {} to {}",
            inc.round,
            inc.ballot.papers,
            names(ranking),
            format_significant(&inc.old_value, 3),
            format_significant(&inc.new_value, 3),
        );
    }
    Ok(())
}
