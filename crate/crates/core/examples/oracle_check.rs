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

//! Brute-force check of guaranteed seats on a tiny contest.
//!
//! Each first-preference pile is given one ranking at a time, over every
//! possible continuation, and the count is rerun for each combination.
//!
//! ```text
//! cargo run --example oracle_check
//! ```

use stv_guarantees::io::{summarize, write_ballots};
use stv_guarantees::oracle::{
    verify_candidates, verify_guarantees, CompletionSpace, Limits, Verdict,
};
use stv_guarantees::{
    analyze, tabulate, AnalyzerOptions, Ballot, Contest, EventSequence, GroupIndex,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let contest = Contest::new(
        "tiny",
        2,
        ["p1", "p2", "q", "r"].map(String::from).to_vec(),
        vec![("P".into(), vec!["p1".into(), "p2".into()])],
    )?;
    let c = |name: &str| contest.candidate_index(name).unwrap();
    let ballots = vec![
        Ballot::atl(vec![GroupIndex(0)], 40),
        Ballot::btl(vec![c("q"), c("r")], 22),
        Ballot::btl(vec![c("r"), c("q")], 18),
        Ballot::btl(vec![c("p2")], 9),
    ];
    let log = tabulate(&contest, &ballots)?;
    let summary = summarize(&ballots, &contest);
    let report = analyze(
        &summary,
        &EventSequence::from_log(&log),
        &contest,
        AnalyzerOptions::default(),
    )?;

    let space = CompletionSpace::new(&contest, &summary, Limits::default())?;
    println!("{} completions", space.completion_count());
    let claimed = report.guaranteed_candidates();
    let names = |cs: &[stv_guarantees::CandidateIndex]| {
        cs.iter()
            .map(|c| contest.candidate_name(*c))
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!("guaranteed by the bounds: {}", names(&claimed));
    println!("oracle: {:?}", verify_guarantees(&space, &report)?);

    // Claim every seated candidate, and let the oracle find where that fails.
    match verify_candidates(&space, &log.seated)? {
        Verdict::Confirmed { completions } => {
            println!(
                "{} seated in all {completions} completions",
                names(&log.seated)
            )
        }
        Verdict::Counterexample {
            index,
            ballots,
            missing,
            ..
        } => {
            println!("completion {index} leaves out {}:", names(&missing));
            print!("{}", write_ballots(&ballots, &contest));
        }
    }
    Ok(())
}
