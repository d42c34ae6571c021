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

use serde::Serialize;

use super::{write_ballots, FORMAT_VERSION};
use crate::contest::{CandidateIndex, Contest};
use crate::oracle::Verdict;

const FORMAT: &str = "stv-oracle-verdict";

#[derive(Serialize)]
struct VerdictDoc<'a> {
    format: &'a str,
    version: u32,
    /// Completions are drawn under the single-ranking-per-pile assumption.
    assumption: &'a str,
    claimed: Vec<&'a str>,
    result: &'a str,
    completions: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<CounterexampleDoc<'a>>,
}

#[derive(Serialize)]
struct CounterexampleDoc<'a> {
    index: u64,
    missing: Vec<&'a str>,
    seated: Vec<&'a str>,
    /// In the canonical ballot CSV format.
    ballots: String,
}

/// Serializes an oracle verdict for the candidates that were claimed.
pub fn write_verdict(verdict: &Verdict, claimed: &[CandidateIndex], contest: &Contest) -> String {
    let names = |cs: &[CandidateIndex]| -> Vec<&str> {
        cs.iter().map(|c| contest.candidate_name(*c)).collect()
    };
    let doc = match verdict {
        Verdict::Confirmed { completions } => VerdictDoc {
            format: FORMAT,
            version: FORMAT_VERSION,
            assumption: "homogeneous-piles",
            claimed: names(claimed),
            result: "confirmed",
            completions: *completions,
            counterexample: None,
        },
        Verdict::Counterexample {
            completions,
            index,
            ballots,
            missing,
            seated,
        } => VerdictDoc {
            format: FORMAT,
            version: FORMAT_VERSION,
            assumption: "homogeneous-piles",
            claimed: names(claimed),
            result: "counterexample",
            completions: *completions,
            counterexample: Some(CounterexampleDoc {
                index: *index,
                missing: names(missing),
                seated: names(seated),
                ballots: write_ballots(ballots, contest),
            }),
        },
    };
    serde_json::to_string_pretty(&doc).expect("verdict serializes") + "\n"
}
