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

use std::collections::HashSet;

use super::{DataError, RecordError};
use crate::bounds::{FirstPrefSummary, FirstPrefs};
use crate::contest::{Ballot, Contest, Preferences};

const HEADER: [&str; 3] = ["candidate", "atl_papers", "btl_papers"];

/// First-preference ATL/BTL paper counts. An ATL first preference counts
/// for the top member of the first-ranked group.
pub fn summarize(ballots: &[Ballot], contest: &Contest) -> FirstPrefSummary {
    let mut summary = FirstPrefSummary::zeros(contest.num_candidates());
    for b in ballots {
        match &b.prefs {
            Preferences::Groups(g) => {
                if let Some(g) = g.first() {
                    summary.get_mut(contest.group(*g).members[0]).atl += b.papers;
                }
            }
            Preferences::Candidates(c) => {
                if let Some(c) = c.first() {
                    summary.get_mut(*c).btl += b.papers;
                }
            }
        }
    }
    summary
}

/// CSV with header `candidate,atl_papers,btl_papers`. Candidates not listed
/// have zero first preferences.
pub fn parse_summary(text: &str, contest: &Contest) -> Result<FirstPrefSummary, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(DataError::Schema {
            expected: HEADER.join(","),
            found: headers.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut summary = FirstPrefSummary::zeros(contest.num_candidates());
    let mut seen = HashSet::new();
    let mut errors = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut fail = |message: String| errors.push(RecordError { line, message });
        if record.len() != 3 {
            fail(format!("expected 3 fields, found {}", record.len()));
            continue;
        }
        let Some(c) = contest.candidate_index(&record[0]) else {
            fail(format!("unknown candidate {:?}", &record[0]));
            continue;
        };
        if !seen.insert(c) {
            fail(format!("candidate {:?} listed twice", &record[0]));
            continue;
        }
        match (record[1].parse::<u64>(), record[2].parse::<u64>()) {
            (Ok(atl), Ok(btl)) => *summary.get_mut(c) = FirstPrefs { atl, btl },
            _ => fail(format!(
                "counts must be non-negative integers, found {:?}, {:?}",
                &record[1], &record[2]
            )),
        }
    }
    if !errors.is_empty() {
        return Err(DataError::Records(errors));
    }
    Ok(summary)
}

pub fn write_summary(summary: &FirstPrefSummary, contest: &Contest) -> String {
    let mut out = String::from("candidate,atl_papers,btl_papers\n");
    for (i, fp) in summary.counts().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            contest.candidates()[i],
            fp.atl,
            fp.btl
        ));
    }
    out
}
