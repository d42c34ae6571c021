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

use std::collections::HashMap;

use super::{DataError, RecordError};
use crate::contest::{validate_ballot, Ballot, BallotKind, Contest, Preferences};

/// Aggregated ballots read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallotFile {
    /// Identical records merged, in order of first appearance.
    pub ballots: Vec<Ballot>,
    pub total_papers: u64,
}

const HEADER: [&str; 3] = ["kind", "preferences", "papers"];

/// CSV with header `kind,preferences,papers`. `kind` is `ATL` or `BTL`;
/// `preferences` lists group ids (ATL) or candidate ids (BTL) separated by
/// `>`, most preferred first; `papers` is a positive count.
///
/// ```text
/// kind,preferences,papers
/// ATL,A,410
/// BTL,b>a3>c,101
/// ```
pub fn parse_ballots(text: &str, contest: &Contest) -> Result<BallotFile, DataError> {
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
    let mut errors = Vec::new();
    let mut index: HashMap<Preferences, usize> = HashMap::new();
    let mut ballots: Vec<Ballot> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        match parse_record(&record, contest) {
            Ok(ballot) => match index.get(&ballot.prefs) {
                Some(&i) => ballots[i].papers += ballot.papers,
                None => {
                    index.insert(ballot.prefs.clone(), ballots.len());
                    ballots.push(ballot);
                }
            },
            Err(message) => errors.push(RecordError { line, message }),
        }
    }
    if !errors.is_empty() {
        return Err(DataError::Records(errors));
    }
    let total_papers = ballots.iter().map(|b| b.papers).sum();
    Ok(BallotFile {
        ballots,
        total_papers,
    })
}

fn parse_record(record: &csv::StringRecord, contest: &Contest) -> Result<Ballot, String> {
    if record.len() != 3 {
        return Err(format!("expected 3 fields, found {}", record.len()));
    }
    let kind = match &record[0] {
        "ATL" => BallotKind::Atl,
        "BTL" => BallotKind::Btl,
        other => return Err(format!("kind must be ATL or BTL, found {other:?}")),
    };
    let ids: Vec<&str> = if record[1].is_empty() {
        Vec::new()
    } else {
        record[1].split('>').map(str::trim).collect()
    };
    let papers: u64 = record[2]
        .parse()
        .map_err(|_| format!("papers must be a positive integer, found {:?}", &record[2]))?;
    let prefs = match kind {
        BallotKind::Atl => Preferences::Groups(
            ids.iter()
                .map(|id| {
                    contest
                        .group_index(id)
                        .ok_or_else(|| format!("unknown group {id:?}"))
                })
                .collect::<Result<_, _>>()?,
        ),
        BallotKind::Btl => Preferences::Candidates(
            ids.iter()
                .map(|id| {
                    contest
                        .candidate_index(id)
                        .ok_or_else(|| format!("unknown candidate {id:?}"))
                })
                .collect::<Result<_, _>>()?,
        ),
    };
    let ballot = Ballot { prefs, papers };
    validate_ballot(&ballot, contest).map_err(|v| {
        v.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    })?;
    Ok(ballot)
}

pub(crate) fn preference_ids(ballot: &Ballot, contest: &Contest) -> Vec<String> {
    match &ballot.prefs {
        Preferences::Groups(g) => g.iter().map(|g| contest.group(*g).id.clone()).collect(),
        Preferences::Candidates(c) => c
            .iter()
            .map(|c| contest.candidate_name(*c).to_string())
            .collect(),
    }
}

pub fn write_ballots(ballots: &[Ballot], contest: &Contest) -> String {
    let mut out = String::from("kind,preferences,papers\n");
    for b in ballots {
        out.push_str(&format!(
            "{},{},{}\n",
            b.kind(),
            preference_ids(b, contest).join(">"),
            b.papers
        ));
    }
    out
}
