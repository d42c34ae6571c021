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

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{check_header, DataError, RationalDoc, FORMAT_VERSION};
use crate::contest::{Ballot, BallotKind, CandidateIndex, GroupIndex, Preferences, Quota};
use crate::engine::{CountLog, EventKind, RoundEvent, ValueIncrease};

const FORMAT: &str = "stv-round-log";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogDoc {
    format: String,
    version: u32,
    contest: String,
    candidates: Vec<String>,
    groups: Vec<String>,
    seats: usize,
    total_papers: u64,
    quota: u64,
    events: Vec<EventDoc>,
    seated: Vec<String>,
    anomalies: Vec<AnomalyDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventDoc {
    round: usize,
    kind: String,
    candidate: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    transfer_value: Option<RationalDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    has_quota: Option<bool>,
    tallies: Vec<TallyDoc>,
    exhausted: RationalDoc,
    rounding_loss: RationalDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TallyDoc {
    candidate: String,
    tally: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnomalyDoc {
    round: usize,
    kind: BallotKind,
    preferences: Vec<String>,
    papers: u64,
    old_value: RationalDoc,
    new_value: RationalDoc,
}

/// Serializes a count log. The document is self-contained: candidate and
/// group ids are embedded, so it can be read back without the contest.
pub fn write_round_log(log: &CountLog) -> String {
    let name = |c: CandidateIndex| log.candidates[c.0].clone();
    let doc = LogDoc {
        format: FORMAT.into(),
        version: FORMAT_VERSION,
        contest: log.contest_name.clone(),
        candidates: log.candidates.clone(),
        groups: log.groups.clone(),
        seats: log.seats,
        total_papers: log.total_papers,
        quota: log.quota.value(),
        events: log
            .events
            .iter()
            .map(|e| {
                let (kind, transfer_value, has_quota) = match &e.kind {
                    EventKind::Elect { transfer_value, .. } => (
                        "elect",
                        transfer_value.as_ref().map(RationalDoc::from),
                        None,
                    ),
                    EventKind::Eliminate { .. } => ("eliminate", None, None),
                    EventKind::SeatWithoutQuota { has_quota, .. } => {
                        ("seat_without_quota", None, Some(*has_quota))
                    }
                };
                EventDoc {
                    round: e.round,
                    kind: kind.into(),
                    candidate: name(e.kind.candidate()),
                    transfer_value,
                    has_quota,
                    tallies: e
                        .tallies
                        .iter()
                        .map(|(c, t)| TallyDoc {
                            candidate: name(*c),
                            tally: *t,
                        })
                        .collect(),
                    exhausted: (&e.exhausted).into(),
                    rounding_loss: (&e.rounding_loss).into(),
                }
            })
            .collect(),
        seated: log.seated.iter().map(|c| name(*c)).collect(),
        anomalies: log
            .anomalies
            .iter()
            .map(|a| AnomalyDoc {
                round: a.round,
                kind: a.ballot.kind(),
                preferences: match &a.ballot.prefs {
                    Preferences::Groups(g) => g.iter().map(|g| log.groups[g.0].clone()).collect(),
                    Preferences::Candidates(c) => c.iter().map(|c| name(*c)).collect(),
                },
                papers: a.ballot.papers,
                old_value: (&a.old_value).into(),
                new_value: (&a.new_value).into(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("log serializes") + "\n"
}

pub fn read_round_log(text: &str) -> Result<CountLog, DataError> {
    check_header(text, FORMAT)?;
    let doc: LogDoc = serde_json::from_str(text)?;
    let lookup: HashMap<&str, CandidateIndex> = doc
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), CandidateIndex(i)))
        .collect();
    let groups: HashMap<&str, GroupIndex> = doc
        .groups
        .iter()
        .enumerate()
        .map(|(i, g)| (g.as_str(), GroupIndex(i)))
        .collect();
    let cand = |s: &str| {
        lookup
            .get(s)
            .copied()
            .ok_or_else(|| DataError::UnknownCandidate(s.to_string()))
    };
    let rational = |r: &RationalDoc| BigRational::try_from(r);
    let mut events = Vec::with_capacity(doc.events.len());
    for e in &doc.events {
        let candidate = cand(&e.candidate)?;
        let kind = match e.kind.as_str() {
            "elect" => EventKind::Elect {
                candidate,
                transfer_value: e.transfer_value.as_ref().map(rational).transpose()?,
            },
            "eliminate" => EventKind::Eliminate { candidate },
            "seat_without_quota" => EventKind::SeatWithoutQuota {
                candidate,
                has_quota: e
                    .has_quota
                    .ok_or_else(|| DataError::Invalid("seat without has_quota".into()))?,
            },
            other => return Err(DataError::Invalid(format!("unknown event kind {other:?}"))),
        };
        events.push(RoundEvent {
            round: e.round,
            kind,
            tallies: e
                .tallies
                .iter()
                .map(|t| Ok((cand(&t.candidate)?, t.tally)))
                .collect::<Result<_, DataError>>()?,
            exhausted: rational(&e.exhausted)?,
            rounding_loss: rational(&e.rounding_loss)?,
        });
    }
    let anomalies = doc
        .anomalies
        .iter()
        .map(|a| {
            let prefs = match a.kind {
                BallotKind::Atl => Preferences::Groups(
                    a.preferences
                        .iter()
                        .map(|g| {
                            groups
                                .get(g.as_str())
                                .copied()
                                .ok_or_else(|| DataError::UnknownGroup(g.clone()))
                        })
                        .collect::<Result<_, _>>()?,
                ),
                BallotKind::Btl => Preferences::Candidates(
                    a.preferences
                        .iter()
                        .map(|c| cand(c))
                        .collect::<Result<_, _>>()?,
                ),
            };
            Ok(ValueIncrease {
                ballot: Ballot {
                    prefs,
                    papers: a.papers,
                },
                round: a.round,
                old_value: rational(&a.old_value)?,
                new_value: rational(&a.new_value)?,
            })
        })
        .collect::<Result<_, DataError>>()?;
    Ok(CountLog {
        contest_name: doc.contest,
        candidates: doc.candidates.clone(),
        groups: doc.groups.clone(),
        seats: doc.seats,
        total_papers: doc.total_papers,
        quota: Quota(doc.quota),
        events,
        seated: doc
            .seated
            .iter()
            .map(|c| cand(c))
            .collect::<Result<_, _>>()?,
        anomalies,
    })
}
