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
use crate::bounds::{
    BoundsRound, CandidateBounds, EventGuarantee, GuaranteeReport, Interval, ReplayEvent,
};
use crate::contest::{CandidateIndex, Contest, Quota};

const FORMAT: &str = "stv-guarantee-report";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportDoc {
    format: String,
    version: u32,
    candidates: Vec<String>,
    quota: u64,
    guaranteed_prefix_length: usize,
    guaranteed: Vec<String>,
    /// Always "unverified": only membership of the prefix is certified.
    ordering: String,
    events: Vec<EventDoc>,
    rounds: Vec<RoundDoc>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum KindDoc {
    Elect,
    Eliminate,
    Seat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventDoc {
    round: usize,
    kind: KindDoc,
    candidate: String,
    tally: Interval<RationalDoc>,
    guaranteed: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoundDoc {
    round: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    after: Option<AfterDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    surplus: Option<Interval<RationalDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transfer_value: Option<Interval<RationalDoc>>,
    bounds: Vec<BoundsDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AfterDoc {
    kind: KindDoc,
    candidate: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsDoc {
    candidate: String,
    atl_value: Interval<RationalDoc>,
    btl_value: Interval<RationalDoc>,
    atl_papers: Interval<u64>,
    btl_papers: Interval<u64>,
}

fn interval_doc(i: &Interval<BigRational>) -> Interval<RationalDoc> {
    Interval {
        lo: (&i.lo).into(),
        hi: (&i.hi).into(),
    }
}

fn interval(i: &Interval<RationalDoc>) -> Result<Interval<BigRational>, DataError> {
    Ok(Interval {
        lo: BigRational::try_from(&i.lo)?,
        hi: BigRational::try_from(&i.hi)?,
    })
}

fn kind_doc(e: &ReplayEvent) -> KindDoc {
    match e {
        ReplayEvent::Elect(_) => KindDoc::Elect,
        ReplayEvent::Eliminate(_) => KindDoc::Eliminate,
        ReplayEvent::Seat(_) => KindDoc::Seat,
    }
}

fn replay(kind: KindDoc, c: CandidateIndex) -> ReplayEvent {
    match kind {
        KindDoc::Elect => ReplayEvent::Elect(c),
        KindDoc::Eliminate => ReplayEvent::Eliminate(c),
        KindDoc::Seat => ReplayEvent::Seat(c),
    }
}

/// Guarantee report with the full bounds trace; removed candidates are
/// omitted from each round.
pub fn write_report(report: &GuaranteeReport, contest: &Contest) -> String {
    let name = |c: CandidateIndex| contest.candidate_name(c).to_string();
    let doc = ReportDoc {
        format: FORMAT.into(),
        version: FORMAT_VERSION,
        candidates: contest.candidates().to_vec(),
        quota: report.quota.value(),
        guaranteed_prefix_length: report.guaranteed_prefix_length,
        guaranteed: report
            .guaranteed_candidates()
            .into_iter()
            .map(name)
            .collect(),
        ordering: "unverified".into(),
        events: report
            .per_event
            .iter()
            .map(|e| EventDoc {
                round: e.round,
                kind: kind_doc(&e.event),
                candidate: name(e.event.candidate()),
                tally: interval_doc(&e.tally),
                guaranteed: e.guaranteed,
            })
            .collect(),
        rounds: report
            .trace
            .iter()
            .map(|r| RoundDoc {
                round: r.round,
                after: r.event.map(|e| AfterDoc {
                    kind: kind_doc(&e),
                    candidate: name(e.candidate()),
                }),
                surplus: r.surplus.as_ref().map(interval_doc),
                transfer_value: r.transfer_value.as_ref().map(interval_doc),
                bounds: r
                    .remaining()
                    .map(|(c, b)| BoundsDoc {
                        candidate: name(c),
                        atl_value: interval_doc(&b.atl_value),
                        btl_value: interval_doc(&b.btl_value),
                        atl_papers: b.atl_papers.clone(),
                        btl_papers: b.btl_papers.clone(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
}

pub fn read_report(text: &str) -> Result<GuaranteeReport, DataError> {
    check_header(text, FORMAT)?;
    let doc: ReportDoc = serde_json::from_str(text)?;
    let lookup: HashMap<&str, CandidateIndex> = doc
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), CandidateIndex(i)))
        .collect();
    let cand = |s: &str| {
        lookup
            .get(s)
            .copied()
            .ok_or_else(|| DataError::UnknownCandidate(s.to_string()))
    };
    let per_event = doc
        .events
        .iter()
        .map(|e| {
            Ok(EventGuarantee {
                round: e.round,
                event: replay(e.kind, cand(&e.candidate)?),
                tally: interval(&e.tally)?,
                guaranteed: e.guaranteed,
            })
        })
        .collect::<Result<Vec<_>, DataError>>()?;
    let trace = doc
        .rounds
        .iter()
        .map(|r| {
            let mut candidates = vec![None; doc.candidates.len()];
            for b in &r.bounds {
                candidates[cand(&b.candidate)?.0] = Some(CandidateBounds {
                    atl_value: interval(&b.atl_value)?,
                    btl_value: interval(&b.btl_value)?,
                    atl_papers: b.atl_papers.clone(),
                    btl_papers: b.btl_papers.clone(),
                });
            }
            Ok(BoundsRound {
                round: r.round,
                candidates,
                event: r
                    .after
                    .as_ref()
                    .map(|a| Ok::<_, DataError>(replay(a.kind, cand(&a.candidate)?)))
                    .transpose()?,
                surplus: r.surplus.as_ref().map(interval).transpose()?,
                transfer_value: r.transfer_value.as_ref().map(interval).transpose()?,
            })
        })
        .collect::<Result<Vec<_>, DataError>>()?;
    if doc.guaranteed_prefix_length > per_event.len() {
        return Err(DataError::Invalid(
            "prefix longer than the event list".into(),
        ));
    }
    Ok(GuaranteeReport {
        quota: Quota(doc.quota),
        per_event,
        guaranteed_prefix_length: doc.guaranteed_prefix_length,
        trace,
    })
}
