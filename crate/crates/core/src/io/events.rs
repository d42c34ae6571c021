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

use serde::{Deserialize, Serialize};

use super::{check_header, DataError, FORMAT_VERSION};
use crate::bounds::{EventSequence, ReplayEvent};
use crate::contest::Contest;

const FORMAT: &str = "stv-events";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventsDoc {
    format: String,
    version: u32,
    events: Vec<EventDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventDoc {
    kind: EventKindDoc,
    candidate: String,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum EventKindDoc {
    Elect,
    Eliminate,
    Seat,
}

/// ```json
/// {"format": "stv-events", "version": 1,
///  "events": [{"kind": "elect", "candidate": "a1"},
///             {"kind": "eliminate", "candidate": "c"}]}
/// ```
/// `seat` marks a last-standing seating with no surplus transfer.
pub fn parse_events(text: &str, contest: &Contest) -> Result<EventSequence, DataError> {
    check_header(text, FORMAT)?;
    let doc: EventsDoc = serde_json::from_str(text)?;
    let events = doc
        .events
        .iter()
        .map(|e| {
            let c = contest
                .candidate_index(&e.candidate)
                .ok_or_else(|| DataError::UnknownCandidate(e.candidate.clone()))?;
            Ok(match e.kind {
                EventKindDoc::Elect => ReplayEvent::Elect(c),
                EventKindDoc::Eliminate => ReplayEvent::Eliminate(c),
                EventKindDoc::Seat => ReplayEvent::Seat(c),
            })
        })
        .collect::<Result<Vec<_>, DataError>>()?;
    Ok(EventSequence::new(events)?)
}

pub fn write_events(events: &EventSequence, contest: &Contest) -> String {
    let doc = EventsDoc {
        format: FORMAT.into(),
        version: FORMAT_VERSION,
        events: events
            .events()
            .iter()
            .map(|e| EventDoc {
                kind: match e {
                    ReplayEvent::Elect(_) => EventKindDoc::Elect,
                    ReplayEvent::Eliminate(_) => EventKindDoc::Eliminate,
                    ReplayEvent::Seat(_) => EventKindDoc::Seat,
                },
                candidate: contest.candidate_name(e.candidate()).to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("events serialize") + "\n"
}
