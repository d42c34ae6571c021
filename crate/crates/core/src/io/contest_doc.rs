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
use crate::contest::Contest;

pub(crate) const FORMAT: &str = "stv-contest";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContestDoc {
    format: String,
    version: u32,
    name: String,
    seats: usize,
    candidates: Vec<String>,
    #[serde(default)]
    groups: Vec<GroupDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    id: String,
    members: Vec<String>,
}

/// ```json
/// {"format": "stv-contest", "version": 1, "name": "example", "seats": 2,
///  "candidates": ["a1", "a2", "b"],
///  "groups": [{"id": "A", "members": ["a1", "a2"]}]}
/// ```
/// Candidates missing from `groups` are ungrouped.
pub fn parse_contest(text: &str) -> Result<Contest, DataError> {
    check_header(text, FORMAT)?;
    let doc: ContestDoc = serde_json::from_str(text)?;
    Ok(Contest::new(
        doc.name,
        doc.seats,
        doc.candidates,
        doc.groups.into_iter().map(|g| (g.id, g.members)).collect(),
    )?)
}

pub fn write_contest(contest: &Contest) -> String {
    let doc = ContestDoc {
        format: FORMAT.into(),
        version: FORMAT_VERSION,
        name: contest.name().into(),
        seats: contest.seats(),
        candidates: contest.candidates().to_vec(),
        groups: contest
            .declared_groups()
            .map(|(_, g)| GroupDoc {
                id: g.id.clone(),
                members: g
                    .members
                    .iter()
                    .map(|m| contest.candidate_name(*m).to_string())
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("contest serializes") + "\n"
}
