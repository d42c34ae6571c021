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

//! Adapter for published formal-preference files.
//!
//! The supported layout is the one used for the 2019 and 2022 federal Senate
//! downloads: a header row, six metadata columns (state, division, vote
//! collection point name and id, batch and paper number), one column per
//! above-the-line box in group order, then one column per candidate in
//! ballot-paper order. Each cell is blank or a rank; `*` and `/` count as 1.
//! A separator row of dashes under the header is skipped.
//!
//! A row becomes a BTL ballot when its below-the-line marks form a ranking
//! `1, 2, ..., k` with `k >= min_btl`; otherwise an ATL ballot when the
//! above-the-line marks start a ranking at 1; otherwise it is informal and
//! skipped. Rows carrying both kinds of marks therefore count below the line.

use std::collections::HashMap;

use super::DataError;
use crate::contest::{Ballot, CandidateIndex, Contest, GroupIndex, Preferences};

/// Column layout of a preference file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalLayout {
    pub metadata_columns: usize,
    pub atl_columns: Vec<GroupIndex>,
    pub btl_columns: Vec<CandidateIndex>,
    /// Shortest below-the-line ranking that takes precedence over the
    /// above-the-line marks. Capped at the number of candidates.
    pub min_btl: usize,
}

impl ExternalLayout {
    /// 2019/2022 federal layout for a contest whose candidates are listed in
    /// ballot-paper order.
    pub fn aec_2019(contest: &Contest) -> ExternalLayout {
        ExternalLayout {
            metadata_columns: 6,
            atl_columns: contest.declared_groups().map(|(g, _)| g).collect(),
            btl_columns: (0..contest.num_candidates()).map(CandidateIndex).collect(),
            min_btl: 6,
        }
    }

    fn width(&self) -> usize {
        self.metadata_columns + self.atl_columns.len() + self.btl_columns.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IngestResult {
    pub ballots: Vec<Ballot>,
    pub rows: usize,
    pub informal: usize,
    /// How mixed ATL/BTL rows were classified.
    pub precedence: &'static str,
}

/// Ranks of the cells, following 1, 2, 3, ... until a rank is missing or
/// repeated.
fn ranking<T: Copy>(cells: &[&str], ids: &[T]) -> Vec<T> {
    let mut by_rank: HashMap<u32, Vec<T>> = HashMap::new();
    for (cell, id) in cells.iter().zip(ids) {
        let rank = match cell.trim() {
            "" => continue,
            "*" | "/" => 1,
            other => match other.parse::<u32>() {
                Ok(r) if r > 0 => r,
                _ => continue,
            },
        };
        by_rank.entry(rank).or_default().push(*id);
    }
    let mut out = Vec::new();
    let mut k = 1;
    while let Some(ids) = by_rank.get(&k) {
        if ids.len() != 1 {
            break;
        }
        out.push(ids[0]);
        k += 1;
    }
    out
}

pub fn ingest_external_preferences(
    text: &str,
    contest: &Contest,
    layout: &ExternalLayout,
) -> Result<IngestResult, DataError> {
    if let Some(g) = layout
        .atl_columns
        .iter()
        .find(|g| g.0 >= contest.groups().len())
    {
        return Err(DataError::UnknownGroup(format!("{g:?}")));
    }
    if let Some(c) = layout
        .btl_columns
        .iter()
        .find(|c| c.0 >= contest.num_candidates())
    {
        return Err(DataError::UnknownCandidate(format!("{c:?}")));
    }
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(text.as_bytes());
    let width = reader.headers()?.len();
    if width != layout.width() {
        return Err(DataError::Schema {
            expected: format!("{} columns", layout.width()),
            found: format!("{width} columns"),
        });
    }
    let min_btl = layout.min_btl.clamp(1, layout.btl_columns.len().max(1));
    let atl_start = layout.metadata_columns;
    let btl_start = atl_start + layout.atl_columns.len();
    let mut index: HashMap<Preferences, usize> = HashMap::new();
    let mut ballots: Vec<Ballot> = Vec::new();
    let mut rows = 0;
    let mut informal = 0;
    for record in reader.records() {
        let record = record?;
        if record.get(0).is_some_and(|f| f.starts_with('-')) {
            continue;
        }
        if record.len() != width {
            return Err(DataError::Invalid(format!(
                "row at line {} has {} columns, expected {width}",
                record.position().map(|p| p.line()).unwrap_or(0),
                record.len()
            )));
        }
        rows += 1;
        let cells: Vec<&str> = record.iter().collect();
        let btl = ranking(&cells[btl_start..], &layout.btl_columns);
        let prefs = if btl.len() >= min_btl {
            Preferences::Candidates(btl)
        } else {
            let atl = ranking(&cells[atl_start..btl_start], &layout.atl_columns);
            if atl.is_empty() {
                informal += 1;
                continue;
            }
            Preferences::Groups(atl)
        };
        match index.get(&prefs) {
            Some(&i) => ballots[i].papers += 1,
            None => {
                index.insert(prefs.clone(), ballots.len());
                ballots.push(Ballot { prefs, papers: 1 });
            }
        }
    }
    Ok(IngestResult {
        ballots,
        rows,
        informal,
        precedence: "btl-over-atl",
    })
}
