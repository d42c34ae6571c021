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

//! Contests, groups, ballots and the Droop quota.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Position of a candidate in ballot-paper order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CandidateIndex(pub usize);

/// Position of a group (column) on the ballot paper.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupIndex(pub usize);

impl fmt::Display for CandidateIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub id: String,
    /// Top of the column first.
    pub members: Vec<CandidateIndex>,
    /// False for the implicit singleton group given to an ungrouped candidate.
    pub above_line: bool,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ContestError {
    #[error("contest has no candidates")]
    NoCandidates,
    #[error("duplicate candidate {0:?}")]
    DuplicateCandidate(String),
    #[error("duplicate group {0:?}")]
    DuplicateGroup(String),
    #[error("group {0:?} has no members")]
    EmptyGroup(String),
    #[error("group {group:?} lists unknown candidate {member:?}")]
    UnknownGroupMember { group: String, member: String },
    #[error("candidate {0:?} appears in more than one group, or twice in one group")]
    CandidateInMultipleGroups(String),
    #[error("seats must satisfy 1 <= seats < candidates (seats {seats}, candidates {candidates})")]
    SeatsOutOfRange { seats: usize, candidates: usize },
    #[error("invalid identifier {0:?}: use letters, digits, '_', '-' or '.'")]
    InvalidIdentifier(String),
}

impl ContestError {
    /// Stable machine-readable code for each failure.
    pub fn code(&self) -> &'static str {
        match self {
            ContestError::NoCandidates => "no-candidates",
            ContestError::DuplicateCandidate(_) => "duplicate-candidate",
            ContestError::DuplicateGroup(_) => "duplicate-group",
            ContestError::EmptyGroup(_) => "empty-group",
            ContestError::UnknownGroupMember { .. } => "unknown-group-member",
            ContestError::CandidateInMultipleGroups(_) => "candidate-in-multiple-groups",
            ContestError::SeatsOutOfRange { .. } => "seats-out-of-range",
            ContestError::InvalidIdentifier(_) => "invalid-identifier",
        }
    }
}

pub(crate) fn valid_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// An STV contest: candidates in ballot-paper order, their groups and the
/// number of seats.
///
/// Every candidate belongs to exactly one group. Candidates not listed in
/// any declared group get an implicit singleton group (appended after the
/// declared groups, with `above_line == false`), so "next member of the
/// group" logic never needs a special case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contest {
    name: String,
    seats: usize,
    candidates: Vec<String>,
    groups: Vec<Group>,
    group_of: Vec<GroupIndex>,
    candidate_lookup: HashMap<String, CandidateIndex>,
    group_lookup: HashMap<String, GroupIndex>,
}

impl Contest {
    /// Builds a contest from names. `groups` lists the declared groups as
    /// `(id, member names)`, top of column first.
    pub fn new(
        name: impl Into<String>,
        seats: usize,
        candidates: Vec<String>,
        groups: Vec<(String, Vec<String>)>,
    ) -> Result<Contest, ContestError> {
        if candidates.is_empty() {
            return Err(ContestError::NoCandidates);
        }
        let mut candidate_lookup = HashMap::new();
        for (i, c) in candidates.iter().enumerate() {
            if !valid_identifier(c) {
                return Err(ContestError::InvalidIdentifier(c.clone()));
            }
            if candidate_lookup
                .insert(c.clone(), CandidateIndex(i))
                .is_some()
            {
                return Err(ContestError::DuplicateCandidate(c.clone()));
            }
        }
        if seats == 0 || seats >= candidates.len() {
            return Err(ContestError::SeatsOutOfRange {
                seats,
                candidates: candidates.len(),
            });
        }
        let mut group_lookup = HashMap::new();
        let mut built = Vec::with_capacity(groups.len());
        let mut assigned: HashSet<CandidateIndex> = HashSet::new();
        for (id, members) in groups {
            if !valid_identifier(&id) {
                return Err(ContestError::InvalidIdentifier(id));
            }
            if group_lookup.contains_key(&id) {
                return Err(ContestError::DuplicateGroup(id));
            }
            if members.is_empty() {
                return Err(ContestError::EmptyGroup(id));
            }
            let mut idx = Vec::with_capacity(members.len());
            for m in members {
                let Some(&c) = candidate_lookup.get(&m) else {
                    return Err(ContestError::UnknownGroupMember {
                        group: id,
                        member: m,
                    });
                };
                if !assigned.insert(c) {
                    return Err(ContestError::CandidateInMultipleGroups(m));
                }
                idx.push(c);
            }
            group_lookup.insert(id.clone(), GroupIndex(built.len()));
            built.push(Group {
                id,
                members: idx,
                above_line: true,
            });
        }
        for (i, c) in candidates.iter().enumerate() {
            let ci = CandidateIndex(i);
            if assigned.contains(&ci) {
                continue;
            }
            // Implicit singleton ids share the candidate's name; a clash with
            // a declared group id is not an error, the declared one wins lookup.
            group_lookup
                .entry(c.clone())
                .or_insert(GroupIndex(built.len()));
            built.push(Group {
                id: c.clone(),
                members: vec![ci],
                above_line: false,
            });
        }
        let mut group_of = vec![GroupIndex(0); candidates.len()];
        for (g, group) in built.iter().enumerate() {
            for m in &group.members {
                group_of[m.0] = GroupIndex(g);
            }
        }
        Ok(Contest {
            name: name.into(),
            seats,
            candidates,
            groups: built,
            group_of,
            candidate_lookup,
            group_lookup,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn seats(&self) -> usize {
        self.seats
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn candidate_name(&self, c: CandidateIndex) -> &str {
        &self.candidates[c.0]
    }

    pub fn candidate_index(&self, name: &str) -> Option<CandidateIndex> {
        self.candidate_lookup.get(name).copied()
    }

    /// All groups, declared ones first, then implicit singletons.
    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Groups that have a box above the line.
    pub fn declared_groups(&self) -> impl Iterator<Item = (GroupIndex, &Group)> {
        self.groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.above_line)
            .map(|(i, g)| (GroupIndex(i), g))
    }

    pub fn group(&self, g: GroupIndex) -> &Group {
        &self.groups[g.0]
    }

    pub fn group_index(&self, id: &str) -> Option<GroupIndex> {
        self.group_lookup.get(id).copied()
    }

    pub fn group_of(&self, c: CandidateIndex) -> GroupIndex {
        self.group_of[c.0]
    }

    /// Members of `c`'s group listed after `c`, in column order.
    pub fn members_after(&self, c: CandidateIndex) -> &[CandidateIndex] {
        let members = &self.groups[self.group_of[c.0].0].members;
        let pos = members
            .iter()
            .position(|&m| m == c)
            .expect("candidate is a member of its own group");
        &members[pos + 1..]
    }

    pub fn is_last_in_group(&self, c: CandidateIndex) -> bool {
        self.members_after(c).is_empty()
    }
}

/// Droop quota.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quota(pub u64);

impl Quota {
    pub fn value(self) -> u64 {
        self.0
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("a quota needs at least one seat")]
pub struct ZeroSeats;

/// `floor(total / (seats + 1)) + 1`.
pub fn compute_quota(total_ballots: u64, seats: usize) -> Result<Quota, ZeroSeats> {
    if seats == 0 {
        return Err(ZeroSeats);
    }
    Ok(Quota(total_ballots / (seats as u64 + 1) + 1))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BallotKind {
    #[serde(rename = "ATL")]
    Atl,
    #[serde(rename = "BTL")]
    Btl,
}

impl fmt::Display for BallotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BallotKind::Atl => "ATL",
            BallotKind::Btl => "BTL",
        })
    }
}

/// The marked preferences of a ballot: groups above the line or candidates
/// below it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preferences {
    Groups(Vec<GroupIndex>),
    Candidates(Vec<CandidateIndex>),
}

/// A class of identical ballot papers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ballot {
    pub prefs: Preferences,
    pub papers: u64,
}

impl Ballot {
    pub fn atl(groups: Vec<GroupIndex>, papers: u64) -> Ballot {
        Ballot {
            prefs: Preferences::Groups(groups),
            papers,
        }
    }

    pub fn btl(candidates: Vec<CandidateIndex>, papers: u64) -> Ballot {
        Ballot {
            prefs: Preferences::Candidates(candidates),
            papers,
        }
    }

    pub fn kind(&self) -> BallotKind {
        match self.prefs {
            Preferences::Groups(_) => BallotKind::Atl,
            Preferences::Candidates(_) => BallotKind::Btl,
        }
    }

    pub fn len(&self) -> usize {
        match &self.prefs {
            Preferences::Groups(g) => g.len(),
            Preferences::Candidates(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Candidate ranking used for counting: BTL preferences as marked, ATL
    /// preferences expanded group by group in column order.
    pub fn expand(&self, contest: &Contest) -> Result<Vec<CandidateIndex>, Violation> {
        match &self.prefs {
            Preferences::Candidates(c) => {
                if let Some(bad) = c.iter().find(|c| c.0 >= contest.num_candidates()) {
                    return Err(Violation::UnknownCandidate(*bad));
                }
                Ok(c.clone())
            }
            Preferences::Groups(groups) => {
                let mut out = Vec::new();
                for g in groups {
                    if g.0 >= contest.groups().len() {
                        return Err(Violation::UnknownGroup(*g));
                    }
                    out.extend_from_slice(&contest.group(*g).members);
                }
                Ok(out)
            }
        }
    }

    /// Number of leading positions of the expansion that lie inside the first
    /// ranked group (0 for BTL ballots).
    pub fn first_group_len(&self, contest: &Contest) -> usize {
        match &self.prefs {
            Preferences::Groups(g) => g
                .first()
                .map(|g| contest.group(*g).members.len())
                .unwrap_or(0),
            Preferences::Candidates(_) => 0,
        }
    }
}

/// Expands an above-the-line ballot into a candidate ranking.
pub fn expand_atl(ballot: &Ballot, contest: &Contest) -> Result<Vec<CandidateIndex>, Violation> {
    match ballot.prefs {
        Preferences::Groups(_) => ballot.expand(contest),
        Preferences::Candidates(_) => Err(Violation::NotAboveTheLine),
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("empty preferences")]
    Empty,
    #[error("duplicate preference at position {0}")]
    DuplicatePreference(usize),
    #[error("unknown group {0:?}")]
    UnknownGroup(GroupIndex),
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(CandidateIndex),
    #[error("zero papers")]
    ZeroPapers,
    #[error("ballot is not above the line")]
    NotAboveTheLine,
}

/// Structural checks only: ids exist, no repeats, something is marked.
/// Formality rules beyond these are not modelled.
pub fn validate_ballot(ballot: &Ballot, contest: &Contest) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    if ballot.papers == 0 {
        violations.push(Violation::ZeroPapers);
    }
    if ballot.is_empty() {
        violations.push(Violation::Empty);
    }
    let ids: Vec<usize> = match &ballot.prefs {
        Preferences::Groups(g) => {
            for x in g.iter().filter(|g| g.0 >= contest.groups().len()) {
                violations.push(Violation::UnknownGroup(*x));
            }
            g.iter().map(|g| g.0).collect()
        }
        Preferences::Candidates(c) => {
            for x in c.iter().filter(|c| c.0 >= contest.num_candidates()) {
                violations.push(Violation::UnknownCandidate(*x));
            }
            c.iter().map(|c| c.0).collect()
        }
    };
    let mut seen = HashSet::new();
    for (pos, id) in ids.iter().enumerate() {
        if !seen.insert(id) {
            violations.push(Violation::DuplicatePreference(pos));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

pub fn total_papers(ballots: &[Ballot]) -> u64 {
    ballots.iter().map(|b| b.papers).sum()
}
