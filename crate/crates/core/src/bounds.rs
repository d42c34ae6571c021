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

//! Lower and upper bounds on candidate tallies, propagated from exact
//! first-preference ATL/BTL counts through a sequence of elections and
//! eliminations.
//!
//! For every continuing candidate we track intervals on the value and on
//! the number of papers in their pile, split into ATL papers (above-the-line
//! ballots still inside their first-ranked group, whose movement is known)
//! and BTL papers (everything else, whose movement is not). In the first
//! round every interval is a single point. An election or elimination then
//! widens the intervals of the candidates who might receive the departing
//! papers; BTL lower bounds never grow, since those papers may exhaust.
//!
//! A candidate whose lower tally bound reaches the quota when they are
//! elected is guaranteed a seat, provided the first-preference counts are
//! accurate.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contest::{compute_quota, CandidateIndex, Contest, Quota};
use crate::engine::{CountLog, EventKind};
use crate::rational::from_u64;

/// Hand-countable first-preference papers for one candidate.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstPrefs {
    pub atl: u64,
    pub btl: u64,
}

impl FirstPrefs {
    pub fn total(&self) -> u64 {
        self.atl + self.btl
    }
}

/// First-preference ATL/BTL paper counts for every candidate, in
/// ballot-paper order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstPrefSummary {
    counts: Vec<FirstPrefs>,
}

impl FirstPrefSummary {
    pub fn new(counts: Vec<FirstPrefs>) -> FirstPrefSummary {
        FirstPrefSummary { counts }
    }

    pub fn zeros(candidates: usize) -> FirstPrefSummary {
        FirstPrefSummary {
            counts: vec![FirstPrefs::default(); candidates],
        }
    }

    pub fn counts(&self) -> &[FirstPrefs] {
        &self.counts
    }

    pub fn get(&self, c: CandidateIndex) -> FirstPrefs {
        self.counts[c.0]
    }

    pub fn get_mut(&mut self, c: CandidateIndex) -> &mut FirstPrefs {
        &mut self.counts[c.0]
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(FirstPrefs::total).sum()
    }

    pub fn total_atl(&self) -> u64 {
        self.counts.iter().map(|c| c.atl).sum()
    }

    pub fn total_btl(&self) -> u64 {
        self.counts.iter().map(|c| c.btl).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Clone + PartialOrd> Interval<T> {
    pub fn point(v: T) -> Interval<T> {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn contains(&self, v: &T) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval<T>) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_ordered(&self) -> bool {
        self.lo <= self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateBounds {
    pub atl_value: Interval<BigRational>,
    pub btl_value: Interval<BigRational>,
    pub atl_papers: Interval<u64>,
    pub btl_papers: Interval<u64>,
}

impl CandidateBounds {
    pub fn from_first_prefs(fp: FirstPrefs) -> CandidateBounds {
        CandidateBounds {
            atl_value: Interval::point(from_u64(fp.atl)),
            btl_value: Interval::point(from_u64(fp.btl)),
            atl_papers: Interval::point(fp.atl),
            btl_papers: Interval::point(fp.btl),
        }
    }

    pub fn tally(&self) -> Interval<BigRational> {
        Interval {
            lo: &self.atl_value.lo + &self.btl_value.lo,
            hi: &self.atl_value.hi + &self.btl_value.hi,
        }
    }

    pub fn papers(&self) -> Interval<u64> {
        Interval {
            lo: self.atl_papers.lo + self.btl_papers.lo,
            hi: self.atl_papers.hi + self.btl_papers.hi,
        }
    }

    pub fn is_ordered(&self) -> bool {
        self.atl_value.is_ordered()
            && self.btl_value.is_ordered()
            && self.atl_papers.is_ordered()
            && self.btl_papers.is_ordered()
    }

    /// True if every interval of `self` contains the matching one of `other`.
    pub fn contains(&self, other: &CandidateBounds) -> bool {
        self.atl_value.contains_interval(&other.atl_value)
            && self.btl_value.contains_interval(&other.btl_value)
            && self.atl_papers.contains_interval(&other.atl_papers)
            && self.btl_papers.contains_interval(&other.btl_papers)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "candidate", rename_all = "lowercase")]
pub enum ReplayEvent {
    Elect(CandidateIndex),
    Eliminate(CandidateIndex),
    /// Seated as one of the last candidates standing: no surplus moves.
    Seat(CandidateIndex),
}

impl ReplayEvent {
    pub fn candidate(&self) -> CandidateIndex {
        match *self {
            ReplayEvent::Elect(c) | ReplayEvent::Eliminate(c) | ReplayEvent::Seat(c) => c,
        }
    }

    pub fn is_seating(&self) -> bool {
        !matches!(self, ReplayEvent::Eliminate(_))
    }
}

/// A reported outcome to replay: each candidate appears at most once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSequence(Vec<ReplayEvent>);

impl EventSequence {
    pub fn new(events: Vec<ReplayEvent>) -> Result<EventSequence, BoundsError> {
        let mut seen = std::collections::HashSet::new();
        for e in &events {
            if !seen.insert(e.candidate()) {
                return Err(BoundsError::RepeatedCandidate(e.candidate()));
            }
        }
        Ok(EventSequence(events))
    }

    /// The events of a completed count. Last-standing seatings become
    /// [`ReplayEvent::Seat`].
    pub fn from_log(log: &CountLog) -> EventSequence {
        EventSequence(
            log.events
                .iter()
                .map(|e| match e.kind {
                    EventKind::Elect { candidate, .. } => ReplayEvent::Elect(candidate),
                    EventKind::Eliminate { candidate } => ReplayEvent::Eliminate(candidate),
                    EventKind::SeatWithoutQuota { candidate, .. } => ReplayEvent::Seat(candidate),
                })
                .collect(),
        )
    }

    pub fn events(&self) -> &[ReplayEvent] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Bounds at the start of a round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsRound {
    pub round: usize,
    /// `None` once a candidate has been elected or eliminated.
    pub candidates: Vec<Option<CandidateBounds>>,
    /// The event of the previous round that produced these bounds.
    pub event: Option<ReplayEvent>,
    /// Surplus bounds of that event, when it was an election with a transfer.
    pub surplus: Option<Interval<BigRational>>,
    /// Transfer value bounds of that event, when it was an election with a
    /// transfer.
    pub transfer_value: Option<Interval<BigRational>>,
}

impl BoundsRound {
    pub fn get(&self, c: CandidateIndex) -> Result<&CandidateBounds, BoundsError> {
        match self.candidates.get(c.0) {
            None => Err(BoundsError::UnknownCandidate(c)),
            Some(None) => Err(BoundsError::AlreadyRemoved(c)),
            Some(Some(b)) => Ok(b),
        }
    }

    pub fn remaining(&self) -> impl Iterator<Item = (CandidateIndex, &CandidateBounds)> {
        self.candidates
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.as_ref().map(|b| (CandidateIndex(i), b)))
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(CandidateIndex),
    #[error("candidate {0:?} was already elected or eliminated")]
    AlreadyRemoved(CandidateIndex),
    #[error("candidate {0:?} appears more than once in the event sequence")]
    RepeatedCandidate(CandidateIndex),
    #[error("summary has {found} candidates, contest has {expected}")]
    SummaryMismatch { expected: usize, found: usize },
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct AnalyzerOptions {
    /// Grow BTL paper upper bounds on elimination by the eliminated
    /// candidate's ATL paper upper bound instead of their BTL one. Only for
    /// reproducing results computed that way: it can undercount papers.
    pub literal_elimination_papers: bool,
}

/// Where the ATL papers of a departing candidate can go.
enum AtlDestination {
    /// Certainly the next member: every later member in between is
    /// certainly at a quota, and this one is certainly below it.
    Member(CandidateIndex),
    /// One of these members, or beyond them if `reaches_end`.
    Uncertain {
        members: Vec<CandidateIndex>,
        reaches_end: bool,
    },
    /// No continuing member below the quota follows in the group; the papers
    /// need the ballot's later group preferences.
    LeavesGroup,
}

/// Applies the bound updates for one contest.
#[derive(Clone, Debug)]
pub struct Analyzer<'a> {
    contest: &'a Contest,
    quota: Quota,
    total: u64,
    total_atl: u64,
    options: AnalyzerOptions,
}

impl<'a> Analyzer<'a> {
    pub fn new(
        contest: &'a Contest,
        summary: &FirstPrefSummary,
        options: AnalyzerOptions,
    ) -> Result<Analyzer<'a>, BoundsError> {
        if summary.len() != contest.num_candidates() {
            return Err(BoundsError::SummaryMismatch {
                expected: contest.num_candidates(),
                found: summary.len(),
            });
        }
        let total = summary.total();
        Ok(Analyzer {
            contest,
            quota: compute_quota(total, contest.seats()).expect("contest has seats"),
            total,
            total_atl: summary.total_atl(),
            options,
        })
    }

    pub fn quota(&self) -> Quota {
        self.quota
    }

    /// Round-one bounds: every interval is the exact first-preference count.
    pub fn init_bounds(&self, summary: &FirstPrefSummary) -> Result<BoundsRound, BoundsError> {
        if summary.len() != self.contest.num_candidates() {
            return Err(BoundsError::SummaryMismatch {
                expected: self.contest.num_candidates(),
                found: summary.len(),
            });
        }
        Ok(BoundsRound {
            round: 1,
            candidates: summary
                .counts()
                .iter()
                .map(|fp| Some(CandidateBounds::from_first_prefs(*fp)))
                .collect(),
            event: None,
            surplus: None,
            transfer_value: None,
        })
    }

    pub fn apply(
        &self,
        state: &BoundsRound,
        event: ReplayEvent,
    ) -> Result<BoundsRound, BoundsError> {
        match event {
            ReplayEvent::Elect(c) => self.elect_update(state, c),
            ReplayEvent::Eliminate(c) => self.eliminate_update(state, c),
            ReplayEvent::Seat(c) => self.seat_update(state, c),
        }
    }

    fn quota_r(&self) -> BigRational {
        from_u64(self.quota.value())
    }

    fn destination(&self, state: &BoundsRound, from: CandidateIndex) -> AtlDestination {
        let q = self.quota_r();
        let mut maybe = Vec::new();
        for &m in self.contest.members_after(from) {
            let Some(Some(b)) = state.candidates.get(m.0) else {
                continue;
            };
            let t = b.tally();
            if t.lo >= q {
                continue;
            }
            if t.hi < q {
                if maybe.is_empty() {
                    return AtlDestination::Member(m);
                }
                maybe.push(m);
                return AtlDestination::Uncertain {
                    members: maybe,
                    reaches_end: false,
                };
            }
            maybe.push(m);
        }
        if maybe.is_empty() {
            AtlDestination::LeavesGroup
        } else {
            AtlDestination::Uncertain {
                members: maybe,
                reaches_end: true,
            }
        }
    }

    /// Bounds after electing `elected` with a surplus transfer.
    pub fn elect_update(
        &self,
        state: &BoundsRound,
        elected: CandidateIndex,
    ) -> Result<BoundsRound, BoundsError> {
        let e = state.get(elected)?.clone();
        let q = self.quota_r();
        let tally = e.tally();
        let papers = e.papers();
        let zero = BigRational::zero();
        let one = BigRational::one();
        let surplus = Interval {
            lo: (&tally.lo - &q).max(zero.clone()),
            hi: (&tally.hi - &q).max(zero.clone()),
        };
        let tv_lo = if papers.hi == 0 {
            zero.clone()
        } else {
            (&surplus.lo / from_u64(papers.hi)).min(one.clone())
        };
        let tv_hi = if papers.lo == 0 {
            if surplus.hi.is_zero() {
                zero.clone()
            } else {
                one.clone()
            }
        } else {
            (&surplus.hi / from_u64(papers.lo)).min(one.clone())
        };

        // Receivers are judged on the bounds at the start of the round.
        let receivers: Vec<CandidateIndex> = state
            .remaining()
            .filter(|(c, b)| *c != elected && b.tally().lo < q)
            .map(|(c, _)| c)
            .collect();
        let mut next = self.successor(state, elected, ReplayEvent::Elect(elected));

        let btl_gain = &tv_hi * from_u64(e.btl_papers.hi);
        for &c in &receivers {
            let b = next.candidates[c.0].as_mut().unwrap();
            b.btl_value.hi += &btl_gain;
            b.btl_papers.hi += e.btl_papers.hi;
        }

        let atl_gain_hi = &tv_hi * from_u64(e.atl_papers.hi);
        match self.destination(state, elected) {
            AtlDestination::Member(n) => {
                let b = next.candidates[n.0].as_mut().unwrap();
                b.atl_value.hi += &atl_gain_hi;
                b.atl_papers.hi += e.atl_papers.hi;
                // Tallies are floored on surplus transfers.
                b.atl_value.lo += (&tv_lo * from_u64(e.atl_papers.lo)).floor();
                b.atl_papers.lo += e.atl_papers.lo;
            }
            AtlDestination::Uncertain {
                members,
                reaches_end,
            } => {
                for m in members {
                    let b = next.candidates[m.0].as_mut().unwrap();
                    b.atl_value.hi += &atl_gain_hi;
                    b.atl_papers.hi += e.atl_papers.hi;
                }
                if reaches_end {
                    self.fold_as_btl(&mut next, &receivers, &atl_gain_hi, e.atl_papers.hi);
                }
            }
            AtlDestination::LeavesGroup => {
                self.fold_as_btl(&mut next, &receivers, &atl_gain_hi, e.atl_papers.hi);
            }
        }
        self.clamp(&mut next);
        next.surplus = Some(surplus);
        next.transfer_value = Some(Interval {
            lo: tv_lo,
            hi: tv_hi,
        });
        Ok(next)
    }

    /// Bounds after eliminating `eliminated`; papers move at their value.
    pub fn eliminate_update(
        &self,
        state: &BoundsRound,
        eliminated: CandidateIndex,
    ) -> Result<BoundsRound, BoundsError> {
        let e = state.get(eliminated)?.clone();
        let receivers: Vec<CandidateIndex> = state
            .remaining()
            .filter(|(c, _)| *c != eliminated)
            .map(|(c, _)| c)
            .collect();
        let mut next = self.successor(state, eliminated, ReplayEvent::Eliminate(eliminated));

        let btl_paper_gain = if self.options.literal_elimination_papers {
            e.atl_papers.hi
        } else {
            e.btl_papers.hi
        };
        for &c in &receivers {
            let b = next.candidates[c.0].as_mut().unwrap();
            b.btl_value.hi += &e.btl_value.hi;
            b.btl_papers.hi += btl_paper_gain;
        }

        match self.destination(state, eliminated) {
            AtlDestination::Member(n) => {
                let b = next.candidates[n.0].as_mut().unwrap();
                b.atl_value.hi += &e.atl_value.hi;
                b.atl_papers.hi += e.atl_papers.hi;
                b.atl_value.lo += &e.atl_value.lo;
                b.atl_papers.lo += e.atl_papers.lo;
            }
            AtlDestination::Uncertain {
                members,
                reaches_end,
            } => {
                for m in members {
                    let b = next.candidates[m.0].as_mut().unwrap();
                    b.atl_value.hi += &e.atl_value.hi;
                    b.atl_papers.hi += e.atl_papers.hi;
                }
                if reaches_end {
                    self.fold_as_btl(&mut next, &receivers, &e.atl_value.hi, e.atl_papers.hi);
                }
            }
            AtlDestination::LeavesGroup => {
                self.fold_as_btl(&mut next, &receivers, &e.atl_value.hi, e.atl_papers.hi);
            }
        }
        self.clamp(&mut next);
        Ok(next)
    }

    /// Bounds after seating a last-standing candidate. Nothing is
    /// transferred.
    pub fn seat_update(
        &self,
        state: &BoundsRound,
        seated: CandidateIndex,
    ) -> Result<BoundsRound, BoundsError> {
        state.get(seated)?;
        Ok(self.successor(state, seated, ReplayEvent::Seat(seated)))
    }

    fn successor(
        &self,
        state: &BoundsRound,
        removed: CandidateIndex,
        event: ReplayEvent,
    ) -> BoundsRound {
        let mut candidates = state.candidates.clone();
        candidates[removed.0] = None;
        BoundsRound {
            round: state.round + 1,
            candidates,
            event: Some(event),
            surplus: None,
            transfer_value: None,
        }
    }

    fn fold_as_btl(
        &self,
        next: &mut BoundsRound,
        receivers: &[CandidateIndex],
        value: &BigRational,
        papers: u64,
    ) {
        for &c in receivers {
            let b = next.candidates[c.0].as_mut().unwrap();
            b.btl_value.hi += value;
            b.btl_papers.hi += papers;
        }
    }

    fn clamp(&self, next: &mut BoundsRound) {
        let total = from_u64(self.total);
        let total_atl = from_u64(self.total_atl);
        for b in next.candidates.iter_mut().flatten() {
            clamp_value(&mut b.atl_value, &total_atl);
            clamp_value(&mut b.btl_value, &total);
            clamp_papers(&mut b.atl_papers, self.total_atl);
            clamp_papers(&mut b.btl_papers, self.total);
        }
    }
}

fn clamp_value(i: &mut Interval<BigRational>, cap: &BigRational) {
    if i.hi > *cap {
        i.hi = cap.clone();
    }
    if i.lo > *cap {
        i.lo = cap.clone();
    }
}

fn clamp_papers(i: &mut Interval<u64>, cap: u64) {
    i.hi = i.hi.min(cap);
    i.lo = i.lo.min(cap);
}

/// Guarantee status of one replayed event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventGuarantee {
    pub round: usize,
    pub event: ReplayEvent,
    /// Tally bounds of the event's candidate at the start of the round.
    pub tally: Interval<BigRational>,
    /// A seating whose lower tally bound reached the quota.
    pub guaranteed: bool,
}

/// Result of replaying an event sequence through the bounds.
///
/// The guarantee is about membership: each candidate in the guaranteed
/// prefix wins a seat under every preference completion with the same
/// first-preference ATL/BTL counts. The order in which they are seated is
/// not certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuaranteeReport {
    pub quota: Quota,
    pub per_event: Vec<EventGuarantee>,
    /// Length of the leading run of guaranteed seatings. Always stops at
    /// the first elimination.
    pub guaranteed_prefix_length: usize,
    /// Bounds at the start of every round, plus the state after the last
    /// event.
    pub trace: Vec<BoundsRound>,
}

impl GuaranteeReport {
    pub fn guaranteed_candidates(&self) -> Vec<CandidateIndex> {
        self.per_event[..self.guaranteed_prefix_length]
            .iter()
            .map(|e| e.event.candidate())
            .collect()
    }
}

/// Replays `events` from exact first-preference counts and flags guaranteed
/// seatings.
pub fn analyze(
    summary: &FirstPrefSummary,
    events: &EventSequence,
    contest: &Contest,
    options: AnalyzerOptions,
) -> Result<GuaranteeReport, BoundsError> {
    let analyzer = Analyzer::new(contest, summary, options)?;
    let q = from_u64(analyzer.quota().value());
    let mut state = analyzer.init_bounds(summary)?;
    let mut trace = Vec::with_capacity(events.len() + 1);
    let mut per_event = Vec::with_capacity(events.len());
    for &event in events.events() {
        let tally = state.get(event.candidate())?.tally();
        let guaranteed = event.is_seating() && tally.lo >= q;
        per_event.push(EventGuarantee {
            round: state.round,
            event,
            tally,
            guaranteed,
        });
        let next = analyzer.apply(&state, event)?;
        trace.push(std::mem::replace(&mut state, next));
    }
    trace.push(state);
    let guaranteed_prefix_length = per_event.iter().take_while(|e| e.guaranteed).count();
    Ok(GuaranteeReport {
        quota: analyzer.quota(),
        per_event,
        guaranteed_prefix_length,
        trace,
    })
}
