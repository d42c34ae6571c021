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

//! Round-by-round Australian Senate STV count.
//!
//! One election or elimination per round. Ballot values are exact
//! rationals; a candidate's reported tally is the floor of the exact sum of
//! the values in their pile. When a candidate is elected, every paper in
//! their pile leaves at the same transfer value `(tally - quota) / papers`,
//! regardless of the value it arrived with, so a paper's value can go up.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::contest::{
    compute_quota, total_papers, validate_ballot, Ballot, BallotKind, CandidateIndex, Contest,
    Quota, Violation,
};
use crate::rational::{floor_u64, from_u64};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("ballot {index} does not match the contest: {violations:?}")]
    BallotMismatch {
        index: usize,
        violations: Vec<Violation>,
    },
    #[error("{seats} seats for {candidates} candidates")]
    TooManySeats { seats: usize, candidates: usize },
    #[error("transfer value needs at least one paper")]
    NoPapers,
    #[error("tally {tally} is below the quota {quota}")]
    BelowQuota { tally: u64, quota: u64 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CandidateStatus {
    Standing,
    /// Has a quota, waiting for their turn to be elected.
    ElectedPendingSurplus,
    Elected,
    Eliminated,
}

impl CandidateStatus {
    /// Neither elected nor eliminated yet.
    pub fn is_continuing(self) -> bool {
        matches!(
            self,
            CandidateStatus::Standing | CandidateStatus::ElectedPendingSurplus
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// Seated with a quota. `transfer_value` is `None` when this filled the
    /// last seat and no surplus was distributed.
    Elect {
        candidate: CandidateIndex,
        transfer_value: Option<BigRational>,
    },
    Eliminate {
        candidate: CandidateIndex,
    },
    /// Seated because the continuing candidates exactly fill the remaining
    /// seats.
    SeatWithoutQuota {
        candidate: CandidateIndex,
        has_quota: bool,
    },
}

impl EventKind {
    pub fn candidate(&self) -> CandidateIndex {
        match *self {
            EventKind::Elect { candidate, .. }
            | EventKind::Eliminate { candidate }
            | EventKind::SeatWithoutQuota { candidate, .. } => candidate,
        }
    }

    pub fn is_seating(&self) -> bool {
        !matches!(self, EventKind::Eliminate { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundEvent {
    pub round: usize,
    pub kind: EventKind,
    /// Tallies of every continuing candidate at the start of the round.
    pub tallies: Vec<(CandidateIndex, u64)>,
    /// Value lost to exhausted papers during this round's distribution.
    pub exhausted: BigRational,
    /// Fractional part of the elected candidate's exact total dropped when
    /// the tally is floored before computing the transfer value.
    pub rounding_loss: BigRational,
}

impl RoundEvent {
    pub fn tally_of(&self, c: CandidateIndex) -> Option<u64> {
        self.tallies.iter().find(|(x, _)| *x == c).map(|(_, t)| *t)
    }
}

/// Papers of one ballot class whose value rose when leaving an elected
/// candidate. `ballot.papers` is the number of papers affected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueIncrease {
    pub ballot: Ballot,
    pub round: usize,
    pub old_value: BigRational,
    pub new_value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountLog {
    pub contest_name: String,
    pub candidates: Vec<String>,
    /// Group ids, used to name above-the-line preferences.
    pub groups: Vec<String>,
    pub seats: usize,
    pub total_papers: u64,
    pub quota: Quota,
    pub events: Vec<RoundEvent>,
    pub seated: Vec<CandidateIndex>,
    pub anomalies: Vec<ValueIncrease>,
}

impl CountLog {
    pub fn transfer_values(&self) -> Vec<BigRational> {
        self.events
            .iter()
            .filter_map(|e| match &e.kind {
                EventKind::Elect {
                    transfer_value: Some(tv),
                    ..
                } => Some(tv.clone()),
                _ => None,
            })
            .collect()
    }

    /// Candidates that were still continuing when the last seat was filled.
    pub fn left_standing(&self) -> Vec<CandidateIndex> {
        let mut out = vec![true; self.candidates.len()];
        for e in &self.events {
            out[e.kind.candidate().0] = false;
        }
        out.iter()
            .enumerate()
            .filter(|(_, s)| **s)
            .map(|(i, _)| CandidateIndex(i))
            .collect()
    }
}

/// `(tally - quota) / papers`.
pub fn compute_transfer_value(
    tally: u64,
    quota: Quota,
    papers: u64,
) -> Result<BigRational, EngineError> {
    if papers == 0 {
        return Err(EngineError::NoPapers);
    }
    if tally < quota.value() {
        return Err(EngineError::BelowQuota {
            tally,
            quota: quota.value(),
        });
    }
    Ok(BigRational::new(
        BigInt::from(tally - quota.value()),
        BigInt::from(papers),
    ))
}

/// Reports the value increases recorded during the count, ordered by round.
pub fn detect_value_increases(log: &CountLog) -> Vec<ValueIncrease> {
    let mut out = log.anomalies.clone();
    out.sort_by(|a, b| a.round.cmp(&b.round).then_with(|| a.ballot.cmp(&b.ballot)));
    out
}

/// A candidate's pile split the way the bounds analyzer sees it: a paper is
/// "ATL" while it is an above-the-line ballot still inside its first-ranked
/// group, and "BTL" otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PileSnapshot {
    pub atl_value: BigRational,
    pub btl_value: BigRational,
    pub atl_papers: u64,
    pub btl_papers: u64,
}

impl PileSnapshot {
    pub fn exact(&self) -> BigRational {
        &self.atl_value + &self.btl_value
    }

    pub fn tally(&self) -> u64 {
        floor_u64(&self.exact())
    }

    pub fn papers(&self) -> u64 {
        self.atl_papers + self.btl_papers
    }
}

/// Where every vote of the original total currently is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Accounting {
    /// Exact pile values of continuing candidates.
    pub standing: BigRational,
    /// Value kept by seated candidates (the quota, or the whole pile when
    /// no surplus was distributed).
    pub seated: BigRational,
    pub exhausted: BigRational,
    pub rounding_loss: BigRational,
}

impl Accounting {
    pub fn total(&self) -> BigRational {
        &self.standing + &self.seated + &self.exhausted + &self.rounding_loss
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundSnapshot {
    pub round: usize,
    /// `None` for candidates already elected or eliminated.
    pub piles: Vec<Option<PileSnapshot>>,
    pub accounting: Accounting,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// State at the start of each round.
    pub rounds: Vec<RoundSnapshot>,
    pub final_accounting: Accounting,
}

/// Runs the count.
pub fn tabulate(contest: &Contest, ballots: &[Ballot]) -> Result<CountLog, EngineError> {
    let mut count = Count::new(contest, ballots)?;
    count.run(None);
    Ok(count.into_log())
}

/// Runs the count and also records the state of every pile at the start of
/// each round.
pub fn tabulate_traced(
    contest: &Contest,
    ballots: &[Ballot],
) -> Result<(CountLog, Trace), EngineError> {
    let mut count = Count::new(contest, ballots)?;
    let mut rounds = Vec::new();
    count.run(Some(&mut rounds));
    let final_accounting = count.accounting();
    Ok((
        count.into_log(),
        Trace {
            rounds,
            final_accounting,
        },
    ))
}

#[derive(Clone, Debug)]
struct Parcel {
    ballot: usize,
    pos: usize,
    papers: u64,
    value: BigRational,
}

struct Count<'a> {
    contest: &'a Contest,
    ballots: &'a [Ballot],
    expansions: Vec<Vec<CandidateIndex>>,
    atl_span: Vec<usize>,
    quota: Quota,
    total: u64,
    status: Vec<CandidateStatus>,
    piles: Vec<Vec<Parcel>>,
    exact: Vec<BigRational>,
    attained: Vec<Option<usize>>,
    history: Vec<Vec<u64>>,
    seats_left: usize,
    seated: Vec<CandidateIndex>,
    events: Vec<RoundEvent>,
    anomalies: Vec<ValueIncrease>,
    seated_value: BigRational,
    exhausted_total: BigRational,
    rounding_total: BigRational,
}

impl<'a> Count<'a> {
    fn new(contest: &'a Contest, ballots: &'a [Ballot]) -> Result<Count<'a>, EngineError> {
        let n = contest.num_candidates();
        if contest.seats() >= n {
            return Err(EngineError::TooManySeats {
                seats: contest.seats(),
                candidates: n,
            });
        }
        let mut expansions = Vec::with_capacity(ballots.len());
        let mut atl_span = Vec::with_capacity(ballots.len());
        for (index, b) in ballots.iter().enumerate() {
            if let Err(violations) = validate_ballot(b, contest) {
                return Err(EngineError::BallotMismatch { index, violations });
            }
            let exp = b.expand(contest).map_err(|v| EngineError::BallotMismatch {
                index,
                violations: vec![v],
            })?;
            atl_span.push(b.first_group_len(contest));
            expansions.push(exp);
        }
        let total = total_papers(ballots);
        let quota = compute_quota(total, contest.seats()).expect("contest has seats");
        let mut piles: Vec<Vec<Parcel>> = vec![Vec::new(); n];
        let mut exact = vec![BigRational::zero(); n];
        for (i, b) in ballots.iter().enumerate() {
            let first = expansions[i][0];
            piles[first.0].push(Parcel {
                ballot: i,
                pos: 0,
                papers: b.papers,
                value: from_u64(1),
            });
            exact[first.0] += from_u64(b.papers);
        }
        Ok(Count {
            contest,
            ballots,
            expansions,
            atl_span,
            quota,
            total,
            status: vec![CandidateStatus::Standing; n],
            piles,
            exact,
            attained: vec![None; n],
            history: vec![Vec::new(); n],
            seats_left: contest.seats(),
            seated: Vec::new(),
            events: Vec::new(),
            anomalies: Vec::new(),
            seated_value: BigRational::zero(),
            exhausted_total: BigRational::zero(),
            rounding_total: BigRational::zero(),
        })
    }

    fn tally(&self, c: usize) -> u64 {
        floor_u64(&self.exact[c])
    }

    fn continuing(&self) -> Vec<CandidateIndex> {
        (0..self.status.len())
            .filter(|&c| self.status[c].is_continuing())
            .map(CandidateIndex)
            .collect()
    }

    fn accounting(&self) -> Accounting {
        let standing = self
            .continuing()
            .iter()
            .fold(BigRational::zero(), |acc, c| acc + &self.exact[c.0]);
        Accounting {
            standing,
            seated: self.seated_value.clone(),
            exhausted: self.exhausted_total.clone(),
            rounding_loss: self.rounding_total.clone(),
        }
    }

    fn snapshot(&self, round: usize) -> RoundSnapshot {
        let piles = (0..self.status.len())
            .map(|c| {
                if !self.status[c].is_continuing() {
                    return None;
                }
                let mut s = PileSnapshot {
                    atl_value: BigRational::zero(),
                    btl_value: BigRational::zero(),
                    atl_papers: 0,
                    btl_papers: 0,
                };
                for p in &self.piles[c] {
                    let v = &p.value * from_u64(p.papers);
                    let in_first_group = self.ballots[p.ballot].kind() == BallotKind::Atl
                        && p.pos < self.atl_span[p.ballot];
                    if in_first_group {
                        s.atl_value += v;
                        s.atl_papers += p.papers;
                    } else {
                        s.btl_value += v;
                        s.btl_papers += p.papers;
                    }
                }
                Some(s)
            })
            .collect();
        RoundSnapshot {
            round,
            piles,
            accounting: self.accounting(),
        }
    }

    fn run(&mut self, mut trace: Option<&mut Vec<RoundSnapshot>>) {
        let q = self.quota.value();
        let mut round = 1;
        while self.seats_left > 0 {
            let continuing = self.continuing();
            for c in &continuing {
                let t = self.tally(c.0);
                self.history[c.0].push(t);
                if t >= q && self.attained[c.0].is_none() {
                    self.attained[c.0] = Some(round);
                    self.status[c.0] = CandidateStatus::ElectedPendingSurplus;
                }
            }
            if let Some(trace) = trace.as_deref_mut() {
                trace.push(self.snapshot(round));
            }
            let tallies: Vec<(CandidateIndex, u64)> =
                continuing.iter().map(|c| (*c, self.tally(c.0))).collect();

            if continuing.len() <= self.seats_left {
                self.seat_remaining(round, continuing, trace);
                return;
            }

            let pending: Vec<CandidateIndex> = continuing
                .iter()
                .copied()
                .filter(|c| self.status[c.0] == CandidateStatus::ElectedPendingSurplus)
                .collect();
            let event = if pending.is_empty() {
                let loser = self.select_elimination(&continuing);
                self.status[loser.0] = CandidateStatus::Eliminated;
                let exhausted = self.distribute(loser, None, round);
                RoundEvent {
                    round,
                    kind: EventKind::Eliminate { candidate: loser },
                    tallies,
                    exhausted,
                    rounding_loss: BigRational::zero(),
                }
            } else {
                let winner = self.select_election(&pending);
                self.elect(winner, round, tallies)
            };
            self.events.push(event);
            round += 1;
        }
    }

    fn seat_remaining(
        &mut self,
        mut round: usize,
        mut continuing: Vec<CandidateIndex>,
        mut trace: Option<&mut Vec<RoundSnapshot>>,
    ) {
        let q = self.quota.value();
        continuing.sort_by_key(|c| (Reverse(self.tally(c.0)), c.0));
        for (k, c) in continuing.iter().enumerate() {
            if k > 0 {
                if let Some(trace) = trace.as_deref_mut() {
                    trace.push(self.snapshot(round));
                }
            }
            let tallies = self
                .continuing()
                .iter()
                .map(|x| (*x, self.tally(x.0)))
                .collect();
            let has_quota = self.tally(c.0) >= q;
            self.status[c.0] = CandidateStatus::Elected;
            self.seated.push(*c);
            self.seats_left -= 1;
            self.seated_value += &self.exact[c.0];
            self.events.push(RoundEvent {
                round,
                kind: EventKind::SeatWithoutQuota {
                    candidate: *c,
                    has_quota,
                },
                tallies,
                exhausted: BigRational::zero(),
                rounding_loss: BigRational::zero(),
            });
            round += 1;
        }
    }

    fn elect(
        &mut self,
        winner: CandidateIndex,
        round: usize,
        tallies: Vec<(CandidateIndex, u64)>,
    ) -> RoundEvent {
        self.status[winner.0] = CandidateStatus::Elected;
        self.seated.push(winner);
        self.seats_left -= 1;
        if self.seats_left == 0 {
            self.seated_value += &self.exact[winner.0];
            return RoundEvent {
                round,
                kind: EventKind::Elect {
                    candidate: winner,
                    transfer_value: None,
                },
                tallies,
                exhausted: BigRational::zero(),
                rounding_loss: BigRational::zero(),
            };
        }
        let tally = self.tally(winner.0);
        let papers: u64 = self.piles[winner.0].iter().map(|p| p.papers).sum();
        let tv = compute_transfer_value(tally, self.quota, papers)
            .expect("pending candidate holds a quota and papers");
        let rounding_loss = &self.exact[winner.0] - from_u64(tally);
        self.rounding_total += &rounding_loss;
        self.seated_value += from_u64(self.quota.value());
        let exhausted = self.distribute(winner, Some(&tv), round);
        RoundEvent {
            round,
            kind: EventKind::Elect {
                candidate: winner,
                transfer_value: Some(tv),
            },
            tallies,
            exhausted,
            rounding_loss,
        }
    }

    /// Moves every paper in `from`'s pile to its next eligible preference,
    /// re-valued to `new_value` when given. Returns the exhausted value.
    fn distribute(
        &mut self,
        from: CandidateIndex,
        new_value: Option<&BigRational>,
        round: usize,
    ) -> BigRational {
        let q = self.quota.value();
        // Eligibility is fixed for the whole distribution.
        let eligible: Vec<bool> = (0..self.status.len())
            .map(|c| self.status[c] == CandidateStatus::Standing && self.tally(c) < q)
            .collect();
        let pile = std::mem::take(&mut self.piles[from.0]);
        self.exact[from.0] = BigRational::zero();
        let mut exhausted = BigRational::zero();
        let mut increases: BTreeMap<(usize, BigRational), u64> = BTreeMap::new();
        for parcel in pile {
            let value = match new_value {
                Some(tv) => {
                    if *tv > parcel.value {
                        *increases
                            .entry((parcel.ballot, parcel.value.clone()))
                            .or_default() += parcel.papers;
                    }
                    tv.clone()
                }
                None => parcel.value,
            };
            let exp = &self.expansions[parcel.ballot];
            let next = (parcel.pos + 1..exp.len()).find(|&j| eligible[exp[j].0]);
            let amount = &value * from_u64(parcel.papers);
            match next {
                Some(j) => {
                    let to = exp[j];
                    self.exact[to.0] += amount;
                    self.piles[to.0].push(Parcel {
                        ballot: parcel.ballot,
                        pos: j,
                        papers: parcel.papers,
                        value,
                    });
                }
                None => exhausted += amount,
            }
        }
        if let Some(tv) = new_value {
            for ((ballot, old_value), papers) in increases {
                let mut b = self.ballots[ballot].clone();
                b.papers = papers;
                self.anomalies.push(ValueIncrease {
                    ballot: b,
                    round,
                    old_value,
                    new_value: tv.clone(),
                });
            }
        }
        self.exhausted_total += &exhausted;
        exhausted
    }

    /// Lowest tally; ties go back through earlier rounds to the most recent
    /// one where the tied candidates differ, then to the lowest index.
    fn select_elimination(&self, continuing: &[CandidateIndex]) -> CandidateIndex {
        let lowest = continuing
            .iter()
            .map(|c| self.tally(c.0))
            .min()
            .expect("someone is continuing");
        let mut tied: Vec<CandidateIndex> = continuing
            .iter()
            .copied()
            .filter(|c| self.tally(c.0) == lowest)
            .collect();
        let rounds = self.history[tied[0].0].len();
        for past in (0..rounds.saturating_sub(1)).rev() {
            if tied.len() == 1 {
                break;
            }
            let m = tied.iter().map(|c| self.history[c.0][past]).min().unwrap();
            tied.retain(|c| self.history[c.0][past] == m);
        }
        tied[0]
    }

    /// Earliest quota attainment first, then largest surplus, then lowest
    /// index.
    fn select_election(&self, pending: &[CandidateIndex]) -> CandidateIndex {
        *pending
            .iter()
            .min_by_key(|c| (self.attained[c.0], Reverse(self.tally(c.0)), c.0))
            .expect("pending is non-empty")
    }

    fn into_log(self) -> CountLog {
        CountLog {
            contest_name: self.contest.name().to_string(),
            candidates: self.contest.candidates().to_vec(),
            groups: self.contest.groups().iter().map(|g| g.id.clone()).collect(),
            seats: self.contest.seats(),
            total_papers: self.total,
            quota: self.quota,
            events: self.events,
            seated: self.seated,
            anomalies: self.anomalies,
        }
    }
}
