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

//! Brute-force ground truth for tiny contests.
//!
//! Given exact first-preference ATL/BTL counts, every first-preference pile
//! is assumed to hold a single ranking class. The oracle enumerates every
//! way to continue each pile's ranking (including stopping immediately),
//! counts each resulting ballot profile, and checks that guaranteed
//! candidates win a seat in all of them. Heterogeneous piles are not
//! explored, so a confirmation is a necessary condition only.

use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{BoundsRound, FirstPrefSummary, GuaranteeReport, Interval};
use crate::contest::{Ballot, CandidateIndex, Contest, GroupIndex, Preferences};
use crate::engine::{tabulate, Trace};
use crate::rational::from_u64;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_candidates: usize,
    /// Limit on groups with an above-the-line box.
    pub max_groups: usize,
    pub max_completions: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_candidates: 6,
            max_groups: 2,
            max_completions: 100_000,
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{candidates} candidates exceeds the limit of {limit}")]
    TooManyCandidates { candidates: usize, limit: usize },
    #[error("{groups} groups exceeds the limit of {limit}")]
    TooManyGroups { groups: usize, limit: usize },
    #[error("{completions} completions exceeds the limit of {limit}")]
    TooManyCompletions { completions: String, limit: u64 },
    #[error("summary has {found} candidates, contest has {expected}")]
    SummaryMismatch { expected: usize, found: usize },
    #[error("candidate {0:?} has ATL first preferences but does not head a group")]
    AtlNotAtGroupTop(CandidateIndex),
    #[error("report was not produced from this summary")]
    ReportMismatch,
}

impl OracleError {
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            OracleError::TooManyCandidates { .. }
                | OracleError::TooManyGroups { .. }
                | OracleError::TooManyCompletions { .. }
        )
    }
}

#[derive(Clone, Debug)]
struct Pile {
    papers: u64,
    /// Every ranking this pile may carry, first preference included.
    rankings: Vec<Preferences>,
}

/// Every ordered selection of `items` (including the empty one), prefixes
/// before extensions.
fn ordered_selections(items: &[usize]) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut items.to_vec(), &mut out);
    out
}

/// `sum_{k=0..m} m!/(m-k)!`, or `None` on overflow.
fn selection_count(m: usize) -> Option<u64> {
    let mut total: u64 = 0;
    let mut term: u64 = 1;
    for k in 0..=m {
        total = total.checked_add(term)?;
        term = term.checked_mul((m - k) as u64)?;
    }
    Some(total)
}

/// Completions of a fixed first-preference profile under pile homogeneity.
#[derive(Clone, Debug)]
pub struct CompletionSpace<'a> {
    contest: &'a Contest,
    summary: FirstPrefSummary,
    piles: Vec<Pile>,
    count: u64,
}

impl<'a> CompletionSpace<'a> {
    /// Refuses spaces beyond `limits` before enumerating anything.
    pub fn new(
        contest: &'a Contest,
        summary: &FirstPrefSummary,
        limits: Limits,
    ) -> Result<CompletionSpace<'a>, OracleError> {
        let n = contest.num_candidates();
        if summary.len() != n {
            return Err(OracleError::SummaryMismatch {
                expected: n,
                found: summary.len(),
            });
        }
        if n > limits.max_candidates {
            return Err(OracleError::TooManyCandidates {
                candidates: n,
                limit: limits.max_candidates,
            });
        }
        let groups: Vec<GroupIndex> = contest.declared_groups().map(|(g, _)| g).collect();
        if groups.len() > limits.max_groups {
            return Err(OracleError::TooManyGroups {
                groups: groups.len(),
                limit: limits.max_groups,
            });
        }
        // Size check first so that refusal never allocates the rankings.
        let mut count: Option<u64> = Some(1);
        for (i, fp) in summary.counts().iter().enumerate() {
            let c = CandidateIndex(i);
            if fp.atl > 0 {
                let g = contest.group_of(c);
                if !contest.group(g).above_line || contest.group(g).members[0] != c {
                    return Err(OracleError::AtlNotAtGroupTop(c));
                }
                count = count.and_then(|x| x.checked_mul(selection_count(groups.len() - 1)?));
            }
            if fp.btl > 0 {
                count = count.and_then(|x| x.checked_mul(selection_count(n - 1)?));
            }
        }
        match count {
            Some(c) if c <= limits.max_completions => {}
            other => {
                return Err(OracleError::TooManyCompletions {
                    completions: other
                        .map_or_else(|| "more than 2^64".to_string(), |c| c.to_string()),
                    limit: limits.max_completions,
                })
            }
        }
        let mut piles = Vec::new();
        for (i, fp) in summary.counts().iter().enumerate() {
            let c = CandidateIndex(i);
            if fp.atl > 0 {
                let first = contest.group_of(c);
                let others: Vec<usize> = groups
                    .iter()
                    .filter(|g| **g != first)
                    .map(|g| g.0)
                    .collect();
                let rankings = ordered_selections(&others)
                    .into_iter()
                    .map(|tail| {
                        let mut r = vec![first];
                        r.extend(tail.into_iter().map(GroupIndex));
                        Preferences::Groups(r)
                    })
                    .collect();
                piles.push(Pile {
                    papers: fp.atl,
                    rankings,
                });
            }
            if fp.btl > 0 {
                let others: Vec<usize> = (0..n).filter(|&x| x != i).collect();
                let rankings = ordered_selections(&others)
                    .into_iter()
                    .map(|tail| {
                        let mut r = vec![c];
                        r.extend(tail.into_iter().map(CandidateIndex));
                        Preferences::Candidates(r)
                    })
                    .collect();
                piles.push(Pile {
                    papers: fp.btl,
                    rankings,
                });
            }
        }
        Ok(CompletionSpace {
            contest,
            summary: summary.clone(),
            piles,
            count: count.unwrap(),
        })
    }

    pub fn contest(&self) -> &Contest {
        self.contest
    }

    pub fn summary(&self) -> &FirstPrefSummary {
        &self.summary
    }

    pub fn completion_count(&self) -> u64 {
        self.count
    }

    /// The `index`-th completion, in mixed-radix order over the piles.
    pub fn completion(&self, mut index: u64) -> Vec<Ballot> {
        assert!(index < self.count, "completion index out of range");
        let mut out = Vec::with_capacity(self.piles.len());
        for pile in self.piles.iter().rev() {
            let radix = pile.rankings.len() as u64;
            let pick = (index % radix) as usize;
            index /= radix;
            out.push(Ballot {
                prefs: pile.rankings[pick].clone(),
                papers: pile.papers,
            });
        }
        out.reverse();
        out
    }
}

/// All completions of the space, in index order.
pub fn enumerate_completions<'s>(
    space: &'s CompletionSpace<'_>,
) -> impl Iterator<Item = Vec<Ballot>> + 's {
    (0..space.completion_count()).map(move |i| space.completion(i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Confirmed {
        completions: u64,
    },
    Counterexample {
        completions: u64,
        /// Index of the first failing completion.
        index: u64,
        ballots: Vec<Ballot>,
        missing: Vec<CandidateIndex>,
        seated: Vec<CandidateIndex>,
    },
}

impl Verdict {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Verdict::Confirmed { .. })
    }
}

fn matches_summary(first: &BoundsRound, summary: &FirstPrefSummary) -> bool {
    first.candidates.len() == summary.len()
        && first
            .candidates
            .iter()
            .zip(summary.counts())
            .all(|(b, fp)| {
                b.as_ref().is_some_and(|b| {
                    b.atl_papers == Interval::point(fp.atl)
                        && b.btl_papers == Interval::point(fp.btl)
                        && b.atl_value == Interval::point(from_u64(fp.atl))
                        && b.btl_value == Interval::point(from_u64(fp.btl))
                })
            })
}

/// Checks the report's guaranteed prefix against every completion.
pub fn verify_guarantees(
    space: &CompletionSpace<'_>,
    report: &GuaranteeReport,
) -> Result<Verdict, OracleError> {
    match report.trace.first() {
        Some(first) if matches_summary(first, &space.summary) => {}
        _ => return Err(OracleError::ReportMismatch),
    }
    verify_candidates(space, &report.guaranteed_candidates())
}

/// Checks that each of `claimed` is seated in every completion. The first
/// failing completion (lowest index) is returned, whatever the thread count.
pub fn verify_candidates(
    space: &CompletionSpace<'_>,
    claimed: &[CandidateIndex],
) -> Result<Verdict, OracleError> {
    let completions = space.completion_count();
    if claimed.is_empty() {
        return Ok(Verdict::Confirmed { completions });
    }
    let failure = (0..completions).into_par_iter().find_map_first(|i| {
        let ballots = space.completion(i);
        let log = tabulate(space.contest, &ballots).expect("completions are valid ballots");
        let missing: Vec<CandidateIndex> = claimed
            .iter()
            .copied()
            .filter(|c| !log.seated.contains(c))
            .collect();
        (!missing.is_empty()).then_some((i, ballots, missing, log.seated))
    });
    Ok(match failure {
        None => Verdict::Confirmed { completions },
        Some((index, ballots, missing, seated)) => Verdict::Counterexample {
            completions,
            index,
            ballots,
            missing,
            seated,
        },
    })
}

/// One engine quantity found outside its bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentViolation {
    pub round: usize,
    pub candidate: CandidateIndex,
    pub detail: String,
}

/// Compares the engine's piles at the start of each round with the bounds
/// for the same round. `total` and `total_atl` are the clamp limits.
pub fn check_containment(
    engine: &Trace,
    bounds: &[BoundsRound],
    total: u64,
    total_atl: u64,
) -> Vec<ContainmentViolation> {
    let mut out = Vec::new();
    let total_r = from_u64(total);
    let total_atl_r = from_u64(total_atl);
    for (snap, b) in engine.rounds.iter().zip(bounds) {
        let mut fail = |c: usize, detail: String| {
            out.push(ContainmentViolation {
                round: snap.round,
                candidate: CandidateIndex(c),
                detail,
            })
        };
        if snap.round != b.round {
            fail(
                0,
                format!("round mismatch: engine {} bounds {}", snap.round, b.round),
            );
            continue;
        }
        for (c, pile) in snap.piles.iter().enumerate() {
            let bound = b.candidates.get(c).and_then(|x| x.as_ref());
            let (pile, bound) = match (pile, bound) {
                (None, None) => continue,
                (Some(p), Some(bd)) => (p, bd),
                (p, _) => {
                    fail(
                        c,
                        format!(
                            "continuing in engine: {}, in bounds: {}",
                            p.is_some(),
                            bound.is_some()
                        ),
                    );
                    continue;
                }
            };
            if !bound.is_ordered() {
                fail(c, format!("interval with lo > hi: {bound:?}"));
            }
            if bound.atl_value.hi > total_atl_r
                || bound.btl_value.hi > total_r
                || bound.atl_papers.hi > total_atl
                || bound.btl_papers.hi > total
            {
                fail(c, "bound exceeds its clamp".into());
            }
            if !bound.atl_value.contains(&pile.atl_value) {
                fail(
                    c,
                    format!("ATL value {} outside {:?}", pile.atl_value, bound.atl_value),
                );
            }
            if !bound.btl_value.contains(&pile.btl_value) {
                fail(
                    c,
                    format!("BTL value {} outside {:?}", pile.btl_value, bound.btl_value),
                );
            }
            if !bound.atl_papers.contains(&pile.atl_papers) {
                fail(
                    c,
                    format!(
                        "ATL papers {} outside {:?}",
                        pile.atl_papers, bound.atl_papers
                    ),
                );
            }
            if !bound.btl_papers.contains(&pile.btl_papers) {
                fail(
                    c,
                    format!(
                        "BTL papers {} outside {:?}",
                        pile.btl_papers, bound.btl_papers
                    ),
                );
            }
            let tally = bound.tally();
            if from_u64(pile.tally()) < tally.lo || pile.exact() > tally.hi {
                fail(c, format!("tally {} outside {:?}", pile.exact(), tally));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::FirstPrefs;

    #[test]
    fn selections_of_two() {
        let s = ordered_selections(&[1, 2]);
        assert_eq!(s, vec![vec![], vec![1], vec![1, 2], vec![2], vec![2, 1]]);
        assert_eq!(selection_count(2), Some(5));
        assert_eq!(selection_count(5), Some(326));
        assert_eq!(selection_count(0), Some(1));
    }

    #[test]
    fn three_candidate_btl_pile() {
        let contest =
            Contest::new("xyz", 1, vec!["x".into(), "y".into(), "z".into()], vec![]).unwrap();
        let summary = FirstPrefSummary::new(vec![
            FirstPrefs { atl: 0, btl: 4 },
            FirstPrefs::default(),
            FirstPrefs::default(),
        ]);
        let space = CompletionSpace::new(&contest, &summary, Limits::default()).unwrap();
        assert_eq!(space.completion_count(), 5);
        let names: Vec<Vec<&str>> = enumerate_completions(&space)
            .map(|b| match &b[0].prefs {
                Preferences::Candidates(c) => {
                    c.iter().map(|c| contest.candidate_name(*c)).collect()
                }
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(
            names,
            vec![
                vec!["x"],
                vec!["x", "y"],
                vec!["x", "y", "z"],
                vec!["x", "z"],
                vec!["x", "z", "y"]
            ]
        );
    }

    #[test]
    fn refusal_is_explicit() {
        let names: Vec<String> = (0..7).map(|i| format!("c{i}")).collect();
        let contest = Contest::new("big", 1, names, vec![]).unwrap();
        let summary = FirstPrefSummary::zeros(7);
        let err = CompletionSpace::new(&contest, &summary, Limits::default()).unwrap_err();
        assert!(err.is_refusal());
        let limits = Limits {
            max_candidates: 7,
            max_completions: 10,
            ..Limits::default()
        };
        let mut summary = FirstPrefSummary::zeros(7);
        summary.get_mut(CandidateIndex(0)).btl = 3;
        let err = CompletionSpace::new(&contest, &summary, limits).unwrap_err();
        assert!(matches!(err, OracleError::TooManyCompletions { .. }));
    }

    #[test]
    fn atl_must_head_a_group() {
        let contest = Contest::new(
            "g",
            1,
            vec!["a1".into(), "a2".into(), "b".into()],
            vec![("A".into(), vec!["a1".into(), "a2".into()])],
        )
        .unwrap();
        let mut summary = FirstPrefSummary::zeros(3);
        summary.get_mut(CandidateIndex(1)).atl = 3;
        assert_eq!(
            CompletionSpace::new(&contest, &summary, Limits::default()).unwrap_err(),
            OracleError::AtlNotAtGroupTop(CandidateIndex(1))
        );
    }
}
