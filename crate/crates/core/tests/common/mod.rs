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

//! Seeded random contests shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stv_guarantees::{Ballot, CandidateIndex, Contest, GroupIndex, Preferences};

#[derive(Copy, Clone, Debug)]
pub struct Params {
    pub candidates: (usize, usize),
    pub max_groups: usize,
    pub max_seats: usize,
    pub max_papers: u64,
    pub max_classes: usize,
}

impl Params {
    /// 3–8 candidates, 1–3 groups, 1–3 seats, at most 200 papers.
    pub fn containment() -> Params {
        Params {
            candidates: (3, 8),
            max_groups: 3,
            max_seats: 3,
            max_papers: 200,
            max_classes: 14,
        }
    }

    /// Small enough for the exhaustive oracle.
    pub fn tiny() -> Params {
        Params {
            candidates: (3, 5),
            max_groups: 2,
            max_seats: 2,
            max_papers: 60,
            max_classes: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub contest: Contest,
    pub ballots: Vec<Ballot>,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A contest with at least one declared group and at least one paper.
/// Identical ballot classes are merged, in order of first appearance.
pub fn random_contest(seed: u64, p: Params) -> Generated {
    let mut rng = rng(seed);
    let n = rng.gen_range(p.candidates.0..=p.candidates.1);
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let wanted = rng.gen_range(1..=p.max_groups.min(n));
    let mut groups = Vec::new();
    let mut taken = 0;
    for g in 0..wanted {
        if taken == n {
            break;
        }
        let size = rng.gen_range(1..=3.min(n - taken));
        let members = order[taken..taken + size]
            .iter()
            .map(|&i| names[i].clone())
            .collect();
        groups.push((format!("G{g}"), members));
        taken += size;
    }
    let declared = groups.len();
    let seats = rng.gen_range(1..=p.max_seats.min(n - 1));
    let contest = Contest::new(format!("random {seed}"), seats, names, groups).unwrap();

    let classes = rng.gen_range(1..=p.max_classes);
    let mut merged: Vec<Ballot> = Vec::new();
    let mut seen: HashMap<Preferences, usize> = HashMap::new();
    let mut total = 0;
    for _ in 0..classes {
        if total >= p.max_papers {
            break;
        }
        let papers = rng.gen_range(1..=(p.max_papers - total).min(30));
        total += papers;
        let prefs = if rng.gen_bool(0.5) {
            let mut gs: Vec<usize> = (0..declared).collect();
            gs.shuffle(&mut rng);
            gs.truncate(rng.gen_range(1..=declared));
            Preferences::Groups(gs.into_iter().map(GroupIndex).collect())
        } else {
            let mut cs: Vec<usize> = (0..n).collect();
            cs.shuffle(&mut rng);
            cs.truncate(rng.gen_range(1..=n));
            Preferences::Candidates(cs.into_iter().map(CandidateIndex).collect())
        };
        match seen.get(&prefs) {
            Some(&i) => merged[i].papers += papers,
            None => {
                seen.insert(prefs.clone(), merged.len());
                merged.push(Ballot { prefs, papers });
            }
        }
    }
    Generated {
        contest,
        ballots: merged,
    }
}

pub fn fixture(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(path)
}

pub fn read_fixture(path: &str) -> String {
    std::fs::read_to_string(fixture(path)).unwrap()
}
