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

//! Australian Senate STV counting with exact rational arithmetic, plus
//! propagation of lower and upper tally bounds from first-preference
//! above-the-line / below-the-line counts to certify guaranteed seatings.
//!
//! The main entry points are:
//!
//! * [`engine::tabulate`] runs a full count and returns a [`engine::CountLog`].
//! * [`bounds::analyze`] replays an event sequence through the bound
//!   updates and returns a [`bounds::GuaranteeReport`].
//! * [`pattern::render_pattern`] turns a count log into a `q`/`s`/`e` pattern.
//! * [`oracle::verify_guarantees`] brute-forces completions of a tiny
//!   first-preference profile to check guarantees.
//! * [`io`] reads and writes the JSON and CSV documents used by the `stvg` CLI.

pub mod bounds;
pub mod cli;
pub mod contest;
pub mod engine;
pub mod io;
pub mod oracle;
pub mod pattern;
pub mod rational;

pub use bounds::{
    analyze, AnalyzerOptions, EventSequence, FirstPrefSummary, GuaranteeReport, ReplayEvent,
};
pub use contest::{Ballot, BallotKind, CandidateIndex, Contest, GroupIndex, Preferences, Quota};
pub use engine::{tabulate, CountLog, EventKind, RoundEvent};
pub use num_rational::BigRational;
