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

//! Writes a round log as JSON and reads it back. Transfer values are stored
//! as exact numerator/denominator pairs.
//!
//! ```text
//! cargo run --example round_log
//! ```

use stv_guarantees::io::{
    parse_ballots, parse_contest, read_round_log, read_text, write_round_log,
};
use stv_guarantees::tabulate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/example1");
    let contest = parse_contest(&read_text(&dir.join("contest.json"))?)?;
    let ballots = parse_ballots(&read_text(&dir.join("ballots.csv"))?, &contest)?;
    let log = tabulate(&contest, &ballots.ballots)?;

    let text = write_round_log(&log);
    println!("{text}");
    let back = read_round_log(&text)?;
    assert_eq!(back, log);
    eprintln!("read back {} rounds unchanged", back.events.len());
    Ok(())
}
