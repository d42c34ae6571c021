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

//! Reads a formal-preference file in the federal download layout, writes it
//! as canonical ballots, and derives the first-preference summary.
//!
//! ```text
//! cargo run --example ingest_commission_file [contest.json formal_prefs.csv]
//! ```

use std::path::PathBuf;

use stv_guarantees::io::{
    ingest_external_preferences, parse_contest, read_text, summarize, write_ballots, write_summary,
    ExternalLayout,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/aec");
    let mut args = std::env::args_os().skip(1).map(PathBuf::from);
    let contest_path = args.next().unwrap_or_else(|| dir.join("contest.json"));
    let prefs_path = args.next().unwrap_or_else(|| dir.join("formal_prefs.csv"));

    let contest = parse_contest(&read_text(&contest_path)?)?;
    let layout = ExternalLayout::aec_2019(&contest);
    let ingested = ingest_external_preferences(&read_text(&prefs_path)?, &contest, &layout)?;
    eprintln!(
        "{} rows, {} informal, mixed markings: {}",
        ingested.rows, ingested.informal, ingested.precedence
    );
    print!("{}", write_ballots(&ingested.ballots, &contest));
    println!();
    print!(
        "{}",
        write_summary(&summarize(&ingested.ballots, &contest), &contest)
    );
    Ok(())
}
