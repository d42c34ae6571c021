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

//! Reading and writing contest, ballot, summary, event, log and report
//! documents.
//!
//! JSON documents carry a `format` name and a `version`; rationals are
//! written as `{"num": "...", "den": "..."}` with decimal-string integers,
//! never as floating point. Ballot and summary files are CSV with a header
//! row. Identifiers use letters, digits, `_`, `-` and `.`.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::BoundsError;
use crate::contest::ContestError;

mod ballots;
mod contest_doc;
mod events;
pub mod external;
mod log;
mod report;
mod summary;
mod verdict;

pub use ballots::{parse_ballots, write_ballots, BallotFile};
pub use contest_doc::{parse_contest, write_contest};
pub use events::{parse_events, write_events};
pub use external::{ingest_external_preferences, ExternalLayout, IngestResult};
pub use log::{read_round_log, write_round_log};
pub use report::{read_report, write_report};
pub use summary::{parse_summary, summarize, write_summary};
pub use verdict::write_verdict;

pub const FORMAT_VERSION: u32 = 1;

/// A problem with one record of a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordError {
    pub line: u64,
    pub message: String,
}

impl std::fmt::Display for RecordError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Error, Debug)]
pub enum DataError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("expected a {expected} document, found {found}")]
    Schema { expected: String, found: String },
    #[error(transparent)]
    Contest(#[from] ContestError),
    #[error(transparent)]
    Events(#[from] BoundsError),
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(String),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("{} bad record(s): {}", .0.len(), .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Records(Vec<RecordError>),
    #[error("invalid document: {0}")]
    Invalid(String),
}

impl DataError {
    pub fn code(&self) -> &'static str {
        match self {
            DataError::Io(_) => "io",
            DataError::Json(_) => "json",
            DataError::Csv(_) => "csv",
            DataError::Schema { .. } => "schema",
            DataError::Contest(e) => e.code(),
            DataError::Events(_) => "events",
            DataError::UnknownCandidate(_) => "unknown-candidate",
            DataError::UnknownGroup(_) => "unknown-group",
            DataError::Records(_) => "records",
            DataError::Invalid(_) => "invalid",
        }
    }
}

/// Header fields shared by the JSON documents.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct Header {
    format: String,
    version: u32,
}

/// Checks `format`/`version` before the rest of the document is decoded.
fn check_header(text: &str, format: &str) -> Result<(), DataError> {
    let header: Header = serde_json::from_str::<serde_json::Value>(text)
        .and_then(serde_json::from_value)
        .map_err(|_| DataError::Schema {
            expected: format!("{format} v{FORMAT_VERSION}"),
            found: "a document without format/version".into(),
        })?;
    if header.format != format || header.version != FORMAT_VERSION {
        return Err(DataError::Schema {
            expected: format!("{format} v{FORMAT_VERSION}"),
            found: format!("{} v{}", header.format, header.version),
        });
    }
    Ok(())
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub(crate) struct RationalDoc {
    num: String,
    den: String,
}

impl From<&BigRational> for RationalDoc {
    fn from(r: &BigRational) -> Self {
        RationalDoc {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalDoc> for BigRational {
    type Error = DataError;

    fn try_from(d: &RationalDoc) -> Result<Self, DataError> {
        let num: BigInt = d
            .num
            .parse()
            .map_err(|_| DataError::Invalid(format!("bad numerator {:?}", d.num)))?;
        let den: BigInt = d
            .den
            .parse()
            .map_err(|_| DataError::Invalid(format!("bad denominator {:?}", d.den)))?;
        if den.is_zero() {
            return Err(DataError::Invalid("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    }
}

/// Reads a file to a string, transparently decompressing gzip.
pub fn read_text(path: &Path) -> Result<String, DataError> {
    let mut raw = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut raw)?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = String::new();
        MultiGzDecoder::new(&raw[..]).read_to_string(&mut out)?;
        Ok(out)
    } else {
        String::from_utf8(raw).map_err(|e| DataError::Invalid(format!("not UTF-8: {e}")))
    }
}
