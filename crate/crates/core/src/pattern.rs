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

//! Seating/elimination pattern strings such as `q q q q e … q e … s`.
//!
//! `q` is a seat won with a quota, `s` a seat won without one, `e` an
//! elimination. A long run of eliminations is written `e …`, and a trailing
//! `…` means candidates were still standing when the last seat was filled.
//! The annotated form brackets the guaranteed prefix: `[q q q q] e … q e … s`.

use std::fmt;

use thiserror::Error;

use crate::bounds::GuaranteeReport;
use crate::engine::{CountLog, EventKind};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Quota,
    NoQuota,
    Eliminated,
    Ellipsis,
}

impl Token {
    pub fn as_str(self) -> &'static str {
        match self {
            Token::Quota => "q",
            Token::NoQuota => "s",
            Token::Eliminated => "e",
            Token::Ellipsis => "…",
        }
    }

    fn is_seat(self) -> bool {
        matches!(self, Token::Quota | Token::NoQuota)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PatternOptions {
    /// Shortest run of eliminations written as `e …`.
    pub min_elimination_run: usize,
}

impl Default for PatternOptions {
    fn default() -> Self {
        PatternOptions {
            min_elimination_run: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternString {
    /// Rendered tokens, including a trailing `…` when candidates were left
    /// standing.
    pub tokens: Vec<Token>,
    /// Number of leading `q` tokens that are guaranteed.
    pub bold_prefix: usize,
    pub trailing_standing: bool,
    /// True length of each compressed elimination run, in order. Empty for
    /// parsed patterns.
    pub runs: Vec<usize>,
}

impl PatternString {
    /// Seats in the pattern (`q` plus `s` tokens).
    pub fn seats(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_seat()).count()
    }

    /// The uncompressed event tokens, using `runs` to restore each `e …`.
    pub fn expand(&self) -> Vec<Token> {
        let mut out = Vec::new();
        let mut runs = self.runs.iter();
        let body = if self.trailing_standing {
            &self.tokens[..self.tokens.len() - 1]
        } else {
            &self.tokens[..]
        };
        let mut i = 0;
        while i < body.len() {
            if body[i] == Token::Eliminated && body.get(i + 1) == Some(&Token::Ellipsis) {
                let n = runs.next().copied().unwrap_or(2);
                out.extend(std::iter::repeat_n(Token::Eliminated, n));
                i += 2;
            } else {
                out.push(body[i]);
                i += 1;
            }
        }
        out
    }

    /// Pattern with the guaranteed prefix in brackets.
    pub fn annotated(&self) -> String {
        let mut parts: Vec<String> = self.tokens.iter().map(|t| t.to_string()).collect();
        if self.bold_prefix > 0 {
            parts[0].insert(0, '[');
            parts[self.bold_prefix - 1].push(']');
        }
        parts.join(" ")
    }
}

impl fmt::Display for PatternString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.tokens.iter().map(|t| t.as_str()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// One token per event: elections `q`, last-standing seats `q` if they hold
/// a quota and `s` otherwise, eliminations `e`.
pub fn raw_tokens(log: &CountLog) -> Vec<Token> {
    log.events
        .iter()
        .map(|e| match e.kind {
            EventKind::Elect { .. } => Token::Quota,
            EventKind::SeatWithoutQuota {
                has_quota: true, ..
            } => Token::Quota,
            EventKind::SeatWithoutQuota {
                has_quota: false, ..
            } => Token::NoQuota,
            EventKind::Eliminate { .. } => Token::Eliminated,
        })
        .collect()
}

pub fn render_pattern(log: &CountLog, report: Option<&GuaranteeReport>) -> PatternString {
    render_pattern_with(log, report, PatternOptions::default())
}

pub fn render_pattern_with(
    log: &CountLog,
    report: Option<&GuaranteeReport>,
    options: PatternOptions,
) -> PatternString {
    let raw = raw_tokens(log);
    let min_run = options.min_elimination_run.max(2);
    let mut tokens = Vec::new();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        if raw[i] == Token::Eliminated {
            let len = raw[i..]
                .iter()
                .take_while(|t| **t == Token::Eliminated)
                .count();
            if len >= min_run {
                tokens.push(Token::Eliminated);
                tokens.push(Token::Ellipsis);
                runs.push(len);
            } else {
                tokens.extend(std::iter::repeat_n(Token::Eliminated, len));
            }
            i += len;
        } else {
            tokens.push(raw[i]);
            i += 1;
        }
    }
    let trailing_standing = !log.left_standing().is_empty();
    if trailing_standing {
        tokens.push(Token::Ellipsis);
    }
    let leading_q = tokens.iter().take_while(|t| **t == Token::Quota).count();
    let bold_prefix = report
        .map(|r| r.guaranteed_prefix_length.min(leading_q))
        .unwrap_or(0);
    PatternString {
        tokens,
        bold_prefix,
        trailing_standing,
        runs,
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("unrecognised token {0:?}")]
    BadToken(String),
    #[error("brackets must enclose a leading run of q tokens")]
    BadBrackets,
}

/// Parses the plain or annotated form. `...` is accepted for `…`.
pub fn parse_pattern(text: &str) -> Result<PatternString, PatternError> {
    let spaced = text.replace('[', " [ ").replace(']', " ] ");
    let mut tokens = Vec::new();
    let mut open = None;
    let mut close = None;
    for word in spaced.split_whitespace() {
        match word {
            "q" => tokens.push(Token::Quota),
            "s" => tokens.push(Token::NoQuota),
            "e" => tokens.push(Token::Eliminated),
            "…" | "..." => tokens.push(Token::Ellipsis),
            "[" if open.is_none() => open = Some(tokens.len()),
            "]" if open.is_some() && close.is_none() => close = Some(tokens.len()),
            "[" | "]" => return Err(PatternError::BadBrackets),
            other => return Err(PatternError::BadToken(other.to_string())),
        }
    }
    let bold_prefix = match (open, close) {
        (None, None) => 0,
        (Some(0), Some(end)) if tokens[..end].iter().all(|t| *t == Token::Quota) => end,
        _ => return Err(PatternError::BadBrackets),
    };
    let trailing_standing = tokens.len() >= 2
        && tokens[tokens.len() - 1] == Token::Ellipsis
        && tokens[tokens.len() - 2].is_seat();
    Ok(PatternString {
        tokens,
        bold_prefix,
        trailing_standing,
        runs: Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternComparison {
    Match,
    /// First differing token, 1-based. `None` means the pattern ended.
    TokenDiff {
        position: usize,
        expected: Option<Token>,
        found: Option<Token>,
    },
    /// Tokens agree but the bracketed prefix differs.
    BoldDiff {
        expected: usize,
        found: usize,
    },
}

/// Compares a rendered pattern with an expected string. The bold prefix is
/// only compared when `expected` carries brackets.
pub fn compare_pattern(
    rendered: &PatternString,
    expected: &str,
) -> Result<PatternComparison, PatternError> {
    let want = parse_pattern(expected)?;
    let n = want.tokens.len().max(rendered.tokens.len());
    for i in 0..n {
        let e = want.tokens.get(i).copied();
        let f = rendered.tokens.get(i).copied();
        if e != f {
            return Ok(PatternComparison::TokenDiff {
                position: i + 1,
                expected: e,
                found: f,
            });
        }
    }
    if expected.contains('[') && want.bold_prefix != rendered.bold_prefix {
        return Ok(PatternComparison::BoldDiff {
            expected: want.bold_prefix,
            found: rendered.bold_prefix,
        });
    }
    Ok(PatternComparison::Match)
}
