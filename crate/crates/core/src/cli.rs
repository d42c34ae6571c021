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

//! The `stvg` command line.
//!
//! [`run`] takes the argument list and output streams so that tests can
//! drive it in-process. Exit statuses:
//!
//! | status | meaning |
//! |-------:|---------|
//! | 0 | success |
//! | 1 | file could not be read or written |
//! | 2 | bad command line |
//! | 3 | malformed input document |
//! | 4 | inputs are well-formed but inconsistent |
//! | 5 | oracle refused: space beyond the enumeration limits |
//! | 6 | oracle found a counterexample |

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use crate::bounds::{analyze, AnalyzerOptions, EventSequence, FirstPrefSummary, ReplayEvent};
use crate::contest::{CandidateIndex, Contest};
use crate::engine::{tabulate, CountLog, EngineError, EventKind};
use crate::io::{self, DataError};
use crate::oracle::{verify_candidates, CompletionSpace, Limits, OracleError, Verdict};
use crate::pattern::{compare_pattern, render_pattern, PatternComparison};
use crate::rational::{format_fraction, format_significant};

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_SEMANTIC: i32 = 4;
pub const EXIT_REFUSED: i32 = 5;
pub const EXIT_COUNTEREXAMPLE: i32 = 6;

#[derive(Parser, Debug)]
#[command(
    name = "stvg",
    version,
    about = "Senate STV counting and guaranteed-seat analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count a contest and print the rounds and the pattern string.
    Tabulate(TabulateArgs),
    /// Replay an outcome through the tally bounds and report guaranteed seats.
    Analyze(AnalyzeArgs),
    /// Print the pattern string of a round log.
    Pattern(PatternArgs),
    /// Check guaranteed seats against every completion of a tiny contest.
    Verify(VerifyArgs),
    /// Count first preferences by ATL/BTL.
    Summarize(SummarizeArgs),
}

#[derive(Args, Debug)]
pub struct TabulateArgs {
    #[arg(long)]
    pub contest: PathBuf,
    /// Ballot CSV, optionally gzip-compressed.
    #[arg(long)]
    pub ballots: PathBuf,
    /// Where to write the round log.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits for displayed transfer values.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u16).range(1..=30))]
    pub precision: u16,
}

/// The outcome to replay: an events file or a round log.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct OutcomeArgs {
    #[arg(long)]
    pub events: Option<PathBuf>,
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub contest: PathBuf,
    #[arg(long)]
    pub summary: PathBuf,
    #[command(flatten)]
    pub outcome: OutcomeArgs,
    /// Where to write the guarantee report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// On elimination, grow BTL paper bounds by the ATL paper bound.
    #[arg(long)]
    pub literal_elimination_papers: bool,
}

#[derive(Args, Debug)]
pub struct PatternArgs {
    #[arg(long)]
    pub log: PathBuf,
    /// Guarantee report whose prefix is shown in brackets.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Expected pattern; exits 4 on a mismatch.
    #[arg(long)]
    pub expect: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub contest: PathBuf,
    #[arg(long)]
    pub summary: PathBuf,
    #[command(flatten)]
    pub outcome: OutcomeArgs,
    /// Extra candidates to check beyond the guaranteed prefix.
    #[arg(long, value_delimiter = ',')]
    pub claim: Vec<String>,
    #[arg(long, default_value_t = Limits::default().max_completions)]
    pub max_completions: u64,
    #[arg(long, default_value_t = Limits::default().max_candidates)]
    pub max_candidates: usize,
    #[arg(long, default_value_t = Limits::default().max_groups)]
    pub max_groups: usize,
    /// Where to write the verdict.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub literal_elimination_papers: bool,
}

#[derive(Args, Debug)]
pub struct SummarizeArgs {
    #[arg(long)]
    pub contest: PathBuf,
    #[arg(long)]
    pub ballots: PathBuf,
    /// Where to write the summary CSV; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    status: i32,
    message: String,
}

impl Failure {
    fn new(status: i32, message: impl Into<String>) -> Failure {
        Failure {
            status,
            message: message.into(),
        }
    }
}

fn data_failure(path: &Path, e: DataError) -> Failure {
    let status = match e {
        DataError::Io(_) => EXIT_IO,
        _ => EXIT_PARSE,
    };
    Failure::new(status, format!("{}: {e}", path.display()))
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Failure {
        Failure::new(EXIT_SEMANTIC, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::new(EXIT_IO, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        let status = if e.is_refusal() {
            EXIT_REFUSED
        } else {
            EXIT_SEMANTIC
        };
        Failure::new(status, format!("oracle: {e}"))
    }
}

type CliResult = Result<i32, Failure>;

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, DataError>) -> Result<T, Failure> {
    io::read_text(path)
        .and_then(|text| parse(&text))
        .map_err(|e| data_failure(path, e))
}

fn save(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn show_value(v: &BigRational, precision: usize) -> String {
    format!(
        "{} ({})",
        format_fraction(v),
        format_significant(v, precision)
    )
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if status == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return status;
        }
    };
    let result = match cli.command {
        Command::Tabulate(a) => run_tabulate(&a, out),
        Command::Analyze(a) => run_analyze(&a, out),
        Command::Pattern(a) => run_pattern(&a, out),
        Command::Verify(a) => run_verify(&a, out),
        Command::Summarize(a) => run_summarize(&a, out),
    };
    match result {
        Ok(status) => status,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}

fn print_log(log: &CountLog, precision: usize, out: &mut dyn Write) -> std::io::Result<()> {
    let name = |c: CandidateIndex| log.candidates[c.0].as_str();
    writeln!(
        out,
        "{}: {} seats, {} papers, quota {}",
        log.contest_name,
        log.seats,
        log.total_papers,
        log.quota.value()
    )?;
    for e in &log.events {
        let tallies: Vec<String> = e
            .tallies
            .iter()
            .map(|(c, t)| format!("{}={}", name(*c), t))
            .collect();
        let what = match &e.kind {
            EventKind::Elect {
                candidate,
                transfer_value: Some(tv),
            } => format!(
                "elect {}, transfer value {}",
                name(*candidate),
                show_value(tv, precision)
            ),
            EventKind::Elect { candidate, .. } => format!("elect {}", name(*candidate)),
            EventKind::Eliminate { candidate } => format!("eliminate {}", name(*candidate)),
            EventKind::SeatWithoutQuota {
                candidate,
                has_quota,
            } => format!(
                "seat {} as last standing{}",
                name(*candidate),
                if *has_quota { ", with quota" } else { "" }
            ),
        };
        writeln!(out, "round {}: {what} | {}", e.round, tallies.join(" "))?;
    }
    let seated: Vec<&str> = log.seated.iter().map(|c| name(*c)).collect();
    writeln!(out, "seated: {}", seated.join(", "))?;
    for a in &log.anomalies {
        writeln!(
            out,
            "value increase: {} papers ({}) from {} to {} at round {}",
            a.ballot.papers,
            ballot_label(&a.ballot, log),
            show_value(&a.old_value, precision),
            show_value(&a.new_value, precision),
            a.round
        )?;
    }
    writeln!(out, "pattern: {}", render_pattern(log, None))
}

fn ballot_label(b: &crate::contest::Ballot, log: &CountLog) -> String {
    use crate::contest::Preferences;
    match &b.prefs {
        Preferences::Groups(gs) => {
            let ids: Vec<&str> = gs.iter().map(|g| log.groups[g.0].as_str()).collect();
            format!("ATL {}", ids.join(">"))
        }
        Preferences::Candidates(cs) => {
            let ids: Vec<&str> = cs.iter().map(|c| log.candidates[c.0].as_str()).collect();
            format!("BTL {}", ids.join(">"))
        }
    }
}

fn run_tabulate(a: &TabulateArgs, out: &mut dyn Write) -> CliResult {
    let contest = load(&a.contest, io::parse_contest)?;
    let ballots = load(&a.ballots, |t| io::parse_ballots(t, &contest))?;
    let log = tabulate(&contest, &ballots.ballots)?;
    print_log(&log, a.precision as usize, out)?;
    if let Some(path) = &a.out {
        save(path, &io::write_round_log(&log))?;
    }
    Ok(0)
}

/// Loads the events to replay, checking that a round log belongs to the
/// contest.
fn load_outcome(o: &OutcomeArgs, contest: &Contest) -> Result<EventSequence, Failure> {
    match (&o.events, &o.log) {
        (Some(p), _) => load(p, |t| io::parse_events(t, contest)),
        (None, Some(p)) => {
            let log = load(p, io::read_round_log)?;
            if log.candidates != contest.candidates() {
                return Err(Failure::new(
                    EXIT_SEMANTIC,
                    format!("{}: log candidates differ from the contest", p.display()),
                ));
            }
            Ok(EventSequence::from_log(&log))
        }
        (None, None) => Err(Failure::new(EXIT_USAGE, "need --events or --log")),
    }
}

fn load_inputs(
    contest: &Path,
    summary: &Path,
    outcome: &OutcomeArgs,
) -> Result<(Contest, FirstPrefSummary, EventSequence), Failure> {
    let contest = load(contest, io::parse_contest)?;
    let summary = load(summary, |t| io::parse_summary(t, &contest))?;
    let events = load_outcome(outcome, &contest)?;
    Ok((contest, summary, events))
}

fn run_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> CliResult {
    let (contest, summary, events) = load_inputs(&a.contest, &a.summary, &a.outcome)?;
    let options = AnalyzerOptions {
        literal_elimination_papers: a.literal_elimination_papers,
    };
    let report = analyze(&summary, &events, &contest, options)
        .map_err(|e| Failure::new(EXIT_SEMANTIC, e.to_string()))?;
    writeln!(out, "quota {}", report.quota.value())?;
    for e in &report.per_event {
        let verb = match e.event {
            ReplayEvent::Elect(_) => "elect",
            ReplayEvent::Eliminate(_) => "eliminate",
            ReplayEvent::Seat(_) => "seat",
        };
        writeln!(
            out,
            "round {}: {verb} {}, tally in [{}, {}]{}",
            e.round,
            contest.candidate_name(e.event.candidate()),
            format_fraction(&e.tally.lo),
            format_fraction(&e.tally.hi),
            if e.guaranteed { ", guaranteed" } else { "" }
        )?;
    }
    let names: Vec<&str> = report
        .guaranteed_candidates()
        .into_iter()
        .map(|c| contest.candidate_name(c))
        .collect();
    writeln!(
        out,
        "guaranteed prefix: {} ({})",
        report.guaranteed_prefix_length,
        names.join(", ")
    )?;
    if let Some(path) = &a.out {
        save(path, &io::write_report(&report, &contest))?;
    }
    Ok(0)
}

fn run_pattern(a: &PatternArgs, out: &mut dyn Write) -> CliResult {
    let log = load(&a.log, io::read_round_log)?;
    let report = match &a.report {
        Some(p) => {
            let r = load(p, io::read_report)?;
            let ours = EventSequence::from_log(&log);
            let theirs: Vec<ReplayEvent> = r.per_event.iter().map(|e| e.event).collect();
            if ours.events() != theirs.as_slice() {
                return Err(Failure::new(
                    EXIT_SEMANTIC,
                    "report events differ from the log",
                ));
            }
            Some(r)
        }
        None => None,
    };
    let pattern = render_pattern(&log, report.as_ref());
    if report.is_some() {
        writeln!(out, "{}", pattern.annotated())?;
    } else {
        writeln!(out, "{pattern}")?;
    }
    if let Some(expected) = &a.expect {
        let cmp = compare_pattern(&pattern, expected)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("--expect: {e}")))?;
        match cmp {
            PatternComparison::Match => writeln!(out, "matches")?,
            PatternComparison::TokenDiff {
                position,
                expected,
                found,
            } => {
                let show = |t: Option<crate::pattern::Token>| {
                    t.map_or_else(|| "end".to_string(), |t| t.to_string())
                };
                writeln!(
                    out,
                    "differs at token {position}: expected {}, found {}",
                    show(expected),
                    show(found)
                )?;
                return Ok(EXIT_SEMANTIC);
            }
            PatternComparison::BoldDiff { expected, found } => {
                writeln!(
                    out,
                    "guaranteed prefix differs: expected {expected}, found {found}"
                )?;
                return Ok(EXIT_SEMANTIC);
            }
        }
    }
    Ok(0)
}

fn run_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let (contest, summary, events) = load_inputs(&a.contest, &a.summary, &a.outcome)?;
    let options = AnalyzerOptions {
        literal_elimination_papers: a.literal_elimination_papers,
    };
    let report = analyze(&summary, &events, &contest, options)
        .map_err(|e| Failure::new(EXIT_SEMANTIC, e.to_string()))?;
    let mut claimed = report.guaranteed_candidates();
    for id in &a.claim {
        let c = contest
            .candidate_index(id)
            .ok_or_else(|| Failure::new(EXIT_SEMANTIC, format!("unknown candidate {id:?}")))?;
        if !claimed.contains(&c) {
            claimed.push(c);
        }
    }
    let limits = Limits {
        max_candidates: a.max_candidates,
        max_groups: a.max_groups,
        max_completions: a.max_completions,
    };
    let space = CompletionSpace::new(&contest, &summary, limits)?;
    let verdict = verify_candidates(&space, &claimed)?;
    let names = |cs: &[CandidateIndex]| -> String {
        cs.iter()
            .map(|c| contest.candidate_name(*c))
            .collect::<Vec<_>>()
            .join(", ")
    };
    writeln!(out, "checking: {}", names(&claimed))?;
    let status = match &verdict {
        Verdict::Confirmed { completions } => {
            writeln!(out, "confirmed ({completions} completions)")?;
            0
        }
        Verdict::Counterexample {
            completions,
            index,
            ballots,
            missing,
            seated,
        } => {
            writeln!(
                out,
                "counterexample at completion {index} of {completions}: {} not seated (seated: {})",
                names(missing),
                names(seated)
            )?;
            out.write_all(io::write_ballots(ballots, &contest).as_bytes())?;
            EXIT_COUNTEREXAMPLE
        }
    };
    if let Some(path) = &a.out {
        save(path, &io::write_verdict(&verdict, &claimed, &contest))?;
    }
    Ok(status)
}

fn run_summarize(a: &SummarizeArgs, out: &mut dyn Write) -> CliResult {
    let contest = load(&a.contest, io::parse_contest)?;
    let ballots = load(&a.ballots, |t| io::parse_ballots(t, &contest))?;
    let summary = io::summarize(&ballots.ballots, &contest);
    let text = io::write_summary(&summary, &contest);
    match &a.out {
        Some(path) => {
            save(path, &text)?;
            writeln!(
                out,
                "{} papers: {} ATL, {} BTL",
                summary.total(),
                summary.total_atl(),
                summary.total_btl()
            )?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}
