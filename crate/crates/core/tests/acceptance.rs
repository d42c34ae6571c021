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

//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{random_contest, read_fixture, Params};
use num_traits::{One, Zero};
use stv_guarantees::bounds::GuaranteeReport;
use stv_guarantees::engine::{detect_value_increases, tabulate_traced, Trace};
use stv_guarantees::io::{
    parse_ballots, parse_contest, parse_events, parse_summary, read_report, read_round_log,
    summarize, write_ballots, write_contest, write_events, write_report, write_round_log,
    write_summary,
};
use stv_guarantees::oracle::{
    check_containment, enumerate_completions, verify_guarantees, CompletionSpace, Limits, Verdict,
};
use stv_guarantees::rational::{format_significant, from_u64, ratio};
use stv_guarantees::{
    analyze, tabulate, AnalyzerOptions, Ballot, BigRational, Contest, CountLog, EventKind,
    EventSequence, Preferences,
};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    check(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn load(dir: &str) -> (Contest, Vec<Ballot>) {
    let contest = parse_contest(&read_fixture(&format!("{dir}/contest.json"))).unwrap();
    let ballots = parse_ballots(&read_fixture(&format!("{dir}/ballots.csv")), &contest).unwrap();
    (contest, ballots.ballots)
}

/// Conservation failures seen by the random suites.
#[derive(Default)]
struct Conservation {
    runs: usize,
    failures: Vec<String>,
}

impl Conservation {
    fn record(&mut self, label: &str, log: &CountLog, trace: &Trace) {
        self.runs += 1;
        let total = from_u64(log.total_papers);
        for r in trace
            .rounds
            .iter()
            .map(|r| (r.round, &r.accounting))
            .chain([(0, &trace.final_accounting)])
        {
            if r.1.total() != total {
                self.failures.push(format!(
                    "{label} round {}: {} != {}",
                    r.0,
                    r.1.total(),
                    total
                ));
            }
        }
        for tv in log.transfer_values() {
            if tv < BigRational::zero() || tv >= BigRational::one() {
                self.failures.push(format!("{label}: transfer value {tv}"));
            }
        }
    }
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let (contest, ballots) = load("table1");
    let log = tabulate(&contest, &ballots).map_err(|e| e.to_string())?;
    let c = |n: &str| contest.candidate_index(n).unwrap();
    let t = |round: usize, n: &str| log.events[round - 1].tally_of(c(n));
    check(log.quota.value() == 19, || {
        format!("quota {}", log.quota.value())
    })?;
    let want = [
        (1, "c1", 10),
        (2, "c3", 25),
        (3, "c2", 17),
        (3, "c4", 15),
        (4, "c2", 32),
    ];
    for (round, name, tally) in want {
        check(t(round, name) == Some(tally), || {
            format!("round {round} {name}: {:?}", t(round, name))
        })?;
    }
    let kinds: Vec<(String, bool)> = log
        .events
        .iter()
        .map(|e| {
            (
                contest.candidate_name(e.kind.candidate()).to_string(),
                e.kind.is_seating(),
            )
        })
        .collect();
    let expected: Vec<(String, bool)> = [("c1", false), ("c3", true), ("c4", false), ("c2", true)]
        .iter()
        .map(|(n, s)| (n.to_string(), *s))
        .collect();
    check(kinds == expected, || format!("events {kinds:?}"))?;
    check(log.transfer_values() == vec![ratio(6, 25)], || {
        format!("transfer values {:?}", log.transfer_values())
    })?;
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!("quota 19, tallies and 6/25 exact ({took:?})"))
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let (contest, ballots) = load("example1");
    let log = tabulate(&contest, &ballots).map_err(|e| e.to_string())?;
    let names: Vec<&str> = log
        .seated
        .iter()
        .map(|c| contest.candidate_name(*c))
        .collect();
    check(names == ["a1", "b", "a2", "a3", "c"], || {
        format!("seated {names:?}")
    })?;
    let want = [
        ratio(310, 410),
        ratio(1, 101),
        ratio(210, 410),
        ratio(111, 511),
    ];
    check(log.transfer_values() == want, || {
        format!("transfer values {:?}", log.transfer_values())
    })?;
    let shown: Vec<String> = want.iter().map(|v| format_significant(v, 3)).collect();
    check(shown == ["0.756", "0.0099", "0.512", "0.217"], || {
        format!("displayed {shown:?}")
    })?;
    let last = log.events.last().unwrap();
    let t = |n: &str| last.tally_of(contest.candidate_index(n).unwrap());
    check(t("a4") == Some(89) && t("c") == Some(108), || {
        format!("final a4 {:?}, c {:?}", t("a4"), t("c"))
    })?;
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!(
        "seated a1 b a2 a3 c, values {} ({took:?})",
        shown.join(" ")
    ))
}

fn criterion3() -> Outcome {
    let (contest, ballots) = load("example1");
    let log = tabulate(&contest, &ballots).map_err(|e| e.to_string())?;
    let inc = detect_value_increases(&log);
    check(inc.len() == 1, || format!("{} increases", inc.len()))?;
    let a = &inc[0];
    let c = |n: &str| contest.candidate_index(n).unwrap();
    check(
        a.ballot.prefs == Preferences::Candidates(vec![c("b"), c("a3"), c("c")])
            && a.ballot.papers == 101
            && a.round == 4
            && a.old_value == ratio(1, 101)
            && a.new_value == ratio(111, 511),
        || format!("{a:?}"),
    )?;
    Ok("101 [b, a3, c] papers rise from 1/101 to 111/511 at round 4".into())
}

fn criterion4() -> Outcome {
    let start = Instant::now();
    let contest = parse_contest(&read_fixture("example1/contest.json")).unwrap();
    let summary = parse_summary(&read_fixture("example1/summary.csv"), &contest).unwrap();
    let events = parse_events(&read_fixture("example1/events.json"), &contest).unwrap();
    let report = analyze(&summary, &events, &contest, AnalyzerOptions::default())
        .map_err(|e| e.to_string())?;
    check(report.guaranteed_prefix_length == 4, || {
        format!("prefix {}", report.guaranteed_prefix_length)
    })?;
    check(!report.per_event[4].guaranteed, || {
        "c flagged guaranteed".into()
    })?;
    // Three groups and 5 x 326 x 326 completions: above the default limits.
    let limits = Limits {
        max_groups: 3,
        max_completions: 600_000,
        ..Limits::default()
    };
    let space = CompletionSpace::new(&contest, &summary, limits).map_err(|e| e.to_string())?;
    match verify_guarantees(&space, &report).map_err(|e| e.to_string())? {
        Verdict::Confirmed { completions } => Ok(format!(
            "prefix 4, c not guaranteed; confirmed over {completions} completions ({:?})",
            start.elapsed()
        )),
        v => Err(format!("oracle: {v:?}")),
    }
}

fn criterion5(cons: &mut Conservation) -> Outcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut rounds = 0;
    let contests = 1000;
    for seed in 0..contests {
        let g = random_contest(seed, Params::containment());
        let (log, trace) = tabulate_traced(&g.contest, &g.ballots).map_err(|e| e.to_string())?;
        cons.record(&format!("seed {seed}"), &log, &trace);
        let summary = summarize(&g.ballots, &g.contest);
        let report = analyze(
            &summary,
            &EventSequence::from_log(&log),
            &g.contest,
            AnalyzerOptions::default(),
        )
        .map_err(|e| format!("seed {seed}: {e}"))?;
        rounds += trace.rounds.len();
        for v in check_containment(&trace, &report.trace, summary.total(), summary.total_atl()) {
            violations.push(format!("seed {seed}: {v:?}"));
        }
        violations.extend(disordered(
            &report,
            summary.total(),
            summary.total_atl(),
            seed,
        ));
    }
    check(violations.is_empty(), || {
        format!("{} violations, first {}", violations.len(), violations[0])
    })?;
    let took = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{contests} contests, {rounds} rounds, zero violations ({took:?})"
    ))
}

/// Ordering and clamp checks on every bounds state, including the one after
/// the last event.
fn disordered(report: &GuaranteeReport, total: u64, total_atl: u64, seed: u64) -> Vec<String> {
    let mut out = Vec::new();
    for r in &report.trace {
        for (c, b) in r.remaining() {
            if !b.is_ordered()
                || b.btl_papers.hi > total
                || b.atl_papers.hi > total_atl
                || b.btl_value.hi > from_u64(total)
                || b.atl_value.hi > from_u64(total_atl)
            {
                out.push(format!("seed {seed} round {} {c:?}: {b:?}", r.round));
            }
        }
    }
    out
}

fn criterion6(cons: &mut Conservation) -> Outcome {
    let start = Instant::now();
    let wanted = 100;
    let mut checked = 0;
    let mut claims = 0;
    let mut completions = 0;
    let mut refused = 0;
    let mut seed = 0;
    while checked < wanted {
        let g = random_contest(1_000_000 + seed, Params::tiny());
        seed += 1;
        let summary = summarize(&g.ballots, &g.contest);
        let space = match CompletionSpace::new(&g.contest, &summary, Limits::default()) {
            Ok(s) => s,
            Err(_) => {
                refused += 1;
                continue;
            }
        };
        let (log, trace) = tabulate_traced(&g.contest, &g.ballots).map_err(|e| e.to_string())?;
        cons.record(&format!("tiny seed {seed}"), &log, &trace);
        let report = analyze(
            &summary,
            &EventSequence::from_log(&log),
            &g.contest,
            AnalyzerOptions::default(),
        )
        .map_err(|e| e.to_string())?;
        match verify_guarantees(&space, &report).map_err(|e| e.to_string())? {
            Verdict::Confirmed { completions: n } => completions += n,
            v => return Err(format!("tiny seed {seed}: {v:?}")),
        }
        // The oracle's own counts are untraced; rerun them for conservation.
        for (i, ballots) in enumerate_completions(&space).enumerate() {
            let (log, trace) = tabulate_traced(&g.contest, &ballots).map_err(|e| e.to_string())?;
            cons.record(&format!("tiny seed {seed} completion {i}"), &log, &trace);
        }
        claims += report.guaranteed_prefix_length;
        checked += 1;
    }
    let took = within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{checked} contests ({refused} over the limits skipped), {claims} guaranteed seats, \
         {completions} completions, zero counterexamples ({took:?})"
    ))
}

fn criterion7(cons: &Conservation) -> Outcome {
    check(cons.runs >= 100_000, || {
        format!("only {} runs recorded", cons.runs)
    })?;
    check(cons.failures.is_empty(), || {
        format!(
            "{} failures, first {}",
            cons.failures.len(),
            cons.failures[0]
        )
    })?;
    Ok(format!(
        "{} runs: standing + seated + exhausted + rounding loss = papers, transfer values in [0, 1)",
        cons.runs
    ))
}

fn criterion8() -> Outcome {
    let mut documents = 0;
    for seed in 0..300 {
        let g = random_contest(2_000_000 + seed, Params::containment());
        let fail = |what: &str| format!("seed {seed}: {what} differs");
        let c = &g.contest;
        let text = write_contest(c);
        check(parse_contest(&text).ok().as_ref() == Some(c), || {
            fail("contest")
        })?;
        let text = write_ballots(&g.ballots, c);
        check(
            parse_ballots(&text, c).map(|f| f.ballots).ok() == Some(g.ballots.clone()),
            || fail("ballots"),
        )?;
        let summary = summarize(&g.ballots, c);
        check(
            parse_summary(&write_summary(&summary, c), c).ok() == Some(summary.clone()),
            || fail("summary"),
        )?;
        let log = tabulate(c, &g.ballots).map_err(|e| e.to_string())?;
        let events = EventSequence::from_log(&log);
        check(
            parse_events(&write_events(&events, c), c).ok() == Some(events.clone()),
            || fail("events"),
        )?;
        let text = write_round_log(&log);
        check(read_round_log(&text).ok() == Some(log.clone()), || {
            fail("log")
        })?;
        let report =
            analyze(&summary, &events, c, AnalyzerOptions::default()).map_err(|e| e.to_string())?;
        check(
            read_report(&write_report(&report, c)).ok() == Some(report),
            || fail("report"),
        )?;
        documents += 6;
    }
    // Exact values survive, not just equality of re-serialized forms.
    let (contest, ballots) = load("example1");
    let log = tabulate(&contest, &ballots).map_err(|e| e.to_string())?;
    let back = read_round_log(&write_round_log(&log)).map_err(|e| e.to_string())?;
    let last_tv = back.events.iter().rev().find_map(|e| match &e.kind {
        EventKind::Elect {
            transfer_value: Some(tv),
            ..
        } => Some(tv.clone()),
        _ => None,
    });
    check(last_tv == Some(ratio(111, 511)), || format!("{last_tv:?}"))?;
    Ok(format!("{documents} documents, zero diffs"))
}

fn main() {
    let mut cons = Conservation::default();
    let results: Vec<(&str, Outcome)> = vec![
        ("four-candidate count replay", criterion1()),
        ("four-quota, five-seat count replay", criterion2()),
        ("value increase detection", criterion3()),
        ("guaranteed prefix and exhaustive check", criterion4()),
        ("containment over random contests", criterion5(&mut cons)),
        (
            "guarantee soundness over tiny contests",
            criterion6(&mut cons),
        ),
        ("conservation", criterion7(&cons)),
        ("document round trips", criterion8()),
    ];
    let mut failed = 0;
    for (i, (name, result)) in results.iter().enumerate() {
        match result {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
