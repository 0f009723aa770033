//! Acceptance criteria, one pass/fail line each.
//!
//! Run everything with `cargo test --test acceptance`, or a subset by
//! number: `cargo test --test acceptance -- 1 3`.

#[path = "../common/mod.rs"]
mod common;
mod operators;
mod oracle;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use common::{arbiter, split_weights, unsolicited_weights, waiting_weights};
use mpsynth::automata::WeightFunction;
use mpsynth::game::{solve_backward, Limits};
use mpsynth::synthesis::{meets, Mode, Problem, SynthesisOptions, SynthesisReport, Threshold, Verdict};

type Outcome = Result<String, String>;

/// Number, name, time budget and check.
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn problem(w: WeightFunction, nu: &str) -> Problem {
    let (f, part) = arbiter();
    let nu: Threshold = nu.parse().unwrap();
    Problem::new(f, part, w, Mode::MeanPayoff(nu), 100_000).unwrap()
}

/// The report's machine exists and its certificate meets `nu`.
fn certified(report: &SynthesisReport, nu: &str) -> Result<String, String> {
    let nu: Threshold = nu.parse().unwrap();
    check(report.verdict == Verdict::Realizable, || format!("verdict {:?}", report.verdict))?;
    let cert = report.certificate.as_ref().ok_or("no certificate")?;
    check(meets(cert, &nu), || format!("certified {:?} below {nu}", cert.mean_payoff))?;
    let shown: Vec<String> = cert.mean_payoff.iter().map(ToString::to_string).collect();
    Ok(format!(
        "K={} C={:?} |M|={} mean payoff ({})",
        report.used_k.unwrap(),
        report.used_c.as_ref().unwrap(),
        report.machine.as_ref().unwrap().num_states(),
        shown.join(", ")
    ))
}

/// Minimal `K` at cap `c`, within `tolerance` of `expected`, with the bound
/// just below shown to lose.
fn minimal(p: &Problem, kmax: i32, c: &[i32], expected: i32, tolerance: i32, nu: &str) -> Outcome {
    let r = p.minimal_k(kmax, c, &SynthesisOptions::default()).map_err(|e| e.to_string())?;
    let k = r.k.ok_or_else(|| format!("no winning K up to {kmax} at C={c:?}"))?;
    check((k - expected).abs() <= tolerance, || format!("minimal K={k}, expected {expected}"))?;
    check(k == 0 || r.below == Some(k - 1), || format!("K={k} won but K-1 not shown losing ({:?})", r.below))?;
    let detail = certified(&r.report, nu)?;
    Ok(format!("minimal {detail}"))
}

fn criterion_1() -> Outcome {
    let p = problem(waiting_weights(&arbiter().1), "-6/5");
    let r = p.synthesize(8, &[16], &SynthesisOptions::default()).map_err(|e| e.to_string())?;
    let search = certified(&r, "-6/5")?;
    let cert = r.certificate.as_ref().unwrap();
    check(cert.mean_payoff[0] >= Ratio::new(-6, 5), || "certificate below -6/5".into())?;
    let min = minimal(&p, 8, &[64], 4, 0, "-6/5")?;
    let below = p.synthesize(3, &[64], &SynthesisOptions::default()).map_err(|e| e.to_string())?;
    check(below.verdict == Verdict::NotRealizableWithinBounds, || format!("kmax=3: {:?}", below.verdict))?;
    Ok(format!("search {search}; {min}; kmax=3 cmax=64 not realizable"))
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    for (nu, expected) in [("-51/50", 49), ("-501/500", 499)] {
        let start = Instant::now();
        let p = problem(waiting_weights(&arbiter().1), nu);
        let cap = 4 * (expected + 1);
        let detail = minimal(&p, 2 * expected, &[cap], expected, 1, nu).map_err(|e| format!("ν={nu}: {e}"))?;
        let took = start.elapsed();
        check(took < Duration::from_secs(60), || format!("ν={nu} took {took:.1?}"))?;
        parts.push(format!("ν={nu}: {detail} in {took:.1?}"));
    }
    Ok(parts.join("; "))
}

fn criterion_3() -> Outcome {
    let p = problem(waiting_weights(&arbiter().1), "-1");
    let r = p.synthesize(1000, &[4000], &SynthesisOptions::default()).map_err(|e| e.to_string())?;
    check(r.verdict == Verdict::NotRealizableWithinBounds, || format!("verdict {:?}", r.verdict))?;
    Ok(format!("{} probes up to K=1000 C=4000, none realizable", r.probes.len()))
}

fn criterion_4() -> Outcome {
    let nu = "-6/5,0,0";
    let p = problem(unsolicited_weights(&arbiter().1), nu);
    let r = p.synthesize(8, &[16, 2, 2], &SynthesisOptions::default()).map_err(|e| e.to_string())?;
    let search = certified(&r, nu)?;
    let cert = r.certificate.as_ref().unwrap();
    check(cert.mean_payoff[1..].iter().all(|m| *m >= Ratio::from_integer(0)), || {
        "unsolicited grants: a client dimension is negative".into()
    })?;
    let min = minimal(&p, 8, &[64, 4, 4], 4, 1, nu)?;
    Ok(format!("search {search}; {min}"))
}

fn criterion_5() -> Outcome {
    let nu = "-1/2,-1,0,0";
    let p = problem(split_weights(&arbiter().1), nu);
    minimal(&p, 8, &[16, 16, 4, 4], 1, 1, nu)
}

fn criterion_6() -> Outcome {
    oracle::run(2000)
}

fn criterion_7() -> Outcome {
    operators::run()
}

/// Peak resident set size of this process since the last reset, in kB.
fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn criterion_8() -> Outcome {
    // Resets the peak RSS counter so that only this criterion is measured.
    let _ = std::fs::write("/proc/self/clear_refs", "5");
    let p = problem(waiting_weights(&arbiter().1), "-1001/1000");
    let spec = p.game(999, &[2999]);
    let r = solve_backward(&spec, &Limits::default()).map_err(|e| e.to_string())?;
    let peak = r.stats.antichain_peak;
    check(peak < 100_000, || format!("antichain peak {peak}"))?;
    let rss = peak_rss_kb();
    if let Some(kb) = rss {
        check(kb < 1024 * 1024, || format!("peak memory {kb} kB"))?;
    }
    let rss = rss.map_or("unavailable".to_string(), |kb| format!("{} MB", kb / 1024));
    Ok(format!(
        "realizable={} after {} iterations, antichain peak {peak}, final {}, peak memory {rss}",
        r.realizable,
        r.stats.iterations,
        r.witness.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "mean payoff -1.2, minimal K=4", Duration::from_secs(5), criterion_1),
        (2, "mean payoff -1.02 and -1.002, minimal K=49 and 499", Duration::from_secs(120), criterion_2),
        (3, "mean payoff -1 not realizable up to K=1000", Duration::from_secs(120), criterion_3),
        (4, "three dimensions, no unsolicited grants", Duration::from_secs(30), criterion_4),
        (5, "four dimensions, threshold (-0.5,-1,0,0)", Duration::from_secs(30), criterion_5),
        (6, "three solvers agree on random specifications", Duration::from_secs(600), criterion_6),
        (7, "operator properties", Duration::from_secs(300), criterion_7),
        (8, "antichain compactness at -1.001", Duration::from_secs(600), criterion_8),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, budget, run) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > budget => Err(format!("took {took:.1?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {n} PASS ({took:.1?}) {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL ({took:.1?}) {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
