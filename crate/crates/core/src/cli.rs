//! Command-line front end: job files, flags, and the summary record.
//!
//! Exit codes: 0 realizable (or machine verified), 1 input error,
//! 2 not realizable within the bounds (or verification failed),
//! 3 resource exhaustion.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::automata::{AutomatonError, WeightFunction, DEFAULT_MAX_STATES};
use crate::game::{Algorithm, GameError, Limits};
use crate::ltl::{is_identifier, is_reserved, parse_formula, Formula, SignalPartition};
use crate::synthesis::{
    approx, Certificate, Mode, MooreMachine, Objective, Policy, Problem, SynthesisError, SynthesisOptions,
    SynthesisReport, Threshold, Verdict, VerifyError,
};

pub const EXIT_REALIZABLE: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_UNREALIZABLE: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Mean payoff at least the threshold in every dimension.
    Mp,
    /// Energy never below zero from the initial credit.
    Energy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Backward,
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    /// Start at (0, 0) and double K and C alternately.
    Doubling,
    /// Solve once at (kmax, cmax).
    Maximal,
}

/// Synthesize a Moore machine from an LTL formula with mean-payoff or
/// energy weights.
#[derive(Debug, Parser)]
#[command(name = "mpsynth", version)]
pub struct Args {
    /// File holding one LTL formula.
    #[arg(long, value_name = "PATH")]
    pub formula: PathBuf,
    /// File with `.inputs` and `.outputs` lines.
    #[arg(long, value_name = "PATH")]
    pub partition: PathBuf,
    /// File with one `<lit> <int> [<int> ...]` line per weighted literal.
    #[arg(long, value_name = "PATH")]
    pub weights: PathBuf,
    /// Mean-payoff threshold per dimension, e.g. `-1.2` or `-6/5,0,0`.
    #[arg(long, value_name = "V1[,V2,...]", allow_hyphen_values = true)]
    pub threshold: Option<String>,
    #[arg(long, value_enum, default_value = "mp")]
    pub mode: ModeArg,
    /// Largest counter bound probed.
    #[arg(long, value_name = "N", default_value_t = 8)]
    pub kmax: i32,
    /// Largest credit per dimension; a single value applies to all.
    #[arg(long, value_name = "C1[,C2,...]")]
    pub cmax: Option<String>,
    #[arg(long, value_enum, default_value = "backward")]
    pub algo: AlgoArg,
    #[arg(long, value_enum, default_value = "doubling")]
    pub policy: PolicyArg,
    /// Write the machine as Graphviz DOT.
    #[arg(long, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Write the machine in text form, readable by `--verify-only`.
    #[arg(long, value_name = "PATH")]
    pub machine: Option<PathBuf>,
    /// Check a machine file against the job instead of synthesizing.
    #[arg(long, value_name = "PATH")]
    pub verify_only: Option<PathBuf>,
    /// Accepted for compatibility; the tool is deterministic.
    #[arg(long)]
    pub seedless: bool,
    #[arg(long, value_name = "N")]
    pub max_iterations: Option<usize>,
    #[arg(long, value_name = "N")]
    pub max_nodes: Option<usize>,
    /// Cap on the states of the formula's automaton.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: usize,
    /// Probes solved concurrently.
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub jobs: usize,
    /// Write the summary record here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub summary: Option<PathBuf>,
    /// Log progress on the error stream; repeat for more detail.
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Line { path: String, line: usize, message: String },
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error("{0}")]
    Flag(String),
}

/// Everything a run needs, loaded and checked.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub formula: Formula,
    pub partition: SignalPartition,
    pub weights: WeightFunction,
    pub mode: Mode,
    pub kmax: i32,
    pub cmax: Vec<i32>,
    pub options: SynthesisOptions,
    pub dot: Option<PathBuf>,
    pub machine: Option<PathBuf>,
    pub verify_only: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Read {
        path: path.display().to_string(),
        source,
    })
}

/// Text of a line with any `#` comment removed.
fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses `.inputs` / `.outputs` lines. Either may repeat.
pub fn parse_partition(text: &str, path: &str) -> Result<SignalPartition, InputError> {
    let (mut inputs, mut outputs) = (Vec::new(), Vec::new());
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let at = |message: String| InputError::Line {
            path: path.into(),
            line: n + 1,
            message,
        };
        let mut words = line.split_whitespace();
        let target = match words.next() {
            Some(".inputs") => &mut inputs,
            Some(".outputs") => &mut outputs,
            Some(other) => return Err(at(format!("expected `.inputs` or `.outputs`, found `{other}`"))),
            None => continue,
        };
        for w in words {
            if !is_identifier(w) || is_reserved(w) {
                return Err(at(format!("`{w}` is not a valid signal name")));
            }
            target.push(w.to_string());
        }
    }
    SignalPartition::new(inputs, outputs).map_err(|e| InputError::File {
        path: path.into(),
        message: e.to_string(),
    })
}

/// Parses `<lit> <int> ...` lines. Every line must have the same arity.
pub fn parse_weights(text: &str, path: &str, part: &SignalPartition) -> Result<WeightFunction, InputError> {
    let mut rows: Vec<(usize, usize, bool, Vec<i64>)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let at = |message: String| InputError::Line {
            path: path.into(),
            line: n + 1,
            message,
        };
        let mut words = line.split_whitespace();
        let lit = words.next().unwrap_or_default();
        let (positive, name) = match lit.strip_prefix('!') {
            Some(name) => (false, name),
            None => (true, lit),
        };
        let signal = part
            .index_of(name)
            .ok_or_else(|| at(format!("unknown signal `{name}`")))?;
        let values = words
            .map(|w| w.parse::<i64>().map_err(|_| at(format!("`{w}` is not an integer"))))
            .collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err(at(format!("literal `{lit}` has no weights")));
        }
        if let Some((_, _, _, first)) = rows.first() {
            if first.len() != values.len() {
                return Err(at(format!("{} weights, earlier lines have {}", values.len(), first.len())));
            }
        }
        if rows.iter().any(|r| r.1 == signal && r.2 == positive) {
            return Err(at(format!("literal `{lit}` is weighted twice")));
        }
        rows.push((n + 1, signal, positive, values));
    }
    let dim = rows.first().map(|r| r.3.len()).ok_or_else(|| InputError::File {
        path: path.into(),
        message: "no weighted literals".into(),
    })?;
    let mut w = WeightFunction::zero(dim, part.num_signals());
    for (line, signal, positive, values) in rows {
        w.set(signal, positive, values).map_err(|e| InputError::Line {
            path: path.into(),
            line,
            message: e.to_string(),
        })?;
    }
    Ok(w)
}

fn parse_cmax(text: &str, dim: usize) -> Result<Vec<i32>, InputError> {
    let values = text
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<i32>()
                .ok()
                .filter(|c| *c >= 0)
                .ok_or_else(|| InputError::Flag(format!("--cmax: `{v}` is not a non-negative integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match values.len() {
        1 => Ok(vec![values[0]; dim]),
        n if n == dim => Ok(values),
        n => Err(InputError::Flag(format!("--cmax has {n} values, the weights have dimension {dim}"))),
    }
}

impl JobConfig {
    pub fn load(args: &Args) -> Result<Self, InputError> {
        let part_path = args.partition.display().to_string();
        let partition = parse_partition(&read(&args.partition)?, &part_path)?;
        let formula_path = args.formula.display().to_string();
        let formula = parse_formula(read(&args.formula)?.trim(), &partition).map_err(|e| InputError::File {
            path: formula_path,
            message: e.to_string(),
        })?;
        let weights_path = args.weights.display().to_string();
        let weights = parse_weights(&read(&args.weights)?, &weights_path, &partition)?;
        let dim = weights.dim();
        let mode = match (args.mode, &args.threshold) {
            (ModeArg::Mp, Some(t)) => {
                let nu: Threshold = t.parse().map_err(|e| InputError::Flag(format!("--threshold: {e}")))?;
                if nu.dim() != dim {
                    return Err(InputError::Flag(format!(
                        "--threshold has {} values, the weights have dimension {dim}",
                        nu.dim()
                    )));
                }
                Mode::MeanPayoff(nu)
            }
            (ModeArg::Mp, None) => return Err(InputError::Flag("--mode mp needs --threshold".into())),
            (ModeArg::Energy, Some(_)) => {
                return Err(InputError::Flag("--threshold does not apply to --mode energy".into()))
            }
            (ModeArg::Energy, None) => Mode::Energy,
        };
        if args.kmax < 0 {
            return Err(InputError::Flag("--kmax must be non-negative".into()));
        }
        let cmax = match &args.cmax {
            Some(c) => parse_cmax(c, dim)?,
            None => vec![2 * args.kmax; dim],
        };
        if args.jobs == 0 {
            return Err(InputError::Flag("--jobs must be at least 1".into()));
        }
        let defaults = Limits::default();
        let options = SynthesisOptions {
            algorithm: match args.algo {
                AlgoArg::Backward => Algorithm::Backward,
                AlgoArg::Forward => Algorithm::Forward,
            },
            policy: match args.policy {
                PolicyArg::Doubling => Policy::Doubling,
                PolicyArg::Maximal => Policy::Maximal,
            },
            limits: Limits {
                max_iterations: args.max_iterations.unwrap_or(defaults.max_iterations),
                max_nodes: args.max_nodes.unwrap_or(defaults.max_nodes),
                cancel: None,
            },
            jobs: args.jobs,
            refute: true,
            max_automaton_states: args.max_states,
        };
        Ok(JobConfig {
            formula,
            partition,
            weights,
            mode,
            kmax: args.kmax,
            cmax,
            options,
            dot: args.dot.clone(),
            machine: args.machine.clone(),
            verify_only: args.verify_only.clone(),
        })
    }
}

/// The structured record printed after every run.
#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub verdict: String,
    pub k: Option<i32>,
    pub c: Option<Vec<i32>>,
    /// Certified worst-case mean payoff per dimension, as exact fractions.
    pub mean_payoff: Option<Vec<String>>,
    /// Least initial credit per dimension, `null` where unbounded.
    pub min_energy: Option<Vec<Option<i64>>>,
    pub machine_states: Option<usize>,
    pub antichain_peak: usize,
    pub probes: usize,
    pub wall_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Summary {
    fn certify(&mut self, cert: &Certificate) {
        self.mean_payoff = Some(cert.mean_payoff.iter().map(ToString::to_string).collect());
        self.min_energy = Some(cert.min_energy.clone());
        self.machine_states = Some(cert.machine_states);
    }
}

fn exhausted(e: &SynthesisError) -> bool {
    matches!(
        e,
        SynthesisError::Automaton(AutomatonError::TooManyStates(_))
            | SynthesisError::Game(GameError::IterationCap(_) | GameError::NodeCap(_))
    )
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn synthesize(job: &JobConfig, summary: &mut Summary, log: &mut dyn Write) -> Result<u8, (u8, String)> {
    let fail = |e: SynthesisError| (if exhausted(&e) { EXIT_EXHAUSTED } else { EXIT_INPUT }, e.to_string());
    let problem = Problem::new(
        job.formula.clone(),
        job.partition.clone(),
        job.weights.clone(),
        job.mode.clone(),
        job.options.max_automaton_states,
    )
    .map_err(fail)?;
    let _ = writeln!(log, "automaton: {} states", problem.automaton().num_states());
    let report: SynthesisReport = problem.synthesize(job.kmax, &job.cmax, &job.options).map_err(fail)?;
    for p in &report.probes {
        let _ = writeln!(log, "probe K={} C={:?}: {:?} ({} ms)", p.k, p.c, p.outcome, p.millis);
    }
    summary.verdict = report.verdict.as_str().into();
    summary.k = report.used_k;
    summary.c = report.used_c.clone();
    summary.antichain_peak = report.antichain_peak();
    summary.probes = report.probes.len();
    if let Some(cert) = &report.certificate {
        summary.certify(cert);
        let shown: Vec<String> = cert
            .mean_payoff
            .iter()
            .map(|r| format!("{r} (~{:.4})", approx(r)))
            .collect();
        let _ = writeln!(log, "certified mean payoff: {}", shown.join(", "));
    }
    if let Some(m) = &report.machine {
        if let Some(p) = &job.machine {
            write_file(p, &m.to_text()).map_err(|e| (EXIT_INPUT, e))?;
        }
        if let Some(p) = &job.dot {
            write_file(p, &m.to_dot()).map_err(|e| (EXIT_INPUT, e))?;
        }
    }
    Ok(match report.verdict {
        Verdict::Realizable => EXIT_REALIZABLE,
        Verdict::NotRealizableWithinBounds => EXIT_UNREALIZABLE,
        Verdict::ResourceExhausted => EXIT_EXHAUSTED,
    })
}

fn verify(job: &JobConfig, path: &Path, summary: &mut Summary, log: &mut dyn Write) -> Result<u8, (u8, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| (EXIT_INPUT, format!("{}: {e}", path.display())))?;
    let m = MooreMachine::parse_text(&text).map_err(|e| (EXIT_INPUT, format!("{}: {e}", path.display())))?;
    let objective = match &job.mode {
        Mode::MeanPayoff(nu) => Objective::MeanPayoff(nu.clone()),
        Mode::Energy => Objective::Energy(job.cmax.iter().map(|&c| c as i64).collect()),
    };
    summary.c = (job.mode == Mode::Energy).then(|| job.cmax.clone());
    match crate::synthesis::verify_machine(&m, &job.formula, &job.partition, &job.weights, &objective) {
        Ok(cert) => {
            summary.verdict = "verified".into();
            summary.certify(&cert);
            Ok(EXIT_REALIZABLE)
        }
        Err(VerifyError::Counterexample { failure, shown, .. }) => {
            summary.verdict = "counterexample".into();
            let _ = writeln!(log, "{failure}; counterexample {shown}");
            summary.error = Some(format!("{failure}; counterexample {shown}"));
            Ok(EXIT_UNREALIZABLE)
        }
        Err(VerifyError::Automaton(e @ AutomatonError::TooManyStates(_))) => Err((EXIT_EXHAUSTED, e.to_string())),
        Err(e) => Err((EXIT_INPUT, e.to_string())),
    }
}

/// Runs one job. The summary record goes to `out` (or the `--summary`
/// file), diagnostics to `log`. Returns the exit code.
pub fn run(args: &Args, out: &mut dyn Write, log: &mut dyn Write) -> u8 {
    let start = Instant::now();
    let mut summary = Summary::default();
    let result = match JobConfig::load(args) {
        Err(e) => Err((EXIT_INPUT, e.to_string())),
        Ok(job) => match &job.verify_only {
            Some(path) => verify(&job, path, &mut summary, log),
            None => synthesize(&job, &mut summary, log),
        },
    };
    let code = match result {
        Ok(code) => code,
        Err((code, message)) => {
            let _ = writeln!(log, "error: {message}");
            summary.verdict = if code == EXIT_EXHAUSTED { "resource-exhausted" } else { "input-error" }.into();
            summary.error = Some(message);
            code
        }
    };
    summary.wall_ms = start.elapsed().as_millis();
    let mut record = serde_json::to_string_pretty(&summary).expect("summary serializes");
    record.push('\n');
    match &args.summary {
        Some(path) => {
            if let Err(e) = write_file(path, &record) {
                let _ = writeln!(log, "error: {e}");
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = out.write_all(record.as_bytes());
        }
    }
    let mut line = format!("verdict: {}", summary.verdict);
    if let (Some(k), Some(c)) = (summary.k, &summary.c) {
        let _ = write!(line, " at K={k} C={c:?}");
    }
    let _ = writeln!(log, "{line} ({} ms)", summary.wall_ms);
    code
}
