//! Synthesis orchestration: threshold shifting, the incremental search over
//! bounds `(K, C)`, controller extraction and verification.
//!
//! A mean-payoff threshold `ν` is handled by rescaling each dimension to
//! integers and subtracting `ν` once per round; a finite-memory controller
//! then reaches mean payoff `≥ ν` iff it wins the energy game on the shifted
//! weights for some initial credit.

mod extract;
mod machine;
mod verify;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use log::{debug, info};
use num_rational::Ratio;
use num_traits::Zero;
use rustc_hash::FxHashMap;
use thiserror::Error;

pub use extract::{extract_machine, ExtractError};
pub use machine::{MachineParseError, MooreMachine};
pub use verify::{verify_machine, Certificate, Failure, Objective, VerifyError};

use crate::automata::{ucb_for, AutomatonError, Ucb, WeightFunction, DEFAULT_MAX_STATES};
use crate::counting::Counter;
use crate::game::{refute_constant_inputs, solve, Algorithm, GameError, Limits, SafetyGameSpec, SolveStats};
use crate::ltl::{Formula, SignalPartition};

/// Per-dimension rational threshold, each component in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold(Vec<Ratio<i64>>);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bad threshold component `{0}`: expected an integer, a decimal or a fraction a/b")]
pub struct ThresholdError(pub String);

impl Threshold {
    pub fn new(values: Vec<Ratio<i64>>) -> Self {
        assert!(!values.is_empty(), "threshold needs at least one dimension");
        Threshold(values)
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Threshold::new(values.iter().map(|&v| Ratio::from_integer(v)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Threshold::new(vec![Ratio::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Ratio<i64>] {
        &self.0
    }
}

fn parse_rational(text: &str) -> Option<Ratio<i64>> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once('/') {
        let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (b != 0).then(|| Ratio::new(a, b));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if (whole.is_empty() && frac.is_empty()) || !digits(whole) || !digits(frac) {
        return None;
    }
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let whole: i64 = if whole.is_empty() { 0 } else { whole.parse().ok()? };
    let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let numer = whole.checked_mul(denom)?.checked_add(frac)?;
    Some(Ratio::new(if negative { -numer } else { numer }, denom))
}

impl FromStr for Threshold {
    type Err = ThresholdError;

    /// Comma-separated components such as `-1.2,0,0` or `-6/5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(|part| parse_rational(part).ok_or_else(|| ThresholdError(part.trim().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Threshold::new(values))
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    /// Mean payoff at least the threshold on every outcome.
    MeanPayoff(Threshold),
    /// Energy level never below zero from the cap `C` as initial credit.
    Energy,
}

/// Integer weights for the energy game of a mean-payoff problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedWeights {
    /// Literal weights multiplied by `scale` per dimension.
    pub weights: WeightFunction,
    /// Added to the output letter weight once per round: `-scale·ν`.
    pub offset: Vec<i64>,
    /// Denominator of `ν` per dimension.
    pub scale: Vec<i64>,
}

pub fn shift_weights(w: &WeightFunction, nu: &Threshold) -> ShiftedWeights {
    assert_eq!(w.dim(), nu.dim(), "threshold dimension mismatch");
    let scale: Vec<i64> = nu.values().iter().map(|v| *v.denom()).collect();
    let offset = nu.values().iter().map(|v| -*v.numer()).collect();
    let weights = w.map(|v| v.iter().zip(&scale).map(|(x, l)| x * l).collect());
    ShiftedWeights { weights, offset, scale }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// From `(0, 0̄)`, double `K` and `C` in turn, clipped at the maxima.
    #[default]
    Doubling,
    /// A single probe at `(kmax, cmax)`; complete for the bounds by
    /// monotonicity.
    Maximal,
}

#[derive(Debug, Clone)]
pub struct SynthesisOptions {
    pub algorithm: Algorithm,
    pub policy: Policy,
    pub limits: Limits,
    /// Probes solved concurrently.
    pub jobs: usize,
    /// Skip `K` values for which a constant input already defeats every
    /// controller.
    pub refute: bool,
    pub max_automaton_states: usize,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            algorithm: Algorithm::Backward,
            policy: Policy::Doubling,
            limits: Limits::default(),
            jobs: 1,
            refute: true,
            max_automaton_states: DEFAULT_MAX_STATES,
        }
    }
}

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("weights have dimension {weights}, {what} has {got}")]
    Dimension {
        what: &'static str,
        weights: usize,
        got: usize,
    },
    #[error("weights cover {got} signals, the partition has {expected}")]
    Signals { got: usize, expected: usize },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Game(GameError),
    #[error("controller extraction failed: {0}")]
    Extraction(#[from] ExtractError),
    #[error("extracted controller failed verification: {0}")]
    Verification(#[from] VerifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Realizable,
    /// No probe within the bounds succeeded. This does not prove the
    /// specification unrealizable.
    NotRealizableWithinBounds,
    ResourceExhausted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Realizable => "realizable",
            Verdict::NotRealizableWithinBounds => "not-realizable-within-bounds",
            Verdict::ResourceExhausted => "resource-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome {
    Realizable,
    Unrealizable,
    /// Player I wins by repeating one input, whatever the credit.
    Refuted { input: usize, dimension: usize },
    Exhausted(String),
    Cancelled,
}

#[derive(Debug, Clone)]
pub struct ProbeRecord {
    pub k: Counter,
    pub c: Vec<i32>,
    pub outcome: ProbeOutcome,
    pub stats: SolveStats,
    pub millis: u128,
}

#[derive(Debug, Clone)]
pub struct SynthesisReport {
    pub verdict: Verdict,
    pub machine: Option<MooreMachine>,
    pub used_k: Option<Counter>,
    pub used_c: Option<Vec<i32>>,
    pub certificate: Option<Certificate>,
    pub probes: Vec<ProbeRecord>,
}

impl SynthesisReport {
    /// Largest antichain seen over all probes.
    pub fn antichain_peak(&self) -> usize {
        self.probes.iter().map(|p| p.stats.antichain_peak).max().unwrap_or(0)
    }
}

/// A formula with weights and a goal, ready to be probed at many bounds.
pub struct Problem {
    formula: Formula,
    part: SignalPartition,
    weights: WeightFunction,
    mode: Mode,
    base: SafetyGameSpec,
    refuted: Mutex<FxHashMap<Counter, Option<(usize, usize)>>>,
}

/// Result of a single solved probe.
struct Solved {
    record: ProbeRecord,
    machine: Option<(MooreMachine, Certificate)>,
}

impl Problem {
    pub fn new(
        formula: Formula,
        part: SignalPartition,
        weights: WeightFunction,
        mode: Mode,
        max_automaton_states: usize,
    ) -> Result<Self, SynthesisError> {
        if weights.num_signals() != part.num_signals() {
            return Err(SynthesisError::Signals {
                got: weights.num_signals(),
                expected: part.num_signals(),
            });
        }
        let dim = weights.dim();
        let (game_weights, offset) = match &mode {
            Mode::MeanPayoff(nu) => {
                if nu.dim() != dim {
                    return Err(SynthesisError::Dimension {
                        what: "the threshold",
                        weights: dim,
                        got: nu.dim(),
                    });
                }
                let s = shift_weights(&weights, nu);
                (s.weights, s.offset)
            }
            Mode::Energy => (weights.clone(), vec![0; dim]),
        };
        let ucb: Arc<Ucb> = Arc::new(ucb_for(&formula, max_automaton_states)?);
        info!("automaton has {} states", ucb.num_states());
        let base = SafetyGameSpec::new(ucb, part.clone(), &game_weights, &offset, 0, vec![0; dim])
            .map_err(SynthesisError::Game)?;
        Ok(Problem {
            formula,
            part,
            weights,
            mode,
            base,
            refuted: Mutex::new(FxHashMap::default()),
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    pub fn partition(&self) -> &SignalPartition {
        &self.part
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn automaton(&self) -> &Ucb {
        self.base.ucb()
    }

    /// The safety game for bounds `(k, c)`.
    pub fn game(&self, k: Counter, c: &[i32]) -> SafetyGameSpec {
        self.base.with_bounds(k, c.to_vec())
    }

    /// The objective a machine won at cap `c` must satisfy on the original
    /// weights.
    pub fn objective(&self, c: &[i32]) -> Objective {
        match &self.mode {
            Mode::MeanPayoff(nu) => Objective::MeanPayoff(nu.clone()),
            Mode::Energy => Objective::Energy(c.iter().map(|&x| x as i64).collect()),
        }
    }

    pub fn verify(&self, m: &MooreMachine, c: &[i32]) -> Result<Certificate, VerifyError> {
        verify_machine(m, &self.formula, &self.part, &self.weights, &self.objective(c))
    }

    /// Whether a constant input strategy defeats every controller at bound
    /// `k`, for every cap. Cached per `k`.
    pub fn refuted_at(&self, k: Counter, limits: &Limits) -> Result<Option<(usize, usize)>, GameError> {
        if let Some(&r) = self.refuted.lock().unwrap().get(&k) {
            return Ok(r);
        }
        let spec = self.game(k, &vec![0; self.dim()]);
        let r = refute_constant_inputs(&spec, limits)?.map(|r| (r.input, r.dimension));
        debug!("K={k}: refuted {r:?}");
        self.refuted.lock().unwrap().insert(k, r);
        Ok(r)
    }

    fn run_probe(&self, k: Counter, c: &[i32], opts: &SynthesisOptions, limits: &Limits) -> Result<Solved, SynthesisError> {
        let start = Instant::now();
        let record = |outcome, stats| ProbeRecord {
            k,
            c: c.to_vec(),
            outcome,
            stats,
            millis: start.elapsed().as_millis(),
        };
        let exhausted = |e: GameError| match e {
            GameError::Cancelled => Ok(ProbeOutcome::Cancelled),
            GameError::IterationCap(_) | GameError::NodeCap(_) => Ok(ProbeOutcome::Exhausted(e.to_string())),
            GameError::TooManySignals(_) => Err(SynthesisError::Game(e)),
        };
        if opts.refute {
            match self.refuted_at(k, limits) {
                Ok(Some((input, dimension))) => {
                    return Ok(Solved {
                        record: record(ProbeOutcome::Refuted { input, dimension }, SolveStats::default()),
                        machine: None,
                    })
                }
                Ok(None) => {}
                Err(e) => {
                    return Ok(Solved {
                        record: record(exhausted(e)?, SolveStats::default()),
                        machine: None,
                    })
                }
            }
        }
        let spec = self.game(k, c);
        let result = match solve(&spec, opts.algorithm, limits) {
            Ok(r) => r,
            Err(e) => {
                return Ok(Solved {
                    record: record(exhausted(e)?, SolveStats::default()),
                    machine: None,
                })
            }
        };
        if !result.realizable {
            return Ok(Solved {
                record: record(ProbeOutcome::Unrealizable, result.stats),
                machine: None,
            });
        }
        let machine = extract_machine(&result.witness, &spec)?;
        let cert = self.verify(&machine, c)?;
        Ok(Solved {
            record: record(ProbeOutcome::Realizable, result.stats),
            machine: Some((machine, cert)),
        })
    }

    /// Solves the game at exactly `(k, c)`.
    pub fn probe(&self, k: Counter, c: &[i32], opts: &SynthesisOptions) -> Result<SynthesisReport, SynthesisError> {
        let solved = self.run_probe(k, c, opts, &opts.limits)?;
        Ok(report(vec![solved]))
    }

    /// Probes bounds up to `(kmax, cmax)` in policy order and returns the
    /// first success.
    pub fn synthesize(&self, kmax: Counter, cmax: &[i32], opts: &SynthesisOptions) -> Result<SynthesisReport, SynthesisError> {
        if cmax.len() != self.dim() {
            return Err(SynthesisError::Dimension {
                what: "the credit bound",
                weights: self.dim(),
                got: cmax.len(),
            });
        }
        let probes = probe_sequence(opts.policy, kmax, cmax);
        let solved = if opts.jobs <= 1 || probes.len() == 1 {
            let mut out = Vec::new();
            for (k, c) in &probes {
                let s = self.run_probe(*k, c, opts, &opts.limits)?;
                info!("probe K={k} C={c:?}: {:?} in {} ms", s.record.outcome, s.record.millis);
                let done = s.machine.is_some();
                out.push(s);
                if done {
                    break;
                }
            }
            out
        } else {
            self.run_parallel(&probes, opts)?
        };
        Ok(report(solved))
    }

    /// Runs probes on `opts.jobs` threads. A success cancels every later
    /// probe; earlier ones still finish so that the result matches the
    /// sequential order.
    fn run_parallel(&self, probes: &[(Counter, Vec<i32>)], opts: &SynthesisOptions) -> Result<Vec<Solved>, SynthesisError> {
        let flags: Vec<Arc<AtomicBool>> = probes.iter().map(|_| Arc::new(AtomicBool::new(false))).collect();
        let next = AtomicUsize::new(0);
        let best = AtomicUsize::new(usize::MAX);
        let results: Mutex<Vec<Option<Result<Solved, SynthesisError>>>> =
            Mutex::new((0..probes.len()).map(|_| None).collect());
        std::thread::scope(|scope| {
            for _ in 0..opts.jobs.min(probes.len()) {
                scope.spawn(|| loop {
                    let j = next.fetch_add(1, Ordering::SeqCst);
                    if j >= probes.len() || j > best.load(Ordering::SeqCst) {
                        break;
                    }
                    let mut limits = opts.limits.clone();
                    limits.cancel = Some(flags[j].clone());
                    let (k, c) = &probes[j];
                    let r = self.run_probe(*k, c, opts, &limits);
                    if matches!(&r, Ok(s) if s.machine.is_some()) || r.is_err() {
                        best.fetch_min(j, Ordering::SeqCst);
                        for f in &flags[j + 1..] {
                            f.store(true, Ordering::SeqCst);
                        }
                    }
                    results.lock().unwrap()[j] = Some(r);
                });
            }
        });
        let mut out = Vec::new();
        for r in results.into_inner().unwrap().into_iter().flatten() {
            let s = r?;
            if s.record.outcome == ProbeOutcome::Cancelled {
                continue;
            }
            let done = s.machine.is_some();
            out.push(s);
            if done {
                break;
            }
        }
        Ok(out)
    }

    /// The least `K ≤ kmax` at which the game with cap `c` is won, found by
    /// bisection on the refutation certificate and then solving upwards.
    pub fn minimal_k(&self, kmax: Counter, c: &[i32], opts: &SynthesisOptions) -> Result<MinimalK, SynthesisError> {
        let refuted = |k: Counter| -> Result<bool, SynthesisError> {
            if !opts.refute {
                return Ok(false);
            }
            match self.refuted_at(k, &opts.limits) {
                Ok(r) => Ok(r.is_some()),
                Err(GameError::TooManySignals(n)) => Err(SynthesisError::Game(GameError::TooManySignals(n))),
                Err(_) => Ok(false),
            }
        };
        // Refutation is monotone: refuted at k implies refuted below k.
        let mut lo = 0;
        if refuted(0)? {
            if refuted(kmax)? {
                return Ok(MinimalK {
                    k: None,
                    below: Some(kmax),
                    report: report(Vec::new()),
                });
            }
            let (mut bad, mut good) = (0, 1.min(kmax));
            while refuted(good)? {
                bad = good;
                good = (good * 2).min(kmax);
            }
            while good - bad > 1 {
                let mid = bad + (good - bad) / 2;
                if refuted(mid)? {
                    bad = mid;
                } else {
                    good = mid;
                }
            }
            lo = good;
        }
        let mut solved = Vec::new();
        let mut below = (lo > 0).then(|| lo - 1);
        for k in lo..=kmax {
            let s = self.run_probe(k, c, opts, &opts.limits)?;
            info!("minimal K: K={k}: {:?} in {} ms", s.record.outcome, s.record.millis);
            let outcome = s.record.outcome.clone();
            solved.push(s);
            match outcome {
                ProbeOutcome::Realizable => {
                    return Ok(MinimalK {
                        k: Some(k),
                        below,
                        report: report(solved),
                    })
                }
                ProbeOutcome::Unrealizable | ProbeOutcome::Refuted { .. } => below = Some(k),
                ProbeOutcome::Exhausted(_) | ProbeOutcome::Cancelled => break,
            }
        }
        Ok(MinimalK {
            k: None,
            below,
            report: report(solved),
        })
    }
}

#[derive(Debug, Clone)]
pub struct MinimalK {
    /// Least winning bound, if any up to `kmax`.
    pub k: Option<Counter>,
    /// Largest bound known to lose.
    pub below: Option<Counter>,
    pub report: SynthesisReport,
}

fn report(solved: Vec<Solved>) -> SynthesisReport {
    let mut probes = Vec::with_capacity(solved.len());
    let mut win = None;
    let mut exhausted = false;
    for s in solved {
        exhausted |= matches!(s.record.outcome, ProbeOutcome::Exhausted(_));
        if let Some(m) = s.machine {
            win = Some((s.record.k, s.record.c.clone(), m));
        }
        probes.push(s.record);
    }
    match win {
        Some((k, c, (machine, cert))) => SynthesisReport {
            verdict: Verdict::Realizable,
            machine: Some(machine),
            used_k: Some(k),
            used_c: Some(c),
            certificate: Some(cert),
            probes,
        },
        None => SynthesisReport {
            verdict: if exhausted {
                Verdict::ResourceExhausted
            } else {
                Verdict::NotRealizableWithinBounds
            },
            machine: None,
            used_k: None,
            used_c: None,
            certificate: None,
            probes,
        },
    }
}

fn grow(x: i32, max: i32) -> i32 {
    if x == 0 {
        1.min(max)
    } else {
        x.saturating_mul(2).min(max)
    }
}

/// Bounds probed by `policy`, in order; each pair dominates the previous.
pub fn probe_sequence(policy: Policy, kmax: Counter, cmax: &[i32]) -> Vec<(Counter, Vec<i32>)> {
    assert!(kmax >= 0 && cmax.iter().all(|&c| c >= 0), "bounds must be non-negative");
    if policy == Policy::Maximal {
        return vec![(kmax, cmax.to_vec())];
    }
    let mut k = 0;
    let mut c = vec![0; cmax.len()];
    let mut out = vec![(k, c.clone())];
    let mut grow_k = true;
    loop {
        let k_full = k == kmax;
        let c_full = c == cmax;
        if k_full && c_full {
            break;
        }
        if (grow_k && !k_full) || c_full {
            k = grow(k, kmax);
        } else {
            c = c.iter().zip(cmax).map(|(&x, &m)| grow(x, m)).collect();
        }
        grow_k = !grow_k;
        out.push((k, c.clone()));
    }
    out
}

/// One-call synthesis: builds the automaton and searches the bounds.
pub fn synthesize(
    formula: &Formula,
    part: &SignalPartition,
    weights: &WeightFunction,
    mode: Mode,
    kmax: Counter,
    cmax: &[i32],
    opts: &SynthesisOptions,
) -> Result<SynthesisReport, SynthesisError> {
    let problem = Problem::new(formula.clone(), part.clone(), weights.clone(), mode, opts.max_automaton_states)?;
    problem.synthesize(kmax, cmax, opts)
}

/// True when every component of the certificate meets the threshold.
pub fn meets(cert: &Certificate, nu: &Threshold) -> bool {
    cert.mean_payoff.iter().zip(nu.values()).all(|(m, v)| m >= v)
}

/// Mean payoff rendered as a decimal approximation, for summaries.
pub fn approx(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_formula;

    #[test]
    fn threshold_literals() {
        let t: Threshold = "-1.2, -6/5,0,3,-0.001,.5".parse().unwrap();
        assert_eq!(
            t.values(),
            &[
                Ratio::new(-6, 5),
                Ratio::new(-6, 5),
                Ratio::zero(),
                Ratio::from_integer(3),
                Ratio::new(-1, 1000),
                Ratio::new(1, 2)
            ]
        );
        assert!("x".parse::<Threshold>().is_err());
        assert!("1/0".parse::<Threshold>().is_err());
        assert!("1.".parse::<Threshold>().is_ok());
        assert!("-".parse::<Threshold>().is_err());
    }

    #[test]
    fn shift_scales_per_dimension() {
        let mut w = WeightFunction::zero(3, 2);
        w.set(1, true, vec![-1, 0, -2]).unwrap();
        let s = shift_weights(&w, &"-1.2,0,0".parse().unwrap());
        assert_eq!(s.scale, vec![5, 1, 1]);
        assert_eq!(s.offset, vec![6, 0, 0]);
        assert_eq!(s.weights.literal(1, true), &[-5, 0, -2]);
        let same = shift_weights(&w, &Threshold::zero(3));
        assert_eq!(same.weights, w);
        assert_eq!(same.offset, vec![0, 0, 0]);
    }

    #[test]
    fn doubling_sequence() {
        let seq = probe_sequence(Policy::Doubling, 3, &[2]);
        let expect: Vec<(i32, Vec<i32>)> = vec![(0, vec![0]), (1, vec![0]), (1, vec![1]), (2, vec![1]), (2, vec![2]), (3, vec![2])];
        assert_eq!(seq, expect);
        assert_eq!(probe_sequence(Policy::Doubling, 0, &[0]), vec![(0, vec![0])]);
        assert_eq!(probe_sequence(Policy::Maximal, 5, &[1, 2]), vec![(5, vec![1, 2])]);
    }

    #[test]
    fn always_grant() {
        let part = SignalPartition::new(["r"], ["g"]).unwrap();
        let f = parse_formula("G g", &part).unwrap();
        let w = WeightFunction::zero(1, 2);
        let r = synthesize(&f, &part, &w, Mode::MeanPayoff(Threshold::zero(1)), 4, &[4], &Default::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Realizable);
        assert_eq!((r.used_k, r.used_c.as_deref()), (Some(0), Some(&[0][..])));
        let m = r.machine.unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.next_move(0), 1);

        let f = parse_formula("G g && G !g", &part).unwrap();
        let r = synthesize(&f, &part, &w, Mode::Energy, 2, &[2], &Default::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NotRealizableWithinBounds);
        assert!(r.machine.is_none() && r.certificate.is_none());
    }

    #[test]
    fn parallel_matches_sequential() {
        let part = SignalPartition::new(["r"], ["g"]).unwrap();
        let f = parse_formula("G (r -> X g)", &part).unwrap();
        let mut w = WeightFunction::zero(1, 2);
        w.set(1, true, vec![-1]).unwrap();
        let mode = Mode::MeanPayoff("-1/2".parse().unwrap());
        let seq = synthesize(&f, &part, &w, mode.clone(), 8, &[8], &Default::default()).unwrap();
        let opts = SynthesisOptions {
            jobs: 4,
            ..Default::default()
        };
        let par = synthesize(&f, &part, &w, mode, 8, &[8], &opts).unwrap();
        assert_eq!(seq.verdict, par.verdict);
        assert_eq!((seq.used_k, seq.used_c), (par.used_k, par.used_c));
        assert_eq!(seq.machine, par.machine);
    }
}
