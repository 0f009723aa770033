//! The safety game over counting functions and bounded energy.
//!
//! Player O positions are pairs `(F, c)`; after O announces an output letter
//! `o` the game sits in the Player I position `(F, o, c ⊕ w(o))`, and input
//! `i` leads to `(Δ(F, o ∪ i), c ⊕ w(o) ⊕ w(i))`. The game starts in
//! `(F0, C)`, and O must keep every counter within `K` and the energy above
//! ⊥ forever.

mod backward;
mod compiled;
mod explicit;
mod forward;
mod refute;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::antichain::{Antichain, Element};
use crate::automata::{Ucb, WeightFunction};
use crate::counting::Counter;
use crate::ltl::SignalPartition;

pub(crate) use compiled::Compiled;

pub use backward::{cpre_i, cpre_o, omega_input, omega_output, solve_backward};
pub use explicit::solve_explicit;
pub use forward::{forward_dot, solve_forward};
pub use refute::{refute_constant_inputs, Refutation};

/// Largest number of signals for which per-letter tables are built.
pub const MAX_GAME_SIGNALS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("fixpoint did not stabilize within {0} iterations")]
    IterationCap(usize),
    #[error("exploration exceeded {0} nodes")]
    NodeCap(usize),
    #[error("{0} signals exceed the supported maximum of {MAX_GAME_SIGNALS}")]
    TooManySignals(usize),
    #[error("solve cancelled")]
    Cancelled,
}

#[derive(Debug, Clone)]
pub struct Limits {
    pub max_iterations: usize,
    pub max_nodes: usize,
    /// Set from another thread to abandon a running solve.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_iterations: 10_000_000,
            max_nodes: 20_000_000,
            cancel: None,
        }
    }
}

impl Limits {
    pub(crate) fn check_cancel(&self) -> Result<(), GameError> {
        match &self.cancel {
            Some(flag) if flag.load(Ordering::Relaxed) => Err(GameError::Cancelled),
            _ => Ok(()),
        }
    }
}

/// Everything needed to build the safety game for bounds `(K, C)`.
#[derive(Debug, Clone)]
pub struct SafetyGameSpec {
    ucb: Arc<Ucb>,
    part: SignalPartition,
    /// `w(o)` for every output code, per-step offset included.
    out_weights: Vec<Vec<i64>>,
    /// `w(i)` for every input code.
    in_weights: Vec<Vec<i64>>,
    bound: Counter,
    cap: Vec<i32>,
    compiled: Arc<Compiled>,
}

impl SafetyGameSpec {
    /// `offset` is added to every output letter weight once per round.
    pub fn new(
        ucb: Arc<Ucb>,
        part: SignalPartition,
        weights: &WeightFunction,
        offset: &[i64],
        bound: Counter,
        cap: Vec<i32>,
    ) -> Result<Self, GameError> {
        assert!(bound >= 0, "counter bound must be non-negative");
        assert_eq!(cap.len(), weights.dim(), "cap dimension mismatch");
        assert_eq!(offset.len(), weights.dim(), "offset dimension mismatch");
        assert!(cap.iter().all(|&c| c >= 0), "energy cap must be non-negative");
        if part.num_signals() > MAX_GAME_SIGNALS {
            return Err(GameError::TooManySignals(part.num_signals()));
        }
        let out_weights = (0..part.output_letters())
            .map(|o| {
                weights
                    .output_weight(&part, o)
                    .iter()
                    .zip(offset)
                    .map(|(w, d)| w + d)
                    .collect()
            })
            .collect();
        let in_weights = (0..part.input_letters())
            .map(|i| weights.input_weight(&part, i))
            .collect();
        let compiled = Arc::new(Compiled::new(&ucb, &part, bound));
        Ok(SafetyGameSpec {
            ucb,
            part,
            out_weights,
            in_weights,
            bound,
            cap,
            compiled,
        })
    }

    /// Same game with other bounds, reusing the automaton.
    pub fn with_bounds(&self, bound: Counter, cap: Vec<i32>) -> Self {
        assert_eq!(cap.len(), self.cap.len());
        let compiled = if bound == self.bound {
            self.compiled.clone()
        } else {
            Arc::new(Compiled::new(&self.ucb, &self.part, bound))
        };
        SafetyGameSpec {
            bound,
            cap,
            compiled,
            ..self.clone()
        }
    }

    pub fn ucb(&self) -> &Ucb {
        &self.ucb
    }

    pub fn partition(&self) -> &SignalPartition {
        &self.part
    }

    pub fn bound(&self) -> Counter {
        self.bound
    }

    pub fn cap(&self) -> &[i32] {
        &self.cap
    }

    pub fn dim(&self) -> usize {
        self.cap.len()
    }

    pub fn output_weight(&self, o: usize) -> &[i64] {
        &self.out_weights[o]
    }

    pub fn input_weight(&self, i: usize) -> &[i64] {
        &self.in_weights[i]
    }

    pub fn output_letters(&self) -> usize {
        self.out_weights.len()
    }

    pub fn input_letters(&self) -> usize {
        self.in_weights.len()
    }

    pub(crate) fn compiled(&self) -> &Compiled {
        &self.compiled
    }

    /// Number of automaton states tracked by counting functions.
    pub fn tracked_states(&self) -> usize {
        self.compiled.len()
    }

    /// The initial Player O position `(F0, C)` over tracked states, or `None`
    /// when `F0` is already losing.
    pub fn initial_element(&self) -> Option<Element> {
        self.compiled
            .initial
            .as_ref()
            .map(|f| Element::new(f.clone(), self.cap.clone()))
    }

    /// The safe region's top element `(q ↦ K, 0̄)`, with each counter
    /// lowered to the largest value reachable in a play.
    pub fn safe_top(&self) -> Element {
        Element::new(self.compiled.ceiling.clone(), vec![0; self.dim()])
    }

    /// Player O successor energy `c ⊕ w(o)`, `None` for ⊥.
    pub fn after_output(&self, c: &[i32], o: usize) -> Option<Vec<i32>> {
        add_capped(c, &self.out_weights[o], &self.cap)
    }

    pub fn after_input(&self, c: &[i32], i: usize) -> Option<Vec<i32>> {
        add_capped(c, &self.in_weights[i], &self.cap)
    }

    /// Successor of Player O position `(F, c)` under `o` then `i`, or `None`
    /// when it leaves the safe region.
    pub fn successor(&self, x: &Element, o: usize, i: usize) -> Option<Element> {
        let c = self.after_output(&x.c, o)?;
        let c = self.after_input(&c, i)?;
        let f = self.compiled.delta(&x.f, o, i)?;
        Some(Element::new(f, c))
    }
}

pub(crate) fn add_capped(c: &[i32], k: &[i64], cap: &[i32]) -> Option<Vec<i32>> {
    let mut out = Vec::with_capacity(c.len());
    for ((&x, &w), &m) in c.iter().zip(k).zip(cap) {
        let v = x as i64 + w;
        if v < 0 {
            return None;
        }
        out.push(v.min(m as i64) as i32);
    }
    Some(out)
}

/// Smallest `d ∈ 0..=cap` with `d ⊕ k ≥ c`, per dimension; `None` when some
/// dimension would need more than the cap.
pub(crate) fn min_credit(c: &[i32], k: &[i64], cap: &[i32]) -> Option<Vec<i32>> {
    let mut out = Vec::with_capacity(c.len());
    for ((&x, &w), &m) in c.iter().zip(k).zip(cap) {
        let d = (x as i64 - w).max(0);
        if d > m as i64 {
            return None;
        }
        out.push(d as i32);
    }
    Some(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub iterations: usize,
    /// Nodes explored (forward, explicit) or antichain elements produced
    /// (backward).
    pub nodes: usize,
    pub antichain_peak: usize,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub realizable: bool,
    /// Downward-closed set of winning Player O positions, as an antichain
    /// over tracked states. Empty for the explicit solver.
    pub witness: Antichain,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    #[default]
    Backward,
    Forward,
}

pub fn solve(spec: &SafetyGameSpec, algo: Algorithm, limits: &Limits) -> Result<SolveResult, GameError> {
    match algo {
        Algorithm::Backward => solve_backward(spec, limits),
        Algorithm::Forward => solve_forward(spec, limits),
    }
}
