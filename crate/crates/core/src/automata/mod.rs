//! Automata over the signal alphabet: tableau translation of LTL, the
//! universal co-Büchi reading used by the synthesis pipeline, lasso
//! membership, and weighted letters.

mod tableau;
mod weights;

use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::ltl::{negate_nnf, Formula, LassoWord, Letter, SignalPartition};

pub use weights::{Side, WeightError, WeightFunction};

/// Default bound on the number of automaton states built by the tableau.
pub const DEFAULT_MAX_STATES: usize = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("automaton exceeds the state cap of {0}")]
    TooManyStates(usize),
    #[error("formula has {0} eventualities, at most 64 are supported")]
    TooManyEventualities(usize),
}

/// Conjunction of literals over global signal indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub pos: u64,
    pub neg: u64,
}

impl Cube {
    pub const TRUE: Cube = Cube { pos: 0, neg: 0 };

    pub fn matches(&self, letter: Letter) -> bool {
        letter & self.pos == self.pos && letter & self.neg == 0
    }

    pub fn display(&self, part: &SignalPartition) -> String {
        let mut lits = Vec::new();
        for k in 0..part.num_signals() {
            if self.pos >> k & 1 == 1 {
                lits.push(part.name(k).to_string());
            } else if self.neg >> k & 1 == 1 {
                lits.push(format!("!{}", part.name(k)));
            }
        }
        if lits.is_empty() {
            "true".into()
        } else {
            lits.join(" && ")
        }
    }
}

/// State-labelled automaton: reading letter σ from `q` leads to every
/// successor `t` whose label admits σ. When no successor admits σ the run
/// moves to the completion sink, if present.
///
/// The same structure serves both readings. Built by [`ltl_to_nba`] it is a
/// Büchi automaton; built by [`ucb_for`] it is a universal co-Büchi automaton
/// (co-Büchi acceptance: every run visits accepting states finitely often).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ucb {
    initial: usize,
    accepting: Vec<bool>,
    labels: Vec<Cube>,
    succ: Vec<Vec<usize>>,
    sink: Option<usize>,
}

impl Ucb {
    /// Assembles an automaton from explicit parts. Panics on dangling indices.
    pub fn from_parts(
        initial: usize,
        accepting: Vec<bool>,
        labels: Vec<Cube>,
        succ: Vec<Vec<usize>>,
        sink: Option<usize>,
    ) -> Self {
        let n = labels.len();
        assert!(initial < n && accepting.len() == n && succ.len() == n);
        assert!(succ.iter().flatten().all(|&t| t < n));
        if let Some(s) = sink {
            assert!(s < n && !accepting[s] && labels[s] == Cube::TRUE && succ[s].contains(&s));
        }
        Ucb {
            initial,
            accepting,
            labels,
            succ,
            sink,
        }
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn label(&self, q: usize) -> Cube {
        self.labels[q]
    }

    /// Symbolic successors of `q`; guards are the successors' labels.
    pub fn successors(&self, q: usize) -> &[usize] {
        &self.succ[q]
    }

    pub fn sink(&self) -> Option<usize> {
        self.sink
    }

    /// `δ(q, σ)` for a concrete letter.
    pub fn delta(&self, q: usize, letter: Letter) -> Vec<usize> {
        let mut out: Vec<usize> = self.succ[q]
            .iter()
            .copied()
            .filter(|&t| self.labels[t].matches(letter))
            .collect();
        if out.is_empty() {
            if let Some(s) = self.sink {
                out.push(s);
            }
        }
        out
    }

    /// True when every `(q, σ)` has a successor.
    pub fn is_complete(&self, signals: usize) -> bool {
        self.sink.is_some()
            || (0..self.num_states())
                .all(|q| (0..1u64 << signals).all(|l| !self.delta(q, l).is_empty()))
    }

    /// Büchi reading: some run visits accepting states infinitely often.
    pub fn nba_accepts(&self, word: &LassoWord) -> bool {
        self.max_visits(word).is_none()
    }

    /// Co-Büchi reading: every run visits accepting states finitely often.
    pub fn ucb_accepts(&self, word: &LassoWord) -> bool {
        self.max_visits(word).is_some()
    }

    /// Largest number of accepting states (counting the initial one) visited
    /// by a run on `word`, or `None` when some run visits them infinitely often.
    pub fn max_visits(&self, word: &LassoWord) -> Option<usize> {
        let n = word.len();
        let mut graph: DiGraph<(usize, usize), ()> = DiGraph::new();
        let mut index: FxHashMap<(usize, usize), NodeIndex> = FxHashMap::default();
        let start = graph.add_node((self.initial, 0));
        index.insert((self.initial, 0), start);
        let mut stack = vec![(self.initial, 0)];
        while let Some((q, pos)) = stack.pop() {
            let from = index[&(q, pos)];
            let next_pos = word.succ(pos);
            for t in self.delta(q, word.letter(pos)) {
                let key = (t, next_pos);
                let to = *index.entry(key).or_insert_with(|| {
                    stack.push(key);
                    graph.add_node(key)
                });
                graph.add_edge(from, to, ());
            }
        }
        debug_assert!(index.len() <= self.num_states() * n.max(1));

        // Tarjan yields components in reverse topological order.
        let sccs = tarjan_scc(&graph);
        let mut comp = vec![0usize; graph.node_count()];
        for (c, members) in sccs.iter().enumerate() {
            for &v in members {
                comp[v.index()] = c;
            }
        }
        let mut best = vec![0usize; sccs.len()];
        for (c, members) in sccs.iter().enumerate() {
            let cyclic = members.len() > 1 || graph.contains_edge(members[0], members[0]);
            let weight = members
                .iter()
                .filter(|v| self.accepting[graph[**v].0])
                .count();
            if cyclic && weight > 0 {
                return None;
            }
            let mut tail = 0;
            for &v in members {
                for w in graph.neighbors(v) {
                    let d = comp[w.index()];
                    if d != c {
                        tail = tail.max(best[d]);
                    }
                }
            }
            best[c] = weight + tail;
        }
        Some(best[comp[start.index()]])
    }

    pub fn to_dot(&self, part: &SignalPartition) -> String {
        let mut out = String::from("digraph ucb {\n  rankdir=LR;\n  init [shape=point];\n");
        for q in 0..self.num_states() {
            let shape = if self.accepting[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(
                out,
                "  q{q} [shape={shape}, label=\"q{q}\\n{}\"];",
                self.labels[q].display(part)
            );
        }
        let _ = writeln!(out, "  init -> q{};", self.initial);
        for q in 0..self.num_states() {
            for &t in &self.succ[q] {
                let _ = writeln!(out, "  q{q} -> q{t};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Büchi automaton whose language is the set of models of `f` (which must be
/// in negation normal form).
pub fn ltl_to_nba(f: &Formula, max_states: usize) -> Result<Ucb, AutomatonError> {
    let raw = tableau::translate(f, max_states)?;
    let mut aut = Ucb {
        initial: raw.initial,
        accepting: raw.accepting,
        labels: raw.labels,
        succ: raw.succ,
        sink: None,
    };
    aut = trim(&aut);
    aut = quotient(&aut);
    aut.complete(&f.atoms());
    Ok(aut)
}

/// Universal co-Büchi automaton accepting exactly the models of `f`.
pub fn ucb_for(f: &Formula, max_states: usize) -> Result<Ucb, AutomatonError> {
    ltl_to_nba(&negate_nnf(f), max_states)
}

/// Keeps the states reachable from the initial state that can still reach an
/// accepting state. Dropped transitions fall through to the completion sink.
fn trim(aut: &Ucb) -> Ucb {
    let n = aut.num_states();
    let mut reachable = vec![false; n];
    let mut stack = vec![aut.initial];
    reachable[aut.initial] = true;
    while let Some(q) = stack.pop() {
        for &t in &aut.succ[q] {
            if !reachable[t] {
                reachable[t] = true;
                stack.push(t);
            }
        }
    }
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for q in 0..n {
        for &t in &aut.succ[q] {
            pred[t].push(q);
        }
    }
    let mut productive = aut.accepting.clone();
    let mut stack: Vec<usize> = (0..n).filter(|&q| productive[q]).collect();
    while let Some(t) = stack.pop() {
        for &q in &pred[t] {
            if !productive[q] {
                productive[q] = true;
                stack.push(q);
            }
        }
    }
    let keep = |q: usize| reachable[q] && (productive[q] || q == aut.initial);
    let mut map = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for (q, slot) in map.iter_mut().enumerate() {
        if keep(q) {
            *slot = kept.len();
            kept.push(q);
        }
    }
    Ucb {
        initial: map[aut.initial],
        accepting: kept.iter().map(|&q| aut.accepting[q]).collect(),
        labels: kept.iter().map(|&q| aut.labels[q]).collect(),
        succ: kept
            .iter()
            .map(|&q| {
                aut.succ[q]
                    .iter()
                    .filter(|&&t| keep(t))
                    .map(|&t| map[t])
                    .collect()
            })
            .collect(),
        sink: None,
    }
}

/// Bisimulation quotient. States agreeing on acceptance and label whose
/// successor sets hit the same classes are merged; the initial state is kept
/// apart.
fn quotient(aut: &Ucb) -> Ucb {
    let n = aut.num_states();
    let mut class: Vec<usize> = {
        let mut ids: FxHashMap<(bool, bool, Cube), usize> = FxHashMap::default();
        (0..n)
            .map(|q| {
                let key = (q == aut.initial, aut.accepting[q], aut.labels[q]);
                let next = ids.len();
                *ids.entry(key).or_insert(next)
            })
            .collect()
    };
    let mut count = class.iter().max().map_or(0, |m| m + 1);
    loop {
        let mut ids: FxHashMap<(usize, Vec<usize>), usize> = FxHashMap::default();
        let refined: Vec<usize> = (0..n)
            .map(|q| {
                let mut targets: Vec<usize> = aut.succ[q].iter().map(|&t| class[t]).collect();
                targets.sort_unstable();
                targets.dedup();
                let next = ids.len();
                *ids.entry((class[q], targets)).or_insert(next)
            })
            .collect();
        let refined_count = ids.len();
        class = refined;
        if refined_count == count {
            break;
        }
        count = refined_count;
    }
    // Renumber classes by first occurrence so the initial state stays first.
    let mut rename = vec![usize::MAX; count];
    let mut order = Vec::new();
    let mut stack = vec![aut.initial];
    rename[class[aut.initial]] = 0;
    order.push(aut.initial);
    while let Some(q) = stack.pop() {
        for &t in &aut.succ[q] {
            if rename[class[t]] == usize::MAX {
                rename[class[t]] = order.len();
                order.push(t);
                stack.push(t);
            }
        }
    }
    Ucb {
        initial: 0,
        accepting: order.iter().map(|&q| aut.accepting[q]).collect(),
        labels: order.iter().map(|&q| aut.labels[q]).collect(),
        succ: order
            .iter()
            .map(|&q| {
                let mut s: Vec<usize> = aut.succ[q].iter().map(|&t| rename[class[t]]).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect(),
        sink: None,
    }
}

impl Ucb {
    /// Adds a non-accepting sink with a universal self-loop unless every
    /// state already has a successor for every letter over `atoms`.
    fn complete(&mut self, atoms: &[usize]) {
        let needs_sink = atoms.len() > 20
            || (0..self.num_states()).any(|q| {
                (0..1u64 << atoms.len()).any(|bits| {
                    let letter = spread(bits, atoms);
                    self.succ[q]
                        .iter()
                        .all(|&t| !self.labels[t].matches(letter))
                })
            });
        if needs_sink {
            let s = self.num_states();
            self.labels.push(Cube::TRUE);
            self.accepting.push(false);
            self.succ.push(vec![s]);
            self.sink = Some(s);
        }
    }
}

fn spread(bits: u64, atoms: &[usize]) -> Letter {
    atoms
        .iter()
        .enumerate()
        .filter(|(k, _)| bits >> k & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | 1 << p)
}
