//! Tableau translation of NNF formulas into state-labelled generalized Büchi
//! automata, followed by a counter-based degeneralization.
//!
//! The counter of a degeneralized state advances according to the node it
//! leaves, so a state is accepting when all eventualities were discharged on
//! the way into it. A state fulfilling an eventuality is therefore not itself
//! counted; only the steps after it are.

use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use super::{AutomatonError, Cube};
use crate::ltl::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    And(u32, u32),
    Or(u32, u32),
    Next(u32),
    Until(u32, u32),
    Release(u32, u32),
    Eventually(u32),
    Globally(u32),
}

#[derive(Default)]
struct Closure {
    nodes: Vec<Node>,
    ids: FxHashMap<Node, u32>,
}

impl Closure {
    fn intern(&mut self, f: &Formula) -> u32 {
        let node = match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Atom(p) => Node::Lit(*p, true),
            Formula::Not(a) => match **a {
                Formula::Atom(p) => Node::Lit(p, false),
                _ => panic!("tableau input must be in negation normal form"),
            },
            Formula::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Formula::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Formula::Next(a) => Node::Next(self.intern(a)),
            Formula::Until(a, b) => Node::Until(self.intern(a), self.intern(b)),
            Formula::Release(a, b) => Node::Release(self.intern(a), self.intern(b)),
            Formula::Eventually(a) => Node::Eventually(self.intern(a)),
            Formula::Globally(a) => Node::Globally(self.intern(a)),
            Formula::Implies(..) | Formula::Iff(..) => {
                panic!("tableau input must be in negation normal form")
            }
        };
        let next_id = self.nodes.len() as u32;
        *self.ids.entry(node).or_insert_with(|| {
            self.nodes.push(node);
            next_id
        })
    }
}

/// One way of discharging a set of obligations in the current step.
#[derive(Clone)]
struct Cover {
    pos: u64,
    neg: u64,
    next: BTreeSet<u32>,
    old: BTreeSet<u32>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct NodeKey {
    label: Cube,
    next: Vec<u32>,
    /// Bit k set when eventuality k is pending (asserted but not fulfilled).
    pending: u64,
}

struct Tableau {
    closure: Closure,
    /// Closure ids of the eventualities (`U` and `F`), in a fixed order.
    eventualities: Vec<u32>,
}

impl Tableau {
    fn expand(&self, obligations: &BTreeSet<u32>) -> Vec<Cover> {
        let mut out = Vec::new();
        let start = Cover {
            pos: 0,
            neg: 0,
            next: BTreeSet::new(),
            old: BTreeSet::new(),
        };
        self.expand_rec(obligations.iter().copied().collect(), start, &mut out);
        out
    }

    fn expand_rec(&self, mut todo: Vec<u32>, mut cover: Cover, out: &mut Vec<Cover>) {
        while let Some(id) = todo.pop() {
            if !cover.old.insert(id) {
                continue;
            }
            match self.closure.nodes[id as usize] {
                Node::True => {}
                Node::False => return,
                Node::Lit(p, true) => {
                    if cover.neg >> p & 1 == 1 {
                        return;
                    }
                    cover.pos |= 1 << p;
                }
                Node::Lit(p, false) => {
                    if cover.pos >> p & 1 == 1 {
                        return;
                    }
                    cover.neg |= 1 << p;
                }
                Node::And(a, b) => {
                    todo.push(a);
                    todo.push(b);
                }
                Node::Next(a) => {
                    cover.next.insert(a);
                }
                Node::Globally(a) => {
                    todo.push(a);
                    cover.next.insert(id);
                }
                Node::Or(a, b) => {
                    self.branch(&todo, &cover, &[a], out);
                    todo.push(b);
                }
                Node::Until(a, b) => {
                    self.branch(&todo, &cover, &[b], out);
                    todo.push(a);
                    cover.next.insert(id);
                }
                Node::Release(a, b) => {
                    self.branch(&todo, &cover, &[a, b], out);
                    todo.push(b);
                    cover.next.insert(id);
                }
                Node::Eventually(b) => {
                    self.branch(&todo, &cover, &[b], out);
                    cover.next.insert(id);
                }
            }
        }
        out.push(cover);
    }

    fn branch(&self, todo: &[u32], cover: &Cover, extra: &[u32], out: &mut Vec<Cover>) {
        let mut todo = todo.to_vec();
        todo.extend_from_slice(extra);
        self.expand_rec(todo, cover.clone(), out);
    }

    fn key(&self, cover: &Cover) -> NodeKey {
        let mut pending = 0u64;
        for (k, &u) in self.eventualities.iter().enumerate() {
            let rhs = match self.closure.nodes[u as usize] {
                Node::Until(_, b) | Node::Eventually(b) => b,
                _ => unreachable!(),
            };
            if cover.old.contains(&u) && !cover.old.contains(&rhs) {
                pending |= 1 << k;
            }
        }
        NodeKey {
            label: Cube {
                pos: cover.pos,
                neg: cover.neg,
            },
            next: cover.next.iter().copied().collect(),
            pending,
        }
    }
}

/// Raw degeneralized automaton as produced by the tableau.
pub(crate) struct RawAutomaton {
    pub initial: usize,
    pub accepting: Vec<bool>,
    pub labels: Vec<Cube>,
    pub succ: Vec<Vec<usize>>,
}

pub(crate) fn translate(f: &Formula, max_states: usize) -> Result<RawAutomaton, AutomatonError> {
    let mut closure = Closure::default();
    let root = closure.intern(f);
    let eventualities: Vec<u32> = (0..closure.nodes.len() as u32)
        .filter(|&id| {
            matches!(
                closure.nodes[id as usize],
                Node::Until(..) | Node::Eventually(_)
            )
        })
        .collect();
    if eventualities.len() > 64 {
        return Err(AutomatonError::TooManyEventualities(eventualities.len()));
    }
    let tableau = Tableau {
        closure,
        eventualities,
    };
    let m = tableau.eventualities.len();

    // Tableau nodes, discovered on demand.
    let mut node_ids: FxHashMap<NodeKey, usize> = FxHashMap::default();
    let mut nodes: Vec<NodeKey> = Vec::new();
    let mut node_succ: Vec<Option<Vec<usize>>> = Vec::new();
    let mut expansions: FxHashMap<Vec<u32>, Vec<usize>> = FxHashMap::default();

    let mut successors_of = |obligations: Vec<u32>,
                             nodes: &mut Vec<NodeKey>,
                             node_succ: &mut Vec<Option<Vec<usize>>>|
     -> Result<Vec<usize>, AutomatonError> {
        if let Some(done) = expansions.get(&obligations) {
            return Ok(done.clone());
        }
        let set: BTreeSet<u32> = obligations.iter().copied().collect();
        let mut ids: Vec<usize> = Vec::new();
        for cover in tableau.expand(&set) {
            let key = tableau.key(&cover);
            let id = match node_ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = nodes.len();
                    if id >= max_states {
                        return Err(AutomatonError::TooManyStates(max_states));
                    }
                    node_ids.insert(key.clone(), id);
                    nodes.push(key);
                    node_succ.push(None);
                    id
                }
            };
            ids.push(id);
        }
        ids.sort_unstable();
        ids.dedup();
        expansions.insert(obligations, ids.clone());
        Ok(ids)
    };

    let initial_succ = successors_of(vec![root], &mut nodes, &mut node_succ)?;
    let mut cursor = 0;
    while cursor < nodes.len() {
        let next = nodes[cursor].next.clone();
        let succ = successors_of(next, &mut nodes, &mut node_succ)?;
        node_succ[cursor] = Some(succ);
        cursor += 1;
    }

    // Degeneralize: state (node, j) with j in 0..=m; the initial pseudo-state
    // sits outside the node table.
    let advance = |node: usize, j: usize| -> usize {
        let mut start = if j == m { 0 } else { j };
        while start < m && nodes[node].pending >> start & 1 == 0 {
            start += 1;
        }
        start
    };

    let mut state_ids: FxHashMap<(usize, usize), usize> = FxHashMap::default();
    let mut states: Vec<(usize, usize)> = Vec::new();
    let mut raw = RawAutomaton {
        initial: 0,
        accepting: vec![false],
        labels: vec![Cube::TRUE],
        succ: vec![Vec::new()],
    };
    let mut intern_state = |key: (usize, usize),
                            raw: &mut RawAutomaton,
                            states: &mut Vec<(usize, usize)>|
     -> Result<usize, AutomatonError> {
        if let Some(&id) = state_ids.get(&key) {
            return Ok(id);
        }
        let id = raw.labels.len();
        if id >= max_states {
            return Err(AutomatonError::TooManyStates(max_states));
        }
        state_ids.insert(key, id);
        raw.labels.push(nodes[key.0].label);
        raw.accepting.push(key.1 == m);
        raw.succ.push(Vec::new());
        states.push(key);
        Ok(id)
    };

    for &n in &initial_succ {
        let id = intern_state((n, 0), &mut raw, &mut states)?;
        raw.succ[0].push(id);
    }
    let mut cursor = 0;
    while cursor < states.len() {
        let (n, j) = states[cursor];
        let j_next = advance(n, j);
        let succ = node_succ[n].clone().expect("expanded");
        let mut out = Vec::with_capacity(succ.len());
        for t in succ {
            out.push(intern_state((t, j_next), &mut raw, &mut states)?);
        }
        raw.succ[cursor + 1] = out;
        cursor += 1;
    }
    Ok(raw)
}
