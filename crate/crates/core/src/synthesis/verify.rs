//! Independent verification of a Moore machine against a formula and a
//! quantitative objective.
//!
//! The formula is checked on the product of the machine with the universal
//! co-Büchi automaton of the formula: the machine is correct iff no reachable
//! cycle of the product meets an accepting state. Weights are checked on the
//! machine's own graph, where the environment picks the inputs: Karp's
//! algorithm gives the worst cycle mean per dimension, Bellman-Ford the least
//! initial credit.

use std::collections::VecDeque;

use num_rational::Ratio;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rustc_hash::FxHashMap;
use thiserror::Error;

use super::{MooreMachine, Threshold};
use crate::automata::{ucb_for, AutomatonError, WeightFunction, DEFAULT_MAX_STATES};
use crate::ltl::{Formula, Letter, LassoWord, SignalPartition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    /// Every outcome must have mean payoff at least the threshold.
    MeanPayoff(Threshold),
    /// Every prefix must keep `credit + energy level ≥ 0`.
    Energy(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Worst-case mean payoff per dimension.
    pub mean_payoff: Vec<Ratio<i64>>,
    /// Least initial credit per dimension, `None` when some cycle is
    /// negative in that dimension.
    pub min_energy: Vec<Option<i64>>,
    /// Memory states reachable from the initial one.
    pub machine_states: usize,
    pub product_states: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Specification,
    MeanPayoff { dim: usize, value: Ratio<i64> },
    Energy { dim: usize },
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Specification => write!(f, "an outcome violates the formula"),
            Failure::MeanPayoff { dim, value } => {
                write!(f, "mean payoff {value} in dimension {dim} is below the threshold")
            }
            Failure::Energy { dim } => write!(f, "energy in dimension {dim} drops below zero"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("machine signals do not match the partition")]
    PartitionMismatch,
    #[error("objective has dimension {got}, weights have {expected}")]
    Dimension { got: usize, expected: usize },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("{failure}; counterexample {shown}")]
    Counterexample {
        failure: Failure,
        lasso: LassoWord,
        shown: String,
    },
}

/// One step of the machine: state, input, successor.
type Step = (usize, u32, usize);

struct MachineGraph {
    /// Reachable states in discovery order; `index[m]` is the position.
    states: Vec<usize>,
    index: FxHashMap<usize, usize>,
    /// Edges by local index: `(source, input, target)`.
    edges: Vec<(usize, u32, usize)>,
    /// BFS parent step of each local state.
    parent: Vec<Option<(usize, u32)>>,
}

impl MachineGraph {
    fn new(m: &MooreMachine, inputs: u32) -> Self {
        let mut states = vec![m.initial()];
        let mut index = FxHashMap::default();
        index.insert(m.initial(), 0);
        let mut parent = vec![None];
        let mut edges = Vec::new();
        let mut next = 0;
        while next < states.len() {
            let s = states[next];
            for i in 0..inputs {
                let t = m.update(s, i);
                let len = states.len();
                let ti = *index.entry(t).or_insert_with(|| {
                    states.push(t);
                    parent.push(Some((next, i)));
                    len
                });
                edges.push((next, i, ti));
            }
            next += 1;
        }
        MachineGraph {
            states,
            index,
            edges,
            parent,
        }
    }

    fn len(&self) -> usize {
        self.states.len()
    }

    /// Steps from the initial state to local state `v`.
    fn path_to(&self, v: usize) -> Vec<Step> {
        let mut steps = Vec::new();
        let mut x = v;
        while let Some((p, i)) = self.parent[x] {
            steps.push((p, i, x));
            x = p;
        }
        steps.reverse();
        steps
    }
}

fn edge_weights(m: &MooreMachine, part: &SignalPartition, w: &WeightFunction, g: &MachineGraph) -> Vec<Vec<i64>> {
    g.edges
        .iter()
        .map(|&(u, i, _)| {
            let o = m.next_move(g.states[u]);
            let (wo, wi) = (w.output_weight(part, o), w.input_weight(part, i));
            wo.iter().zip(&wi).map(|(a, b)| a + b).collect()
        })
        .collect()
}

fn lasso_of(m: &MooreMachine, part: &SignalPartition, g: &MachineGraph, prefix: &[Step], cycle: &[Step]) -> LassoWord {
    let letter = |&(u, i, _): &Step| -> Letter { part.join(m.next_move(g.states[u]), i) };
    LassoWord::new(prefix.iter().map(letter).collect(), cycle.iter().map(letter).collect())
}

fn show(part: &SignalPartition, lasso: &LassoWord) -> String {
    let fmt = |v: &[Letter]| v.iter().map(|&l| part.format_letter(l)).collect::<Vec<_>>().join(" ");
    format!("{} ({})^ω", fmt(&lasso.prefix), fmt(&lasso.cycle))
}

fn counterexample(part: &SignalPartition, failure: Failure, lasso: LassoWord) -> VerifyError {
    let shown = show(part, &lasso);
    VerifyError::Counterexample { failure, lasso, shown }
}

/// Minimum cycle mean over the whole graph in dimension `d`, by Karp's
/// algorithm on each strongly connected component. `None` if acyclic.
fn karp_min_mean(n: usize, edges: &[(usize, u32, usize)], weights: &[Vec<i64>], d: usize) -> Option<Ratio<i64>> {
    let mut g = DiGraph::<(), usize>::with_capacity(n, edges.len());
    for _ in 0..n {
        g.add_node(());
    }
    for (k, &(u, _, v)) in edges.iter().enumerate() {
        g.add_edge((u as u32).into(), (v as u32).into(), k);
    }
    let mut comp = vec![usize::MAX; n];
    let sccs = tarjan_scc(&g);
    for (c, members) in sccs.iter().enumerate() {
        for v in members {
            comp[v.index()] = c;
        }
    }
    let mut best: Option<Ratio<i64>> = None;
    for (c, members) in sccs.iter().enumerate() {
        let local: FxHashMap<usize, usize> = members.iter().enumerate().map(|(k, v)| (v.index(), k)).collect();
        let inner: Vec<(usize, usize, i64)> = edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, _, v))| comp[u] == c && comp[v] == c)
            .map(|(k, &(u, _, v))| (local[&u], local[&v], weights[k][d]))
            .collect();
        if inner.is_empty() {
            continue;
        }
        let s = members.len();
        const INF: i64 = i64::MAX;
        // table[k * s + v]: least weight of a walk with k edges from vertex 0 to v.
        let mut table = vec![INF; (s + 1) * s];
        table[0] = 0;
        for k in 0..s {
            for &(u, v, w) in &inner {
                let from = table[k * s + u];
                if from != INF {
                    let slot = &mut table[(k + 1) * s + v];
                    *slot = (*slot).min(from + w);
                }
            }
        }
        for v in 0..s {
            let dn = table[s * s + v];
            if dn == INF {
                continue;
            }
            let worst = (0..s)
                .filter(|&k| table[k * s + v] != INF)
                .map(|k| Ratio::new(dn - table[k * s + v], (s - k) as i64))
                .max()
                .expect("k = 0 or some shorter walk reaches v");
            best = Some(best.map_or(worst, |b| b.min(worst)));
        }
    }
    best
}

enum Shortest {
    /// Distance from the initial state to every reachable state.
    Distances(Vec<i64>, Vec<Option<usize>>),
    /// A negative cycle, as edge indices in order.
    NegativeCycle(Vec<usize>),
}

/// Bellman-Ford from the initial state (local index 0).
fn bellman_ford(n: usize, edges: &[(usize, u32, usize)], weight: impl Fn(usize) -> i64) -> Shortest {
    let mut dist = vec![i64::MAX; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    dist[0] = 0;
    let mut last = None;
    for _ in 0..n {
        last = None;
        for (k, &(u, _, v)) in edges.iter().enumerate() {
            if dist[u] == i64::MAX {
                continue;
            }
            let cand = dist[u] + weight(k);
            if cand < dist[v] {
                dist[v] = cand;
                pred[v] = Some(k);
                last = Some(v);
            }
        }
        if last.is_none() {
            return Shortest::Distances(dist, pred);
        }
    }
    // Still relaxing after n rounds: walking back n steps lands on a cycle.
    let mut x = last.expect("relaxation in the final round");
    for _ in 0..n {
        x = edges[pred[x].expect("relaxed vertex has a predecessor")].0;
    }
    let mut cycle = Vec::new();
    let mut y = x;
    loop {
        let k = pred[y].expect("cycle vertex has a predecessor");
        cycle.push(k);
        y = edges[k].0;
        if y == x {
            break;
        }
    }
    cycle.reverse();
    Shortest::NegativeCycle(cycle)
}

fn cycle_lasso(m: &MooreMachine, part: &SignalPartition, g: &MachineGraph, cycle: &[usize]) -> LassoWord {
    let steps: Vec<Step> = cycle.iter().map(|&k| g.edges[k]).collect();
    lasso_of(m, part, g, &g.path_to(steps[0].0), &steps)
}

/// Continues from `v` with the first input until a state repeats.
fn close_with_first_input(g: &MachineGraph, v: usize, inputs: u32) -> (Vec<Step>, Vec<Step>) {
    let mut seen: FxHashMap<usize, usize> = FxHashMap::default();
    let mut steps = Vec::new();
    let mut x = v;
    loop {
        if let Some(&at) = seen.get(&x) {
            let cycle = steps.split_off(at);
            return (steps, cycle);
        }
        seen.insert(x, steps.len());
        let k = g.edges.iter().position(|&(u, i, _)| u == x && i == 0).expect("total update");
        debug_assert!(inputs > 0);
        steps.push(g.edges[k]);
        x = g.edges[k].2;
    }
}

/// Product check: no reachable cycle through an accepting automaton state.
fn check_formula(m: &MooreMachine, part: &SignalPartition, f: &Formula, g: &MachineGraph) -> Result<usize, VerifyError> {
    let ucb = ucb_for(f, DEFAULT_MAX_STATES)?;
    let inputs = part.input_letters();
    let mut index: FxHashMap<(usize, usize), usize> = FxHashMap::default();
    let mut nodes = vec![(0usize, ucb.initial())];
    index.insert(nodes[0], 0);
    // Product edges: (source, machine step, target).
    let mut edges: Vec<(usize, Step, usize)> = Vec::new();
    let mut parent: Vec<Option<(usize, Step)>> = vec![None];
    let mut next = 0;
    while next < nodes.len() {
        let (s, q) = nodes[next];
        for i in 0..inputs {
            let t = g.index[&m.update(g.states[s], i)];
            let letter = part.join(m.next_move(g.states[s]), i);
            for q2 in ucb.delta(q, letter) {
                let len = nodes.len();
                let id = *index.entry((t, q2)).or_insert_with(|| {
                    nodes.push((t, q2));
                    parent.push(Some((next, (s, i, t))));
                    len
                });
                edges.push((next, (s, i, t), id));
            }
        }
        next += 1;
    }

    let mut pg = DiGraph::<(), ()>::with_capacity(nodes.len(), edges.len());
    for _ in 0..nodes.len() {
        pg.add_node(());
    }
    for &(u, _, v) in &edges {
        pg.add_edge((u as u32).into(), (v as u32).into(), ());
    }
    let mut comp = vec![usize::MAX; nodes.len()];
    let sccs = tarjan_scc(&pg);
    for (c, members) in sccs.iter().enumerate() {
        for v in members {
            comp[v.index()] = c;
        }
    }
    for (c, members) in sccs.iter().enumerate() {
        let Some(v) = members.iter().map(|v| v.index()).find(|&v| ucb.is_accepting(nodes[v].1)) else {
            continue;
        };
        let cyclic = members.len() > 1 || edges.iter().any(|&(a, _, b)| a == v && b == v);
        if !cyclic {
            continue;
        }
        let mut prefix = Vec::new();
        let mut x = v;
        while let Some((p, step)) = parent[x] {
            prefix.push(step);
            x = p;
        }
        prefix.reverse();
        // Shortest way back to v inside the component.
        let mut back: FxHashMap<usize, (usize, Step)> = FxHashMap::default();
        let mut queue = VecDeque::from([v]);
        let mut reached = false;
        'search: while let Some(x) = queue.pop_front() {
            for &(a, step, b) in edges.iter().filter(|e| e.0 == x) {
                if comp[b] != c {
                    continue;
                }
                if b == v {
                    back.insert(usize::MAX, (a, step));
                    reached = true;
                    break 'search;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = back.entry(b) {
                    e.insert((a, step));
                    queue.push_back(b);
                }
            }
        }
        debug_assert!(reached);
        let mut cycle = Vec::new();
        let mut key = usize::MAX;
        loop {
            let (a, step) = back[&key];
            cycle.push(step);
            if a == v {
                break;
            }
            key = a;
        }
        cycle.reverse();
        let lasso = lasso_of(m, part, g, &prefix, &cycle);
        return Err(counterexample(part, Failure::Specification, lasso));
    }
    Ok(nodes.len())
}

pub fn verify_machine(
    m: &MooreMachine,
    f: &Formula,
    part: &SignalPartition,
    w: &WeightFunction,
    objective: &Objective,
) -> Result<Certificate, VerifyError> {
    if !m.matches(part) {
        return Err(VerifyError::PartitionMismatch);
    }
    let dim = w.dim();
    let got = match objective {
        Objective::MeanPayoff(t) => t.dim(),
        Objective::Energy(c) => c.len(),
    };
    if got != dim {
        return Err(VerifyError::Dimension { got, expected: dim });
    }
    let inputs = part.input_letters();
    let g = MachineGraph::new(m, inputs);
    let product_states = check_formula(m, part, f, &g)?;

    let weights = edge_weights(m, part, w, &g);
    let n = g.len();
    let mut mean_payoff = Vec::with_capacity(dim);
    let mut min_energy = Vec::with_capacity(dim);
    for d in 0..dim {
        let mean = karp_min_mean(n, &g.edges, &weights, d).expect("a total machine has a cycle");
        mean_payoff.push(mean);
        min_energy.push(match bellman_ford(n, &g.edges, |k| weights[k][d]) {
            Shortest::Distances(dist, _) => Some(-dist.iter().copied().min().unwrap_or(0).min(0)),
            Shortest::NegativeCycle(_) => None,
        });
    }

    match objective {
        Objective::MeanPayoff(t) => {
            for d in 0..dim {
                let nu = t.values()[d];
                if mean_payoff[d] < nu {
                    // A cycle of mean below ν is a negative cycle for q·w − p.
                    let (p, q) = (*nu.numer(), *nu.denom());
                    let Shortest::NegativeCycle(cycle) = bellman_ford(n, &g.edges, |k| q * weights[k][d] - p) else {
                        unreachable!("a cycle below the threshold exists")
                    };
                    let lasso = cycle_lasso(m, part, &g, &cycle);
                    return Err(counterexample(
                        part,
                        Failure::MeanPayoff {
                            dim: d,
                            value: mean_payoff[d],
                        },
                        lasso,
                    ));
                }
            }
        }
        Objective::Energy(credit) => {
            for d in 0..dim {
                match bellman_ford(n, &g.edges, |k| weights[k][d]) {
                    Shortest::NegativeCycle(cycle) => {
                        let lasso = cycle_lasso(m, part, &g, &cycle);
                        return Err(counterexample(part, Failure::Energy { dim: d }, lasso));
                    }
                    Shortest::Distances(dist, pred) => {
                        let (v, &low) = dist.iter().enumerate().min_by_key(|&(_, x)| *x).unwrap();
                        if low + credit[d] < 0 {
                            let mut prefix = Vec::new();
                            let mut x = v;
                            while let Some(k) = pred[x] {
                                prefix.push(g.edges[k]);
                                x = g.edges[k].0;
                            }
                            prefix.reverse();
                            let (more, cycle) = close_with_first_input(&g, v, inputs);
                            prefix.extend(more);
                            let lasso = lasso_of(m, part, &g, &prefix, &cycle);
                            return Err(counterexample(part, Failure::Energy { dim: d }, lasso));
                        }
                    }
                }
            }
        }
    }

    Ok(Certificate {
        mean_payoff,
        min_energy,
        machine_states: n,
        product_states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_formula;

    fn karp(n: usize, edges: &[(usize, usize, i64)]) -> Option<Ratio<i64>> {
        let e: Vec<(usize, u32, usize)> = edges.iter().map(|&(u, v, _)| (u, 0, v)).collect();
        let w: Vec<Vec<i64>> = edges.iter().map(|&(_, _, x)| vec![x]).collect();
        karp_min_mean(n, &e, &w, 0)
    }

    #[test]
    fn karp_small_graphs() {
        assert_eq!(karp(1, &[(0, 0, -3)]), Some(Ratio::from_integer(-3)));
        assert_eq!(karp(2, &[(0, 1, 1), (1, 0, -4), (1, 1, 0)]), Some(Ratio::new(-3, 2)));
        assert_eq!(karp(2, &[(0, 1, 1)]), None);
        // Two components; the worse one counts.
        assert_eq!(karp(3, &[(0, 0, 5), (0, 1, 0), (1, 2, 0), (2, 1, -1)]), Some(Ratio::new(-1, 2)));
    }

    #[test]
    fn always_grant_against_globally() {
        let part = SignalPartition::new(["r"], ["g"]).unwrap();
        let m = MooreMachine::new(&part, 0, vec![1], vec![vec![0, 0]]);
        let mut w = WeightFunction::zero(1, 2);
        w.set(1, true, vec![-1]).unwrap();
        let ok = parse_formula("G g", &part).unwrap();
        let cert = verify_machine(&m, &ok, &part, &w, &Objective::MeanPayoff(Threshold::from_integers(&[-1]))).unwrap();
        assert_eq!(cert.mean_payoff, vec![Ratio::from_integer(-1)]);
        assert_eq!(cert.min_energy, vec![None]);

        let bad = parse_formula("G !g", &part).unwrap();
        let err = verify_machine(&m, &bad, &part, &w, &Objective::Energy(vec![0])).unwrap_err();
        let VerifyError::Counterexample { failure, lasso, .. } = err else {
            panic!("expected a counterexample");
        };
        assert_eq!(failure, Failure::Specification);
        assert!(lasso.cycle.iter().all(|&l| part.output_part(l) == 1));
    }

    #[test]
    fn energy_failure_has_lasso() {
        let part = SignalPartition::new(["r"], ["g"]).unwrap();
        let m = MooreMachine::new(&part, 0, vec![1], vec![vec![0, 0]]);
        let mut w = WeightFunction::zero(1, 2);
        w.set(0, true, vec![-2]).unwrap();
        w.set(0, false, vec![2]).unwrap();
        let f = parse_formula("true", &part).unwrap();
        let err = verify_machine(&m, &f, &part, &w, &Objective::Energy(vec![5])).unwrap_err();
        assert!(matches!(err, VerifyError::Counterexample { failure: Failure::Energy { dim: 0 }, .. }));
        let cert = verify_machine(&m, &f, &part, &w, &Objective::MeanPayoff(Threshold::from_integers(&[-2]))).unwrap();
        assert_eq!(cert.mean_payoff, vec![Ratio::from_integer(-2)]);
    }
}
