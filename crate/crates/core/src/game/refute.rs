//! Cheap unrealizability certificates that hold for every energy cap.
//!
//! Fix the environment to repeat one input letter forever. Player O is then
//! alone on the graph of counting functions reachable from `F0`. If every
//! cycle of that graph has negative total weight in some dimension, each
//! infinite play drives the uncapped energy sum of that dimension to -∞.
//! Capping only ever lowers energy, so Player O loses from any initial
//! credit, and the game is lost at this counter bound for every cap.

use rustc_hash::FxHashMap;

use super::{GameError, Limits, SafetyGameSpec};
use crate::counting::Counter;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    /// The input letter the environment repeats.
    pub input: usize,
    /// A dimension in which every cycle is negative.
    pub dimension: usize,
    /// Number of counting functions in the explored graph.
    pub nodes: usize,
}

/// Player O's graph under a constant input, in compressed row form.
struct OnePlayer {
    start: Vec<usize>,
    target: Vec<u32>,
    /// `weight[e * dim + d]`.
    weight: Vec<i64>,
    dim: usize,
}

fn build(spec: &SafetyGameSpec, i: usize, limits: &Limits) -> Result<OnePlayer, GameError> {
    let comp = spec.compiled();
    let dim = spec.dim();
    let Some(f0) = comp.initial.clone() else {
        return Ok(OnePlayer {
            start: vec![0],
            target: Vec::new(),
            weight: Vec::new(),
            dim,
        });
    };
    let mut index: FxHashMap<Box<[Counter]>, u32> = FxHashMap::default();
    let mut functions: Vec<Box<[Counter]>> = vec![f0.clone().into()];
    index.insert(f0.into(), 0);
    let mut start = vec![0];
    let mut target = Vec::new();
    let mut weight = Vec::new();
    let mut buf = vec![0; comp.len()];
    let mut next = 0;
    while next < functions.len() {
        for o in 0..spec.output_letters() {
            if !comp.delta_into(&functions[next], o, i, &mut buf) {
                continue;
            }
            let id = match index.get(buf.as_slice()) {
                Some(&id) => id,
                None => {
                    if functions.len() >= limits.max_nodes {
                        return Err(GameError::NodeCap(limits.max_nodes));
                    }
                    let id = functions.len() as u32;
                    let key: Box<[Counter]> = buf.clone().into();
                    index.insert(key.clone(), id);
                    functions.push(key);
                    id
                }
            };
            target.push(id);
            let (wo, wi) = (spec.output_weight(o), spec.input_weight(i));
            weight.extend(wo.iter().zip(wi).map(|(a, b)| a + b));
        }
        start.push(target.len());
        next += 1;
    }
    Ok(OnePlayer {
        start,
        target,
        weight,
        dim,
    })
}

impl OnePlayer {
    fn len(&self) -> usize {
        self.start.len() - 1
    }

    fn edges(&self, u: usize) -> std::ops::Range<usize> {
        self.start[u]..self.start[u + 1]
    }

    /// Nodes lying on some infinite path: dead ends are peeled off
    /// repeatedly until every remaining node keeps an edge inside.
    fn live_nodes(&self) -> Vec<bool> {
        let n = self.len();
        let mut out_deg: Vec<usize> = (0..n).map(|u| self.edges(u).len()).collect();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        for u in 0..n {
            for e in self.edges(u) {
                preds[self.target[e] as usize].push(u as u32);
            }
        }
        let mut live = vec![true; n];
        let mut stack: Vec<usize> = (0..n).filter(|&u| out_deg[u] == 0).collect();
        while let Some(v) = stack.pop() {
            if !live[v] {
                continue;
            }
            live[v] = false;
            for &p in &preds[v] {
                let p = p as usize;
                out_deg[p] -= 1;
                if out_deg[p] == 0 && live[p] {
                    stack.push(p);
                }
            }
        }
        live
    }
}

/// A reduced fraction `p / q` with `q > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Mean {
    p: i64,
    q: i64,
}

impl Mean {
    fn new(p: i64, q: i64) -> Self {
        let g = num_integer::gcd(p, q).max(1);
        Mean { p: p / g, q: q / g }
    }

    fn gt(self, other: Mean) -> bool {
        (self.p as i128) * (other.q as i128) > (other.p as i128) * (self.q as i128)
    }
}

/// Largest mean weight of a cycle in dimension `d`, over the nodes in
/// `live` (each of which must have an edge to another live node), by policy
/// iteration. `None` when there are no live nodes.
fn max_cycle_mean(g: &OnePlayer, live: &[bool], d: usize) -> Option<Mean> {
    let n = g.len();
    let w = |e: usize| g.weight[e * g.dim + d];
    let mut policy = vec![usize::MAX; n];
    for u in (0..n).filter(|&u| live[u]) {
        policy[u] = g
            .edges(u)
            .filter(|&e| live[g.target[e] as usize])
            .max_by_key(|&e| w(e))
            .expect("live node keeps a live successor");
    }
    if policy.iter().all(|&e| e == usize::MAX) {
        return None;
    }
    let mut eta = vec![Mean { p: 0, q: 1 }; n];
    // Bias scaled by the denominator of the node's mean.
    let mut bias = vec![0i128; n];
    loop {
        evaluate(g, live, &policy, &w, &mut eta, &mut bias);
        let mut changed = false;
        for u in (0..n).filter(|&u| live[u]) {
            let mut best = policy[u];
            let mut best_eta = eta[u];
            for e in g.edges(u) {
                let v = g.target[e] as usize;
                if live[v] && eta[v].gt(best_eta) {
                    best = e;
                    best_eta = eta[v];
                }
            }
            if best != policy[u] {
                policy[u] = best;
                changed = true;
            }
        }
        if !changed {
            for u in (0..n).filter(|&u| live[u]) {
                let m = eta[u];
                let mut best = policy[u];
                let mut best_val = bias[u];
                for e in g.edges(u) {
                    let v = g.target[e] as usize;
                    if live[v] && eta[v] == m {
                        let val = (m.q as i128) * w(e) as i128 - m.p as i128 + bias[v];
                        if val > best_val {
                            best = e;
                            best_val = val;
                        }
                    }
                }
                if best != policy[u] {
                    policy[u] = best;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n)
        .filter(|&u| live[u])
        .map(|u| eta[u])
        .reduce(|a, b| if b.gt(a) { b } else { a })
}

/// Mean and bias of every live node under a fixed policy.
fn evaluate(
    g: &OnePlayer,
    live: &[bool],
    policy: &[usize],
    w: &impl Fn(usize) -> i64,
    eta: &mut [Mean],
    bias: &mut [i128],
) {
    let n = g.len();
    let succ = |u: usize| g.target[policy[u]] as usize;
    // 0 = unseen, 1 = on the current walk, 2 = done.
    let mut state = vec![0u8; n];
    let mut walk = Vec::new();
    for s in (0..n).filter(|&u| live[u]) {
        if state[s] != 0 {
            continue;
        }
        walk.clear();
        let mut u = s;
        while state[u] == 0 {
            state[u] = 1;
            walk.push(u);
            u = succ(u);
        }
        let mut rest = walk.len();
        if state[u] == 1 {
            // A new cycle starting at `u`.
            let pos = walk.iter().position(|&x| x == u).unwrap();
            let cycle = &walk[pos..];
            let total: i64 = cycle.iter().map(|&x| w(policy[x])).sum();
            let m = Mean::new(total, cycle.len() as i64);
            eta[u] = m;
            bias[u] = 0;
            for &x in cycle.iter().skip(1).rev() {
                let y = succ(x);
                eta[x] = m;
                bias[x] = (m.q as i128) * w(policy[x]) as i128 - m.p as i128 + bias[y];
            }
            for &x in cycle {
                state[x] = 2;
            }
            rest = pos;
        }
        for &x in walk[..rest].iter().rev() {
            let y = succ(x);
            let m = eta[y];
            eta[x] = m;
            bias[x] = (m.q as i128) * w(policy[x]) as i128 - m.p as i128 + bias[y];
            state[x] = 2;
        }
    }
}

/// Looks for an input letter and a dimension proving the game lost for
/// every energy cap. Inputs are tried in code order.
pub fn refute_constant_inputs(spec: &SafetyGameSpec, limits: &Limits) -> Result<Option<Refutation>, GameError> {
    if spec.initial_element().is_none() {
        return Ok(Some(Refutation {
            input: 0,
            dimension: 0,
            nodes: 0,
        }));
    }
    for i in 0..spec.input_letters() {
        let g = build(spec, i, limits)?;
        let live = g.live_nodes();
        for d in 0..spec.dim() {
            let lost = match max_cycle_mean(&g, &live, d) {
                None => true,
                Some(m) => m.p < 0,
            };
            if lost {
                return Ok(Some(Refutation {
                    input: i,
                    dimension: d,
                    nodes: g.len(),
                }));
            }
        }
    }
    Ok(None)
}
