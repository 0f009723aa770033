//! Brute-force solver over the unreduced game, used as a test oracle.
//!
//! Player O positions `(F, j, c)` keep the last input letter, counting
//! functions range over every automaton state, and the fixpoint is computed
//! on plain sets of reachable nodes.

use rustc_hash::FxHashMap;

use super::{GameError, Limits, SafetyGameSpec, SolveResult, SolveStats};
use crate::antichain::Antichain;
use crate::counting::{delta_succ, energy_plus, initial_fn, is_bad, is_bottom, Counter};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Node {
    /// `(F, j, c)`: Player O to move, `j` the previous input.
    O(Vec<Counter>, usize, Vec<i32>),
    /// `(F, o, c)`: Player I to move.
    I(Vec<Counter>, usize, Vec<i32>),
}

fn safe(node: &Node) -> bool {
    let (Node::O(f, _, c) | Node::I(f, _, c)) = node;
    !is_bad(f) && !is_bottom(c)
}

pub fn solve_explicit(spec: &SafetyGameSpec, limits: &Limits) -> Result<SolveResult, GameError> {
    let ucb = spec.ucb();
    let part = spec.partition();
    let bound = spec.bound();
    let cap = spec.cap();

    let mut index: FxHashMap<Node, usize> = FxHashMap::default();
    let mut nodes: Vec<Node> = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let s0 = Node::O(initial_fn(ucb, bound), 0, cap.to_vec());
    index.insert(s0.clone(), 0);
    nodes.push(s0);

    let mut next = 0;
    while next < nodes.len() {
        if next % 4096 == 0 {
            limits.check_cancel()?;
        }
        let node = nodes[next].clone();
        let mut out = Vec::new();
        if safe(&node) {
            let children: Vec<Node> = match &node {
                Node::O(f, _, c) => (0..spec.output_letters())
                    .map(|o| Node::I(f.clone(), o, energy_plus(c, spec.output_weight(o), cap)))
                    .collect(),
                Node::I(f, o, c) => (0..spec.input_letters())
                    .map(|i| {
                        let letter = part.join(*o as u32, i as u32);
                        Node::O(
                            delta_succ(f, letter, ucb, bound),
                            i,
                            energy_plus(c, spec.input_weight(i), cap),
                        )
                    })
                    .collect(),
            };
            for child in children {
                let id = match index.get(&child) {
                    Some(&id) => id,
                    None => {
                        if nodes.len() >= limits.max_nodes {
                            return Err(GameError::NodeCap(limits.max_nodes));
                        }
                        let id = nodes.len();
                        index.insert(child.clone(), id);
                        nodes.push(child);
                        id
                    }
                };
                out.push(id);
            }
        }
        succ.push(out);
        next += 1;
    }

    let mut win: Vec<bool> = nodes.iter().map(safe).collect();
    let mut iterations = 0;
    loop {
        if iterations >= limits.max_iterations {
            return Err(GameError::IterationCap(limits.max_iterations));
        }
        iterations += 1;
        let mut changed = false;
        for (id, node) in nodes.iter().enumerate() {
            if !win[id] {
                continue;
            }
            let keep = match node {
                Node::O(..) => succ[id].iter().any(|&t| win[t]),
                Node::I(..) => succ[id].iter().all(|&t| win[t]),
            };
            if !keep {
                win[id] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    Ok(SolveResult {
        realizable: win[0],
        witness: Antichain::new(),
        stats: SolveStats {
            iterations,
            nodes: nodes.len(),
            antichain_peak: 0,
        },
    })
}
