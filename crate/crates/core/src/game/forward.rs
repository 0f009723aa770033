//! Forward solver: explores the counting functions reachable from `F0`,
//! then computes for each of them the least initial credits that let Player
//! O stay safe, propagating credit increases back to predecessors until
//! nothing changes.
//!
//! Credits are kept as antichains of minimal vectors; an empty antichain
//! means the counting function is losing for every credit within the cap.

use std::fmt::Write as _;

use rustc_hash::{FxHashMap, FxHashSet};

use super::{min_credit, GameError, Limits, SafetyGameSpec, SolveResult, SolveStats};
use crate::antichain::{Antichain, Element};
use crate::counting::Counter;

const LOST: u32 = u32::MAX;

/// The explored graph of counting functions.
struct Arena {
    functions: Vec<Box<[Counter]>>,
    /// `edges[f * letters + o * ni + i]`: successor id, or [`LOST`].
    edges: Vec<u32>,
    preds: Vec<Vec<u32>>,
}

fn explore(spec: &SafetyGameSpec, f0: Box<[Counter]>, limits: &Limits) -> Result<Arena, GameError> {
    let comp = spec.compiled();
    let (no, ni) = (spec.output_letters(), spec.input_letters());
    let mut index: FxHashMap<Box<[Counter]>, u32> = FxHashMap::default();
    let mut functions = vec![f0.clone()];
    index.insert(f0, 0);
    let mut edges = Vec::new();
    let mut buf = vec![0; comp.len()];
    // A letter that exhausts even the full credit loses at once.
    let cap = spec.cap();
    let fatal: Vec<bool> = (0..no)
        .flat_map(|o| (0..ni).map(move |i| (o, i)))
        .map(|(o, i)| spec.after_output(cap, o).and_then(|c| spec.after_input(&c, i)).is_none())
        .collect();
    let mut next = 0;
    while next < functions.len() {
        if next % 4096 == 0 {
            limits.check_cancel()?;
        }
        for o in 0..no {
            for i in 0..ni {
                let id = if !fatal[o * ni + i] && comp.delta_into(&functions[next], o, i, &mut buf) {
                    match index.get(buf.as_slice()) {
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
                    }
                } else {
                    LOST
                };
                edges.push(id);
            }
        }
        next += 1;
    }
    let letters = no * ni;
    let mut preds = vec![Vec::new(); functions.len()];
    for (src, row) in edges.chunks(letters).enumerate() {
        for &t in row {
            if t != LOST && preds[t as usize].last() != Some(&(src as u32)) {
                preds[t as usize].push(src as u32);
            }
        }
    }
    Ok(Arena {
        functions,
        edges,
        preds,
    })
}

/// Minimal elements of a set of credit vectors.
fn minimize(items: Vec<Vec<i32>>) -> Vec<Vec<i32>> {
    let mut out: Vec<Vec<i32>> = Vec::new();
    for x in items {
        if out.iter().any(|y| leq(y, &x)) {
            continue;
        }
        out.retain(|y| !leq(&x, y));
        out.push(x);
    }
    out.sort();
    out
}

fn leq(a: &[i32], b: &[i32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Credits needed before output `o` so that input `i` leads into the
/// credit set `target` after both weights apply.
fn pull_back(spec: &SafetyGameSpec, target: &[Vec<i32>], o: usize, i: usize) -> Vec<Vec<i32>> {
    target
        .iter()
        .filter_map(|m| {
            let m = min_credit(m, spec.input_weight(i), spec.cap())?;
            min_credit(&m, spec.output_weight(o), spec.cap())
        })
        .collect()
}

fn evaluate(spec: &SafetyGameSpec, arena: &Arena, credit: &[Vec<Vec<i32>>], f: usize) -> Vec<Vec<i32>> {
    let (no, ni) = (spec.output_letters(), spec.input_letters());
    let row = &arena.edges[f * no * ni..(f + 1) * no * ni];
    let mut options = Vec::new();
    'outputs: for o in 0..no {
        let mut acc: Vec<Vec<i32>> = vec![vec![0; spec.dim()]];
        for i in 0..ni {
            let t = row[o * ni + i];
            if t == LOST {
                continue 'outputs;
            }
            let need = pull_back(spec, &credit[t as usize], o, i);
            let mut joined = Vec::with_capacity(acc.len() * need.len());
            for a in &acc {
                for b in &need {
                    joined.push(a.iter().zip(b).map(|(x, y)| *x.max(y)).collect());
                }
            }
            acc = minimize(joined);
            if acc.is_empty() {
                continue 'outputs;
            }
        }
        options.extend(acc);
    }
    minimize(options)
}

/// The explored graph with per-node minimal credits, kept for DOT output.
pub struct ForwardGraph {
    arena: Arena,
    credit: Vec<Vec<Vec<i32>>>,
    output_letters: usize,
    input_letters: usize,
}

fn run(spec: &SafetyGameSpec, limits: &Limits) -> Result<(Option<ForwardGraph>, SolveStats), GameError> {
    let Some(init) = spec.initial_element() else {
        return Ok((None, SolveStats::default()));
    };
    let arena = explore(spec, init.f, limits)?;
    let n = arena.functions.len();
    let mut credit: Vec<Vec<Vec<i32>>> = vec![vec![vec![0; spec.dim()]]; n];
    let mut queued = vec![true; n];
    let mut work: Vec<u32> = (0..n as u32).rev().collect();
    let mut iterations = 0;
    while let Some(f) = work.pop() {
        let f = f as usize;
        queued[f] = false;
        if credit[f].is_empty() {
            continue;
        }
        if iterations >= limits.max_iterations {
            return Err(GameError::IterationCap(limits.max_iterations));
        }
        iterations += 1;
        if iterations % 4096 == 0 {
            limits.check_cancel()?;
        }
        let value = evaluate(spec, &arena, &credit, f);
        if value != credit[f] {
            credit[f] = value;
            for &p in &arena.preds[f] {
                if !queued[p as usize] {
                    queued[p as usize] = true;
                    work.push(p);
                }
            }
        }
    }
    let stats = SolveStats {
        iterations,
        nodes: n,
        antichain_peak: credit.iter().map(Vec::len).sum(),
    };
    Ok((
        Some(ForwardGraph {
            arena,
            credit,
            output_letters: spec.output_letters(),
            input_letters: spec.input_letters(),
        }),
        stats,
    ))
}

/// Solves the game by forward exploration. The witness holds the pairs
/// `(F, m)`, `m` a minimal winning credit of `F`, visited by one winning
/// strategy from `(F0, C)`.
pub fn solve_forward(spec: &SafetyGameSpec, limits: &Limits) -> Result<SolveResult, GameError> {
    let (graph, stats) = run(spec, limits)?;
    let Some(graph) = graph.filter(|g| !g.credit[0].is_empty()) else {
        return Ok(SolveResult {
            realizable: false,
            witness: Antichain::new(),
            stats,
        });
    };
    let (no, ni) = (graph.output_letters, graph.input_letters);
    let mut seen: FxHashSet<(u32, Vec<i32>)> = FxHashSet::default();
    let mut stack = vec![(0u32, graph.credit[0][0].clone())];
    seen.insert(stack[0].clone());
    let mut elements = Vec::new();
    while let Some((f, m)) = stack.pop() {
        let row = &graph.arena.edges[f as usize * no * ni..(f as usize + 1) * no * ni];
        let step = (0..no).find_map(|o| {
            let after_o = spec.after_output(&m, o)?;
            (0..ni)
                .map(|i| {
                    let t = row[o * ni + i];
                    if t == LOST {
                        return None;
                    }
                    let c = spec.after_input(&after_o, i)?;
                    let m2 = graph.credit[t as usize].iter().find(|m2| leq(m2, &c))?;
                    Some((t, m2.clone()))
                })
                .collect::<Option<Vec<_>>>()
        });
        let next = step.expect("a winning credit keeps some output winning");
        elements.push(Element::new(graph.arena.functions[f as usize].clone(), m));
        for succ in next {
            if seen.insert(succ.clone()) {
                stack.push(succ);
            }
        }
    }
    Ok(SolveResult {
        realizable: true,
        witness: Antichain::from_elements(elements),
        stats,
    })
}

/// DOT rendering of the explored graph: one node per counting function with
/// its minimal credits, edges labelled by output/input letter codes.
pub fn forward_dot(spec: &SafetyGameSpec, limits: &Limits) -> Result<String, GameError> {
    let (graph, _) = run(spec, limits)?;
    let mut out = String::from("digraph forward {\n  node [shape=box];\n");
    if let Some(g) = graph {
        let letters = g.output_letters * g.input_letters;
        for (id, f) in g.arena.functions.iter().enumerate() {
            let credits = if g.credit[id].is_empty() {
                "lost".to_string()
            } else {
                format!("{:?}", g.credit[id])
            };
            let _ = writeln!(out, "  n{id} [label=\"{f:?}\\n{credits}\"];");
            for (k, &t) in g.arena.edges[id * letters..(id + 1) * letters].iter().enumerate() {
                if t != LOST {
                    let (o, i) = (k / g.input_letters, k % g.input_letters);
                    let _ = writeln!(out, "  n{id} -> n{t} [label=\"{o}/{i}\"];");
                }
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
