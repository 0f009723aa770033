//! Letter-indexed transition tables of the determinized automaton, restricted
//! to the states that matter for counting.
//!
//! Two kinds of states are dropped from counting functions. States that can
//! no longer reach an accepting state never raise a counter, so their values
//! are irrelevant. Accepting states with a universal self-loop ("doomed")
//! push any counter reaching them to ⊤ after at most `K` more steps whatever
//! the players do, so entering one is treated as losing on the spot. Both
//! simplifications preserve the set of winning positions for every bound.
//!
//! Counters are further capped per state by the most accepting visits any
//! automaton path from the initial state can collect before reaching it
//! (unbounded when an accepting cycle lies upstream). Every position
//! reachable in a play respects these ceilings, and they are preserved by
//! successors, so positions above them can be dropped from the game.

use crate::automata::{Cube, Ucb};
use crate::counting::Counter;
use crate::ltl::SignalPartition;

/// Transitions for one full letter `o ∪ i`, in compressed row form.
#[derive(Debug, Clone)]
pub(crate) struct Step {
    /// `start[q]..start[q+1]` indexes `targets` for source `q`.
    start: Vec<u32>,
    targets: Vec<u32>,
    doomed: Vec<bool>,
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    /// UCB state of each tracked index.
    pub tracked: Vec<usize>,
    pub accepting: Vec<bool>,
    pub bound: Counter,
    /// Per tracked state: `min(K, most accepting visits on the way in)`.
    pub ceiling: Vec<Counter>,
    pub input_letters: usize,
    steps: Vec<Step>,
    /// `F0` over tracked states, or `None` when it is already losing.
    pub initial: Option<Vec<Counter>>,
}

fn doomed_state(ucb: &Ucb, q: usize) -> bool {
    ucb.is_accepting(q) && ucb.label(q) == Cube::TRUE && ucb.successors(q).contains(&q)
}

/// For every state, the largest number of accepting states met on a path
/// from the initial state (the target included), or `None` if unbounded.
fn visits_upstream(ucb: &Ucb) -> Vec<Option<u64>> {
    use petgraph::algo::tarjan_scc;
    use petgraph::graph::DiGraph;

    let n = ucb.num_states();
    let mut g = DiGraph::<(), ()>::with_capacity(n, 0);
    for _ in 0..n {
        g.add_node(());
    }
    for q in 0..n {
        for &t in ucb.successors(q) {
            g.add_edge((q as u32).into(), (t as u32).into(), ());
        }
    }
    // Tarjan yields components in reverse topological order.
    let mut comps = tarjan_scc(&g);
    comps.reverse();
    let mut comp_of = vec![0; n];
    for (k, c) in comps.iter().enumerate() {
        for v in c {
            comp_of[v.index()] = k;
        }
    }
    let mut best: Vec<Option<Option<u64>>> = vec![None; n];
    best[ucb.initial()] = Some(Some(ucb.is_accepting(ucb.initial()) as u64));
    for c in &comps {
        let members: Vec<usize> = c.iter().map(|v| v.index()).collect();
        let cyclic = members.len() > 1 || ucb.successors(members[0]).contains(&members[0]);
        let pumps = cyclic && members.iter().any(|&q| ucb.is_accepting(q));
        // Entry values into the component come from earlier components,
        // which are final by now. Inside an acyclic component there is
        // only one state; inside a cyclic one without accepting states the
        // count cannot grow.
        let mut entry: Option<Option<u64>> = None;
        for &q in &members {
            if let Some(v) = best[q] {
                entry = Some(max_visits(entry, v));
            }
        }
        let Some(entry) = entry else { continue };
        let value = if pumps { None } else { entry };
        for &q in &members {
            best[q] = Some(value);
        }
        for &q in &members {
            for &t in ucb.successors(q) {
                if comp_of[t] != comp_of[q] {
                    let v = value.map(|x| x + ucb.is_accepting(t) as u64);
                    best[t] = Some(match best[t] {
                        None => v,
                        Some(old) => max_visits(Some(old), v),
                    });
                }
            }
        }
    }
    best.into_iter().map(|v| v.unwrap_or(Some(0))).collect()
}

fn max_visits(a: Option<Option<u64>>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (None, b) => b,
        (Some(None), _) | (_, None) => None,
        (Some(Some(x)), Some(y)) => Some(x.max(y)),
    }
}

impl Compiled {
    pub fn new(ucb: &Ucb, part: &SignalPartition, bound: Counter) -> Self {
        let n = ucb.num_states();
        let doomed: Vec<bool> = (0..n).map(|q| doomed_state(ucb, q)).collect();

        // States from which some accepting state is reachable.
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for &t in ucb.successors(q) {
                pred[t].push(q);
            }
        }
        let mut productive: Vec<bool> = (0..n).map(|q| ucb.is_accepting(q)).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&q| productive[q]).collect();
        while let Some(t) = stack.pop() {
            for &q in &pred[t] {
                if !productive[q] {
                    productive[q] = true;
                    stack.push(q);
                }
            }
        }

        let mut index = vec![usize::MAX; n];
        let mut tracked = Vec::new();
        for q in 0..n {
            if productive[q] && !doomed[q] && Some(q) != ucb.sink() {
                index[q] = tracked.len();
                tracked.push(q);
            }
        }
        let accepting: Vec<bool> = tracked.iter().map(|&q| ucb.is_accepting(q)).collect();
        let visits = visits_upstream(ucb);
        let ceiling = tracked
            .iter()
            .map(|&q| visits[q].map_or(bound, |v| v.min(bound as u64) as Counter))
            .collect();

        let ni = part.input_letters() as usize;
        let no = part.output_letters() as usize;
        let mut steps = Vec::with_capacity(ni * no);
        for o in 0..no {
            for i in 0..ni {
                let letter = part.join(o as u32, i as u32);
                let mut start = Vec::with_capacity(tracked.len() + 1);
                let mut targets = Vec::new();
                let mut doom = Vec::with_capacity(tracked.len());
                for &q in &tracked {
                    start.push(targets.len() as u32);
                    let mut hit_doomed = false;
                    for t in ucb.delta(q, letter) {
                        if doomed[t] {
                            hit_doomed = true;
                        } else if index[t] != usize::MAX {
                            targets.push(index[t] as u32);
                        }
                    }
                    doom.push(hit_doomed);
                }
                start.push(targets.len() as u32);
                steps.push(Step {
                    start,
                    targets,
                    doomed: doom,
                });
            }
        }

        let q0 = ucb.initial();
        let init_value = ucb.is_accepting(q0) as Counter;
        let initial = if doomed[q0] || init_value > bound {
            None
        } else {
            let mut f = vec![-1; tracked.len()];
            if index[q0] != usize::MAX {
                f[index[q0]] = init_value;
            }
            Some(f)
        };

        Compiled {
            tracked,
            accepting,
            bound,
            ceiling,
            input_letters: ni,
            steps,
            initial,
        }
    }

    pub fn len(&self) -> usize {
        self.tracked.len()
    }

    fn step(&self, o: usize, i: usize) -> &Step {
        &self.steps[o * self.input_letters + i]
    }

    /// `Δ(F, o ∪ i)`, or `None` when the successor is losing (a counter
    /// exceeds the bound or a doomed state is entered).
    pub fn delta(&self, f: &[Counter], o: usize, i: usize) -> Option<Vec<Counter>> {
        let mut out = vec![-1; f.len()];
        self.delta_into(f, o, i, &mut out).then_some(out)
    }

    /// In-place variant of [`Compiled::delta`]; returns false when losing.
    pub fn delta_into(&self, f: &[Counter], o: usize, i: usize, out: &mut [Counter]) -> bool {
        let step = self.step(o, i);
        out.fill(-1);
        for (q, &value) in f.iter().enumerate() {
            if value < 0 {
                continue;
            }
            if step.doomed[q] {
                return false;
            }
            let (a, b) = (step.start[q] as usize, step.start[q + 1] as usize);
            for &t in &step.targets[a..b] {
                let t = t as usize;
                let v = value + self.accepting[t] as Counter;
                if v > self.bound {
                    return false;
                }
                if v > out[t] {
                    out[t] = v;
                }
            }
        }
        true
    }

    /// Largest safe `G` with `Δ(G, o ∪ i) ≤ F`, clipped to the ceilings.
    pub fn max_predecessor_into(&self, f: &[Counter], o: usize, i: usize, out: &mut [Counter]) {
        let step = self.step(o, i);
        for (q, slot) in out.iter_mut().enumerate() {
            if step.doomed[q] {
                *slot = -1;
                continue;
            }
            let (a, b) = (step.start[q] as usize, step.start[q + 1] as usize);
            let mut best = self.ceiling[q];
            for &t in &step.targets[a..b] {
                let t = t as usize;
                let v = (f[t] - self.accepting[t] as Counter).max(-1);
                best = best.min(v);
            }
            *slot = best;
        }
    }

    pub fn max_predecessor(&self, f: &[Counter], o: usize, i: usize) -> Vec<Counter> {
        let mut out = vec![0; f.len()];
        self.max_predecessor_into(f, o, i, &mut out);
        out
    }
}
