//! Ω operators, controllable predecessors and the backward antichain
//! fixpoint over the reduced game.

use super::{min_credit, GameError, Limits, SafetyGameSpec, SolveResult, SolveStats};
use crate::antichain::{Antichain, Element};

/// Worst Player O predecessor of the Player I position `(F, o, c)`: the
/// position `(F, d)` with the least `d` such that `d ⊕ w(o) ≥ c`.
pub fn omega_output(spec: &SafetyGameSpec, x: &Element, o: usize) -> Option<Element> {
    let d = min_credit(&x.c, spec.output_weight(o), spec.cap())?;
    Some(Element::new(x.f.clone(), d))
}

/// Worst Player I predecessors of the Player O position `(F, c)` through
/// input `i`, one per output letter: `(o, (maxpred(F, o ∪ i), d))` with the
/// least `d` such that `d ⊕ w(i) ≥ c`.
pub fn omega_input(spec: &SafetyGameSpec, x: &Element, i: usize) -> Vec<(usize, Element)> {
    let Some(d) = min_credit(&x.c, spec.input_weight(i), spec.cap()) else {
        return Vec::new();
    };
    let comp = spec.compiled();
    (0..spec.output_letters())
        .map(|o| (o, Element::new(comp.max_predecessor(&x.f, o, i), d.clone())))
        .collect()
}

/// Player O positions from which some output reaches `↓l[o]`.
pub fn cpre_o(spec: &SafetyGameSpec, l: &[Antichain]) -> Antichain {
    assert_eq!(l.len(), spec.output_letters());
    let mut out = Antichain::new();
    for (o, bucket) in l.iter().enumerate() {
        for x in bucket.iter() {
            if let Some(p) = omega_output(spec, x, o) {
                out.insert(p);
            }
        }
    }
    out
}

/// Player I positions, bucketed by the pending output letter, from which
/// every input reaches `↓l`.
pub fn cpre_i(spec: &SafetyGameSpec, l: &Antichain) -> Vec<Antichain> {
    let comp = spec.compiled();
    let n = comp.len();
    let mut pred = vec![0; n];
    (0..spec.output_letters())
        .map(|o| {
            let mut acc: Option<Antichain> = None;
            for i in 0..spec.input_letters() {
                let mut layer = Antichain::new();
                for x in l.iter() {
                    let Some(d) = min_credit(&x.c, spec.input_weight(i), spec.cap()) else {
                        continue;
                    };
                    comp.max_predecessor_into(&x.f, o, i, &mut pred);
                    layer.insert(Element::new(pred.clone(), d));
                }
                acc = Some(match acc {
                    None => layer,
                    Some(a) => a.meet(&layer),
                });
                if acc.as_ref().is_some_and(Antichain::is_empty) {
                    break;
                }
            }
            acc.unwrap_or_default()
        })
        .collect()
}

/// Greatest fixpoint of the Player O winning region, starting from the safe
/// region. Each iterate is contained in the previous one (the operators are
/// monotone and the first step already lands inside the safe region), so the
/// intersection with the previous iterate is left implicit.
///
/// The iteration stops early once the initial position drops out, since it
/// can never come back.
pub fn solve_backward(spec: &SafetyGameSpec, limits: &Limits) -> Result<SolveResult, GameError> {
    let init = spec.initial_element();
    let mut w_o = Antichain::singleton(spec.safe_top());
    let mut stats = SolveStats {
        antichain_peak: 1,
        ..SolveStats::default()
    };
    loop {
        if stats.iterations >= limits.max_iterations {
            return Err(GameError::IterationCap(limits.max_iterations));
        }
        limits.check_cancel()?;
        stats.iterations += 1;
        let w_i = cpre_i(spec, &w_o);
        let i_size: usize = w_i.iter().map(Antichain::len).sum();
        let next = cpre_o(spec, &w_i);
        stats.nodes += i_size + next.len();
        stats.antichain_peak = stats.antichain_peak.max(i_size).max(next.len());
        log::debug!(
            "backward iteration {}: |W_O| = {}, |W_I| = {}",
            stats.iterations,
            next.len(),
            i_size
        );
        let stable = next.same_set(&w_o);
        w_o = next;
        let lost = !init.as_ref().is_some_and(|x| w_o.member(x));
        if stable || lost {
            break;
        }
    }
    let realizable = init.is_some_and(|x| w_o.member(&x));
    Ok(SolveResult {
        realizable,
        witness: w_o,
        stats,
    })
}
