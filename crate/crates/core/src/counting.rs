//! Counter and energy arithmetic of the determinized K-co-Büchi automaton.
//!
//! A counting function maps every automaton state to the largest number of
//! accepting visits over the runs reaching it: `-1` when no run reaches the
//! state, `0..=K` otherwise, and [`TOP`] once the bound is exceeded.
//!
//! Energy vectors take values in `0..=C` per dimension. The losing value ⊥
//! poisons the whole vector and is encoded with every component at `-1`, so
//! the componentwise order places it below every proper energy.

use crate::automata::Ucb;
use crate::ltl::Letter;

pub type Counter = i32;

/// The counter value ⊤ (bound exceeded).
pub const TOP: Counter = i32::MAX;

/// Counter of a state that no run reaches.
pub const UNREACHED: Counter = -1;

pub type CountingFn = Vec<Counter>;

/// `k ⊕ b`.
pub fn counter_plus(k: Counter, b: bool, bound: Counter) -> Counter {
    if k == UNREACHED {
        UNREACHED
    } else if k != TOP && k + b as Counter <= bound {
        k + b as Counter
    } else {
        TOP
    }
}

/// `k ⊖ b`.
pub fn counter_minus(k: Counter, b: bool, _bound: Counter) -> Counter {
    if k == TOP {
        TOP
    } else if k - (b as Counter) <= UNREACHED {
        UNREACHED
    } else {
        k - b as Counter
    }
}

/// The ⊥ energy of dimension `dim`.
pub fn bottom(dim: usize) -> Vec<i32> {
    vec![-1; dim]
}

pub fn is_bottom(c: &[i32]) -> bool {
    c.iter().any(|&x| x < 0)
}

/// `c ⊕ k` with cap `cap`: componentwise `min(cap, c + k)`, or ⊥ when `c` is
/// ⊥ or some component would drop below zero.
pub fn energy_plus(c: &[i32], k: &[i64], cap: &[i32]) -> Vec<i32> {
    debug_assert!(c.len() == k.len() && c.len() == cap.len());
    if is_bottom(c) {
        return bottom(c.len());
    }
    let mut out = Vec::with_capacity(c.len());
    for ((&x, &w), &m) in c.iter().zip(k).zip(cap) {
        let v = x as i64 + w;
        if v < 0 {
            return bottom(c.len());
        }
        out.push(v.min(m as i64) as i32);
    }
    out
}

/// `F0`: the initial state carries `0 ⊕ (q0 ∈ α)`, every other state `-1`.
pub fn initial_fn(ucb: &Ucb, bound: Counter) -> CountingFn {
    let mut f = vec![UNREACHED; ucb.num_states()];
    f[ucb.initial()] = counter_plus(0, ucb.is_accepting(ucb.initial()), bound);
    f
}

/// Membership in β: some counter is ⊤.
pub fn is_bad(f: &[Counter]) -> bool {
    f.contains(&TOP)
}

/// Componentwise `a ≤ b`.
pub fn fn_leq(a: &[Counter], b: &[Counter]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `Δ(F, σ)(q) = max{F(p) ⊕ (q ∈ α) | q ∈ δ(p, σ)}`, with `max ∅ = -1`.
pub fn delta_succ(f: &[Counter], letter: Letter, ucb: &Ucb, bound: Counter) -> CountingFn {
    let mut out = vec![UNREACHED; ucb.num_states()];
    for (p, &value) in f.iter().enumerate() {
        if value == UNREACHED {
            continue;
        }
        for q in ucb.delta(p, letter) {
            let v = counter_plus(value, ucb.is_accepting(q), bound);
            if v > out[q] {
                out[q] = v;
            }
        }
    }
    out
}

/// The largest `G` with `Δ(G, σ) ≤ F`:
/// `G(q) = min{F(q') ⊖ (q' ∈ α) | q' ∈ δ(q, σ)}`.
pub fn max_predecessor(f: &[Counter], letter: Letter, ucb: &Ucb, bound: Counter) -> CountingFn {
    (0..ucb.num_states())
        .map(|q| {
            ucb.delta(q, letter)
                .into_iter()
                .map(|t| counter_minus(f[t], ucb.is_accepting(t), bound))
                .min()
                .unwrap_or(TOP)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{ucb_for, Cube, DEFAULT_MAX_STATES};
    use crate::ltl::Formula;

    #[test]
    fn counter_examples() {
        assert_eq!(counter_plus(1, true, 2), 2);
        assert_eq!(counter_plus(2, true, 2), TOP);
        assert_eq!(counter_plus(-1, true, 2), -1);
        assert_eq!(counter_minus(0, true, 2), -1);
        assert_eq!(counter_minus(TOP, true, 2), TOP);
        assert_eq!(counter_minus(2, false, 2), 2);
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy_plus(&[5], &[-1], &[7]), vec![4]);
        assert_eq!(energy_plus(&[7], &[3], &[7]), vec![7]);
        assert!(is_bottom(&energy_plus(&[0], &[-1], &[7])));
        assert!(is_bottom(&energy_plus(&[3, 0], &[1, -1], &[7, 7])));
        assert!(is_bottom(&energy_plus(&bottom(2), &[5, 5], &[7, 7])));
    }

    #[test]
    fn successor_of_initial_fn() {
        // Universal automaton for G p: the accepting state self-loops on p.
        let ucb = Ucb::from_parts(
            0,
            vec![true],
            vec![Cube { pos: 1, neg: 0 }],
            vec![vec![0]],
            None,
        );
        assert_eq!(initial_fn(&ucb, 0), vec![TOP]);
        let f0 = initial_fn(&ucb, 2);
        assert_eq!(f0, vec![1]);
        assert_eq!(delta_succ(&f0, 1, &ucb, 3), vec![counter_plus(1, true, 3)]);
        assert_eq!(delta_succ(&[-1], 1, &ucb, 3), vec![-1]);
    }

    #[test]
    fn all_unreached_stays_unreached() {
        let ucb = ucb_for(&Formula::globally(Formula::atom(0)), DEFAULT_MAX_STATES).unwrap();
        let f = vec![UNREACHED; ucb.num_states()];
        for letter in 0..4 {
            assert_eq!(delta_succ(&f, letter, &ucb, 2), f);
        }
    }

    #[test]
    fn max_predecessor_of_top_is_top() {
        let ucb = ucb_for(&Formula::eventually(Formula::atom(1)), DEFAULT_MAX_STATES).unwrap();
        let f = vec![TOP; ucb.num_states()];
        for letter in 0..4 {
            assert_eq!(max_predecessor(&f, letter, &ucb, 2), f);
        }
    }
}
