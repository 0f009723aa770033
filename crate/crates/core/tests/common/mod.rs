//! Fixtures and random generators shared by the integration tests.
#![allow(dead_code)]

use mpsynth::automata::{Cube, Ucb, WeightFunction};
use mpsynth::ltl::{parse_formula, Formula, LassoWord, Letter, SignalPartition};
use rand::Rng;

pub const REQUEST_GRANT: &str = "G(r1 -> X(w1 U g1)) && G(r2 -> X(w2 U g2)) && G(!g1 || !g2)";

/// Two clients sharing a resource.
pub fn arbiter() -> (Formula, SignalPartition) {
    let part = SignalPartition::new(["r1", "r2"], ["g1", "w1", "g2", "w2"]).unwrap();
    let f = parse_formula(REQUEST_GRANT, &part).unwrap();
    (f, part)
}

fn table(part: &SignalPartition, dim: usize, entries: &[(&str, &[i64])]) -> WeightFunction {
    let mut w = WeightFunction::zero(dim, part.num_signals());
    for (name, v) in entries {
        w.set(part.index_of(name).unwrap(), true, v.to_vec()).unwrap();
    }
    w
}

/// Waiting penalties: `w1 ↦ -1`, `w2 ↦ -2`.
pub fn waiting_weights(part: &SignalPartition) -> WeightFunction {
    table(part, 1, &[("w1", &[-1]), ("w2", &[-2])])
}

/// Waiting penalties plus one dimension per client rewarding requests and
/// charging grants.
pub fn unsolicited_weights(part: &SignalPartition) -> WeightFunction {
    table(
        part,
        3,
        &[
            ("r1", &[0, 1, 0]),
            ("r2", &[0, 0, 1]),
            ("g1", &[0, -1, 0]),
            ("g2", &[0, 0, -1]),
            ("w1", &[-1, 0, 0]),
            ("w2", &[-2, 0, 0]),
        ],
    )
}

/// As [`unsolicited_weights`] with the waiting penalties split per client.
pub fn split_weights(part: &SignalPartition) -> WeightFunction {
    table(
        part,
        4,
        &[
            ("r1", &[0, 0, 1, 0]),
            ("r2", &[0, 0, 0, 1]),
            ("g1", &[0, 0, -1, 0]),
            ("g2", &[0, 0, 0, -1]),
            ("w1", &[-1, 0, 0, 0]),
            ("w2", &[0, -2, 0, 0]),
        ],
    )
}

/// Random formula over `signals` atoms with nesting depth at most `depth`.
pub fn random_formula(rng: &mut impl Rng, signals: usize, depth: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(rng.gen_range(0..signals)),
        };
    }
    let sub = |rng: &mut _| random_formula(rng, signals, depth - 1);
    match rng.gen_range(0..11) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::iff(sub(rng), sub(rng)),
        5 => Formula::next(sub(rng)),
        6 => Formula::until(sub(rng), sub(rng)),
        7 => Formula::release(sub(rng), sub(rng)),
        8 => Formula::eventually(sub(rng)),
        9 => Formula::globally(sub(rng)),
        _ => Formula::atom(rng.gen_range(0..signals)),
    }
}

pub fn random_lasso(rng: &mut impl Rng, signals: usize, max_prefix: usize, max_cycle: usize) -> LassoWord {
    let letters = 1u64 << signals;
    let (p, c) = (rng.gen_range(0..=max_prefix), rng.gen_range(1..=max_cycle));
    let mut word = |n: usize| -> Vec<Letter> { (0..n).map(|_| rng.gen_range(0..letters)).collect() };
    let prefix = word(p);
    let cycle = word(c);
    LassoWord::new(prefix, cycle)
}

/// Random state-labelled automaton on one or two signals, without sink.
pub fn random_ucb(rng: &mut impl Rng, states: usize, signals: usize) -> Ucb {
    let label = |rng: &mut dyn rand::RngCore| {
        let mut cube = Cube::TRUE;
        for s in 0..signals {
            match rng.gen_range(0..3) {
                0 => cube.pos |= 1 << s,
                1 => cube.neg |= 1 << s,
                _ => {}
            }
        }
        cube
    };
    let labels = (0..states).map(|_| label(rng)).collect();
    let accepting = (0..states).map(|_| rng.gen_bool(0.4)).collect();
    let succ = (0..states)
        .map(|_| (0..states).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    Ucb::from_parts(0, accepting, labels, succ, None)
}

/// Every automaton with `states` states over one signal, up to the choice
/// of initial state.
pub fn for_each_ucb(states: usize, mut visit: impl FnMut(&Ucb)) {
    let cubes = [Cube::TRUE, Cube { pos: 1, neg: 0 }, Cube { pos: 0, neg: 1 }];
    let label_count = 3usize.pow(states as u32);
    for labels in 0..label_count {
        let labels: Vec<Cube> = (0..states).map(|q| cubes[labels / 3usize.pow(q as u32) % 3]).collect();
        for succ in 0..1usize << (states * states) {
            let succ: Vec<Vec<usize>> = (0..states)
                .map(|q| (0..states).filter(|t| succ >> (q * states + t) & 1 == 1).collect())
                .collect();
            for acc in 0..1usize << states {
                let accepting = (0..states).map(|q| acc >> q & 1 == 1).collect();
                visit(&Ucb::from_parts(0, accepting, labels.clone(), succ.clone(), None));
            }
        }
    }
}

/// Proptest strategy for formulas over `signals` atoms.
pub fn formula_strategy(signals: usize, depth: u32) -> impl proptest::strategy::Strategy<Value = Formula> {
    use proptest::prelude::*;
    let leaf = prop_oneof![
        1 => Just(Formula::True),
        1 => Just(Formula::False),
        6 => (0..signals).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::eventually),
            inner.clone().prop_map(Formula::globally),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::release(a, b)),
        ]
    })
}

/// Proptest strategy for lasso words with short prefix and cycle.
pub fn lasso_strategy(signals: usize) -> impl proptest::strategy::Strategy<Value = LassoWord> {
    use proptest::prelude::*;
    let letters = 1u64 << signals;
    (
        proptest::collection::vec(0..letters, 0..=3),
        proptest::collection::vec(0..letters, 1..=3),
    )
        .prop_map(|(p, c)| LassoWord::new(p, c))
}

/// Three signals: inputs `a`, outputs `b c`.
pub fn abc() -> SignalPartition {
    SignalPartition::new(["a"], ["b", "c"]).unwrap()
}
