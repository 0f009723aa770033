//! Operator properties, checked exhaustively on small domains.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::common::{for_each_ucb, random_formula, random_lasso, random_ucb};
use mpsynth::antichain::{Antichain, Element};
use mpsynth::automata::{ucb_for, Ucb, WeightFunction};
use mpsynth::counting::{
    bottom, counter_minus, counter_plus, delta_succ, energy_plus, fn_leq, initial_fn, is_bad, max_predecessor,
    Counter, TOP, UNREACHED,
};
use mpsynth::game::{cpre_i, cpre_o, omega_input, omega_output, SafetyGameSpec};
use mpsynth::ltl::{parse_formula, SignalPartition};

/// Counter values modelled independently of their integer encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Val {
    Unreached,
    N(i32),
    Top,
}

fn plus(k: Val, b: bool, bound: i32) -> Val {
    match k {
        Val::Unreached => Val::Unreached,
        Val::N(n) if n + b as i32 <= bound => Val::N(n + b as i32),
        _ => Val::Top,
    }
}

fn minus(k: Val, b: bool) -> Val {
    match k {
        Val::Top => Val::Top,
        Val::N(n) if n - (b as i32) >= 0 => Val::N(n - b as i32),
        _ => Val::Unreached,
    }
}

fn encode(v: Val) -> Counter {
    match v {
        Val::Unreached => UNREACHED,
        Val::N(n) => n,
        Val::Top => TOP,
    }
}

fn domain(bound: i32) -> Vec<Val> {
    let mut d = vec![Val::Unreached];
    d.extend((0..=bound).map(Val::N));
    d.push(Val::Top);
    d
}

/// All functions from `n` states into `values`.
fn functions(n: usize, values: &[Counter]) -> Vec<Vec<Counter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| {
                values.iter().map(move |&v| {
                    let mut g = f.clone();
                    g.push(v);
                    g
                })
            })
            .collect();
    }
    out
}

fn counters() -> Result<usize, String> {
    let mut cases = 0;
    for bound in 0..=3 {
        let dom = domain(bound);
        for w in dom.windows(2) {
            if encode(w[0]) >= encode(w[1]) {
                return Err(format!("encoding not monotone at {:?}", w));
            }
        }
        for &k in &dom {
            for b in [false, true] {
                cases += 1;
                if counter_plus(encode(k), b, bound) != encode(plus(k, b, bound)) {
                    return Err(format!("{k:?} ⊕ {b} with K={bound}"));
                }
                if counter_minus(encode(k), b, bound) != encode(minus(k, b)) {
                    return Err(format!("{k:?} ⊖ {b} with K={bound}"));
                }
            }
        }
    }
    Ok(cases)
}

/// `F' ≤ F ⇒ Δ(F', σ) ≤ Δ(F, σ)` over every automaton with at most two
/// states, and `c' ≥ c ⇒ c' ⊕ k ≥ c ⊕ k` on energies.
fn monotonicity() -> Result<usize, String> {
    let mut cases = 0;
    for n in 1..=2 {
        let mut err = None;
        for_each_ucb(n, |ucb| {
            for bound in 0..=2 {
                let values: Vec<Counter> = domain(bound).into_iter().map(encode).collect();
                let fs = functions(n, &values);
                for letter in 0..2 {
                    let images: Vec<Vec<Counter>> = fs.iter().map(|f| delta_succ(f, letter, ucb, bound)).collect();
                    for (a, fa) in fs.iter().enumerate() {
                        for (b, fb) in fs.iter().enumerate() {
                            if fn_leq(fa, fb) {
                                cases += 1;
                                if !fn_leq(&images[a], &images[b]) && err.is_none() {
                                    err = Some(format!("Δ not monotone: {fa:?} ≤ {fb:?} on {ucb:?}"));
                                }
                            }
                        }
                    }
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    for cap in 0..=3 {
        let mut energies: Vec<Vec<i32>> = vec![bottom(1)];
        energies.extend((0..=cap).map(|c| vec![c]));
        for k in -4..=4 {
            for a in &energies {
                for b in &energies {
                    if a <= b {
                        cases += 1;
                        let (ea, eb) = (energy_plus(a, &[k], &[cap]), energy_plus(b, &[k], &[cap]));
                        if ea > eb {
                            return Err(format!("⊕ not monotone: {a:?} ≤ {b:?}, k={k}, C={cap}"));
                        }
                    }
                }
            }
        }
    }
    Ok(cases)
}

/// `Δ(G, σ) ≤ F ⇔ G ≤ maxpred(F, σ)` over every automaton with at most
/// three states.
fn galois() -> Result<usize, String> {
    let mut cases = 0;
    for n in 1..=3 {
        let mut err = None;
        for bound in 0..=2 {
            let values: Vec<Counter> = domain(bound).into_iter().map(encode).collect();
            let fs = functions(n, &values);
            let index = |f: &[Counter]| {
                f.iter()
                    .fold(0, |acc, v| acc * values.len() + values.iter().position(|x| x == v).unwrap())
            };
            let leq: Vec<Vec<bool>> = fs.iter().map(|a| fs.iter().map(|b| fn_leq(a, b)).collect()).collect();
            for_each_ucb(n, |ucb| {
                for letter in 0..2 {
                    let images: Vec<usize> = fs.iter().map(|g| index(&delta_succ(g, letter, ucb, bound))).collect();
                    let preds: Vec<usize> = fs.iter().map(|f| index(&max_predecessor(f, letter, ucb, bound))).collect();
                    for g in 0..fs.len() {
                        for f in 0..fs.len() {
                            if leq[images[g]][f] != leq[g][preds[f]] && err.is_none() {
                                err = Some(format!("K={bound}, G={:?}, F={:?} on {ucb:?}", fs[g], fs[f]));
                            }
                        }
                    }
                    cases += fs.len() * fs.len();
                }
            });
        }
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(cases)
}

/// The universe of Player O positions below the safe top, energies in
/// `0..=cap`.
fn universe(spec: &SafetyGameSpec) -> Vec<Element> {
    let top = spec.safe_top();
    let mut fs: Vec<Vec<Counter>> = vec![Vec::new()];
    for &ceiling in top.f.iter() {
        fs = fs
            .into_iter()
            .flat_map(|f| {
                (UNREACHED..=ceiling).map(move |v| {
                    let mut g = f.clone();
                    g.push(v);
                    g
                })
            })
            .collect();
    }
    let cap = spec.cap()[0];
    fs.iter()
        .flat_map(|f| (0..=cap).map(move |c| Element::new(f.clone(), vec![c])))
        .collect()
}

/// Union and meet of antichains represent union and intersection of the
/// closed sets.
fn closure_identities(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut cases = 0;
    let all: Vec<Element> = functions(2, &[-1, 0, 1])
        .into_iter()
        .flat_map(|f| (0..=2).map(move |c| Element::new(f.clone(), vec![c])))
        .collect();
    for _ in 0..2000 {
        let pick = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(0..5);
            Antichain::from_elements((0..n).map(|_| all[rng.gen_range(0..all.len())].clone()))
        };
        let (a, b) = (pick(rng), pick(rng));
        let (u, m) = (a.union(&b), a.meet(&b));
        for x in &all {
            cases += 1;
            if u.member(x) != (a.member(x) || b.member(x)) {
                return Err(format!("union: {x:?} with {a:?} and {b:?}"));
            }
            if m.member(x) != (a.member(x) && b.member(x)) {
                return Err(format!("meet: {x:?} with {a:?} and {b:?}"));
            }
        }
    }
    Ok(cases)
}

/// Small games: one formula per entry, weights on inputs only and on
/// outputs only.
fn small_games(rng: &mut ChaCha8Rng) -> Vec<(SafetyGameSpec, SafetyGameSpec)> {
    let part = SignalPartition::new(["r"], ["g"]).unwrap();
    let mut formulas: Vec<_> = ["G(r -> X g)", "G F g", "G(r -> F g)", "F G(r <-> g)", "G(g -> X !g)", "r U g"]
        .iter()
        .map(|s| parse_formula(s, &part).unwrap())
        .collect();
    while formulas.len() < 30 {
        formulas.push(random_formula(rng, 2, 3));
    }
    let mut out = Vec::new();
    for f in formulas {
        let ucb = Arc::new(ucb_for(&f, 10_000).unwrap());
        for bound in 0..=1 {
            for cap in 0..=2 {
                let spec = |side: usize, w: [i64; 2]| {
                    let mut wf = WeightFunction::zero(1, 2);
                    wf.set(side, true, vec![w[0]]).unwrap();
                    wf.set(side, false, vec![w[1]]).unwrap();
                    SafetyGameSpec::new(ucb.clone(), part.clone(), &wf, &[0], bound, vec![cap]).unwrap()
                };
                let (a, b) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
                let inputs = spec(0, [a, b]);
                if inputs.tracked_states() <= 2 {
                    out.push((inputs, spec(1, [a, b])));
                }
            }
        }
    }
    out
}

/// `Pre_σ(↓x) = ↓Ω(x, σ)` by enumeration, and the controllable
/// predecessors of closed sets agree with the explicit definition.
fn predecessors(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let games = small_games(rng);
    if games.len() < 20 {
        return Err(format!("only {} small games", games.len()));
    }
    let mut cases = 0;
    for (inputs, outputs) in &games {
        // Output weights are zero here, so `successor` is the Player I move.
        let u = universe(inputs);
        for x in &u {
            for i in 0..inputs.input_letters() {
                let omega = omega_input(inputs, x, i);
                for o in 0..inputs.output_letters() {
                    let rep = omega.iter().find(|(p, _)| *p == o).map(|(_, e)| e);
                    for y in &u {
                        cases += 1;
                        let pre = inputs.successor(y, o, i).is_some_and(|s| x.dominates(&s));
                        if pre != rep.is_some_and(|e| e.dominates(y)) {
                            return Err(format!("Ω input: x={x:?} y={y:?} o={o} i={i}"));
                        }
                    }
                }
            }
        }
        let u = universe(outputs);
        for x in &u {
            for o in 0..outputs.output_letters() {
                let rep = omega_output(outputs, x, o);
                for y in &u {
                    cases += 1;
                    let pre = fn_leq(&y.f, &x.f)
                        && outputs.after_output(&y.c, o).is_some_and(|c| c.iter().zip(x.c.iter()).all(|(a, b)| a >= b));
                    if pre != rep.as_ref().is_some_and(|e| e.dominates(y)) {
                        return Err(format!("Ω output: x={x:?} y={y:?} o={o}"));
                    }
                }
            }
        }

        for _ in 0..20 {
            let pick = |rng: &mut ChaCha8Rng, u: &[Element]| {
                let n = rng.gen_range(0..4);
                Antichain::from_elements((0..n).map(|_| u[rng.gen_range(0..u.len())].clone()))
            };
            let u = universe(inputs);
            let l = pick(rng, &u);
            let layers = cpre_i(inputs, &l);
            for y in &u {
                for (o, layer) in layers.iter().enumerate() {
                    cases += 1;
                    let all = (0..inputs.input_letters()).all(|i| inputs.successor(y, o, i).is_some_and(|s| l.member(&s)));
                    if all != layer.member(y) {
                        return Err(format!("cpre_i: y={y:?} o={o} L={l:?}"));
                    }
                }
            }
            let u = universe(outputs);
            let buckets: Vec<Antichain> = (0..outputs.output_letters()).map(|_| pick(rng, &u)).collect();
            let pre = cpre_o(outputs, &buckets);
            for y in &u {
                cases += 1;
                let some = (0..outputs.output_letters()).any(|o| {
                    outputs
                        .after_output(&y.c, o)
                        .is_some_and(|c| buckets[o].member(&Element::new(y.f.clone(), c)))
                });
                if some != pre.member(y) {
                    return Err(format!("cpre_o: y={y:?} L={buckets:?}"));
                }
            }
        }
    }
    Ok(cases)
}

/// The counting automaton with bound `K` avoids ⊤ on a lasso iff every run
/// of the automaton visits accepting states at most `K` times.
fn det_correct(ucb: &Ucb, word: &mpsynth::ltl::LassoWord, bound: Counter) -> bool {
    let mut f = initial_fn(ucb, bound);
    let mut pos = 0;
    let mut seen = std::collections::HashSet::new();
    let mut safe = !is_bad(&f);
    while safe && seen.insert((f.clone(), pos)) {
        f = delta_succ(&f, word.letter(pos), ucb, bound);
        pos = word.succ(pos);
        safe = !is_bad(&f);
    }
    let expected = ucb.max_visits(word).is_some_and(|v| v as Counter <= bound);
    safe == expected
}

fn determinization(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut automata: Vec<(Ucb, usize)> = Vec::new();
    for _ in 0..10 {
        let states = rng.gen_range(1..=4);
        automata.push((random_ucb(rng, states, 2), 2));
    }
    while automata.len() < 20 {
        let f = random_formula(rng, 2, 4);
        automata.push((ucb_for(&f, 10_000).unwrap(), 2));
    }
    let mut cases = 0;
    for (ucb, signals) in &automata {
        for _ in 0..1000 {
            let word = random_lasso(rng, *signals, 4, 4);
            for bound in 0..=3 {
                cases += 1;
                if !det_correct(ucb, &word, bound) {
                    return Err(format!("K={bound}, word {word:?}, automaton {ucb:?}"));
                }
            }
        }
    }
    Ok(cases)
}

pub fn run() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let parts = [
        ("counters", counters()?),
        ("monotonicity", monotonicity()?),
        ("galois", galois()?),
        ("closure", closure_identities(&mut rng)?),
        ("predecessors", predecessors(&mut rng)?),
        ("determinization", determinization(&mut rng)?),
    ];
    let shown: Vec<String> = parts.iter().map(|(n, c)| format!("{n} {c}")).collect();
    Ok(format!("cases checked: {}", shown.join(", ")))
}
