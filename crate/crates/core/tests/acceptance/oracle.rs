//! Backward, forward and explicit solvers on random small specifications.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::common::random_formula;
use mpsynth::automata::WeightFunction;
use mpsynth::game::{solve_backward, solve_explicit, solve_forward, Limits};
use mpsynth::ltl::SignalPartition;
use mpsynth::synthesis::{extract_machine, Mode, Problem, Threshold};

const NAMES: [&str; 3] = ["a", "b", "c"];

struct Instance {
    problem: Problem,
    k: i32,
    c: Vec<i32>,
    text: String,
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let signals = rng.gen_range(2..=3);
    let inputs = rng.gen_range(1..signals);
    let part = SignalPartition::new(NAMES[..inputs].to_vec(), NAMES[inputs..signals].to_vec()).unwrap();
    let depth = rng.gen_range(1..=4);
    let f = random_formula(rng, signals, depth);
    let dim = rng.gen_range(1..=2);
    let mut w = WeightFunction::zero(dim, signals);
    for s in 0..signals {
        for positive in [true, false] {
            if rng.gen_bool(0.5) {
                w.set(s, positive, (0..dim).map(|_| rng.gen_range(-2..=2)).collect()).unwrap();
            }
        }
    }
    let mode = if rng.gen_bool(0.5) {
        Mode::Energy
    } else {
        let choices = ["-1", "-1/2", "0", "1/2"];
        let nu: Vec<&str> = (0..dim).map(|_| choices[rng.gen_range(0..choices.len())]).collect();
        Mode::MeanPayoff(nu.join(",").parse::<Threshold>().unwrap())
    };
    let k = rng.gen_range(0..=2);
    let c: Vec<i32> = (0..dim).map(|_| rng.gen_range(0..=3)).collect();
    let text = format!("{} with {mode:?}, K={k}, C={c:?}", f.display(&part));
    let problem = Problem::new(f, part, w, mode, 10_000).unwrap();
    Instance { problem, k, c, text }
}

pub fn run(count: usize) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let limits = Limits {
        max_nodes: 2_000_000,
        ..Limits::default()
    };
    let (mut realizable, mut machines) = (0, 0);
    for n in 0..count {
        let inst = random_instance(&mut rng);
        let spec = inst.problem.game(inst.k, &inst.c);
        let err = |e: String| format!("instance {n} ({}): {e}", inst.text);
        let back = solve_backward(&spec, &limits).map_err(|e| err(e.to_string()))?;
        let fwd = solve_forward(&spec, &limits).map_err(|e| err(e.to_string()))?;
        let exp = solve_explicit(&spec, &limits).map_err(|e| err(e.to_string()))?;
        if back.realizable != fwd.realizable || back.realizable != exp.realizable {
            return Err(err(format!(
                "verdicts differ: backward {}, forward {}, explicit {}",
                back.realizable, fwd.realizable, exp.realizable
            )));
        }
        if back.realizable {
            realizable += 1;
            for (name, witness) in [("backward", &back.witness), ("forward", &fwd.witness)] {
                let m = extract_machine(witness, &spec).map_err(|e| err(format!("{name} extraction: {e}")))?;
                inst.problem
                    .verify(&m, &inst.c)
                    .map_err(|e| err(format!("{name} machine: {e}")))?;
                machines += 1;
            }
        }
    }
    Ok(format!("{count} instances, {realizable} realizable, {machines} machines verified"))
}
