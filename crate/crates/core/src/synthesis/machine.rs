//! Moore machines: the controllers produced by synthesis.
//!
//! Text format, one item per line (`#` starts a comment):
//!
//! ```text
//! inputs r1 r2
//! outputs g1 w1 g2 w2
//! states 2
//! initial 0
//! state 0 out {g2,w1}
//!   {} -> 0
//!   {r1} -> 1
//!   {r2} -> 0
//!   {r1,r2} -> 1
//! state 1 out {g1,w2}
//!   ...
//! ```
//!
//! Every state lists its output letter and exactly one successor per input
//! letter. Letters are written as sets of signal names.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ltl::SignalPartition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreMachine {
    inputs: Vec<String>,
    outputs: Vec<String>,
    initial: usize,
    /// Output code per state.
    moves: Vec<u32>,
    /// Successor per state and input code.
    update: Vec<Vec<usize>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct MachineParseError {
    pub line: usize,
    pub message: String,
}

impl MooreMachine {
    /// Panics unless `update` is total and every index is in range.
    pub fn new(part: &SignalPartition, initial: usize, moves: Vec<u32>, update: Vec<Vec<usize>>) -> Self {
        let n = moves.len();
        assert!(initial < n, "initial state out of range");
        assert_eq!(update.len(), n, "one update row per state");
        for row in &update {
            assert_eq!(row.len(), part.input_letters() as usize, "update must be total");
            assert!(row.iter().all(|&m| m < n), "successor out of range");
        }
        assert!(moves.iter().all(|&o| o < part.output_letters()));
        MooreMachine {
            inputs: part.inputs().to_vec(),
            outputs: part.outputs().to_vec(),
            initial,
            moves,
            update,
        }
    }

    pub fn num_states(&self) -> usize {
        self.moves.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// `α_N(m)` as an output code.
    pub fn next_move(&self, m: usize) -> u32 {
        self.moves[m]
    }

    /// `α_U(m, i)`.
    pub fn update(&self, m: usize, input: u32) -> usize {
        self.update[m][input as usize]
    }

    pub fn partition(&self) -> SignalPartition {
        SignalPartition::new(self.inputs.clone(), self.outputs.clone()).expect("machine signals were validated")
    }

    /// True when the machine talks about exactly the signals of `part`.
    pub fn matches(&self, part: &SignalPartition) -> bool {
        self.inputs == part.inputs() && self.outputs == part.outputs()
    }

    /// Output codes produced in response to an input sequence; one more
    /// output than inputs.
    pub fn run(&self, inputs: &[u32]) -> Vec<u32> {
        let mut m = self.initial;
        let mut out = vec![self.moves[m]];
        for &i in inputs {
            m = self.update(m, i);
            out.push(self.moves[m]);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let part = self.partition();
        let mut s = String::new();
        let _ = writeln!(s, "inputs {}", self.inputs.join(" "));
        let _ = writeln!(s, "outputs {}", self.outputs.join(" "));
        let _ = writeln!(s, "states {}", self.num_states());
        let _ = writeln!(s, "initial {}", self.initial);
        for (m, row) in self.update.iter().enumerate() {
            let _ = writeln!(s, "state {m} out {}", part.format_output(self.moves[m]));
            for (i, &t) in row.iter().enumerate() {
                let _ = writeln!(s, "  {} -> {t}", part.format_input(i as u32));
            }
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let part = self.partition();
        let mut s = String::from("digraph moore {\n  rankdir=LR;\n  init [shape=point];\n");
        let _ = writeln!(s, "  init -> m{};", self.initial);
        for (m, row) in self.update.iter().enumerate() {
            let _ = writeln!(
                s,
                "  m{m} [shape=box, label=\"m{m}\\n{}\"];",
                part.format_output(self.moves[m])
            );
            for (i, &t) in row.iter().enumerate() {
                let _ = writeln!(s, "  m{m} -> m{t} [label=\"{}\"];", part.format_input(i as u32));
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn parse_text(text: &str) -> Result<Self, MachineParseError> {
        let err = |line: usize, message: String| MachineParseError { line, message };
        let mut inputs: Option<Vec<String>> = None;
        let mut outputs: Option<Vec<String>> = None;
        let mut part: Option<SignalPartition> = None;
        let mut count: Option<usize> = None;
        let mut initial: Option<usize> = None;
        let mut moves: Vec<Option<u32>> = Vec::new();
        let mut update: Vec<Vec<Option<usize>>> = Vec::new();
        let mut current: Option<usize> = None;

        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            let rest = rest.trim();
            match key {
                "inputs" => inputs = Some(rest.split_whitespace().map(String::from).collect()),
                "outputs" => outputs = Some(rest.split_whitespace().map(String::from).collect()),
                "states" | "initial" => {
                    let v: usize = rest
                        .parse()
                        .map_err(|_| err(line, format!("expected a number after `{key}`")))?;
                    if key == "states" {
                        count = Some(v);
                    } else {
                        initial = Some(v);
                    }
                }
                "state" => {
                    let p = ensure_ready(line, &mut part, &inputs, &outputs)?;
                    let n = count.ok_or_else(|| err(line, "`states` must come before `state`".into()))?;
                    if moves.is_empty() {
                        moves = vec![None; n];
                        update = vec![vec![None; p.input_letters() as usize]; n];
                    }
                    let (id, out) = rest
                        .split_once(" out ")
                        .ok_or_else(|| err(line, "expected `state <n> out <letter>`".into()))?;
                    let id: usize = id
                        .trim()
                        .parse()
                        .map_err(|_| err(line, format!("bad state number `{}`", id.trim())))?;
                    if id >= n {
                        return Err(err(line, format!("state {id} out of range")));
                    }
                    if moves[id].is_some() {
                        return Err(err(line, format!("state {id} defined twice")));
                    }
                    let letter = p
                        .parse_letter(out)
                        .ok_or_else(|| err(line, format!("bad output letter `{}`", out.trim())))?;
                    if p.input_part(letter) != 0 {
                        return Err(err(line, "output letter mentions an input signal".into()));
                    }
                    moves[id] = Some(p.output_part(letter));
                    current = Some(id);
                }
                _ if key.starts_with('{') => {
                    let p = part.as_ref().ok_or_else(|| err(line, "transition before any state".into()))?;
                    let m = current.ok_or_else(|| err(line, "transition before any state".into()))?;
                    let (letter, target) = body
                        .split_once("->")
                        .ok_or_else(|| err(line, "expected `<letter> -> <state>`".into()))?;
                    let letter = p
                        .parse_letter(letter)
                        .ok_or_else(|| err(line, format!("bad input letter `{}`", letter.trim())))?;
                    if p.output_part(letter) != 0 {
                        return Err(err(line, "input letter mentions an output signal".into()));
                    }
                    let target: usize = target
                        .trim()
                        .parse()
                        .map_err(|_| err(line, format!("bad target `{}`", target.trim())))?;
                    if target >= moves.len() {
                        return Err(err(line, format!("target {target} out of range")));
                    }
                    let slot = &mut update[m][p.input_part(letter) as usize];
                    if slot.is_some() {
                        return Err(err(line, "input letter listed twice".into()));
                    }
                    *slot = Some(target);
                }
                _ => return Err(err(line, format!("unknown directive `{key}`"))),
            }
        }

        let end = text.lines().count().max(1);
        let part = ensure_ready(end, &mut part, &inputs, &outputs)?.clone();
        let initial = initial.ok_or_else(|| err(end, "missing `initial`".into()))?;
        let n = count.ok_or_else(|| err(end, "missing `states`".into()))?;
        if n == 0 || moves.len() != n {
            return Err(err(end, "no states defined".into()));
        }
        if initial >= n {
            return Err(err(end, format!("initial state {initial} out of range")));
        }
        let mut final_moves = Vec::with_capacity(n);
        let mut final_update = Vec::with_capacity(n);
        for (m, (mv, row)) in moves.into_iter().zip(update).enumerate() {
            final_moves.push(mv.ok_or_else(|| err(end, format!("state {m} is not defined")))?);
            let row: Option<Vec<usize>> = row.into_iter().collect();
            final_update.push(row.ok_or_else(|| err(end, format!("state {m} misses some input letters")))?);
        }
        Ok(MooreMachine::new(&part, initial, final_moves, final_update))
    }
}

fn ensure_ready<'a>(
    line: usize,
    part: &'a mut Option<SignalPartition>,
    inputs: &Option<Vec<String>>,
    outputs: &Option<Vec<String>>,
) -> Result<&'a SignalPartition, MachineParseError> {
    if part.is_none() {
        let (Some(i), Some(o)) = (inputs, outputs) else {
            return Err(MachineParseError {
                line,
                message: "`inputs` and `outputs` must come first".into(),
            });
        };
        *part = Some(SignalPartition::new(i.clone(), o.clone()).map_err(|e| MachineParseError {
            line,
            message: e.to_string(),
        })?);
    }
    Ok(part.as_ref().unwrap())
}
