//! Moore machine extraction from a winning antichain.
//!
//! Memory states are witness elements. From `(F, c)` the machine plays the
//! first output whose successors under every input are all dominated by
//! witness elements, and moves to the first such element. The real game
//! position is always below the memory element, so by monotonicity the
//! machine keeps winning.

use rustc_hash::FxHashMap;
use thiserror::Error;

use super::MooreMachine;
use crate::antichain::{Antichain, Element};
use crate::game::SafetyGameSpec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("the initial position is not covered by the witness")]
    InitialNotWinning,
    #[error("no output keeps memory state {0} inside the witness")]
    NoSafeOutput(usize),
}

pub fn extract_machine(witness: &Antichain, spec: &SafetyGameSpec) -> Result<MooreMachine, ExtractError> {
    let elements = witness.sorted();
    let first_dominating = |x: &Element| elements.iter().position(|e| e.dominates(x));
    let init = spec.initial_element().ok_or(ExtractError::InitialNotWinning)?;
    let start = first_dominating(&init).ok_or(ExtractError::InitialNotWinning)?;

    let mut memory: FxHashMap<usize, usize> = FxHashMap::default();
    let mut order = vec![start];
    memory.insert(start, 0);
    let mut moves = Vec::new();
    let mut targets: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < order.len() {
        let x = &elements[order[next]];
        let choice = (0..spec.output_letters()).find_map(|o| {
            let succ: Option<Vec<usize>> = (0..spec.input_letters())
                .map(|i| spec.successor(x, o, i).and_then(|y| first_dominating(&y)))
                .collect();
            succ.map(|s| (o, s))
        });
        let (o, succ) = choice.ok_or(ExtractError::NoSafeOutput(next))?;
        let row = succ
            .into_iter()
            .map(|e| {
                let len = order.len();
                *memory.entry(e).or_insert_with(|| {
                    order.push(e);
                    len
                })
            })
            .collect();
        moves.push(o as u32);
        targets.push(row);
        next += 1;
    }
    Ok(MooreMachine::new(spec.partition(), 0, moves, targets))
}
