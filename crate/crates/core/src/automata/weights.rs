use thiserror::Error;

use crate::ltl::{Letter, SignalPartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Input,
    Output,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("letter mentions `{0}`, which is not an {1} signal")]
    WrongSide(String, &'static str),
    #[error("weight vector has length {got}, expected {expected}")]
    Arity { got: usize, expected: usize },
    #[error("signal index {0} is out of range")]
    UnknownSignal(usize),
}

/// Integer vector weights on literals. Unmentioned literals weigh zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    dim: usize,
    /// Weight of `p`, indexed by global signal index.
    pos: Vec<Vec<i64>>,
    /// Weight of `!p`.
    neg: Vec<Vec<i64>>,
}

impl WeightFunction {
    pub fn zero(dim: usize, signals: usize) -> Self {
        assert!(dim > 0, "weight dimension must be positive");
        WeightFunction {
            dim,
            pos: vec![vec![0; dim]; signals],
            neg: vec![vec![0; dim]; signals],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_signals(&self) -> usize {
        self.pos.len()
    }

    /// Sets the weight of literal `signal` (or `!signal` when `positive` is false).
    pub fn set(&mut self, signal: usize, positive: bool, weight: Vec<i64>) -> Result<(), WeightError> {
        if weight.len() != self.dim {
            return Err(WeightError::Arity {
                got: weight.len(),
                expected: self.dim,
            });
        }
        let table = if positive { &mut self.pos } else { &mut self.neg };
        let slot = table
            .get_mut(signal)
            .ok_or(WeightError::UnknownSignal(signal))?;
        *slot = weight;
        Ok(())
    }

    pub fn literal(&self, signal: usize, positive: bool) -> &[i64] {
        if positive {
            &self.pos[signal]
        } else {
            &self.neg[signal]
        }
    }

    /// Applies `f` to every literal weight vector.
    pub fn map(&self, mut f: impl FnMut(&[i64]) -> Vec<i64>) -> WeightFunction {
        WeightFunction {
            dim: self.dim,
            pos: self.pos.iter().map(|w| f(w)).collect(),
            neg: self.neg.iter().map(|w| f(w)).collect(),
        }
    }

    /// Weight of a one-sided letter: the sum over that side's signals of the
    /// literal each signal takes in `letter`.
    pub fn letter_weight(
        &self,
        part: &SignalPartition,
        side: Side,
        letter: Letter,
    ) -> Result<Vec<i64>, WeightError> {
        let range = match side {
            Side::Input => 0..part.num_inputs(),
            Side::Output => part.num_inputs()..part.num_signals(),
        };
        for k in 0..part.num_signals() {
            if letter >> k & 1 == 1 && !range.contains(&k) {
                let expected = match side {
                    Side::Input => "input",
                    Side::Output => "output",
                };
                return Err(WeightError::WrongSide(part.name(k).to_string(), expected));
            }
        }
        let mut total = vec![0i64; self.dim];
        for k in range {
            let w = self.literal(k, letter >> k & 1 == 1);
            for (t, x) in total.iter_mut().zip(w) {
                *t += x;
            }
        }
        Ok(total)
    }

    /// `w(o)` for a local output code.
    pub fn output_weight(&self, part: &SignalPartition, output: u32) -> Vec<i64> {
        self.letter_weight(part, Side::Output, part.join(output, 0))
            .expect("output code is one-sided")
    }

    /// `w(i)` for a local input code.
    pub fn input_weight(&self, part: &SignalPartition, input: u32) -> Vec<i64> {
        self.letter_weight(part, Side::Input, part.join(0, input))
            .expect("input code is one-sided")
    }
}
