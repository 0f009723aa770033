//! LTL syntax over a partitioned set of atomic signals.
//!
//! Signals are addressed by a global index: inputs occupy `0..|I|` and
//! outputs `|I|..|I|+|O|`. A letter (a valuation of all signals) is a `u64`
//! bitmask over these indices.

mod lasso;
mod nnf;
mod parser;

use std::fmt;

use thiserror::Error;

pub use lasso::{eval_lasso, LassoWord};
pub use nnf::{negate_nnf, nnf};
pub use parser::{parse_formula, ParseError};

/// Valuation of all signals, one bit per global signal index.
pub type Letter = u64;

/// Largest number of signals a partition may hold.
pub const MAX_SIGNALS: usize = 63;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("the {0} signal set is empty")]
    Empty(&'static str),
    #[error("signal `{0}` is declared more than once")]
    Duplicate(String),
    #[error("`{0}` is not a valid signal name")]
    BadName(String),
    #[error("too many signals ({0}, at most {MAX_SIGNALS})")]
    TooMany(usize),
}

/// The split `P = I ⊎ O` of atomic signals between environment and controller.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignalPartition {
    inputs: Vec<String>,
    outputs: Vec<String>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_reserved(name: &str) -> bool {
    matches!(name, "X" | "U" | "R" | "F" | "G" | "true" | "false")
}

impl SignalPartition {
    pub fn new<S: Into<String>>(
        inputs: impl IntoIterator<Item = S>,
        outputs: impl IntoIterator<Item = S>,
    ) -> Result<Self, PartitionError> {
        let inputs: Vec<String> = inputs.into_iter().map(Into::into).collect();
        let outputs: Vec<String> = outputs.into_iter().map(Into::into).collect();
        if inputs.is_empty() {
            return Err(PartitionError::Empty("input"));
        }
        if outputs.is_empty() {
            return Err(PartitionError::Empty("output"));
        }
        let total = inputs.len() + outputs.len();
        if total > MAX_SIGNALS {
            return Err(PartitionError::TooMany(total));
        }
        let mut seen = std::collections::HashSet::new();
        for name in inputs.iter().chain(outputs.iter()) {
            if !is_identifier(name) || is_reserved(name) {
                return Err(PartitionError::BadName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(PartitionError::Duplicate(name.clone()));
            }
        }
        Ok(SignalPartition { inputs, outputs })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn num_signals(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    /// Number of input letters, `2^|I|`.
    pub fn input_letters(&self) -> u32 {
        1 << self.inputs.len()
    }

    /// Number of output letters, `2^|O|`.
    pub fn output_letters(&self) -> u32 {
        1 << self.outputs.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.inputs
            .iter()
            .chain(self.outputs.iter())
            .position(|s| s == name)
    }

    pub fn name(&self, index: usize) -> &str {
        if index < self.inputs.len() {
            &self.inputs[index]
        } else {
            &self.outputs[index - self.inputs.len()]
        }
    }

    pub fn is_input(&self, index: usize) -> bool {
        index < self.inputs.len()
    }

    /// Full letter `o ∪ i` from a local output code and a local input code.
    pub fn join(&self, output: u32, input: u32) -> Letter {
        (input as Letter) | ((output as Letter) << self.inputs.len())
    }

    pub fn input_part(&self, letter: Letter) -> u32 {
        (letter & ((1 << self.inputs.len()) - 1)) as u32
    }

    pub fn output_part(&self, letter: Letter) -> u32 {
        (letter >> self.inputs.len()) as u32 & (self.output_letters() - 1)
    }

    /// Renders a full letter as `{a,b}` in signal order.
    pub fn format_letter(&self, letter: Letter) -> String {
        let names: Vec<&str> = (0..self.num_signals())
            .filter(|&k| letter >> k & 1 == 1)
            .map(|k| self.name(k))
            .collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn format_input(&self, input: u32) -> String {
        self.format_letter(self.join(0, input))
    }

    pub fn format_output(&self, output: u32) -> String {
        self.format_letter(self.join(output, 0))
    }

    /// Parses `{a,b}` (or `{}`) back into a full letter.
    pub fn parse_letter(&self, text: &str) -> Option<Letter> {
        let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?;
        let mut letter = 0;
        for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            letter |= 1 << self.index_of(name)?;
        }
        Some(letter)
    }
}

/// LTL formula. Atoms carry the global signal index of a [`SignalPartition`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
}

impl Formula {
    pub fn atom(index: usize) -> Self {
        Formula::Atom(index)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    /// Conjunction of a non-empty list, left-nested.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | Eventually(a) | Globally(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Collects the global indices of all atoms, sorted and deduplicated.
    pub fn atoms(&self) -> Vec<usize> {
        fn walk(f: &Formula, out: &mut Vec<usize>) {
            if let Formula::Atom(p) = f {
                out.push(*p);
            }
            for c in f.children() {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// True when `not` only occurs directly above atoms and no `->`/`<->` remain.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Not(a) => matches!(**a, Formula::Atom(_)),
            Formula::Implies(..) | Formula::Iff(..) => false,
            other => other.children().iter().all(|c| c.is_nnf()),
        }
    }

    pub fn display<'a>(&'a self, part: &'a SignalPartition) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, part }
    }
}

/// Prints a formula in the concrete grammar accepted by [`parse_formula`].
///
/// Every binary operator is parenthesized, so printing and re-parsing yields
/// the same tree regardless of precedence.
pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    part: &'a SignalPartition,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self.formula, self.part, f)
    }
}

fn write_formula(
    formula: &Formula,
    part: &SignalPartition,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    use Formula::*;
    let binary = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula| {
        write!(f, "(")?;
        write_formula(a, part, f)?;
        write!(f, " {op} ")?;
        write_formula(b, part, f)?;
        write!(f, ")")
    };
    let unary = |f: &mut fmt::Formatter<'_>, op: &str, a: &Formula| {
        write!(f, "{op}")?;
        write_formula(a, part, f)
    };
    match formula {
        True => write!(f, "true"),
        False => write!(f, "false"),
        Atom(p) => write!(f, "{}", part.name(*p)),
        Not(a) => unary(f, "!", a),
        Next(a) => unary(f, "X ", a),
        Eventually(a) => unary(f, "F ", a),
        Globally(a) => unary(f, "G ", a),
        And(a, b) => binary(f, a, "&&", b),
        Or(a, b) => binary(f, a, "||", b),
        Implies(a, b) => binary(f, a, "->", b),
        Iff(a, b) => binary(f, a, "<->", b),
        Until(a, b) => binary(f, a, "U", b),
        Release(a, b) => binary(f, a, "R", b),
    }
}
