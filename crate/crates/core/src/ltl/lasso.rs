use super::{Formula, Letter};

/// Ultimately periodic word `prefix · cycle^ω`. The cycle must be non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be non-empty");
        LassoWord { prefix, cycle }
    }

    /// Number of distinct positions, `|prefix| + |cycle|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter(&self, pos: usize) -> Letter {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.cycle[(pos - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor of a position in the folded representation.
    pub fn succ(&self, pos: usize) -> usize {
        if pos + 1 == self.len() {
            self.prefix.len()
        } else {
            pos + 1
        }
    }
}

/// Evaluates `f` on the lasso at position 0.
pub fn eval_lasso(f: &Formula, word: &LassoWord) -> bool {
    eval_all(f, word)[0]
}

fn eval_all(f: &Formula, w: &LassoWord) -> Vec<bool> {
    use Formula::*;
    let n = w.len();
    match f {
        True => vec![true; n],
        False => vec![false; n],
        Atom(p) => (0..n).map(|i| w.letter(i) >> p & 1 == 1).collect(),
        Not(a) => eval_all(a, w).into_iter().map(|v| !v).collect(),
        And(a, b) => zip(eval_all(a, w), eval_all(b, w), |x, y| x && y),
        Or(a, b) => zip(eval_all(a, w), eval_all(b, w), |x, y| x || y),
        Implies(a, b) => zip(eval_all(a, w), eval_all(b, w), |x, y| !x || y),
        Iff(a, b) => zip(eval_all(a, w), eval_all(b, w), |x, y| x == y),
        Next(a) => {
            let va = eval_all(a, w);
            (0..n).map(|i| va[w.succ(i)]).collect()
        }
        Until(a, b) => until(&eval_all(a, w), &eval_all(b, w), w),
        Release(a, b) => release(&eval_all(a, w), &eval_all(b, w), w),
        Eventually(a) => until(&vec![true; n], &eval_all(a, w), w),
        Globally(a) => release(&vec![false; n], &eval_all(a, w), w),
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Least fixpoint of `v = b || (a && X v)`.
fn until(a: &[bool], b: &[bool], w: &LassoWord) -> Vec<bool> {
    let mut v = vec![false; w.len()];
    fixpoint(&mut v, |v, i| b[i] || (a[i] && v[w.succ(i)]));
    v
}

/// Greatest fixpoint of `v = b && (a || X v)`.
fn release(a: &[bool], b: &[bool], w: &LassoWord) -> Vec<bool> {
    let mut v = vec![true; w.len()];
    fixpoint(&mut v, |v, i| b[i] && (a[i] || v[w.succ(i)]));
    v
}

fn fixpoint(v: &mut [bool], step: impl Fn(&[bool], usize) -> bool) {
    loop {
        let mut changed = false;
        for i in (0..v.len()).rev() {
            let next = step(v, i);
            if next != v[i] {
                v[i] = next;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}
