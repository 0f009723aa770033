use super::Formula;

/// Negation normal form: `->` and `<->` are expanded and negations are pushed
/// down to atoms. `F` and `G` are kept as operators.
pub fn nnf(f: &Formula) -> Formula {
    push(f, false)
}

/// `nnf(!f)`.
pub fn negate_nnf(f: &Formula) -> Formula {
    push(f, true)
}

fn push(f: &Formula, neg: bool) -> Formula {
    use Formula::*;
    match (f, neg) {
        (True, false) | (False, true) => True,
        (False, false) | (True, true) => False,
        (Atom(p), false) => Atom(*p),
        (Atom(p), true) => Formula::not(Atom(*p)),
        (Not(a), _) => push(a, !neg),
        (And(a, b), false) | (Or(a, b), true) => Formula::and(push(a, neg), push(b, neg)),
        (Or(a, b), false) | (And(a, b), true) => Formula::or(push(a, neg), push(b, neg)),
        (Implies(a, b), false) => Formula::or(push(a, true), push(b, false)),
        (Implies(a, b), true) => Formula::and(push(a, false), push(b, true)),
        (Iff(a, b), false) => Formula::or(
            Formula::and(push(a, false), push(b, false)),
            Formula::and(push(a, true), push(b, true)),
        ),
        (Iff(a, b), true) => Formula::or(
            Formula::and(push(a, false), push(b, true)),
            Formula::and(push(a, true), push(b, false)),
        ),
        (Next(a), _) => Formula::next(push(a, neg)),
        (Until(a, b), false) | (Release(a, b), true) => Formula::until(push(a, neg), push(b, neg)),
        (Release(a, b), false) | (Until(a, b), true) => {
            Formula::release(push(a, neg), push(b, neg))
        }
        (Eventually(a), false) | (Globally(a), true) => Formula::eventually(push(a, neg)),
        (Globally(a), false) | (Eventually(a), true) => Formula::globally(push(a, neg)),
    }
}
