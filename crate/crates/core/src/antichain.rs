//! Antichains of `(counting function, energy)` pairs under the order
//! `(F', c') ⪯ (F, c)` iff `F' ≤ F` and `c' ≥ c`. An antichain stands for its
//! downward closure.

use std::fmt;

use crate::counting::Counter;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub f: Box<[Counter]>,
    pub c: Box<[i32]>,
}

impl Element {
    pub fn new(f: impl Into<Box<[Counter]>>, c: impl Into<Box<[i32]>>) -> Self {
        Element {
            f: f.into(),
            c: c.into(),
        }
    }

    /// `other ⪯ self`.
    pub fn dominates(&self, other: &Element) -> bool {
        other.f.iter().zip(self.f.iter()).all(|(a, b)| a <= b)
            && other.c.iter().zip(self.c.iter()).all(|(a, b)| a >= b)
    }

    /// Greatest lower bound: componentwise min on counters, max on energies.
    pub fn meet(&self, other: &Element) -> Element {
        Element {
            f: self.f.iter().zip(other.f.iter()).map(|(a, b)| *a.min(b)).collect(),
            c: self.c.iter().zip(other.c.iter()).map(|(a, b)| *a.max(b)).collect(),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counters: Vec<String> = self
            .f
            .iter()
            .map(|&k| {
                if k == crate::counting::TOP {
                    "T".to_string()
                } else {
                    k.to_string()
                }
            })
            .collect();
        write!(f, "([{}], {:?})", counters.join(","), self.c)
    }
}

/// `other ⪯ a`; free-function form of [`Element::dominates`].
pub fn dominates(a: &Element, other: &Element) -> bool {
    a.dominates(other)
}

#[derive(Clone, Default, PartialEq, Eq)]
pub struct Antichain {
    elements: Vec<Element>,
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements.iter()).finish()
    }
}

impl Antichain {
    pub fn new() -> Self {
        Antichain::default()
    }

    pub fn singleton(x: Element) -> Self {
        Antichain { elements: vec![x] }
    }

    /// Maximal elements of an arbitrary collection.
    pub fn from_elements(items: impl IntoIterator<Item = Element>) -> Self {
        let mut out = Antichain::new();
        for x in items {
            out.insert(x);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elements.iter()
    }

    /// `x ∈ ↓self`.
    pub fn member(&self, x: &Element) -> bool {
        self.elements.iter().any(|e| e.dominates(x))
    }

    /// First element dominating `x`.
    pub fn find_dominating(&self, x: &Element) -> Option<&Element> {
        self.elements.iter().find(|e| e.dominates(x))
    }

    /// `⌈self ∪ {x}⌉`. Returns false when `x` was already covered.
    pub fn insert(&mut self, x: Element) -> bool {
        if self.member(&x) {
            return false;
        }
        self.elements.retain(|e| !x.dominates(e));
        self.elements.push(x);
        true
    }

    /// `⌈self ∪ other⌉`.
    pub fn union(&self, other: &Antichain) -> Antichain {
        let mut out = self.clone();
        for x in &other.elements {
            out.insert(x.clone());
        }
        out
    }

    /// `⌈{x ⊓ y | x ∈ self, y ∈ other}⌉`, representing `↓self ∩ ↓other`.
    ///
    /// An element already below the other antichain survives the meet as
    /// itself and covers every other meet it takes part in, so only the
    /// remaining pairs are combined.
    pub fn meet(&self, other: &Antichain) -> Antichain {
        let mut out = Antichain::new();
        let mut rest_a = Vec::new();
        for x in &self.elements {
            if other.member(x) {
                out.insert(x.clone());
            } else {
                rest_a.push(x);
            }
        }
        let mut rest_b = Vec::new();
        for y in &other.elements {
            if self.member(y) {
                out.insert(y.clone());
            } else {
                rest_b.push(y);
            }
        }
        for x in &rest_a {
            for y in &rest_b {
                let m = x.meet(y);
                if !out.member(&m) {
                    out.insert(m);
                }
            }
        }
        out
    }

    /// Elements sorted into a canonical order.
    pub fn sorted(&self) -> Vec<Element> {
        let mut v = self.elements.clone();
        v.sort();
        v
    }

    /// True when both antichains denote the same closed set.
    pub fn same_set(&self, other: &Antichain) -> bool {
        self.len() == other.len() && self.sorted() == other.sorted()
    }
}

pub fn insert(l: &Antichain, x: Element) -> Antichain {
    let mut out = l.clone();
    out.insert(x);
    out
}

pub fn union(a: &Antichain, b: &Antichain) -> Antichain {
    a.union(b)
}

pub fn meet_intersection(a: &Antichain, b: &Antichain) -> Antichain {
    a.meet(b)
}

pub fn member(l: &Antichain, x: &Element) -> bool {
    l.member(x)
}
