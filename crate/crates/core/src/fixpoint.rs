//! Antichains, minors and the Kleene driver shared by the inclusion checks.

use crate::{Error, Result};

/// Default bound on Kleene iterations.
pub const DEFAULT_ITERATION_CAP: usize = 1 << 20;

/// Resource limits for fixpoint computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub iteration_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { iteration_cap: DEFAULT_ITERATION_CAP }
    }
}

/// A set of pairwise incomparable keys, each carrying a tag (typically a
/// representative word). Comparisons only look at keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antichain<K, T = ()> {
    items: Vec<(K, T)>,
}

impl<K, T> Default for Antichain<K, T> {
    fn default() -> Self {
        Antichain { items: Vec::new() }
    }
}

impl<K, T> Antichain<K, T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &T)> {
        self.items.iter().map(|(k, t)| (k, t))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.items.iter().map(|(k, _)| k)
    }

    pub fn tags(&self) -> impl Iterator<Item = &T> {
        self.items.iter().map(|(_, t)| t)
    }

    pub fn into_vec(self) -> Vec<(K, T)> {
        self.items
    }

    /// Inserts `key` unless some element is already below it; evicts every
    /// element above it. Among equivalent keys the earlier one stays.
    /// Returns whether the key was added.
    pub fn insert(&mut self, key: K, tag: T, leq: impl Fn(&K, &K) -> bool) -> bool {
        if self.items.iter().any(|(x, _)| leq(x, &key)) {
            return false;
        }
        self.items.retain(|(x, _)| !leq(&key, x));
        self.items.push((key, tag));
        true
    }

    /// Whether some element lies below `key`.
    pub fn covers(&self, key: &K, leq: impl Fn(&K, &K) -> bool) -> bool {
        self.items.iter().any(|(x, _)| leq(x, key))
    }
}

/// Minor of a list: the minimal elements, first occurrence winning among equivalents.
pub fn minor<K, T>(items: impl IntoIterator<Item = (K, T)>, leq: impl Fn(&K, &K) -> bool) -> Antichain<K, T> {
    let mut ac = Antichain::new();
    for (k, t) in items {
        ac.insert(k, t, &leq);
    }
    ac
}

/// `X ⊑ Y` iff every element of `X` has some element of `Y` below it.
pub fn ac_below<K, T, U>(x: &Antichain<K, T>, y: &Antichain<K, U>, leq: impl Fn(&K, &K) -> bool) -> bool {
    keys_below(x.keys(), y, leq)
}

/// `⊑` for an arbitrary key collection on the left.
pub fn keys_below<'a, K: 'a, U>(
    x: impl IntoIterator<Item = &'a K>,
    y: &Antichain<K, U>,
    leq: impl Fn(&K, &K) -> bool,
) -> bool {
    x.into_iter().all(|a| y.keys().any(|b| leq(b, a)))
}

/// Componentwise mutual `⊑` between two vectors of antichains.
pub fn vectors_equivalent<K, T>(a: &[Antichain<K, T>], b: &[Antichain<K, T>], leq: impl Fn(&K, &K) -> bool) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| ac_below(x, y, &leq) && ac_below(y, x, &leq))
}

/// Outcome of a Kleene iteration.
#[derive(Clone, Debug)]
pub struct Fixpoint<X> {
    pub value: X,
    /// Number of `step` applications performed.
    pub iterations: usize,
}

/// Iterates `step` from `bottom` and returns the first iterate `x` with
/// `abs_eq(step(x), x)`.
pub fn kleene<X>(
    mut step: impl FnMut(&X) -> X,
    bottom: X,
    mut abs_eq: impl FnMut(&X, &X) -> bool,
    limits: &Limits,
) -> Result<Fixpoint<X>> {
    let mut x = bottom;
    let mut iterations = 0;
    loop {
        if iterations >= limits.iteration_cap {
            return Err(Error::IterationCap { cap: limits.iteration_cap });
        }
        let next = step(&x);
        iterations += 1;
        if abs_eq(&next, &x) {
            return Ok(Fixpoint { value: x, iterations });
        }
        x = next;
    }
}
