//! Finite nondeterministic dynamical systems and their morphism calculus.
//!
//! A [`FiniteSystem`] is a finite discrete state space together with a
//! transition relation. On finite discrete spaces every relation is closed
//! valued and upper-hemicontinuous, so the topological side conditions are
//! vacuous and all checks reduce to finite enumeration.
//!
//! State identifiers are strings kept in lexicographic order; every index in
//! this module refers to that order, which makes enumerations and witness
//! selection deterministic.

mod enumerate;
mod multimap;

pub use enumerate::{canonical_code, nonisomorphic_systems, surjections, systems_on};
pub use multimap::{
    classify_multimap, compose, embedding_to_factor, factor_to_embedding, is_ef_pair,
    is_isomorphism, pushforward, Clause, EfCheck, EfPair, EfViolation, MorphismClass, Multimap,
    Violation,
};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Name of the single state of the initial object.
pub const INITIAL_STATE: &str = "*";

/// A finite dynamical system `(X, T)` with `T` a relation on `X`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteSystem {
    states: Vec<String>,
    trans: BTreeSet<(usize, usize)>,
    succ: Vec<Vec<usize>>,
}

impl FiniteSystem {
    /// Builds a system from state names and named transitions.
    pub fn new<S, I, A, B>(states: I, edges: impl IntoIterator<Item = (A, B)>) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = S>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut names: Vec<String> = states.into_iter().map(Into::into).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateState(w[0].clone()));
        }
        let lookup = |n: &str| {
            names
                .binary_search_by(|s| s.as_str().cmp(n))
                .map_err(|_| Error::UnknownState(n.to_string()))
        };
        let mut trans = BTreeSet::new();
        for (a, b) in edges {
            trans.insert((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Ok(Self::assemble(names, trans))
    }

    /// Builds a system from (possibly unsorted) names and index pairs into
    /// that list. Indices are remapped to the sorted order.
    pub fn from_indexed(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = names.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut rank = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let sorted: Vec<String> = order.iter().map(|&i| names[i].clone()).collect();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateState(w[0].clone()));
        }
        let mut trans = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::EndpointOutOfRange(a, b));
            }
            trans.insert((rank[a], rank[b]));
        }
        Ok(Self::assemble(sorted, trans))
    }

    fn assemble(states: Vec<String>, trans: BTreeSet<(usize, usize)>) -> Self {
        let mut succ = vec![Vec::new(); states.len()];
        for &(a, b) in &trans {
            succ[a].push(b);
        }
        Self { states, trans, succ }
    }

    /// The initial object: one state `*` with a self-loop.
    pub fn self_loop() -> Self {
        Self::assemble(vec![INITIAL_STATE.to_string()], BTreeSet::from([(0, 0)]))
    }

    /// Cycle through the given states in the given order.
    pub fn cycle(names: &[&str]) -> Result<Self> {
        let n = names.len();
        let edges = (0..n).map(|i| (names[i], names[(i + 1) % n]));
        Self::new(names.iter().copied(), edges)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn name(&self, i: usize) -> &str {
        &self.states[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.states.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    pub fn trans(&self) -> &BTreeSet<(usize, usize)> {
        &self.trans
    }

    /// Successors of `x`, ascending.
    pub fn successors(&self, x: usize) -> &[usize] {
        &self.succ[x]
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.succ[x].binary_search(&y).is_ok()
    }

    pub fn is_nontrivial(&self) -> bool {
        !self.trans.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.succ.iter().all(|s| !s.is_empty())
    }

    pub fn is_deterministic(&self) -> bool {
        self.succ.iter().all(|s| s.len() == 1)
    }

    /// First state without a successor, if any.
    pub fn dead_end(&self) -> Option<usize> {
        self.succ.iter().position(|s| s.is_empty())
    }

    /// Subsystem on `keep` (indices, any order) with the restricted relation.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &k) in keep.iter().enumerate() {
            pos[k] = i;
        }
        let trans = self
            .trans
            .iter()
            .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|&(a, b)| (pos[a], pos[b]))
            .collect();
        Self::assemble(keep.iter().map(|&k| self.states[k].clone()).collect(), trans)
    }

    /// Renames states to zero-padded indices, preserving the current order.
    pub fn canonical_names(&self) -> Self {
        let width = self.len().saturating_sub(1).to_string().len();
        let names = (0..self.len()).map(|i| format!("{i:0width$}")).collect();
        Self::assemble(names, self.trans.clone())
    }

    /// Number of directed paths with `len` transitions.
    pub fn paths(&self, len: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.len()).map(|x| vec![x]).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &out {
                for &y in self.successors(*p.last().unwrap()) {
                    let mut q = p.clone();
                    q.push(y);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Debug for FiniteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSystem {{ states: {:?}, trans: [", self.states)?;
        for (i, &(a, b)) in self.trans.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", self.states[a], self.states[b])?;
        }
        write!(f, "] }}")
    }
}
