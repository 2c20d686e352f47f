#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use symdyn::systems::{FiniteSystem, Multimap};

/// A system on `x0 .. x{n-1}` with the given adjacency bits.
pub fn system_from_bits(n: usize, adj: &[bool]) -> FiniteSystem {
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let edges = (0..n * n).filter(|&i| adj[i]).map(|i| (i / n, i % n));
    FiniteSystem::from_indexed(names, edges).unwrap()
}

pub fn system(max: usize) -> impl Strategy<Value = FiniteSystem> {
    (1..=max)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * n)))
        .prop_map(|(n, adj)| system_from_bits(n, &adj))
}

pub fn nontrivial_system(max: usize) -> impl Strategy<Value = FiniteSystem> {
    system(max).prop_filter("needs a transition", FiniteSystem::is_nontrivial)
}

/// A surjection onto `0..k` for some `k ≤ n`, as a value vector.
pub fn surjection(n: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=n).prop_flat_map(move |k| {
        prop::collection::vec(0..k, n).prop_map(move |mut v| {
            // Relabel to the order of first occurrence and drop unused values.
            let mut seen = Vec::new();
            for x in v.iter_mut() {
                let i = seen.iter().position(|s| s == x).unwrap_or_else(|| {
                    seen.push(*x);
                    seen.len() - 1
                });
                *x = i;
            }
            v
        })
    })
}

pub fn names(k: usize, prefix: &str) -> Vec<String> {
    (0..k).map(|i| format!("{prefix}{i}")).collect()
}

pub fn image_count(v: &[usize]) -> usize {
    v.iter().max().map_or(0, |m| m + 1)
}

/// Restricted growth strings: one surjection `0..n → 0..k` per partition.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                let next = image_count(&v);
                (0..=next).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

/// Value vector of a functional multimap.
pub fn values(f: &Multimap) -> Vec<usize> {
    let mut v = vec![usize::MAX; f.source().len()];
    for &(a, b) in f.pairs() {
        v[a] = b;
    }
    v
}

/// Factor clauses read directly off the definition: surjective function,
/// steps go to steps, and every target step lifts.
pub fn oracle_factor(y: &FiniteSystem, x: &FiniteSystem, f: &[usize]) -> bool {
    let onto = (0..x.len()).all(|p| f.contains(&p));
    let forth = y.trans().iter().all(|&(a, b)| x.has_edge(f[a], f[b]));
    let back = x.trans().iter().all(|&(p, q)| y.trans().iter().any(|&(a, b)| f[a] == p && f[b] == q));
    onto && forth && back
}

pub fn arc(s: FiniteSystem) -> Arc<FiniteSystem> {
    Arc::new(s)
}
