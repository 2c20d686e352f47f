//! Amalgamation, joint embedding and finite prefixes of the Fraïssé chain
//! whose colimit is the universal homogeneous nondeterministic system.

mod chain;
mod search;

pub use chain::{
    build_chain, check_extension, threadable_paths, ChainConfig, ExtensionTask, FraisseChain,
    LogEntry, TaskKey,
};
pub use search::FactorSearch;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::systems::{classify_multimap, FiniteSystem, Multimap};

/// Default cap on `|X|^|Y|` for [`enumerate_factors`].
pub const DEFAULT_CANDIDATE_CAP: u128 = 1 << 24;

/// All factors `y_sys → x_sys`, in lexicographic order of their value vectors.
///
/// The search is exhaustive over the `|X|^|Y|` candidate functions (pruned
/// by backtracking); it refuses to start when that count exceeds `cap`.
pub fn enumerate_factors(
    y_sys: &Arc<FiniteSystem>,
    x_sys: &Arc<FiniteSystem>,
    cap: u128,
) -> Result<Vec<Multimap>> {
    if !y_sys.is_nontrivial() || !x_sys.is_nontrivial() {
        return Err(Error::TrivialSystem);
    }
    let candidates = (x_sys.len() as u128).checked_pow(y_sys.len() as u32);
    if candidates.is_none_or(|c| c > cap) {
        return Err(Error::CapExceeded(format!(
            "{}^{} candidate maps exceed cap {cap}",
            x_sys.len(),
            y_sys.len()
        )));
    }
    FactorSearch::new(y_sys, x_sys)?
        .run(usize::MAX)?
        .into_iter()
        .map(|f| Multimap::from_function(y_sys.clone(), x_sys.clone(), &f))
        .collect()
}

/// A pullback square over a common factor target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amalgam {
    pub system: Arc<FiniteSystem>,
    /// Projection onto the first input.
    pub proj0: Multimap,
    /// Projection onto the second input.
    pub proj1: Multimap,
}

fn require_factor(f: &Multimap, what: &str) -> Result<Vec<usize>> {
    let class = classify_multimap(f);
    if !class.is_factor {
        let why = class.violations.first().map(|v| v.to_string()).unwrap_or_default();
        return Err(Error::NotAFactor(format!("{what}: {why}")));
    }
    Ok(f.as_function().expect("factors are functions"))
}

/// Fiber product of two factors `f0 : Y0 → X` and `f1 : Y1 → X`.
///
/// `Z = {(y0, y1) : f0(y0) = f1(y1)}` with `(y0, y1) → (y0', y1')` iff both
/// coordinates step. Both projections are factors and `f0 ∘ π0 = f1 ∘ π1`.
pub fn amalgamate(
    x: &Arc<FiniteSystem>,
    y0: &Arc<FiniteSystem>,
    y1: &Arc<FiniteSystem>,
    f0: &Multimap,
    f1: &Multimap,
) -> Result<Amalgam> {
    for (f, y, what) in [(f0, y0, "f0"), (f1, y1, "f1")] {
        if f.source() != y || f.target() != x {
            return Err(Error::EndpointMismatch(format!("{what} does not run Y -> X")));
        }
    }
    let g0 = require_factor(f0, "f0")?;
    let g1 = require_factor(f1, "f1")?;

    let mut pairs = Vec::new();
    for (a, &ga) in g0.iter().enumerate() {
        for (b, &gb) in g1.iter().enumerate() {
            if ga == gb {
                pairs.push((a, b));
            }
        }
    }
    let names: Vec<String> = pairs
        .iter()
        .map(|&(a, b)| format!("({},{})", y0.name(a), y1.name(b)))
        .collect();
    let mut edges = Vec::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(a2, b2)) in pairs.iter().enumerate() {
            if y0.has_edge(a, a2) && y1.has_edge(b, b2) {
                edges.push((i, j));
            }
        }
    }
    let z = Arc::new(FiniteSystem::from_indexed(names.clone(), edges)?);
    // from_indexed sorts names; recover each pair's position.
    let mut p0 = vec![0; z.len()];
    let mut p1 = vec![0; z.len()];
    for (name, &(a, b)) in names.iter().zip(&pairs) {
        let k = z.index_of(name).expect("state present");
        p0[k] = a;
        p1[k] = b;
    }
    Ok(Amalgam {
        proj0: Multimap::from_function(z.clone(), y0.clone(), &p0)?,
        proj1: Multimap::from_function(z.clone(), y1.clone(), &p1)?,
        system: z,
    })
}

/// Amalgamation over the initial object via the two constant factors.
pub fn joint_embed(y0: &Arc<FiniteSystem>, y1: &Arc<FiniteSystem>) -> Result<Amalgam> {
    if !y0.is_nontrivial() || !y1.is_nontrivial() {
        return Err(Error::TrivialSystem);
    }
    let point = Arc::new(FiniteSystem::self_loop());
    let f0 = Multimap::constant(y0.clone(), point.clone(), 0)?;
    let f1 = Multimap::constant(y1.clone(), point.clone(), 0)?;
    amalgamate(&point, y0, y1, &f0, &f1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::compose;

    fn sys(states: &[&str], edges: &[(&str, &str)]) -> Arc<FiniteSystem> {
        Arc::new(FiniteSystem::new(states.iter().copied(), edges.iter().copied()).unwrap())
    }

    fn two_cycle() -> Arc<FiniteSystem> {
        sys(&["a", "b"], &[("a", "b"), ("b", "a")])
    }

    #[test]
    fn factor_counts() {
        let point = Arc::new(FiniteSystem::self_loop());
        assert_eq!(enumerate_factors(&two_cycle(), &point, DEFAULT_CANDIDATE_CAP).unwrap().len(), 1);
        assert!(enumerate_factors(&point, &two_cycle(), DEFAULT_CANDIDATE_CAP).unwrap().is_empty());
        let fs = enumerate_factors(&two_cycle(), &two_cycle(), DEFAULT_CANDIDATE_CAP).unwrap();
        let values: Vec<_> = fs.iter().map(|f| f.as_function().unwrap()).collect();
        assert_eq!(values, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn factor_cap_and_triviality() {
        let big = Arc::new(FiniteSystem::cycle(&["0", "1", "2", "3", "4", "5"]).unwrap());
        assert!(matches!(enumerate_factors(&big, &big, 1000), Err(Error::CapExceeded(_))));
        let trivial = sys(&["a"], &[]);
        assert_eq!(
            enumerate_factors(&trivial, &two_cycle(), DEFAULT_CANDIDATE_CAP).unwrap_err(),
            Error::TrivialSystem
        );
    }

    #[test]
    fn identity_amalgamation_is_diagonal() {
        let x = two_cycle();
        let id = Multimap::identity(x.clone());
        let am = amalgamate(&x, &x, &x, &id, &id).unwrap();
        assert_eq!(am.system.len(), 2);
        assert_eq!(am.system.trans().len(), 2);
        assert!(classify_multimap(&am.proj0).is_factor);
    }

    #[test]
    fn two_cycles_over_the_point() {
        let am = joint_embed(&two_cycle(), &two_cycle()).unwrap();
        let z = &am.system;
        assert_eq!(z.len(), 4);
        let edge = |a: &str, b: &str| z.has_edge(z.index_of(a).unwrap(), z.index_of(b).unwrap());
        assert!(edge("(a,a)", "(b,b)") && edge("(b,b)", "(a,a)"));
        assert!(edge("(a,b)", "(b,a)") && edge("(b,a)", "(a,b)"));
        assert_eq!(z.trans().len(), 4);
    }

    #[test]
    fn cycle_product_and_dead_end_product() {
        let three = Arc::new(FiniteSystem::cycle(&["x", "y", "z"]).unwrap());
        let am = joint_embed(&two_cycle(), &three).unwrap();
        assert_eq!(am.system.len(), 6);
        assert!(am.system.is_deterministic());
        assert!(classify_multimap(&am.proj0).is_factor);
        assert!(classify_multimap(&am.proj1).is_factor);

        let dead = sys(&["a", "b"], &[("a", "b")]);
        let am = joint_embed(&dead, &dead).unwrap();
        assert_eq!(am.system.len(), 4);
        assert!(classify_multimap(&am.proj0).is_factor);
        assert!(classify_multimap(&am.proj1).is_factor);

        let point = Arc::new(FiniteSystem::self_loop());
        let am = joint_embed(&point, &point).unwrap();
        assert_eq!(am.system.len(), 1);
        assert!(am.system.has_edge(0, 0));
    }

    #[test]
    fn square_commutes() {
        let four = Arc::new(FiniteSystem::cycle(&["0", "1", "2", "3"]).unwrap());
        let x = two_cycle();
        let f0 = Multimap::from_function(four.clone(), x.clone(), &[0, 1, 0, 1]).unwrap();
        let f1 = Multimap::identity(x.clone());
        let am = amalgamate(&x, &four, &x, &f0, &f1).unwrap();
        assert_eq!(
            compose(&am.proj0, &f0).unwrap(),
            compose(&am.proj1, &f1).unwrap()
        );
    }

    #[test]
    fn total_inputs_can_give_non_total_amalgam() {
        let x = sys(&["0", "1"], &[("0", "1"), ("1", "0"), ("1", "1")]);
        let y0 = sys(&["a", "b", "b'"], &[("a", "b"), ("b", "a"), ("b'", "b'")]);
        let y1 = sys(&["c", "d", "d'"], &[("c", "d"), ("d", "d'"), ("d'", "c")]);
        let f0 = Multimap::from_names(y0.clone(), x.clone(), [("a", "0"), ("b", "1"), ("b'", "1")])
            .unwrap();
        let f1 = Multimap::from_names(y1.clone(), x.clone(), [("c", "0"), ("d", "1"), ("d'", "1")])
            .unwrap();
        assert!(y0.is_total() && y1.is_total() && x.is_total());
        let am = amalgamate(&x, &y0, &y1, &f0, &f1).unwrap();
        assert!(am.system.is_nontrivial());
        assert!(!am.system.is_total());
    }

    #[test]
    fn amalgamate_rejects_non_factors() {
        let x = two_cycle();
        let empty = Multimap::new(x.clone(), x.clone(), []).unwrap();
        let id = Multimap::identity(x.clone());
        assert!(matches!(amalgamate(&x, &x, &x, &empty, &id), Err(Error::NotAFactor(_))));
    }
}
