//! Powerset lattices of finite systems and the dynamic-algebraic-lattice
//! morphism conditions.
//!
//! A finite state set `X` is lifted to the lattice of all its subsets ordered
//! by reverse inclusion (`A ≤ B` iff `A ⊇ B`), so the bottom element is `X`
//! and the top element is `∅`. Co-atoms are the singletons. Relations lift to
//! image maps `A ↦ φ[A]`.
//!
//! On finite lattices every element is compact, so Scott continuity reduces
//! to monotonicity and is not checked separately.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::systems::{EfPair, FiniteSystem, Multimap};

/// Largest base set the explicit lattice is materialised for.
pub const MAX_LATTICE_BASE: usize = 16;

/// A subset of the base, as a bitmask over base indices.
pub type Subset = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetLattice {
    base: Vec<String>,
}

impl SubsetLattice {
    pub fn new(base: Vec<String>) -> Result<Self> {
        if base.len() > MAX_LATTICE_BASE {
            return Err(Error::CapExceeded(format!(
                "lattice base has {} elements, limit is {MAX_LATTICE_BASE}",
                base.len()
            )));
        }
        Ok(Self { base })
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn size(&self) -> usize {
        1 << self.base.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Subset> {
        0..(1u32 << self.base.len())
    }

    /// The whole base set.
    pub fn bottom(&self) -> Subset {
        ((1u64 << self.base.len()) - 1) as Subset
    }

    /// The empty set.
    pub fn top(&self) -> Subset {
        0
    }

    /// `a ≤ b` iff `a ⊇ b`.
    pub fn le(&self, a: Subset, b: Subset) -> bool {
        a & b == b
    }

    pub fn is_coatom(&self, a: Subset) -> bool {
        a.count_ones() == 1
    }

    /// Co-atoms above `a`: the singletons of its members.
    pub fn coatoms_above(&self, a: Subset) -> impl Iterator<Item = Subset> {
        (0..self.base.len())
            .filter(move |i| a >> i & 1 == 1)
            .map(|i| 1 << i)
    }

    /// Greatest lower bound under reverse inclusion (union).
    pub fn meet(&self, elems: impl IntoIterator<Item = Subset>) -> Subset {
        elems.into_iter().fold(self.top(), |acc, e| acc | e)
    }

    pub fn names(&self, a: Subset) -> BTreeSet<String> {
        (0..self.base.len())
            .filter(|i| a >> i & 1 == 1)
            .map(|i| self.base[i].clone())
            .collect()
    }

    pub fn subset_of(&self, names: &[&str]) -> Result<Subset> {
        names.iter().try_fold(0, |acc, n| {
            self.base
                .iter()
                .position(|b| b == n)
                .map(|i| acc | 1 << i)
                .ok_or_else(|| Error::UnknownState(n.to_string()))
        })
    }
}

/// A map between two subset lattices given by its full value table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    source: SubsetLattice,
    target: SubsetLattice,
    image: Vec<Subset>,
}

impl LatticeMap {
    pub fn new(source: SubsetLattice, target: SubsetLattice, image: Vec<Subset>) -> Result<Self> {
        if image.len() != source.size() {
            return Err(Error::LatticeMismatch(format!(
                "table has {} entries for {} elements",
                image.len(),
                source.size()
            )));
        }
        if image.iter().any(|&v| v & !target.bottom() != 0) {
            return Err(Error::LatticeMismatch("value outside target lattice".into()));
        }
        Ok(Self { source, target, image })
    }

    /// The image map `A ↦ φ[A]` of a relation.
    pub fn from_multimap(phi: &Multimap) -> Result<Self> {
        let source = SubsetLattice::new(phi.source().states().to_vec())?;
        let target = SubsetLattice::new(phi.target().states().to_vec())?;
        let mut point = vec![0 as Subset; source.base.len()];
        for &(x, y) in phi.pairs() {
            point[x] |= 1 << y;
        }
        let image = source
            .elements()
            .map(|a| {
                (0..point.len())
                    .filter(|i| a >> i & 1 == 1)
                    .fold(0, |acc, i| acc | point[i])
            })
            .collect();
        Ok(Self { source, target, image })
    }

    pub fn identity(lattice: SubsetLattice) -> Self {
        let image = lattice.elements().collect();
        Self { source: lattice.clone(), target: lattice, image }
    }

    pub fn source(&self) -> &SubsetLattice {
        &self.source
    }

    pub fn target(&self) -> &SubsetLattice {
        &self.target
    }

    pub fn apply(&self, a: Subset) -> Subset {
        self.image[a as usize]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if self.target != other.source {
            return Err(Error::LatticeMismatch("composition endpoints differ".into()));
        }
        let image = self.image.iter().map(|&b| other.apply(b)).collect();
        Ok(LatticeMap { source: self.source.clone(), target: other.target.clone(), image })
    }

    /// First pair `a ≤ b` with `f(a) ≰ f(b)`, if any.
    pub fn monotonicity_witness(&self) -> Option<(Subset, Subset)> {
        for a in self.source.elements() {
            for b in self.source.elements() {
                if self.source.le(a, b) && !self.target.le(self.apply(a), self.apply(b)) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// First element `a` with `f(a) ≠ ⋀ f[CoAt(a)]`, if any.
    pub fn coatomicity_witness(&self) -> Option<Subset> {
        self.source.elements().find(|&a| {
            let meet = self
                .target
                .meet(self.source.coatoms_above(a).map(|c| self.apply(c)));
            meet != self.apply(a)
        })
    }
}

/// Lifts a system to its powerset lattice and the image map of its dynamics.
pub fn lift(sys: &FiniteSystem) -> Result<(SubsetLattice, LatticeMap)> {
    let lattice = SubsetLattice::new(sys.states().to_vec())?;
    let mut point = vec![0 as Subset; sys.len()];
    for &(x, y) in sys.trans() {
        point[x] |= 1 << y;
    }
    let image = lattice
        .elements()
        .map(|a| {
            (0..sys.len())
                .filter(|i| a >> i & 1 == 1)
                .fold(0, |acc, i| acc | point[i])
        })
        .collect();
    Ok((lattice.clone(), LatticeMap { source: lattice.clone(), target: lattice, image }))
}

/// `(F(e), F(f))` for an ef-pair `(e, f)`.
pub fn lift_ef_pair(ef: &EfPair) -> Result<(LatticeMap, LatticeMap)> {
    Ok((
        LatticeMap::from_multimap(ef.embedding())?,
        LatticeMap::from_multimap(ef.factor())?,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    /// Condition number, 1 through 5.
    pub condition: u8,
    pub holds: bool,
    /// First failing element in scan order.
    pub witness: Option<BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynAlgReport {
    pub conditions: Vec<ConditionResult>,
}

impl DynAlgReport {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn condition(&self, n: u8) -> &ConditionResult {
        &self.conditions[usize::from(n) - 1]
    }
}

impl fmt::Display for DynAlgReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const LABELS: [&str; 5] = [
            "pi preserves co-atoms",
            "pi . eps = id",
            "eps . pi <= id",
            "pi . beta . eps <= alpha",
            "alpha . pi <= pi . beta",
        ];
        for c in &self.conditions {
            let label = LABELS[usize::from(c.condition) - 1];
            match &c.witness {
                None => writeln!(f, "({}) {label}: pass", c.condition)?,
                Some(w) => {
                    let items: Vec<&str> = w.iter().map(String::as_str).collect();
                    writeln!(f, "({}) {label}: FAIL at {{{}}}", c.condition, items.join(","))?
                }
            }
        }
        Ok(())
    }
}

/// Checks the five morphism conditions for `(ε, π) : (A, α) → (B, β)`.
pub fn check_dynalg_morphism(
    alpha: &LatticeMap,
    beta: &LatticeMap,
    eps: &LatticeMap,
    pi: &LatticeMap,
) -> Result<DynAlgReport> {
    let a = &alpha.source;
    let b = &beta.source;
    let aligned = alpha.target == *a
        && beta.target == *b
        && eps.source == *a
        && eps.target == *b
        && pi.source == *b
        && pi.target == *a;
    if !aligned {
        return Err(Error::LatticeMismatch(
            "expected alpha: A->A, beta: B->B, eps: A->B, pi: B->A".into(),
        ));
    }

    let result = |condition: u8, lattice: &SubsetLattice, w: Option<Subset>| ConditionResult {
        condition,
        holds: w.is_none(),
        witness: w.map(|s| lattice.names(s)),
    };

    let c1 = b
        .elements()
        .filter(|&s| b.is_coatom(s))
        .find(|&s| !a.is_coatom(pi.apply(s)));
    let c2 = a.elements().find(|&s| pi.apply(eps.apply(s)) != s);
    let c3 = b.elements().find(|&s| !b.le(eps.apply(pi.apply(s)), s));
    let c4 = a
        .elements()
        .find(|&s| !a.le(pi.apply(beta.apply(eps.apply(s))), alpha.apply(s)));
    let c5 = b
        .elements()
        .find(|&s| !a.le(alpha.apply(pi.apply(s)), pi.apply(beta.apply(s))));

    Ok(DynAlgReport {
        conditions: vec![
            result(1, b, c1),
            result(2, a, c2),
            result(3, b, c3),
            result(4, a, c4),
            result(5, b, c5),
        ],
    })
}
