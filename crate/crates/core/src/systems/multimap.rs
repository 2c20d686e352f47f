use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::FiniteSystem;
use crate::error::{Error, Result};

/// A set-valued map `φ : X ⇉ Y` between two finite systems, stored as an
/// explicit set of index pairs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multimap {
    source: Arc<FiniteSystem>,
    target: Arc<FiniteSystem>,
    rel: BTreeSet<(usize, usize)>,
}

impl Multimap {
    pub fn new(
        source: Arc<FiniteSystem>,
        target: Arc<FiniteSystem>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let rel: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(x, y)) = rel
            .iter()
            .find(|&&(x, y)| x >= source.len() || y >= target.len())
        {
            return Err(Error::EndpointOutOfRange(x, y));
        }
        Ok(Self { source, target, rel })
    }

    pub fn from_names<A: AsRef<str>, B: AsRef<str>>(
        source: Arc<FiniteSystem>,
        target: Arc<FiniteSystem>,
        pairs: impl IntoIterator<Item = (A, B)>,
    ) -> Result<Self> {
        let mut rel = BTreeSet::new();
        for (a, b) in pairs {
            let x = source
                .index_of(a.as_ref())
                .ok_or_else(|| Error::UnknownState(a.as_ref().to_string()))?;
            let y = target
                .index_of(b.as_ref())
                .ok_or_else(|| Error::UnknownState(b.as_ref().to_string()))?;
            rel.insert((x, y));
        }
        Ok(Self { source, target, rel })
    }

    /// Graph of the function `x ↦ f[x]`.
    pub fn from_function(
        source: Arc<FiniteSystem>,
        target: Arc<FiniteSystem>,
        f: &[usize],
    ) -> Result<Self> {
        if f.len() != source.len() {
            return Err(Error::EndpointMismatch(format!(
                "function has {} values for {} states",
                f.len(),
                source.len()
            )));
        }
        Self::new(source, target, f.iter().copied().enumerate())
    }

    pub fn identity(sys: Arc<FiniteSystem>) -> Self {
        let rel = (0..sys.len()).map(|i| (i, i)).collect();
        Self { source: sys.clone(), target: sys, rel }
    }

    /// The map sending every state of `source` to state `y` of `target`.
    pub fn constant(source: Arc<FiniteSystem>, target: Arc<FiniteSystem>, y: usize) -> Result<Self> {
        let n = source.len();
        Self::new(source, target, (0..n).map(|x| (x, y)))
    }

    pub fn source(&self) -> &Arc<FiniteSystem> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSystem> {
        &self.target
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.rel
    }

    /// `φ(x)`, ascending.
    pub fn image(&self, x: usize) -> Vec<usize> {
        self.rel.range((x, 0)..(x + 1, 0)).map(|&(_, y)| y).collect()
    }

    /// `φ[A]` for a set of source states.
    pub fn image_of(&self, xs: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        xs.into_iter().flat_map(|x| self.image(x)).collect()
    }

    /// `{x : y ∈ φ(x)}`, ascending.
    pub fn preimage(&self, y: usize) -> Vec<usize> {
        self.rel.iter().filter(|p| p.1 == y).map(|p| p.0).collect()
    }

    fn rows(&self) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.source.len()];
        for &(x, y) in &self.rel {
            rows[x].push(y);
        }
        rows
    }

    /// The value vector when every state has exactly one image.
    pub fn as_function(&self) -> Option<Vec<usize>> {
        self.rows()
            .into_iter()
            .map(|r| if r.len() == 1 { Some(r[0]) } else { None })
            .collect()
    }

    /// Relational converse `Y ⇉ X`.
    pub fn converse(&self) -> Self {
        Self {
            source: self.target.clone(),
            target: self.source.clone(),
            rel: self.rel.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }
}

impl fmt::Debug for Multimap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multimap {{ ")?;
        for (i, &(x, y)) in self.rel.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}=>{}", self.source.name(x), self.target.name(y))?;
        }
        write!(f, " }}")
    }
}

/// Clauses of the morphism, factor and embedding definitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    /// (1) every `T`-step is matched by an `S`-step between images.
    Forth,
    /// (2) every `S`-step is matched by a `T`-step between preimages.
    Back,
    Function,
    Surjective,
    /// (3) images follow every `T`-step.
    FactorStep,
    Total,
    PartitionInjective,
    /// (4) preimages follow every `S`-step.
    EmbeddingStep,
}

/// First counterexample, in scan order, to one clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Forth { x: String, x_next: String },
    Back { y: String, y_next: String },
    NotFunction { x: String, images: usize },
    NotSurjective { y: String },
    FactorStep { x: String, x_next: String, y: String },
    NotTotal { x: String },
    Overlap { x0: String, x1: String, y: String },
    Uncovered { y: String },
    EmbeddingStep { x: String, y: String, y_next: String },
}

impl Violation {
    pub fn clause(&self) -> Clause {
        match self {
            Violation::Forth { .. } => Clause::Forth,
            Violation::Back { .. } => Clause::Back,
            Violation::NotFunction { .. } => Clause::Function,
            Violation::NotSurjective { .. } => Clause::Surjective,
            Violation::FactorStep { .. } => Clause::FactorStep,
            Violation::NotTotal { .. } => Clause::Total,
            Violation::Overlap { .. } | Violation::Uncovered { .. } => Clause::PartitionInjective,
            Violation::EmbeddingStep { .. } => Clause::EmbeddingStep,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Forth { x, x_next } => {
                write!(f, "forth: step {x} -> {x_next} has no matching target step")
            }
            Violation::Back { y, y_next } => {
                write!(f, "back: step {y} -> {y_next} has no matching source step")
            }
            Violation::NotFunction { x, images } => {
                write!(f, "function: {x} has {images} images")
            }
            Violation::NotSurjective { y } => write!(f, "surjective: {y} has no preimage"),
            Violation::FactorStep { x, x_next, y } => write!(
                f,
                "factor step: {x} -> {x_next} with {x} |-> {y} has no successor of {y} over {x_next}"
            ),
            Violation::NotTotal { x } => write!(f, "total: {x} has no image"),
            Violation::Overlap { x0, x1, y } => {
                write!(f, "partition-injective: {y} lies in the images of {x0} and {x1}")
            }
            Violation::Uncovered { y } => write!(f, "partition-injective: {y} is not covered"),
            Violation::EmbeddingStep { x, y, y_next } => write!(
                f,
                "embedding step: {x} |-> {y} -> {y_next} has no successor of {x} over {y_next}"
            ),
        }
    }
}

/// Result of [`classify_multimap`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismClass {
    pub is_morphism: bool,
    pub is_factor: bool,
    pub is_embedding: bool,
    /// At most one entry per failed clause, in clause order.
    pub violations: Vec<Violation>,
}

impl MorphismClass {
    pub fn holds(&self, clause: Clause) -> bool {
        self.violations.iter().all(|v| v.clause() != clause)
    }

    pub fn violation(&self, clause: Clause) -> Option<&Violation> {
        self.violations.iter().find(|v| v.clause() == clause)
    }
}

/// Checks every clause of the morphism, factor and embedding definitions by
/// direct enumeration.
pub fn classify_multimap(phi: &Multimap) -> MorphismClass {
    let x_sys = &*phi.source;
    let y_sys = &*phi.target;
    let rows = phi.rows();
    let mut cols = vec![Vec::new(); y_sys.len()];
    for &(x, y) in &phi.rel {
        cols[y].push(x);
    }
    let xn = |i: usize| x_sys.name(i).to_string();
    let yn = |i: usize| y_sys.name(i).to_string();
    let mut violations = Vec::new();

    // (1)
    if let Some(&(x, x2)) = x_sys.trans().iter().find(|&&(x, x2)| {
        !rows[x]
            .iter()
            .any(|&y| rows[x2].iter().any(|&y2| y_sys.has_edge(y, y2)))
    }) {
        violations.push(Violation::Forth { x: xn(x), x_next: xn(x2) });
    }
    // (2)
    if let Some(&(y, y2)) = y_sys.trans().iter().find(|&&(y, y2)| {
        !cols[y]
            .iter()
            .any(|&x| cols[y2].iter().any(|&x2| x_sys.has_edge(x, x2)))
    }) {
        violations.push(Violation::Back { y: yn(y), y_next: yn(y2) });
    }
    if let Some(x) = rows.iter().position(|r| r.len() != 1) {
        violations.push(Violation::NotFunction { x: xn(x), images: rows[x].len() });
    }
    if let Some(y) = cols.iter().position(|c| c.is_empty()) {
        violations.push(Violation::NotSurjective { y: yn(y) });
    }
    // (3)
    'factor: for &(x, x2) in x_sys.trans() {
        for &y in &rows[x] {
            if !rows[x2].iter().any(|&y2| y_sys.has_edge(y, y2)) {
                violations.push(Violation::FactorStep { x: xn(x), x_next: xn(x2), y: yn(y) });
                break 'factor;
            }
        }
    }
    if let Some(x) = rows.iter().position(|r| r.is_empty()) {
        violations.push(Violation::NotTotal { x: xn(x) });
    }
    for (y, c) in cols.iter().enumerate() {
        match c.len() {
            0 => {
                violations.push(Violation::Uncovered { y: yn(y) });
                break;
            }
            1 => {}
            _ => {
                violations.push(Violation::Overlap { x0: xn(c[0]), x1: xn(c[1]), y: yn(y) });
                break;
            }
        }
    }
    // (4)
    'embed: for (x, row) in rows.iter().enumerate() {
        for &y in row {
            for &y2 in y_sys.successors(y) {
                if !x_sys.successors(x).iter().any(|&x2| rows[x2].contains(&y2)) {
                    violations.push(Violation::EmbeddingStep { x: xn(x), y: yn(y), y_next: yn(y2) });
                    break 'embed;
                }
            }
        }
    }

    let ok = |c: Clause| violations.iter().all(|v| v.clause() != c);
    let is_morphism = ok(Clause::Forth) && ok(Clause::Back);
    let is_factor =
        is_morphism && ok(Clause::Function) && ok(Clause::Surjective) && ok(Clause::FactorStep);
    let is_embedding = is_morphism
        && ok(Clause::Total)
        && ok(Clause::PartitionInjective)
        && ok(Clause::EmbeddingStep);
    MorphismClass { is_morphism, is_factor, is_embedding, violations }
}

/// Relational composite `ψ ∘ φ : x ↦ ψ[φ(x)]`.
pub fn compose(phi: &Multimap, psi: &Multimap) -> Result<Multimap> {
    if phi.target != psi.source {
        return Err(Error::EndpointMismatch(
            "target of the first map is not the source of the second".into(),
        ));
    }
    let psi_rows = psi.rows();
    let rel = phi
        .rel
        .iter()
        .flat_map(|&(x, y)| psi_rows[y].iter().map(move |&z| (x, z)))
        .collect();
    Ok(Multimap { source: phi.source.clone(), target: psi.target.clone(), rel })
}

fn first_violation(class: &MorphismClass) -> String {
    class
        .violations
        .first()
        .map(|v| v.to_string())
        .unwrap_or_default()
}

/// The unique embedding `x ↦ f⁻¹(x)` pairing with the factor `f`.
pub fn factor_to_embedding(f: &Multimap) -> Result<Multimap> {
    let class = classify_multimap(f);
    if !class.is_factor {
        return Err(Error::NotAFactor(first_violation(&class)));
    }
    Ok(f.converse())
}

/// The unique factor `y ↦ the x with y ∈ e(x)` pairing with the embedding `e`.
pub fn embedding_to_factor(e: &Multimap) -> Result<Multimap> {
    let class = classify_multimap(e);
    if !class.is_embedding {
        return Err(Error::NotAnEmbedding(first_violation(&class)));
    }
    Ok(e.converse())
}

/// Why a pair of maps fails to be an ef-pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EfViolation {
    NotEmbedding(Violation),
    NotFactor(Violation),
    /// `f ∘ e(x) ≠ {x}`.
    RoundTrip { x: String },
    /// `y ∉ e ∘ f(y)`.
    NotRecovered { y: String },
}

impl fmt::Display for EfViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EfViolation::NotEmbedding(v) => write!(f, "e is not an embedding ({v})"),
            EfViolation::NotFactor(v) => write!(f, "f is not a factor ({v})"),
            EfViolation::RoundTrip { x } => write!(f, "f(e({x})) is not {{{x}}}"),
            EfViolation::NotRecovered { y } => write!(f, "{y} is not in e(f({y}))"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfCheck {
    pub holds: bool,
    pub violation: Option<EfViolation>,
}

/// Checks that `(e, f)` with `e : X ⇉ Y` and `f : Y → X` is an ef-pair.
pub fn is_ef_pair(e: &Multimap, f: &Multimap) -> Result<EfCheck> {
    if e.source != f.target || e.target != f.source {
        return Err(Error::EndpointMismatch(
            "e and f must run between the same systems in opposite directions".into(),
        ));
    }
    let fail = |v: EfViolation| Ok(EfCheck { holds: false, violation: Some(v) });
    let ce = classify_multimap(e);
    if !ce.is_embedding {
        let v = ce.violations.into_iter().next().expect("failed class has a witness");
        return fail(EfViolation::NotEmbedding(v));
    }
    let cf = classify_multimap(f);
    if !cf.is_factor {
        let v = cf.violations.into_iter().next().expect("failed class has a witness");
        return fail(EfViolation::NotFactor(v));
    }
    let x_sys = &e.source;
    let y_sys = &e.target;
    for x in 0..x_sys.len() {
        let back = f.image_of(e.image(x));
        if back.len() != 1 || !back.contains(&x) {
            return fail(EfViolation::RoundTrip { x: x_sys.name(x).into() });
        }
    }
    for y in 0..y_sys.len() {
        if !e.image_of(f.image(y)).contains(&y) {
            return fail(EfViolation::NotRecovered { y: y_sys.name(y).into() });
        }
    }
    Ok(EfCheck { holds: true, violation: None })
}

/// A verified embedding-factor pair from `X` to `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfPair {
    e: Multimap,
    f: Multimap,
}

impl EfPair {
    pub fn new(e: Multimap, f: Multimap) -> Result<Self> {
        let check = is_ef_pair(&e, &f)?;
        match check.violation {
            None => Ok(Self { e, f }),
            Some(v) => Err(Error::NotAnEfPair(v.to_string())),
        }
    }

    pub fn from_factor(f: Multimap) -> Result<Self> {
        let e = factor_to_embedding(&f)?;
        Ok(Self { e, f })
    }

    pub fn from_embedding(e: Multimap) -> Result<Self> {
        let f = embedding_to_factor(&e)?;
        Ok(Self { e, f })
    }

    pub fn identity(sys: Arc<FiniteSystem>) -> Self {
        let id = Multimap::identity(sys);
        Self { e: id.clone(), f: id }
    }

    pub fn embedding(&self) -> &Multimap {
        &self.e
    }

    pub fn factor(&self) -> &Multimap {
        &self.f
    }

    pub fn lower(&self) -> &Arc<FiniteSystem> {
        &self.e.source
    }

    pub fn upper(&self) -> &Arc<FiniteSystem> {
        &self.e.target
    }
}

/// True iff `e` is a bijective function with inverse `f` and `e ∘ T = S ∘ e`.
pub fn is_isomorphism(ef: &EfPair) -> bool {
    let Some(e) = ef.e.as_function() else {
        return false;
    };
    let Some(f) = ef.f.as_function() else {
        return false;
    };
    if e.len() != f.len() || e.iter().enumerate().any(|(x, &y)| f[y] != x) {
        return false;
    }
    let x_sys = ef.lower();
    let y_sys = ef.upper();
    let pushed: BTreeSet<(usize, usize)> = x_sys.trans().iter().map(|&(a, b)| (e[a], e[b])).collect();
    &pushed == y_sys.trans()
}

/// Pushforward dynamics `S := f ∘ T ∘ f⁻¹` along a surjection onto `y_states`.
///
/// `f[i]` is the index into `y_states` of the image of state `i` of `x`.
/// Returns the system on `y_states` together with the graph of `f`, which is
/// a factor whenever `x` is nontrivial.
pub fn pushforward(
    x: &Arc<FiniteSystem>,
    y_states: &[String],
    f: &[usize],
) -> Result<(Arc<FiniteSystem>, Multimap)> {
    if f.len() != x.len() {
        return Err(Error::EndpointMismatch(format!(
            "map has {} values for {} states",
            f.len(),
            x.len()
        )));
    }
    if let Some(&v) = f.iter().find(|&&v| v >= y_states.len()) {
        return Err(Error::EndpointOutOfRange(0, v));
    }
    let mut hit = vec![false; y_states.len()];
    for &v in f {
        hit[v] = true;
    }
    if let Some(miss) = hit.iter().position(|h| !h) {
        return Err(Error::NotSurjective(y_states[miss].clone()));
    }
    let edges: Vec<(usize, usize)> = x.trans().iter().map(|&(a, b)| (f[a], f[b])).collect();
    let y = Arc::new(FiniteSystem::from_indexed(y_states.to_vec(), edges)?);
    let map = Multimap::from_names(
        x.clone(),
        y.clone(),
        (0..x.len()).map(|i| (x.name(i).to_string(), y_states[f[i]].clone())),
    )?;
    Ok((y, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(states: &[&str], edges: &[(&str, &str)]) -> Arc<FiniteSystem> {
        Arc::new(FiniteSystem::new(states.iter().copied(), edges.iter().copied()).unwrap())
    }

    fn two_cycle() -> Arc<FiniteSystem> {
        sys(&["a", "b"], &[("a", "b"), ("b", "a")])
    }

    fn point() -> Arc<FiniteSystem> {
        Arc::new(FiniteSystem::self_loop())
    }

    #[test]
    fn identity_on_self_loop_is_everything() {
        let c = classify_multimap(&Multimap::identity(point()));
        assert!(c.is_morphism && c.is_factor && c.is_embedding);
        assert!(c.violations.is_empty());
    }

    #[test]
    fn constant_map_from_two_cycle_is_factor() {
        let c = classify_multimap(&Multimap::constant(two_cycle(), point(), 0).unwrap());
        assert!(c.is_factor);
    }

    #[test]
    fn constant_map_from_dead_end_pair_is_factor() {
        let dead = sys(&["a", "b"], &[("a", "b")]);
        let c = classify_multimap(&Multimap::constant(dead, point(), 0).unwrap());
        assert!(c.is_factor, "{:?}", c.violations);
    }

    #[test]
    fn witnesses_are_first_in_scan_order() {
        // Identity graph from the 2-cycle into the full relation on {a, b}.
        let full = sys(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]);
        let phi = Multimap::from_names(two_cycle(), full, [("a", "a"), ("b", "b")]).unwrap();
        let c = classify_multimap(&phi);
        assert!(!c.is_morphism);
        assert_eq!(
            c.violation(Clause::Back),
            Some(&Violation::Back { y: "a".into(), y_next: "a".into() })
        );
        assert!(c.holds(Clause::Forth));
    }

    #[test]
    fn malformed_relation_rejected() {
        let err = Multimap::new(point(), point(), [(0, 3)]).unwrap_err();
        assert_eq!(err, Error::EndpointOutOfRange(0, 3));
        let err = Multimap::from_names(point(), point(), [("*", "q")]).unwrap_err();
        assert_eq!(err, Error::UnknownState("q".into()));
    }

    #[test]
    fn compose_unit_law_and_constants() {
        let four = Arc::new(FiniteSystem::cycle(&["0", "1", "2", "3"]).unwrap());
        let two = two_cycle();
        let f = Multimap::from_function(four.clone(), two.clone(), &[0, 1, 0, 1]).unwrap();
        assert!(classify_multimap(&f).is_factor);
        assert_eq!(compose(&Multimap::identity(four.clone()), &f).unwrap(), f);

        let g = Multimap::constant(two, point(), 0).unwrap();
        let h = compose(&f, &g).unwrap();
        assert_eq!(h, Multimap::constant(four, point(), 0).unwrap());
        assert!(classify_multimap(&h).is_factor);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let f = Multimap::identity(two_cycle());
        let g = Multimap::identity(point());
        assert!(matches!(compose(&f, &g), Err(Error::EndpointMismatch(_))));
    }

    #[test]
    fn preimage_embeddings() {
        let f = Multimap::constant(two_cycle(), point(), 0).unwrap();
        let e = factor_to_embedding(&f).unwrap();
        assert_eq!(e.image(0), vec![0, 1]);
        assert!(is_ef_pair(&e, &f).unwrap().holds);
        assert_eq!(embedding_to_factor(&e).unwrap(), f);

        let swap = Multimap::from_function(two_cycle(), two_cycle(), &[1, 0]).unwrap();
        let e = factor_to_embedding(&swap).unwrap();
        assert_eq!(e, swap);

        let id = Multimap::identity(two_cycle());
        assert_eq!(factor_to_embedding(&id).unwrap(), id);
        assert_eq!(embedding_to_factor(&id).unwrap(), id);
    }

    #[test]
    fn diagonal_embedding_into_two_copies() {
        let two = two_cycle();
        let copies = sys(
            &["a0", "a1", "b0", "b1"],
            &[("a0", "b0"), ("b0", "a0"), ("a1", "b1"), ("b1", "a1")],
        );
        let e = Multimap::from_names(
            two.clone(),
            copies.clone(),
            [("a", "a0"), ("a", "a1"), ("b", "b0"), ("b", "b1")],
        )
        .unwrap();
        let f = embedding_to_factor(&e).unwrap();
        assert_eq!(f.as_function().unwrap(), vec![0, 0, 1, 1]);
        assert!(is_ef_pair(&e, &f).unwrap().holds);
    }

    #[test]
    fn non_factor_rejected() {
        let not = Multimap::identity(two_cycle()).converse();
        let empty = Multimap::new(two_cycle(), two_cycle(), []).unwrap();
        assert!(matches!(factor_to_embedding(&empty), Err(Error::NotAFactor(_))));
        assert!(matches!(embedding_to_factor(&empty), Err(Error::NotAnEmbedding(_))));
        assert!(factor_to_embedding(&not).is_ok());
    }

    #[test]
    fn perturbed_pair_fails_with_witness() {
        let copies = sys(
            &["a0", "a1", "b0", "b1"],
            &[("a0", "b0"), ("b0", "a0"), ("a1", "b1"), ("b1", "a1")],
        );
        let f = Multimap::from_function(copies.clone(), two_cycle(), &[0, 0, 1, 1]).unwrap();
        let e = factor_to_embedding(&f).unwrap();
        // Another factor: swap on the second copy only.
        let g = Multimap::from_function(copies, two_cycle(), &[0, 1, 1, 0]).unwrap();
        assert!(classify_multimap(&g).is_factor);
        let check = is_ef_pair(&e, &g).unwrap();
        assert!(!check.holds);
        assert_eq!(check.violation, Some(EfViolation::RoundTrip { x: "a".into() }));
    }

    #[test]
    fn isomorphisms() {
        assert!(is_isomorphism(&EfPair::identity(two_cycle())));
        let swap = Multimap::from_function(two_cycle(), two_cycle(), &[1, 0]).unwrap();
        assert!(is_isomorphism(&EfPair::new(swap.clone(), swap).unwrap()));
        let c = Multimap::constant(two_cycle(), point(), 0).unwrap();
        assert!(!is_isomorphism(&EfPair::from_factor(c).unwrap()));
    }

    #[test]
    fn pushforward_examples() {
        let x = sys(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let ys = vec!["0".to_string(), "1".to_string()];
        let (y, f) = pushforward(&x, &ys, &[0, 0, 1]).unwrap();
        assert_eq!(y.successors(0), &[0, 1]);
        assert!(y.successors(1).is_empty());
        assert!(classify_multimap(&f).is_factor);

        let (y, _) = pushforward(&two_cycle(), &["*".to_string()], &[0, 0]).unwrap();
        assert_eq!(*y, FiniteSystem::self_loop());

        let names: Vec<String> = x.states().to_vec();
        let (y, _) = pushforward(&x, &names, &[0, 1, 2]).unwrap();
        assert_eq!(*y, *x);

        let err = pushforward(&x, &ys, &[0, 0, 0]).unwrap_err();
        assert_eq!(err, Error::NotSurjective("1".into()));
    }
}
