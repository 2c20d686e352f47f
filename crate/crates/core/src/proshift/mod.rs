//! Towers of shifts bonded by factor codes: finite prefixes of ω-proshifts.

mod shadow;
mod universal;

pub use shadow::{
    distance_exponent, exact_orbit, pseudo_orbit, shadow, shadow_is_valid, PseudoOrbit, ShadowResult,
    HORIZON_MARGIN,
};
pub use universal::{
    bounded_universal_tower, find_tower_extension, verify_served, ShiftTask, TowerLogEntry, UniversalCaps,
    UniversalTower,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::shifts::{
    blocks, compose_codes, extend_window, higher_block, verify_factor_code, BlockCode, CodeFailure, Sft,
    Shift, Word,
};

/// Levels `X_0 ← X_1 ← …` with window-1 factor bonds `bonds[i] : X_{i+1} → X_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    levels: Vec<Sft>,
    bonds: Vec<BlockCode>,
}

impl Tower {
    /// Builds a tower, rejecting it unless [`validate_tower`] passes.
    pub fn new(levels: Vec<Sft>, bonds: Vec<BlockCode>) -> Result<Self> {
        let t = Self::unchecked(levels, bonds);
        let report = validate_tower(&t);
        match report.failure {
            Some(f) => Err(Error::InvalidTower(f.to_string())),
            None => Ok(t),
        }
    }

    /// Builds a tower from bonds of any window, recoding each source level by
    /// its higher-block presentation so that every bond ends up with window 1.
    pub fn from_codes(mut levels: Vec<Sft>, mut bonds: Vec<BlockCode>) -> Result<Self> {
        if levels.len() != bonds.len() + 1 {
            return Err(Error::InvalidTower("need exactly one bond per level after the first".into()));
        }
        for i in 0..bonds.len() {
            let n = bonds[i].window();
            if n == 1 {
                continue;
            }
            let src = &levels[i + 1];
            let hb = higher_block(src, n.max(src.memory()))?;
            let old = bonds[i].clone();
            bonds[i] = BlockCode::try_from_fn(&hb.sft, old.target_alphabet().clone(), 1, |w| {
                let block = &hb.blocks[w[0]];
                old.get(&block[..n]).ok_or_else(|| Error::CodeUndefined(src.alphabet().format_word(block)))
            })?;
            if i + 1 < bonds.len() {
                bonds[i + 1] = compose_codes(&bonds[i + 1], &hb.encode, &levels[i + 2])?;
            }
            levels[i + 1] = hb.sft;
        }
        Self::new(levels, bonds)
    }

    /// A tower without any checks; see [`validate_tower`].
    pub fn unchecked(levels: Vec<Sft>, bonds: Vec<BlockCode>) -> Self {
        Self { levels, bonds }
    }

    pub fn single(level: Sft) -> Self {
        Self { levels: vec![level], bonds: Vec::new() }
    }

    pub fn levels(&self) -> &[Sft] {
        &self.levels
    }

    pub fn bonds(&self) -> &[BlockCode] {
        &self.bonds
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// The composite bond `levels[j] → levels[i]` for `i ≤ j`.
    pub fn composite(&self, i: usize, j: usize) -> Result<BlockCode> {
        if i > j || j >= self.levels.len() {
            return Err(Error::InvalidArgument(format!("no composite from level {j} to level {i}")));
        }
        let mut code = BlockCode::identity(&self.levels[j]);
        for k in (i..j).rev() {
            code = compose_codes(&code, &self.bonds[k], &self.levels[j])?;
        }
        Ok(code)
    }

    pub(crate) fn push(&mut self, level: Sft, bond: BlockCode) {
        self.levels.push(level);
        self.bonds.push(bond);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerFailure {
    Shape,
    WindowNotNormalized { bond: usize, window: usize },
    Undefined { bond: usize, reason: String },
    NotFactor { bond: usize, failure: CodeFailure },
}

impl fmt::Display for TowerFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shape => write!(f, "a tower needs at least one level and one bond per further level"),
            Self::WindowNotNormalized { bond, window } => write!(f, "bond {bond} has window {window}, expected 1"),
            Self::Undefined { bond, reason } => write!(f, "bond {bond}: {reason}"),
            Self::NotFactor { bond, failure } => write!(f, "bond {bond} is not a factor: {failure}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerReport {
    pub valid: bool,
    pub failure: Option<TowerFailure>,
    /// `|B_1|, |B_2|, |B_3|` for each level.
    pub block_counts: Vec<[usize; 3]>,
}

impl fmt::Display for TowerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid: {}", self.valid)?;
        for (i, c) in self.block_counts.iter().enumerate() {
            writeln!(f, "level {i}: |B1|={} |B2|={} |B3|={}", c[0], c[1], c[2])?;
        }
        if let Some(fail) = &self.failure {
            writeln!(f, "failure: {fail}")?;
        }
        Ok(())
    }
}

pub fn validate_tower(t: &Tower) -> TowerReport {
    let block_counts = t.levels.iter().map(|l| [1, 2, 3].map(|n| blocks(l, n).len())).collect();
    let failure = (|| {
        if t.levels.is_empty() || t.levels.len() != t.bonds.len() + 1 {
            return Some(TowerFailure::Shape);
        }
        for (i, bond) in t.bonds.iter().enumerate() {
            if bond.window() != 1 {
                return Some(TowerFailure::WindowNotNormalized { bond: i, window: bond.window() });
            }
            if bond.target_alphabet() != t.levels[i].alphabet() {
                return Some(TowerFailure::Undefined { bond: i, reason: "target alphabet differs from the level below".into() });
            }
            match verify_factor_code(bond, &t.levels[i + 1], &t.levels[i]) {
                Err(e) => return Some(TowerFailure::Undefined { bond: i, reason: e.to_string() }),
                Ok(check) => {
                    if let Some(failure) = check.failure {
                        return Some(TowerFailure::NotFactor { bond: i, failure });
                    }
                }
            }
        }
        None
    })();
    TowerReport { valid: failure.is_none(), failure, block_counts }
}

/// `(i+1)!` for `i = 0 .. depth`.
pub fn odometer_orders(depth: usize) -> Vec<usize> {
    (1..=depth).scan(1usize, |acc, i| {
        *acc *= i;
        Some(*acc)
    })
    .collect()
}

/// Cyclic shifts `X_{s_i}` with `s_i = (i+1)!`, bonded by `k ↦ k mod s_i`.
pub fn odometer_tower(depth: usize) -> Result<Tower> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    if depth > 6 {
        return Err(Error::CapExceeded("odometer depth above 6".into()));
    }
    let orders = odometer_orders(depth);
    let levels = orders.iter().map(|&s| Sft::cyclic(s)).collect::<Result<Vec<_>>>()?;
    let bonds = (0..depth - 1)
        .map(|i| BlockCode::from_fn(&levels[i + 1], levels[i].alphabet().clone(), 1, |w| w[0] % orders[i]))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(levels, bonds)
}

/// `levels[j]` holds the constant sequences over binary strings of length
/// `j + 1`; bonds drop the last bit.
pub fn cantor_identity_tower(depth: usize) -> Result<Tower> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    if depth > 8 {
        return Err(Error::CapExceeded("cantor tower depth above 8".into()));
    }
    let names = |bits: usize| -> Vec<String> { (0..1usize << bits).map(|v| format!("{v:0bits$b}")).collect() };
    let levels = (1..=depth)
        .map(|b| Sft::constant_sequences(names(b)))
        .collect::<Result<Vec<_>>>()?;
    let bonds = (0..depth - 1)
        .map(|i| BlockCode::from_fn(&levels[i + 1], levels[i].alphabet().clone(), 1, |w| w[0] >> 1))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(levels, bonds)
}

/// Finite approximation of a point of the limit: words of a common length,
/// one per level, each the bond image of the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    words: Vec<Word>,
}

impl Thread {
    pub fn new(tower: &Tower, words: Vec<Word>) -> Result<Self> {
        if words.is_empty() || words.len() > tower.depth() {
            return Err(Error::InvalidThread(format!("need 1..={} level words", tower.depth())));
        }
        let len = words[0].len();
        if len == 0 || words.iter().any(|w| w.len() != len) {
            return Err(Error::InvalidThread("level words must share a positive length".into()));
        }
        for (i, w) in words.iter().enumerate() {
            let level = &tower.levels[i];
            if w.iter().any(|&s| s >= level.alphabet().len()) || !blocks(level, len).contains(w) {
                return Err(Error::InvalidThread(format!("level {i} word is not a block")));
            }
            if i + 1 < words.len() && tower.bonds[i].apply_word(&words[i + 1])? != *w {
                return Err(Error::InvalidThread(format!("levels {i} and {} are incompatible", i + 1)));
            }
        }
        Ok(Self { words })
    }

    pub fn depth(&self) -> usize {
        self.words.len()
    }

    pub fn len(&self) -> usize {
        self.words[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn format(&self, tower: &Tower) -> Vec<String> {
        self.words.iter().enumerate().map(|(i, w)| tower.levels[i].alphabet().format_word(w)).collect()
    }
}

/// Applies the shift at every level.
pub fn step_thread(tower: &Tower, th: &Thread) -> Result<Thread> {
    if th.len() < 2 {
        return Err(Error::InvalidThread("cannot shift a thread of length 1".into()));
    }
    Thread::new(tower, th.words.iter().map(|w| w[1..].to_vec()).collect())
}

/// Irreducibility of the trimmed presentation graph.
pub fn transitivity_check(x: &Sft) -> bool {
    let g = x.presentation();
    let n = g.vertices().len();
    if n == 0 {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(s, _, d) in g.edges() {
                let (from, to) = if forward { (s, d) } else { (d, s) };
                if from == v && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        seen.into_iter().all(|b| b)
    };
    reach(true) && reach(false)
}

/// Whether two codes on `x` induce the same map on sequences.
pub fn codes_agree(a: &BlockCode, b: &BlockCode, x: &impl Shift) -> Result<bool> {
    if a.target_alphabet() != b.target_alphabet() {
        return Ok(false);
    }
    let n = a.window().max(b.window());
    Ok(extend_window(a, x, n)?.map() == extend_window(b, x, n)?.map())
}
