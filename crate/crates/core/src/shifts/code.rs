use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{blocks, shift_includes, Alphabet, Shift, SoficPresentation, Word};
use crate::error::{Error, Result};

/// A sliding block code with window `N`: the image of a point `x` is
/// `φ(x[0..N]) φ(x[1..N+1]) …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockCode {
    source: Alphabet,
    target: Alphabet,
    window: usize,
    map: BTreeMap<Word, usize>,
}

impl BlockCode {
    /// Checks that `map` is defined on every block of length `window` of `x`.
    pub fn new(x: &impl Shift, target: Alphabet, window: usize, map: BTreeMap<Word, usize>) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidWindow("window must be at least 1".into()));
        }
        for (w, &s) in &map {
            if w.len() != window || w.iter().any(|&a| a >= x.alphabet().len()) {
                return Err(Error::InvalidWord(format!("bad code entry {w:?}")));
            }
            if s >= target.len() {
                return Err(Error::UnknownSymbol(format!("#{s}")));
            }
        }
        let code = Self { source: x.alphabet().clone(), target, window, map };
        code.check_defined_on(x)?;
        Ok(code)
    }

    /// Tabulates `f` on `B_window(x)`.
    pub fn from_fn(x: &impl Shift, target: Alphabet, window: usize, f: impl Fn(&[usize]) -> usize) -> Result<Self> {
        Self::try_from_fn(x, target, window, |w| Ok(f(w)))
    }

    pub fn try_from_fn(
        x: &impl Shift,
        target: Alphabet,
        window: usize,
        f: impl Fn(&[usize]) -> Result<usize>,
    ) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidWindow("window must be at least 1".into()));
        }
        let map = blocks(x, window).into_iter().map(|w| f(&w).map(|s| (w, s))).collect::<Result<_>>()?;
        Self::new(x, target, window, map)
    }

    pub fn identity(x: &impl Shift) -> Self {
        Self::from_fn(x, x.alphabet().clone(), 1, |w| w[0]).expect("identity is total")
    }

    pub fn constant(x: &impl Shift, target: Alphabet, symbol: usize) -> Result<Self> {
        if symbol >= target.len() {
            return Err(Error::UnknownSymbol(format!("#{symbol}")));
        }
        Self::from_fn(x, target, 1, |_| symbol)
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn source_alphabet(&self) -> &Alphabet {
        &self.source
    }

    pub fn target_alphabet(&self) -> &Alphabet {
        &self.target
    }

    pub fn map(&self) -> &BTreeMap<Word, usize> {
        &self.map
    }

    pub fn get(&self, block: &[usize]) -> Option<usize> {
        self.map.get(block).copied()
    }

    /// Induced word map; a word of length `L ≥ N` yields `L − N + 1` symbols.
    pub fn apply_word(&self, word: &[usize]) -> Result<Word> {
        if word.len() < self.window {
            return Ok(Vec::new());
        }
        word.windows(self.window)
            .map(|w| self.get(w).ok_or_else(|| Error::CodeUndefined(self.source.format_word(w))))
            .collect()
    }

    pub fn check_defined_on(&self, x: &impl Shift) -> Result<()> {
        if x.alphabet() != &self.source {
            return Err(Error::AlphabetMismatch("code source differs from the shift's alphabet".into()));
        }
        for w in blocks(x, self.window) {
            if !self.map.contains_key(&w) {
                return Err(Error::CodeUndefined(self.source.format_word(&w)));
            }
        }
        Ok(())
    }
}

/// Presentation of the image of `x` under `code`: vertices are paths of
/// `N − 1` edges in the trimmed presentation of `x`, and each extension by one
/// edge is labeled by the code applied to the `N` labels read.
pub fn apply_code(code: &BlockCode, x: &impl Shift) -> Result<SoficPresentation> {
    code.check_defined_on(x)?;
    let g = x.presentation();
    let n = code.window;
    let mut edges = Vec::new();
    if n == 1 {
        for &(s, l, d) in g.edges() {
            edges.push((s, code.map[&vec![l]], d));
        }
        return SoficPresentation::from_indexed(g.vertices().to_vec(), code.target.clone(), edges);
    }
    // All paths of n - 1 edges, as edge-index lists.
    let mut paths: Vec<Vec<usize>> = (0..g.edges().len()).map(|e| vec![e]).collect();
    for _ in 1..n - 1 {
        paths = paths
            .into_iter()
            .flat_map(|p| {
                let end = g.edges()[*p.last().unwrap()].2;
                let start = g.edges().partition_point(|e| e.0 < end);
                g.edges()[start..]
                    .iter()
                    .take_while(move |e| e.0 == end)
                    .enumerate()
                    .map(move |(k, _)| {
                        let mut q = p.clone();
                        q.push(start + k);
                        q
                    })
            })
            .collect();
    }
    let index: HashMap<&Vec<usize>, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut word = Vec::with_capacity(n);
    for (i, p) in paths.iter().enumerate() {
        let end = g.edges()[*p.last().unwrap()].2;
        for (k, &(_, l, _)) in g.out_edges(end).enumerate() {
            let e = g.edges().partition_point(|e| e.0 < end) + k;
            word.clear();
            word.extend(p.iter().map(|&e| g.edges()[e].1));
            word.push(l);
            let label = code.get(&word).ok_or_else(|| Error::CodeUndefined(code.source.format_word(&word)))?;
            let mut q = p[1..].to_vec();
            q.push(e);
            edges.push((i, label, index[&q]));
        }
    }
    let names = (0..paths.len()).map(|i| format!("p{i}")).collect();
    Ok(SoficPresentation::from_indexed(names, code.target.clone(), edges)?.trim())
}

/// The window-`n` code inducing the same map as `code`: `w ↦ φ(w[..N])`.
pub fn extend_window(code: &BlockCode, x: &impl Shift, n: usize) -> Result<BlockCode> {
    if n < code.window {
        return Err(Error::InvalidWindow(format!("cannot shrink window {} to {n}", code.window)));
    }
    code.check_defined_on(x)?;
    let w = code.window;
    BlockCode::from_fn(x, code.target.clone(), n, |b| code.map[&b[..w]])
}

/// `second ∘ first` as a code on `x` with window `N + M − 1`.
pub fn compose_codes(first: &BlockCode, second: &BlockCode, x: &impl Shift) -> Result<BlockCode> {
    if first.target != second.source {
        return Err(Error::AlphabetMismatch("inner code target differs from outer code source".into()));
    }
    first.check_defined_on(x)?;
    let window = first.window + second.window - 1;
    BlockCode::try_from_fn(x, second.target.clone(), window, |w| {
        let mid = first.apply_word(w)?;
        second.apply_word(&mid).map(|v| v[0])
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeFailure {
    /// The image contains this block, which the target lacks.
    LeavesTarget(String),
    /// The target has this block, which the image never produces.
    NotOnto(String),
}

impl fmt::Display for CodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LeavesTarget(w) => write!(f, "image contains `{w}`, which is not a block of the target"),
            Self::NotOnto(w) => write!(f, "target block `{w}` is not attained"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeCheck {
    pub holds: bool,
    pub failure: Option<CodeFailure>,
}

impl CodeCheck {
    pub fn witness(&self) -> Option<&str> {
        match &self.failure {
            Some(CodeFailure::LeavesTarget(w) | CodeFailure::NotOnto(w)) => Some(w),
            None => None,
        }
    }
}

/// Whether `code` maps `x` onto `y`, by block-language inclusion both ways.
pub fn verify_factor_code(code: &BlockCode, x: &impl Shift, y: &impl Shift) -> Result<CodeCheck> {
    let image = apply_code(code, x)?;
    if let Some(w) = shift_includes(&image, y).witness {
        return Ok(CodeCheck { holds: false, failure: Some(CodeFailure::LeavesTarget(w.word())) });
    }
    if let Some(w) = shift_includes(y, &image).witness {
        return Ok(CodeCheck { holds: false, failure: Some(CodeFailure::NotOnto(w.word())) });
    }
    Ok(CodeCheck { holds: true, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shifts::{shift_equal, Sft};

    fn full2() -> Sft {
        Sft::full(["0", "1"]).unwrap()
    }

    fn xor(x: &Sft) -> BlockCode {
        BlockCode::from_fn(x, Alphabet::numbered(2), 2, |w| w[0] ^ w[1]).unwrap()
    }

    #[test]
    fn images() {
        let gm = Sft::golden_mean();
        let id = BlockCode::identity(&gm);
        assert!(shift_equal(&apply_code(&id, &gm).unwrap(), &gm).equal);

        let full = full2();
        let img = apply_code(&xor(&full), &full).unwrap();
        assert_eq!(blocks(&img, 6).len(), 64);

        let c = BlockCode::constant(&gm, Alphabet::numbered(1), 0).unwrap();
        assert!(shift_equal(&apply_code(&c, &gm).unwrap(), &Sft::point()).equal);
    }

    #[test]
    fn extended_windows_induce_same_map() {
        let gm = Sft::golden_mean();
        let id2 = extend_window(&BlockCode::identity(&gm), &gm, 2).unwrap();
        assert_eq!(id2.get(&[1, 0]), Some(1));
        assert_eq!(id2.get(&[0, 1]), Some(0));

        let full = full2();
        let x3 = extend_window(&xor(&full), &full, 3).unwrap();
        for w in blocks(&full, 6) {
            let a = xor(&full).apply_word(&w).unwrap();
            let b = x3.apply_word(&w).unwrap();
            assert_eq!(a[..b.len()], b[..]);
        }
        let c = BlockCode::constant(&gm, Alphabet::numbered(1), 0).unwrap();
        assert!(extend_window(&c, &gm, 3).unwrap().map().values().all(|&s| s == 0));
        assert!(matches!(extend_window(&x3, &full, 2), Err(Error::InvalidWindow(_))));
    }

    #[test]
    fn factor_verification() {
        let gm = Sft::golden_mean();
        let c = BlockCode::constant(&gm, Alphabet::numbered(1), 0).unwrap();
        assert!(verify_factor_code(&c, &gm, &Sft::point()).unwrap().holds);

        let check = verify_factor_code(&BlockCode::identity(&gm), &gm, &full2()).unwrap();
        assert_eq!(check.failure, Some(CodeFailure::NotOnto("11".into())));

        let full = full2();
        assert!(verify_factor_code(&xor(&full), &full, &full).unwrap().holds);

        let check = verify_factor_code(&BlockCode::identity(&full), &full, &gm).unwrap();
        assert_eq!(check.failure, Some(CodeFailure::LeavesTarget("11".into())));
    }

    #[test]
    fn composition_window_and_map() {
        let full = full2();
        let xx = compose_codes(&xor(&full), &xor(&full), &full).unwrap();
        assert_eq!(xx.window(), 3);
        // (a^b)^(b^c) = a^c
        for w in blocks(&full, 3) {
            assert_eq!(xx.get(&w), Some(w[0] ^ w[2]));
        }
    }

    #[test]
    fn undefined_code_rejected() {
        let full = full2();
        let mut map = BTreeMap::new();
        map.insert(vec![0], 0);
        assert_eq!(
            BlockCode::new(&full, Alphabet::numbered(1), 1, map).unwrap_err(),
            Error::CodeUndefined("1".into())
        );
    }
}
