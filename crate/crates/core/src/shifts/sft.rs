use std::collections::{BTreeSet, HashMap};

use super::{all_words, blocks, Alphabet, BlockCode, Shift, SoficPresentation, Word};
use crate::error::{Error, Result};

/// A shift of finite type: one-sided sequences avoiding a finite set of words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sft {
    alphabet: Alphabet,
    forbidden: BTreeSet<Word>,
}

impl Sft {
    pub fn new(alphabet: Alphabet, forbidden: impl IntoIterator<Item = Word>) -> Result<Self> {
        let forbidden: BTreeSet<Word> = forbidden.into_iter().collect();
        for w in &forbidden {
            if w.is_empty() {
                return Err(Error::InvalidWord("forbidden words must be nonempty".into()));
            }
            if let Some(&s) = w.iter().find(|&&s| s >= alphabet.len()) {
                return Err(Error::UnknownSymbol(format!("#{s}")));
            }
        }
        Ok(Self { alphabet, forbidden })
    }

    /// Builds an SFT from symbol names and forbidden words in text form.
    pub fn parse(symbols: &[&str], forbidden: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(symbols.iter().copied())?;
        let words = forbidden.iter().map(|w| alphabet.parse_word(w)).collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, words)
    }

    pub fn full<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(Alphabet::new(symbols)?, [])
    }

    pub fn golden_mean() -> Self {
        Self::new(Alphabet::numbered(2), [vec![1, 1]]).expect("valid")
    }

    /// `X_n`: symbols `0..n`, where `a` must be followed by `a + 1 mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic shift needs n >= 1".into()));
        }
        let forbidden = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != (a + 1) % n).map(move |b| vec![a, b]));
        Self::new(Alphabet::numbered(n), forbidden)
    }

    pub fn point() -> Self {
        Self::new(Alphabet::numbered(1), []).expect("valid")
    }

    /// Constant sequences over the given symbols.
    pub fn constant_sequences<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let alphabet = Alphabet::new(symbols)?;
        let k = alphabet.len();
        let forbidden = (0..k).flat_map(|a| (0..k).filter(move |&b| b != a).map(move |b| vec![a, b]));
        Self::new(alphabet, forbidden)
    }

    pub fn forbidden(&self) -> &BTreeSet<Word> {
        &self.forbidden
    }

    /// Longest forbidden word length minus one.
    pub fn memory(&self) -> usize {
        self.forbidden.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// True when no forbidden word occurs in `word`.
    pub fn avoids(&self, word: &[usize]) -> bool {
        self.forbidden
            .iter()
            .all(|f| f.len() > word.len() || !word.windows(f.len()).any(|w| w == f.as_slice()))
    }

    /// Whether the SFT presents no points.
    pub fn is_empty_shift(&self) -> bool {
        self.presentation().vertices().is_empty()
    }
}

impl Shift for Sft {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Vertices are allowed `m`-words with `m = max(memory, 1)`; an edge
    /// `u → v` labeled `u[0]` joins overlapping words whose union is allowed.
    fn presentation(&self) -> SoficPresentation {
        let m = self.memory().max(1);
        let k = self.alphabet.len();
        let vertices: Vec<Word> = all_words(k, m).into_iter().filter(|w| self.avoids(w)).collect();
        let index: HashMap<&Word, usize> = vertices.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut edges = Vec::new();
        let mut ext = Vec::with_capacity(m + 1);
        for (i, u) in vertices.iter().enumerate() {
            for s in 0..k {
                ext.clear();
                ext.extend_from_slice(u);
                ext.push(s);
                if !self.avoids(&ext) {
                    continue;
                }
                if let Some(&j) = index.get(&ext[1..].to_vec()) {
                    edges.push((i, u[0], j));
                }
            }
        }
        let names = vertices.iter().map(|w| self.alphabet.block_name(w)).collect();
        SoficPresentation::from_indexed(names, self.alphabet.clone(), edges)
            .expect("well-formed graph")
            .trim()
    }
}

/// Named standard shifts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StandardShift {
    Full(Vec<String>),
    GoldenMean,
    Cyclic(usize),
    Point,
    ConstantSequences(Vec<String>),
}

impl StandardShift {
    /// Parses `full:a,b`, `golden`, `cyclic:N`, `point` or `constant:a,b`.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, arg) = text.split_once(':').unwrap_or((text, ""));
        let symbols = || -> Vec<String> { arg.split(',').filter(|s| !s.is_empty()).map(String::from).collect() };
        match kind {
            "full" => Ok(Self::Full(symbols())),
            "golden" | "golden_mean" => Ok(Self::GoldenMean),
            "cyclic" => arg
                .parse()
                .map(Self::Cyclic)
                .map_err(|_| Error::InvalidArgument(format!("bad cyclic order `{arg}`"))),
            "point" => Ok(Self::Point),
            "constant" => Ok(Self::ConstantSequences(symbols())),
            _ => Err(Error::InvalidArgument(format!("unknown standard shift `{kind}`"))),
        }
    }
}

pub fn make_standard(kind: &StandardShift) -> Result<Sft> {
    match kind {
        StandardShift::Full(s) => Sft::full(s.iter().cloned()),
        StandardShift::GoldenMean => Ok(Sft::golden_mean()),
        StandardShift::Cyclic(n) => Sft::cyclic(*n),
        StandardShift::Point => Ok(Sft::point()),
        StandardShift::ConstantSequences(s) => Sft::constant_sequences(s.iter().cloned()),
    }
}

/// The `n`-block recoding of an SFT with its two conjugacy codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HigherBlock {
    /// 1-step SFT over `B_n(x)`.
    pub sft: Sft,
    /// Window-`n` code `x → sft`.
    pub encode: BlockCode,
    /// Window-1 code `sft → x` reading the first symbol of a block.
    pub decode: BlockCode,
    /// The block of `x` behind each symbol of `sft`.
    pub blocks: Vec<Word>,
}

pub fn higher_block(x: &Sft, n: usize) -> Result<HigherBlock> {
    if n == 0 || n < x.memory() {
        return Err(Error::InvalidWindow(format!("block length {n} below memory {}", x.memory())));
    }
    let words = blocks(x, n);
    let longer: BTreeSet<Word> = blocks(x, n + 1).into_iter().collect();
    let alphabet = Alphabet::new(words.iter().map(|w| x.alphabet().block_name(w)))?;
    let mut forbidden = Vec::new();
    let mut joined = Vec::with_capacity(n + 1);
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            joined.clear();
            joined.extend_from_slice(u);
            joined.push(v[n - 1]);
            if u[1..] != v[..n - 1] || !longer.contains(&joined) {
                forbidden.push(vec![i, j]);
            }
        }
    }
    let sft = Sft::new(alphabet.clone(), forbidden)?;
    let position: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let encode = BlockCode::from_fn(x, alphabet, n, |w| position[&w.to_vec()])?;
    let decode = BlockCode::from_fn(&sft, x.alphabet().clone(), 1, |w| words[w[0]][0])?;
    Ok(HigherBlock { sft, encode, decode, blocks: words })
}
