//! One-sided shift spaces: SFTs, sofic presentations, block languages and
//! sliding block codes.

mod amalgam;
mod automaton;
mod code;
mod paths;
mod sft;
mod sofic;

pub use amalgam::{fiber_product, sft_cover, sofic_amalgamate, FiberProduct};
pub use automaton::{shift_equal, shift_includes, BlockLanguageAutomaton, LanguageDiff, ShiftComparison};
pub use code::{
    apply_code, compose_codes, extend_window, verify_factor_code, BlockCode, CodeCheck, CodeFailure,
};
pub use paths::{
    block_system, no_finite_factor_search, path_projection, path_shift, path_shift_unchecked, BlockMap,
    NO_FACTOR_WINDOW_CAP,
};
pub use sft::{higher_block, make_standard, HigherBlock, Sft, StandardShift};
pub use sofic::SoficPresentation;

use std::fmt;

use crate::error::{Error, Result};

/// A word, as indices into an [`Alphabet`].
pub type Word = Vec<usize>;

/// An ordered list of distinct symbol names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Vec<String>);

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.contains(['.', ' ', '\t', '\n', ';', '{', '}', '#']) {
                return Err(Error::InvalidArgument(format!("bad symbol name `{s}`")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self(symbols))
    }

    /// Symbols `"0" .. "n-1"`.
    pub fn numbered(n: usize) -> Self {
        Self((0..n).map(|i| i.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, s: &str) -> Option<usize> {
        self.0.iter().position(|t| t == s)
    }

    fn single_char(&self) -> bool {
        self.0.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a word: `.`-separated symbols, or one symbol per character when
    /// every symbol is a single character.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let tokens: Vec<String> = if text.contains('.') {
            text.split('.').map(str::to_string).collect()
        } else if self.single_char() {
            text.chars().map(String::from).collect()
        } else {
            vec![text.to_string()]
        };
        tokens
            .iter()
            .map(|t| self.index_of(t).ok_or_else(|| Error::UnknownSymbol(t.clone())))
            .collect()
    }

    /// Inverse of [`Alphabet::parse_word`].
    pub fn format_word(&self, word: &[usize]) -> String {
        let sep = if self.single_char() { "" } else { "." };
        word.iter().map(|&i| self.0[i].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Name used for a word when it becomes a symbol of a recoded shift.
    pub fn block_name(&self, word: &[usize]) -> String {
        if self.single_char() {
            self.format_word(word)
        } else {
            let parts: Vec<&str> = word.iter().map(|&i| self.0[i].as_str()).collect();
            format!("<{}>", parts.join("_"))
        }
    }

    /// Re-indexes a word of `self` into `other` by symbol name.
    pub fn translate(&self, word: &[usize], other: &Alphabet) -> Option<Word> {
        word.iter().map(|&i| other.index_of(&self.0[i])).collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

/// Anything with a labeled-graph presentation.
pub trait Shift {
    fn alphabet(&self) -> &Alphabet;
    /// A trimmed presentation whose infinite label sequences are the points.
    fn presentation(&self) -> SoficPresentation;
}

/// `B_n`, in lexicographic order of symbol indices.
pub fn blocks(shift: &impl Shift, n: usize) -> Vec<Word> {
    BlockLanguageAutomaton::new(&shift.presentation()).words(n)
}

/// The partition into length-1 cylinders `[a]` for every symbol that occurs.
pub fn generator_partition(shift: &impl Shift) -> Vec<String> {
    blocks(shift, 1).iter().map(|w| shift.alphabet().symbol(w[0]).to_string()).collect()
}

/// All words of length `n` over `k` symbols, in lexicographic order.
pub(crate) fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}
