use std::fmt;
use std::sync::Arc;

use super::{blocks, Alphabet, BlockCode, Sft, Shift, Word};
use crate::error::{Error, Result};
use crate::systems::{FiniteSystem, Multimap};

/// Largest window accepted by [`no_finite_factor_search`].
pub const NO_FACTOR_WINDOW_CAP: usize = 3;
const NO_FACTOR_CANDIDATE_CAP: u128 = 1 << 24;

/// The 1-step SFT of paths through a system, and the window-1 code reading
/// off the current state.
pub fn path_shift(x_sys: &FiniteSystem) -> Result<(Sft, BlockCode)> {
    if x_sys.is_empty() {
        return Err(Error::TrivialSystem);
    }
    if let Some(d) = x_sys.dead_end() {
        return Err(Error::NotTotal(x_sys.name(d).to_string()));
    }
    path_shift_unchecked(x_sys)
}

/// [`path_shift`] without the totality requirement; dead ends are simply
/// trimmed away.
pub fn path_shift_unchecked(x_sys: &FiniteSystem) -> Result<(Sft, BlockCode)> {
    let n = x_sys.len();
    let alphabet = Alphabet::new(x_sys.states().iter().cloned())?;
    let forbidden = (0..n).flat_map(|a| (0..n).filter(move |&b| !x_sys.has_edge(a, b)).map(move |b| vec![a, b]));
    let sft = Sft::new(alphabet.clone(), forbidden)?;
    let code = BlockCode::from_fn(&sft, alphabet, 1, |w| w[0])?;
    Ok((sft, code))
}

/// Finite truncation of a shift: states are the blocks of length `m`, with
/// `u → v` when they overlap in `m − 1` symbols and together form a block.
pub fn block_system(x: &impl Shift, m: usize) -> Result<(FiniteSystem, Vec<Word>)> {
    if m == 0 {
        return Err(Error::InvalidWindow("truncation length must be at least 1".into()));
    }
    let words = blocks(x, m);
    let longer: std::collections::BTreeSet<Word> = blocks(x, m + 1).into_iter().collect();
    let names: Vec<String> = words.iter().map(|w| x.alphabet().format_word(w)).collect();
    let mut edges = Vec::new();
    let mut joined = Vec::with_capacity(m + 1);
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            joined.clear();
            joined.extend_from_slice(u);
            joined.push(v[m - 1]);
            if u[1..] == v[..m - 1] && longer.contains(&joined) {
                edges.push((i, j));
            }
        }
    }
    let sys = FiniteSystem::from_indexed(names.clone(), edges)?;
    // from_indexed sorts by name; reorder the words to match.
    let ordered = sys
        .states()
        .iter()
        .map(|s| words[names.iter().position(|n| n == s).expect("present")].clone())
        .collect();
    Ok((sys, ordered))
}

/// The map from the length-`m` truncation of a path shift to the system,
/// reading the first symbol of each block.
pub fn path_projection(x_sys: &Arc<FiniteSystem>, sft: &Sft, m: usize) -> Result<Multimap> {
    let (trunc, words) = block_system(sft, m)?;
    let values: Vec<usize> = words
        .iter()
        .map(|w| x_sys.index_of(sft.alphabet().symbol(w[0])).ok_or_else(|| Error::UnknownState(sft.alphabet().symbol(w[0]).into())))
        .collect::<Result<_>>()?;
    Multimap::from_function(Arc::new(trunc), x_sys.clone(), &values)
}

/// A map from binary words of length `k` to states, indexed by the word read
/// as a binary number (first symbol most significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    pub k: usize,
    pub values: Vec<usize>,
}

impl BlockMap {
    pub fn apply(&self, word: &[usize]) -> usize {
        self.values[word.iter().fold(0, |acc, &b| acc << 1 | b)]
    }

    pub fn describe(&self, y: &FiniteSystem) -> String {
        self.values
            .iter()
            .enumerate()
            .map(|(code, &v)| format!("{:0w$b}->{}", code, y.name(v), w = self.k))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for BlockMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.values)
    }
}

/// Every `k`-block map from the full 2-shift onto a deterministic system
/// `(Y, S)` that is equivariant (`φ(w[1..]) = S(φ(w[..k]))` on all
/// `(k+1)`-words) and surjective.
pub fn no_finite_factor_search(k: usize, y: &FiniteSystem) -> Result<Vec<BlockMap>> {
    if k == 0 {
        return Err(Error::InvalidWindow("window must be at least 1".into()));
    }
    if k > NO_FACTOR_WINDOW_CAP {
        return Err(Error::CapExceeded(format!("window {k} above cap {NO_FACTOR_WINDOW_CAP}")));
    }
    if y.is_empty() {
        return Err(Error::TrivialSystem);
    }
    if !y.is_deterministic() {
        return Err(Error::NotDeterministic("no_finite_factor_search needs a deterministic target".into()));
    }
    let words = 1usize << k;
    let m = y.len();
    if (m as u128).checked_pow(words as u32).is_none_or(|c| c > NO_FACTOR_CANDIDATE_CAP) {
        return Err(Error::CapExceeded(format!("{m}^{words} candidate maps")));
    }
    let next: Vec<Option<usize>> = (0..m).map(|s| y.successors(s).first().copied()).collect();
    let mask = words - 1;
    let mut found = Vec::new();
    let mut values = vec![0usize; words];
    loop {
        let equivariant = (0..words << 1).all(|u| next[values[u >> 1]] == Some(values[u & mask]));
        if equivariant {
            let mut hit = vec![false; m];
            values.iter().for_each(|&v| hit[v] = true);
            if hit.iter().all(|&h| h) {
                found.push(BlockMap { k, values: values.clone() });
            }
        }
        // Odometer increment, last word fastest.
        let mut i = words;
        loop {
            if i == 0 {
                return Ok(found);
            }
            i -= 1;
            values[i] += 1;
            if values[i] < m {
                break;
            }
            values[i] = 0;
        }
    }
}
