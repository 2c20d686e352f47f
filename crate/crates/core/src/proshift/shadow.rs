use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::shifts::{blocks, BlockLanguageAutomaton, Sft, Shift, Word};

/// Points of a pseudo-orbit at `δ = 2^{-k}` are blocks of length `k + HORIZON_MARGIN`.
pub const HORIZON_MARGIN: usize = 4;

/// Length of the longest common prefix; the distance is `2^{-lcp}`.
pub fn distance_exponent(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// `d(a, b) < 2^{-k}`.
fn within(a: &[usize], b: &[usize], k: usize) -> bool {
    distance_exponent(a, b) > k
}

/// A `2^{-k}`-pseudo-orbit given by cylinder representatives of length `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoOrbit {
    level: Sft,
    points: Vec<Word>,
    k: usize,
}

impl PseudoOrbit {
    /// Checks `d(σ p_t, p_{t+1}) < 2^{-k}` for each consecutive pair.
    pub fn new(level: Sft, points: Vec<Word>, k: usize) -> Result<Self> {
        let h = k + HORIZON_MARGIN;
        if points.is_empty() {
            return Err(Error::InvalidArgument("a pseudo-orbit needs at least one point".into()));
        }
        let allowed: HashSet<Word> = blocks(&level, h).into_iter().collect();
        for (t, p) in points.iter().enumerate() {
            if p.len() != h || !allowed.contains(p) {
                return Err(Error::InvalidWord(format!("point {t} is not a block of length {h}")));
            }
        }
        for (t, pair) in points.windows(2).enumerate() {
            if !within(&pair[0][1..], &pair[1], k) {
                return Err(Error::InvalidArgument(format!("step {t} exceeds delta = 2^-{k}")));
            }
        }
        Ok(Self { level, points, k })
    }

    pub fn level(&self) -> &Sft {
        &self.level
    }

    pub fn points(&self) -> &[Word] {
        &self.points
    }

    /// `δ = 2^{-k}`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn horizon(&self) -> usize {
        self.k + HORIZON_MARGIN
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A seeded random `2^{-k}`-pseudo-orbit with `len` points: each point agrees
/// with the shifted predecessor on `k + 1` symbols, the rest is redrawn.
pub fn pseudo_orbit(x: &Sft, k: usize, len: usize, seed: u64) -> Result<PseudoOrbit> {
    let h = k + HORIZON_MARGIN;
    let words = blocks(x, h);
    if words.is_empty() {
        return Err(Error::EmptyShift(format!("no blocks of length {h}")));
    }
    let mut by_prefix: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        by_prefix.entry(&w[..k + 1]).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(len);
    if len > 0 {
        points.push(words[rng.gen_range(0..words.len())].clone());
    }
    while points.len() < len {
        let prev = points.last().unwrap();
        let options = &by_prefix[&prev[1..k + 2]];
        points.push(words[options[rng.gen_range(0..options.len())]].clone());
    }
    PseudoOrbit::new(x.clone(), points, k)
}

/// The orbit of a single word, cut into windows of length `k + HORIZON_MARGIN`.
pub fn exact_orbit(x: &Sft, word: &[usize], k: usize) -> Result<PseudoOrbit> {
    let h = k + HORIZON_MARGIN;
    if word.len() < h {
        return Err(Error::InvalidWord(format!("orbit word shorter than {h}")));
    }
    let points = (0..=word.len() - h).map(|t| word[t..t + h].to_vec()).collect();
    PseudoOrbit::new(x.clone(), points, k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShadowResult {
    /// A block `w` of length `len + H` with `d(σ^t w, p_t) < ε` for every `t`.
    Found(Word),
    NotFound,
    /// `ε` is finer than the point representatives can resolve.
    HorizonLimited,
}

/// Searches for a single block whose shifts stay `2^{-m}`-close to the points.
///
/// Positions fixed by some point are forced; free positions prefer the symbol
/// of the latest point covering them, then ascending symbols.
pub fn shadow(x: &Sft, po: &PseudoOrbit, m: usize) -> Result<ShadowResult> {
    let h = po.horizon();
    if m + 1 > h {
        return Ok(ShadowResult::HorizonLimited);
    }
    let len = po.len();
    let total = len + h;
    let mut forced: Vec<Option<usize>> = vec![None; total];
    let mut hint: Vec<Option<usize>> = vec![None; total];
    for (t, p) in po.points().iter().enumerate() {
        for (i, &s) in p.iter().enumerate() {
            hint[t + i] = Some(s);
            if i <= m {
                match forced[t + i] {
                    Some(prev) if prev != s => return Ok(ShadowResult::NotFound),
                    _ => forced[t + i] = Some(s),
                }
            }
        }
    }
    let dfa = BlockLanguageAutomaton::new(&x.presentation());
    let Some(start) = dfa.start() else {
        return Ok(ShadowResult::NotFound);
    };
    let mut search = Search {
        dfa: &dfa,
        forced: &forced,
        hint: &hint,
        k: x.alphabet().len(),
        dead: HashSet::new(),
        word: Vec::with_capacity(total),
    };
    if search.run(0, start) {
        Ok(ShadowResult::Found(search.word))
    } else {
        Ok(ShadowResult::NotFound)
    }
}

/// Depth-first search over positions, memoizing dead `(position, state)` pairs.
struct Search<'a> {
    dfa: &'a BlockLanguageAutomaton,
    forced: &'a [Option<usize>],
    hint: &'a [Option<usize>],
    k: usize,
    dead: HashSet<(usize, usize)>,
    word: Word,
}

impl Search<'_> {
    fn run(&mut self, pos: usize, q: usize) -> bool {
        if pos == self.forced.len() {
            return true;
        }
        if self.dead.contains(&(pos, q)) {
            return false;
        }
        let hint = self.hint[pos];
        let order: Vec<usize> = match self.forced[pos] {
            Some(s) => vec![s],
            None => hint.into_iter().chain((0..self.k).filter(|&s| Some(s) != hint)).collect(),
        };
        for s in order {
            if let Some(next) = self.dfa.step(q, s) {
                self.word.push(s);
                if self.run(pos + 1, next) {
                    return true;
                }
                self.word.pop();
            }
        }
        self.dead.insert((pos, q));
        false
    }
}

/// Direct check of a shadow: `w` is a block of the level and every shift
/// `σ^t w` is within `2^{-m}` of `p_t`.
pub fn shadow_is_valid(po: &PseudoOrbit, w: &[usize], m: usize) -> bool {
    let dfa = BlockLanguageAutomaton::new(&po.level().presentation());
    dfa.accepts(w)
        && w.len() >= po.len()
        && po.points().iter().enumerate().all(|(t, p)| {
            let d = 0.5f64.powi(distance_exponent(&w[t..], p) as i32);
            d < 0.5f64.powi(m as i32)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mean_pseudo_orbit() {
        let gm = Sft::golden_mean();
        let po = pseudo_orbit(&gm, 3, 32, 7).unwrap();
        assert_eq!(po.len(), 32);
        assert_eq!(po.horizon(), 7);
        assert_eq!(po, pseudo_orbit(&gm, 3, 32, 7).unwrap());
        assert!(PseudoOrbit::new(gm, po.points().to_vec(), 3).is_ok());
    }

    #[test]
    fn exact_orbits_are_valid_for_every_delta() {
        let gm = Sft::golden_mean();
        let word: Word = [0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 1].to_vec();
        for k in 0..=6 {
            let po = exact_orbit(&gm, &word, k).unwrap();
            if let ShadowResult::Found(w) = shadow(&gm, &po, k.min(3)).unwrap() {
                assert_eq!(w[..word.len()], word[..]);
                assert!(shadow_is_valid(&po, &w, k.min(3)));
            } else {
                panic!("exact orbit not shadowed");
            }
        }
    }

    #[test]
    fn shadow_found_and_valid() {
        let gm = Sft::golden_mean();
        let po = pseudo_orbit(&gm, 3, 32, 7).unwrap();
        let ShadowResult::Found(w) = shadow(&gm, &po, 1).unwrap() else { panic!("no shadow") };
        assert_eq!(w.len(), 32 + 7);
        assert!(shadow_is_valid(&po, &w, 1));
    }

    #[test]
    fn horizon_limit() {
        let gm = Sft::golden_mean();
        let po = pseudo_orbit(&gm, 3, 8, 1).unwrap();
        assert_eq!(shadow(&gm, &po, 7).unwrap(), ShadowResult::HorizonLimited);
    }

    #[test]
    fn off_orbit_points_rejected() {
        let gm = Sft::golden_mean();
        let p = vec![vec![0, 0, 0, 0, 0], vec![1, 0, 0, 0, 0]];
        assert!(PseudoOrbit::new(gm, p, 1).is_err());
    }
}
