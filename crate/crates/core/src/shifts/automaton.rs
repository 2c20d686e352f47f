use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::{Alphabet, Shift, SoficPresentation, Word};

/// Deterministic automaton for the block language of a presentation, by the
/// subset construction started from the set of all (trimmed) vertices.
///
/// Every state accepts; a missing transition leads to the implicit dead state.
#[derive(Debug, Clone)]
pub struct BlockLanguageAutomaton {
    alphabet: Alphabet,
    subsets: Vec<Vec<usize>>,
    delta: Vec<Vec<Option<usize>>>,
}

impl BlockLanguageAutomaton {
    pub fn new(presentation: &SoficPresentation) -> Self {
        let g = presentation.trim();
        let k = g.alphabet().len();
        let start: Vec<usize> = (0..g.vertices().len()).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut subsets = vec![start.clone()];
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        index.insert(start, 0);
        let mut next = 0;
        while next < subsets.len() {
            let mut row = vec![None; k];
            let mut targets: Vec<Vec<usize>> = vec![Vec::new(); k];
            for &v in &subsets[next] {
                for &(_, label, dst) in g.out_edges(v) {
                    targets[label].push(dst);
                }
            }
            for (label, mut t) in targets.into_iter().enumerate() {
                if t.is_empty() {
                    continue;
                }
                t.sort_unstable();
                t.dedup();
                let id = *index.entry(t.clone()).or_insert_with(|| {
                    subsets.push(t);
                    subsets.len() - 1
                });
                row[label] = Some(id);
            }
            delta.push(row);
            next += 1;
        }
        Self { alphabet: g.alphabet().clone(), subsets, delta }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of live states.
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    /// Initial state, or `None` when the shift is empty.
    pub fn start(&self) -> Option<usize> {
        (!self.subsets[0].is_empty()).then_some(0)
    }

    pub fn step(&self, state: usize, symbol: usize) -> Option<usize> {
        self.delta[state][symbol]
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        if word.is_empty() {
            return true;
        }
        let mut s = self.start();
        for &a in word {
            s = s.and_then(|q| self.delta[q].get(a).copied().flatten());
        }
        s.is_some()
    }

    /// Accepted words of length `n`, in lexicographic order.
    pub fn words(&self, n: usize) -> Vec<Word> {
        fn go(a: &BlockLanguageAutomaton, q: usize, left: usize, w: &mut Word, out: &mut Vec<Word>) {
            if left == 0 {
                out.push(w.clone());
                return;
            }
            for (s, t) in a.delta[q].iter().enumerate() {
                if let Some(t) = *t {
                    w.push(s);
                    go(a, t, left - 1, w, out);
                    w.pop();
                }
            }
        }
        let mut out = Vec::new();
        match self.start() {
            Some(q) => go(self, q, n, &mut Vec::new(), &mut out),
            None if n == 0 => out.push(Vec::new()),
            None => {}
        }
        out
    }
}

/// A word in exactly one of two block languages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageDiff {
    pub symbols: Vec<String>,
    /// True when the word belongs to the left language only.
    pub in_left: bool,
}

impl LanguageDiff {
    pub fn word(&self) -> String {
        if self.symbols.iter().all(|s| s.chars().count() == 1) {
            self.symbols.concat()
        } else {
            self.symbols.join(".")
        }
    }
}

impl fmt::Display for LanguageDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = if self.in_left { "left" } else { "right" };
        write!(f, "`{}` occurs only on the {side}", self.word())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftComparison {
    pub equal: bool,
    /// Shortest, then lexicographically least, distinguishing word.
    pub witness: Option<LanguageDiff>,
}

/// Breadth-first search of the product automaton over the union alphabet
/// (left symbols first). `one_sided` only reports words of the left language.
fn compare(x: &BlockLanguageAutomaton, y: &BlockLanguageAutomaton, one_sided: bool) -> ShiftComparison {
    let mut union: Vec<String> = x.alphabet.symbols().to_vec();
    for s in y.alphabet.symbols() {
        if !union.contains(s) {
            union.push(s.clone());
        }
    }
    let xi: Vec<Option<usize>> = union.iter().map(|s| x.alphabet.index_of(s)).collect();
    let yi: Vec<Option<usize>> = union.iter().map(|s| y.alphabet.index_of(s)).collect();
    type Pair = (Option<usize>, Option<usize>);
    let start: Pair = (x.start(), y.start());
    let mut parent: HashMap<Pair, Option<(Pair, usize)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(pair) = queue.pop_front() {
        for a in 0..union.len() {
            let p = pair.0.zip(xi[a]).and_then(|(q, s)| x.delta[q][s]);
            let q = pair.1.zip(yi[a]).and_then(|(q, s)| y.delta[q][s]);
            let next = (p, q);
            let differs = if one_sided { p.is_some() && q.is_none() } else { p.is_some() != q.is_some() };
            if differs {
                let mut word = vec![union[a].clone()];
                let mut cur = pair;
                while let Some(Some((prev, sym))) = parent.get(&cur) {
                    word.push(union[*sym].clone());
                    cur = *prev;
                }
                word.reverse();
                return ShiftComparison {
                    equal: false,
                    witness: Some(LanguageDiff { symbols: word, in_left: p.is_some() }),
                };
            }
            if p.is_none() && q.is_none() || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, Some((pair, a)));
            queue.push_back(next);
        }
    }
    ShiftComparison { equal: true, witness: None }
}

/// Equality of shifts as equality of block languages.
pub fn shift_equal(x: &impl Shift, y: &impl Shift) -> ShiftComparison {
    compare(
        &BlockLanguageAutomaton::new(&x.presentation()),
        &BlockLanguageAutomaton::new(&y.presentation()),
        false,
    )
}

/// Inclusion `x ⊆ y`; the witness is a block of `x` missing from `y`.
pub fn shift_includes(x: &impl Shift, y: &impl Shift) -> ShiftComparison {
    compare(
        &BlockLanguageAutomaton::new(&x.presentation()),
        &BlockLanguageAutomaton::new(&y.presentation()),
        true,
    )
}
