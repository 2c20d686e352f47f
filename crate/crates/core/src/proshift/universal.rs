use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use super::{codes_agree, Tower};
use crate::error::{Error, Result};
use crate::fraisse::TaskKey;
use crate::shifts::{
    all_words, blocks, compose_codes, fiber_product, verify_factor_code, Alphabet, BlockCode, Sft, Shift, Word,
};

const IDLE_ROUND_LIMIT: usize = 16;

/// Bounds for [`bounded_universal_tower`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalCaps {
    /// Task SFTs use the symbols `0..k` for `k ≤ alphabet` (at most 3).
    pub alphabet: usize,
    /// Longest forbidden word of a task SFT (at most 3).
    pub forbidden_len: usize,
    /// Largest window of a task code (at most 2).
    pub window: usize,
    /// Number of tasks to pop (served or skipped).
    pub budget: usize,
    /// Levels whose alphabet would exceed this are skipped.
    pub level_alphabet_cap: usize,
    /// Largest number of candidate maps tried in one code search.
    pub candidate_cap: u128,
}

impl Default for UniversalCaps {
    fn default() -> Self {
        Self { alphabet: 2, forbidden_len: 2, window: 1, budget: 4, level_alphabet_cap: 32, candidate_cap: 1 << 16 }
    }
}

impl UniversalCaps {
    pub fn new(alphabet: usize, forbidden_len: usize, window: usize, budget: usize) -> Self {
        Self { alphabet, forbidden_len, window, budget, ..Self::default() }
    }

    fn check(&self) -> Result<()> {
        if !(1..=3).contains(&self.alphabet) || !(1..=3).contains(&self.forbidden_len) || !(1..=2).contains(&self.window) {
            return Err(Error::InvalidArgument(
                "caps must satisfy alphabet in 1..=3, forbidden length in 1..=3, window in 1..=2".into(),
            ));
        }
        let words: usize = (1..=self.forbidden_len).map(|l| self.alphabet.pow(l as u32)).sum();
        if words > 14 {
            return Err(Error::CapExceeded(format!("{words} candidate forbidden words")));
        }
        Ok(())
    }
}

/// One amalgamation obligation over shifts: `g : levels[stage] → a`, `h : b → a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftTask {
    pub key: TaskKey,
    pub stage: usize,
    pub a: Sft,
    pub b: Sft,
    pub g: BlockCode,
    pub h: BlockCode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerLogEntry {
    /// `witness : levels[depth] → b` completes the square.
    Served { task: Box<ShiftTask>, depth: usize, witness: BlockCode },
    Skipped { key: TaskKey, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalTower {
    pub tower: Tower,
    pub log: Vec<TowerLogEntry>,
}

impl UniversalTower {
    pub fn served(&self) -> impl Iterator<Item = (&ShiftTask, usize, &BlockCode)> {
        self.log.iter().filter_map(|e| match e {
            TowerLogEntry::Served { task, depth, witness } => Some((&**task, *depth, witness)),
            TowerLogEntry::Skipped { .. } => None,
        })
    }
}

/// Factor codes `x → a` with window up to `window_cap`, by window and then
/// lexicographically by the values on `B_window(x)`; values range over the
/// symbols that occur in `a`.
fn factor_codes(x: &Sft, a: &Sft, window_cap: usize, candidate_cap: u128, limit: usize) -> Result<Vec<BlockCode>> {
    let m = a.alphabet().len();
    let mut out;
    let needed: BTreeSet<usize> = blocks(a, 1).into_iter().map(|w| w[0]).collect();
    let a_symbols: Vec<usize> = needed.iter().copied().collect();
    let choices = vec![a_symbols; blocks(x, 1).len()];
    out = window_one_search(x, a, &choices, candidate_cap, limit, |c| {
        let hit: BTreeSet<usize> = c.map().values().copied().collect();
        Ok(needed.is_subset(&hit) && verify_factor_code(c, x, a)?.holds)
    })?;
    for window in 2..=window_cap {
        if out.len() >= limit {
            break;
        }
        let dom = blocks(x, window);
        let count = (m as u128).checked_pow(dom.len() as u32);
        if count.is_none_or(|c| c > candidate_cap) {
            return Err(Error::CapExceeded(format!("{m}^{} candidate codes", dom.len())));
        }
        let mut values = vec![0usize; dom.len()];
        loop {
            let hit: BTreeSet<usize> = values.iter().copied().collect();
            if needed.is_subset(&hit) && !reads_first_only(&dom, &values) {
                let map: BTreeMap<Word, usize> = dom.iter().cloned().zip(values.iter().copied()).collect();
                let code = BlockCode::new(x, a.alphabet().clone(), window, map)?;
                if verify_factor_code(&code, x, a)?.holds {
                    out.push(code);
                    if out.len() >= limit {
                        return Ok(out);
                    }
                }
            }
            if !next_values(&mut values, m) {
                break;
            }
        }
    }
    Ok(out)
}

/// Whether the values only depend on the first symbol of each block, so the
/// code already appeared with a smaller window.
fn reads_first_only(dom: &[Word], values: &[usize]) -> bool {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    dom.iter().zip(values).all(|(w, &v)| *seen.entry(w[0]).or_insert(v) == v)
}

/// Odometer step over `0..m`; false after wrapping to all zeros.
fn next_values(values: &mut [usize], m: usize) -> bool {
    for v in values.iter_mut().rev() {
        *v += 1;
        if *v < m {
            return true;
        }
        *v = 0;
    }
    false
}

struct Triple {
    a_id: (usize, usize),
    a: Sft,
    b: Sft,
    h: BlockCode,
}

/// Lazily generated `(a, b, h)` triples ordered by alphabet sizes, SFT
/// indices and code rank; the identity on a single SFT is left out.
struct ShiftCatalog {
    caps: UniversalCaps,
    sfts: Vec<Option<Vec<Sft>>>,
    triples: Vec<Triple>,
    cursor: (usize, usize, usize, usize),
    done: bool,
}

impl ShiftCatalog {
    fn new(caps: &UniversalCaps) -> Self {
        Self { caps: caps.clone(), sfts: vec![None; caps.alphabet + 1], triples: Vec::new(), cursor: (1, 1, 0, 0), done: false }
    }

    /// Nonempty SFTs on `0..k` using every symbol, one per shift, ordered by
    /// the subset rank of their forbidden set. Shifts with memory below the
    /// forbidden-length cap `L` are equal iff their `L`-blocks agree.
    fn sfts(&mut self, k: usize) -> Result<&[Sft]> {
        if self.sfts[k].is_none() {
            let len = self.caps.forbidden_len;
            let words: Vec<Word> = (1..=len).flat_map(|l| all_words(k, l)).collect();
            let mut seen: HashSet<Vec<Word>> = HashSet::new();
            let mut list = Vec::new();
            for mask in 0u32..1 << words.len() {
                let forbidden = words.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| w.clone());
                let sft = Sft::new(Alphabet::numbered(k), forbidden)?;
                if blocks(&sft, 1).len() != k {
                    continue;
                }
                if seen.insert(blocks(&sft, len)) {
                    list.push(sft);
                }
            }
            self.sfts[k] = Some(list);
        }
        Ok(self.sfts[k].as_deref().unwrap())
    }

    fn get(&mut self, p: usize) -> Result<Option<&Triple>> {
        while self.triples.len() <= p && !self.done {
            self.advance()?;
        }
        Ok(self.triples.get(p))
    }

    fn advance(&mut self) -> Result<()> {
        let cap = self.caps.alphabet;
        let (ka, kb, ai, bi) = self.cursor;
        if ka > cap {
            self.done = true;
            return Ok(());
        }
        let na = self.sfts(ka)?.len();
        let nb = self.sfts(kb)?.len();
        self.cursor = if bi + 1 < nb {
            (ka, kb, ai, bi + 1)
        } else if ai + 1 < na {
            (ka, kb, ai + 1, 0)
        } else if kb < cap {
            (ka, kb + 1, 0, 0)
        } else {
            (ka + 1, 1, 0, 0)
        };
        let a = self.sfts(ka)?[ai].clone();
        let b = self.sfts(kb)?[bi].clone();
        let same = ka == kb && ai == bi;
        let codes = match factor_codes(&b, &a, self.caps.window, self.caps.candidate_cap, usize::MAX) {
            Ok(c) => c,
            Err(Error::CapExceeded(_)) => return Ok(()),
            Err(e) => return Err(e),
        };
        for h in codes {
            if same && h == BlockCode::identity(&b) {
                continue;
            }
            self.triples.push(Triple { a_id: (ka, ai), a: a.clone(), b: b.clone(), h });
        }
        Ok(())
    }
}

/// Upper bound on the alphabet of the fiber product of `g` and `h`: exact
/// for window-1 codes, the full product otherwise.
fn amalgam_size(g: &BlockCode, h: &BlockCode, y0: &Sft, y1: &Sft) -> usize {
    if g.window() > 1 || h.window() > 1 {
        return y0.alphabet().len() * y1.alphabet().len();
    }
    let mut fibre = vec![0usize; g.target_alphabet().len()];
    for w in blocks(y1, 1) {
        fibre[h.map()[&w]] += 1;
    }
    blocks(y0, 1).iter().map(|w| fibre[g.map()[w]]).sum()
}

/// Drops symbols that never occur.
fn restrict_to_used(x: &Sft) -> Result<(Sft, Vec<usize>)> {
    let used: Vec<usize> = blocks(x, 1).into_iter().map(|w| w[0]).collect();
    let mut new_index = vec![usize::MAX; x.alphabet().len()];
    for (i, &s) in used.iter().enumerate() {
        new_index[s] = i;
    }
    let alphabet = Alphabet::new(used.iter().map(|&s| x.alphabet().symbol(s).to_string()))?;
    let forbidden = x
        .forbidden()
        .iter()
        .filter(|w| w.iter().all(|&s| new_index[s] != usize::MAX))
        .map(|w| w.iter().map(|&s| new_index[s]).collect());
    Ok((Sft::new(alphabet, forbidden)?, used))
}

/// Codes found so far and whether the search finished.
type CodeCacheEntry = (Vec<BlockCode>, bool);

enum Resolved {
    Task(Box<ShiftTask>),
    Skip(String),
    Invalid,
    Defer,
}

struct Builder {
    caps: UniversalCaps,
    catalog: ShiftCatalog,
    tower: Tower,
    log: Vec<TowerLogEntry>,
    round: usize,
    queue: VecDeque<TaskKey>,
    deferred: BTreeSet<TaskKey>,
    code_cache: HashMap<(usize, (usize, usize)), CodeCacheEntry>,
    idle_rounds: usize,
    round_productive: bool,
}

impl Builder {
    fn next_key(&mut self) -> Option<TaskKey> {
        let depth = self.tower.depth();
        if let Some(&k) = self.deferred.iter().find(|k| k.stage < depth) {
            self.deferred.remove(&k);
            return Some(k);
        }
        loop {
            if let Some(k) = self.queue.pop_front() {
                return Some(k);
            }
            if self.round_productive {
                self.idle_rounds = 0;
            } else {
                self.idle_rounds += 1;
            }
            if self.idle_rounds > IDLE_ROUND_LIMIT {
                return None;
            }
            self.round_productive = false;
            self.round += 1;
            let r = self.round;
            for i in 0..=r {
                for p in 0..=r {
                    for k in 0..=r {
                        if i.max(p).max(k) == r {
                            self.queue.push_back(TaskKey::new(i, p, k));
                        }
                    }
                }
            }
        }
    }

    fn resolve(&mut self, key: TaskKey) -> Result<Resolved> {
        let Some(triple) = self.catalog.get(key.triple)? else {
            return Ok(Resolved::Invalid);
        };
        if key.stage >= self.tower.depth() {
            return Ok(Resolved::Defer);
        }
        let (a, b, h, a_id) = (triple.a.clone(), triple.b.clone(), triple.h.clone(), triple.a_id);
        let level = self.tower.levels()[key.stage].clone();
        let entry = self.code_cache.entry((key.stage, a_id)).or_insert((Vec::new(), false));
        if entry.0.len() <= key.g_rank && !entry.1 {
            let limit = key.g_rank + 1;
            match factor_codes(&level, &a, self.caps.window, self.caps.candidate_cap, limit) {
                Ok(found) => {
                    let complete = found.len() < limit;
                    *entry = (found, complete);
                }
                Err(Error::CapExceeded(why)) => return Ok(Resolved::Skip(why)),
                Err(e) => return Err(e),
            }
        }
        let Some(g) = entry.0.get(key.g_rank).cloned() else {
            return Ok(Resolved::Invalid);
        };
        Ok(Resolved::Task(Box::new(ShiftTask { key, stage: key.stage, a, b, g, h })))
    }

    fn serve(&mut self, task: ShiftTask) -> Result<()> {
        let last = self.tower.depth() - 1;
        let top = self.tower.levels()[last].clone();
        let comp = self.tower.composite(task.stage, last)?;
        let g_top = compose_codes(&comp, &task.g, &top)?;
        let size = amalgam_size(&g_top, &task.h, &top, &task.b);
        if size > self.caps.level_alphabet_cap {
            self.log.push(TowerLogEntry::Skipped {
                key: task.key,
                reason: format!("level alphabet of {size} symbols (cap {})", self.caps.level_alphabet_cap),
            });
            return Ok(());
        }
        let fp = fiber_product(&task.a, &top, &task.b, &g_top, &task.h)?;
        let (z, used) = restrict_to_used(&fp.sft)?;
        if z.alphabet().len() > self.caps.level_alphabet_cap {
            self.log.push(TowerLogEntry::Skipped {
                key: task.key,
                reason: format!("level alphabet of {} symbols (cap {})", z.alphabet().len(), self.caps.level_alphabet_cap),
            });
            return Ok(());
        }
        let bond = BlockCode::from_fn(&z, top.alphabet().clone(), 1, |w| fp.proj0.map()[&vec![used[w[0]]]])?;
        let witness = BlockCode::from_fn(&z, task.b.alphabet().clone(), 1, |w| fp.proj1.map()[&vec![used[w[0]]]])?;
        self.tower.push(z, bond);
        let depth = self.tower.depth() - 1;
        self.log.push(TowerLogEntry::Served { task: Box::new(task), depth, witness });
        Ok(())
    }
}

/// Bounded analogue of the Fraïssé construction over SFTs: starting from the
/// point shift, serve amalgamation tasks in dovetailed order, each time taking
/// the fiber product of the top level with the task's `b` over `a`.
pub fn bounded_universal_tower(caps: &UniversalCaps) -> Result<UniversalTower> {
    caps.check()?;
    let mut b = Builder {
        caps: caps.clone(),
        catalog: ShiftCatalog::new(caps),
        tower: Tower::single(Sft::point()),
        log: Vec::new(),
        round: 0,
        queue: [TaskKey::new(0, 0, 0)].into(),
        deferred: BTreeSet::new(),
        code_cache: HashMap::new(),
        idle_rounds: 0,
        round_productive: false,
    };
    let mut steps = 0;
    while steps < caps.budget {
        let Some(key) = b.next_key() else { break };
        match b.resolve(key)? {
            Resolved::Invalid => continue,
            Resolved::Defer => {
                b.deferred.insert(key);
                continue;
            }
            Resolved::Skip(reason) => b.log.push(TowerLogEntry::Skipped { key, reason }),
            Resolved::Task(task) => b.serve(*task)?,
        }
        b.round_productive = true;
        steps += 1;
    }
    Ok(UniversalTower { tower: b.tower, log: b.log })
}

/// Replays a served entry: the witness is a factor onto `b` and
/// `h ∘ witness = g ∘ f_{stage,depth}` as maps of sequences.
pub fn verify_served(tower: &Tower, task: &ShiftTask, depth: usize, witness: &BlockCode) -> Result<bool> {
    let level = &tower.levels()[depth];
    if !verify_factor_code(witness, level, &task.b)?.holds {
        return Ok(false);
    }
    let left = compose_codes(witness, &task.h, level)?;
    let right = compose_codes(&tower.composite(task.stage, depth)?, &task.g, level)?;
    codes_agree(&left, &right, level)
}

/// Window-1 codes `x → y` in lexicographic order of their values on `B_1(x)`,
/// with `choices[i]` the admissible values on the `i`-th symbol. Partial maps
/// are pruned as soon as an assigned block of `x` maps outside the allowed
/// words of `y`; `accept` decides on complete maps.
fn window_one_search(
    x: &Sft,
    y: &Sft,
    choices: &[Vec<usize>],
    node_cap: u128,
    limit: usize,
    mut accept: impl FnMut(&BlockCode) -> Result<bool>,
) -> Result<Vec<BlockCode>> {
    let dom = blocks(x, 1);
    let len = (y.memory() + 1).max(2);
    let position: HashMap<usize, usize> = dom.iter().enumerate().map(|(i, w)| (w[0], i)).collect();
    let allowed: HashSet<Word> = blocks(y, len).into_iter().collect();
    let mut checks: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dom.len()];
    for w in blocks(x, len) {
        let idx: Vec<usize> = w.iter().map(|s| position[s]).collect();
        let last = *idx.iter().max().unwrap();
        checks[last].push(idx);
    }
    let mut values = vec![0usize; dom.len()];
    let mut out = Vec::new();
    let mut nodes = 0u128;
    let mut stack: Vec<usize> = vec![0];
    // Iterative depth-first search: `stack[i]` is the next choice to try at position `i`.
    while let Some(&next) = stack.last() {
        let i = stack.len() - 1;
        if i == dom.len() {
            stack.pop();
            let map: BTreeMap<Word, usize> = dom.iter().cloned().zip(values.iter().copied()).collect();
            let code = BlockCode::new(x, y.alphabet().clone(), 1, map)?;
            if accept(&code)? {
                out.push(code);
                if out.len() >= limit {
                    break;
                }
            }
            continue;
        }
        if next >= choices[i].len() {
            stack.pop();
            continue;
        }
        *stack.last_mut().unwrap() += 1;
        nodes += 1;
        if nodes > node_cap {
            return Err(Error::CapExceeded(format!("{node_cap} search nodes")));
        }
        values[i] = choices[i][next];
        let ok = checks[i].iter().all(|idx| allowed.contains(&idx.iter().map(|&j| values[j]).collect::<Word>()));
        if ok {
            stack.push(0);
        }
    }
    Ok(out)
}

/// Smallest depth `j ≥ stage` with a window-1 factor `u : levels[j] → b`
/// satisfying `h ∘ u = g ∘ f_{stage,j}`; exhaustive within `node_cap` search
/// nodes per level.
pub fn find_tower_extension(tower: &Tower, task: &ShiftTask, node_cap: u128) -> Result<Option<(usize, BlockCode)>> {
    let b_symbols: Vec<usize> = blocks(&task.b, 1).into_iter().map(|w| w[0]).collect();
    for j in task.stage..tower.depth() {
        let level = &tower.levels()[j];
        let target = compose_codes(&tower.composite(task.stage, j)?, &task.g, level)?;
        let choices: Vec<Vec<usize>> = if task.h.window() == 1 {
            blocks(level, 1)
                .iter()
                .map(|z| {
                    let want = target.apply_word(z).ok().filter(|v| v.len() == 1).map(|v| v[0]);
                    b_symbols.iter().copied().filter(|&s| want.is_none() || task.h.get(&[s]) == want).collect()
                })
                .collect()
        } else {
            vec![b_symbols.clone(); blocks(level, 1).len()]
        };
        let found = window_one_search(level, &task.b, &choices, node_cap, 1, |u| {
            Ok(codes_agree(&compose_codes(u, &task.h, level)?, &target, level)?
                && verify_factor_code(u, level, &task.b)?.holds)
        })?;
        if let Some(u) = found.into_iter().next() {
            return Ok(Some((j, u)));
        }
    }
    Ok(None)
}
