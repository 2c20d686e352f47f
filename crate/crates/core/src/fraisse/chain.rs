use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{amalgamate, enumerate_factors, require_factor, FactorSearch, DEFAULT_CANDIDATE_CAP};
use crate::error::{Error, Result};
use crate::systems::{classify_multimap, nonisomorphic_systems, FiniteSystem, Multimap};

/// Rounds in a row without a usable task before the builder gives up.
const IDLE_ROUND_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainConfig {
    /// Number of tasks to pop (served or skipped).
    pub budget: usize,
    /// Maximum state count of the task systems `a` and `b` (at most 4).
    pub task_cap: usize,
    /// Maximum state count of a stage after trimming.
    pub stage_cap: usize,
    /// Node budget for each backtracking factor search.
    pub node_budget: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self { budget: 10, task_cap: 3, stage_cap: 256, node_budget: 200_000 }
    }
}

impl ChainConfig {
    pub fn new(budget: usize, task_cap: usize) -> Self {
        Self { budget, task_cap, ..Self::default() }
    }
}

/// Position of a task in the dovetailed enumeration. Tasks are visited by
/// round, where `round = max(stage, triple, g_rank)`, then lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskKey {
    pub round: usize,
    pub stage: usize,
    /// Index into the fixed list of `(a, b, h)` triples.
    pub triple: usize,
    /// Lexicographic rank of `g` among the factors `stages[stage] → a`.
    pub g_rank: usize,
}

impl TaskKey {
    pub fn new(stage: usize, triple: usize, g_rank: usize) -> Self {
        Self { round: stage.max(triple).max(g_rank), stage, triple, g_rank }
    }
}

/// One amalgamation obligation: given `g : stages[stage] → a` and
/// `h : b → a`, some later stage must factor onto `b` over `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionTask {
    pub key: TaskKey,
    pub stage: usize,
    pub a: Arc<FiniteSystem>,
    pub b: Arc<FiniteSystem>,
    pub g: Multimap,
    pub h: Multimap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogEntry {
    /// The task was served by the stage at `depth`; `witness` maps that
    /// stage onto `b`.
    Served { task: ExtensionTask, depth: usize, witness: Multimap },
    Skipped { key: TaskKey, reason: String },
}

/// A finite prefix `U_0 ← U_1 ← … ← U_n` of the Fraïssé chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FraisseChain {
    stages: Vec<Arc<FiniteSystem>>,
    bonds: Vec<Multimap>,
    log: Vec<LogEntry>,
}

impl FraisseChain {
    /// The chain consisting of the initial object only.
    pub fn initial() -> Self {
        Self { stages: vec![Arc::new(FiniteSystem::self_loop())], bonds: Vec::new(), log: Vec::new() }
    }

    /// Reassembles a chain, re-verifying every bond.
    pub fn from_parts(
        stages: Vec<Arc<FiniteSystem>>,
        bonds: Vec<Multimap>,
        log: Vec<LogEntry>,
    ) -> Result<Self> {
        if stages.first().map(|s| **s != FiniteSystem::self_loop()).unwrap_or(true) {
            return Err(Error::InvalidArgument("stage 0 must be the one-state self-loop".into()));
        }
        if bonds.len() + 1 != stages.len() {
            return Err(Error::InvalidArgument("need exactly one bond per stage after the first".into()));
        }
        for (i, bond) in bonds.iter().enumerate() {
            if bond.source() != &stages[i + 1] || bond.target() != &stages[i] {
                return Err(Error::EndpointMismatch(format!("bond {i} does not run stage {} -> {i}", i + 1)));
            }
            require_factor(bond, &format!("bond {i}"))?;
        }
        Ok(Self { stages, bonds, log })
    }

    pub fn stages(&self) -> &[Arc<FiniteSystem>] {
        &self.stages
    }

    pub fn bonds(&self) -> &[Multimap] {
        &self.bonds
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn served(&self) -> impl Iterator<Item = (&ExtensionTask, usize, &Multimap)> {
        self.log.iter().filter_map(|e| match e {
            LogEntry::Served { task, depth, witness } => Some((task, *depth, witness)),
            LogEntry::Skipped { .. } => None,
        })
    }

    pub fn served_count(&self) -> usize {
        self.served().count()
    }

    /// Value vector of the bond composite `f_{i,j} : stages[j] → stages[i]`.
    pub fn bond_composite(&self, i: usize, j: usize) -> Vec<usize> {
        assert!(i <= j && j < self.stages.len());
        let mut map: Vec<usize> = (0..self.stages[j].len()).collect();
        for k in (i..j).rev() {
            let bond = self.bonds[k].as_function().expect("bonds are functions");
            map.iter_mut().for_each(|v| *v = bond[*v]);
        }
        map
    }

    /// The bond composite as a multimap.
    pub fn bond_composite_map(&self, i: usize, j: usize) -> Multimap {
        Multimap::from_function(self.stages[j].clone(), self.stages[i].clone(), &self.bond_composite(i, j))
            .expect("composite of bonds is well formed")
    }
}

struct Triple {
    a_id: (usize, usize),
    a: Arc<FiniteSystem>,
    b: Arc<FiniteSystem>,
    h: Multimap,
}

/// Lazily generated list of `(a, b, h)` triples ordered by
/// `(|a|, |b|, a, b, rank of h)`, skipping isomorphisms `h`.
struct TaskCatalog {
    systems: Vec<Vec<Arc<FiniteSystem>>>,
    triples: Vec<Triple>,
    cursor: (usize, usize, usize, usize),
    done: bool,
}

impl TaskCatalog {
    fn new(cap: usize) -> Result<Self> {
        if cap == 0 || cap > 4 {
            return Err(Error::InvalidArgument("task cap must be between 1 and 4".into()));
        }
        let mut systems = vec![Vec::new()];
        for n in 1..=cap {
            systems.push(nonisomorphic_systems(n, true)?.into_iter().map(Arc::new).collect());
        }
        Ok(Self { systems, triples: Vec::new(), cursor: (1, 1, 0, 0), done: false })
    }

    fn cap(&self) -> usize {
        self.systems.len() - 1
    }

    fn get(&mut self, p: usize) -> Result<Option<&Triple>> {
        while self.triples.len() <= p && !self.done {
            self.advance()?;
        }
        Ok(self.triples.get(p))
    }

    fn advance(&mut self) -> Result<()> {
        let (sa, sb, ai, bi) = self.cursor;
        if sa > self.cap() {
            self.done = true;
            return Ok(());
        }
        // Next cursor position.
        self.cursor = if bi + 1 < self.systems[sb].len() {
            (sa, sb, ai, bi + 1)
        } else if ai + 1 < self.systems[sa].len() {
            (sa, sb, ai + 1, 0)
        } else if sb < self.cap() {
            (sa, sb + 1, 0, 0)
        } else {
            (sa + 1, sa + 1, 0, 0)
        };
        if sa == sb {
            return Ok(());
        }
        let a = self.systems[sa][ai].clone();
        let b = self.systems[sb][bi].clone();
        for h in enumerate_factors(&b, &a, DEFAULT_CANDIDATE_CAP)? {
            self.triples.push(Triple { a_id: (sa, ai), a: a.clone(), b: b.clone(), h });
        }
        Ok(())
    }
}

enum Resolved {
    Task(ExtensionTask),
    Skip(String),
    Invalid,
    Defer,
}

/// Factors found so far and whether the search finished.
type FactorCacheEntry = (Vec<Vec<usize>>, bool);

struct Builder {
    cfg: ChainConfig,
    catalog: TaskCatalog,
    chain: FraisseChain,
    round: usize,
    queue: std::collections::VecDeque<TaskKey>,
    deferred: BTreeSet<TaskKey>,
    /// (stage, a) → (factors found so far, search complete).
    factor_cache: HashMap<(usize, (usize, usize)), FactorCacheEntry>,
    idle_rounds: usize,
    round_productive: bool,
}

impl Builder {
    fn next_key(&mut self) -> Option<TaskKey> {
        let len = self.chain.len();
        if let Some(&k) = self.deferred.iter().find(|k| k.stage < len) {
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
        let node_budget = self.cfg.node_budget;
        let Some(triple) = self.catalog.get(key.triple)? else {
            return Ok(Resolved::Invalid);
        };
        if key.stage >= self.chain.len() {
            return Ok(Resolved::Defer);
        }
        let (a, b, h, a_id) = (triple.a.clone(), triple.b.clone(), triple.h.clone(), triple.a_id);
        let stage = self.chain.stages[key.stage].clone();
        let entry = self.factor_cache.entry((key.stage, a_id)).or_insert((Vec::new(), false));
        if entry.0.len() <= key.g_rank && !entry.1 {
            let limit = key.g_rank + 1;
            match FactorSearch::new(&stage, &a)?.with_node_budget(node_budget).run(limit) {
                Ok(found) => {
                    let complete = found.len() < limit;
                    *entry = (found, complete);
                }
                Err(Error::CapExceeded(why)) => return Ok(Resolved::Skip(why)),
                Err(e) => return Err(e),
            }
        }
        let Some(g) = entry.0.get(key.g_rank) else {
            return Ok(Resolved::Invalid);
        };
        let g = Multimap::from_function(stage, a.clone(), g)?;
        Ok(Resolved::Task(ExtensionTask { key, stage: key.stage, a, b, g, h }))
    }

    fn serve(&mut self, task: ExtensionTask) -> Result<()> {
        let last = self.chain.len() - 1;
        let top = self.chain.stages[last].clone();
        let comp = self.chain.bond_composite(task.stage, last);
        let g = task.g.as_function().expect("factor");
        let h = task.h.as_function().expect("factor");
        let g_top: Vec<usize> = comp.iter().map(|&v| g[v]).collect();

        let mut fiber_top = vec![0usize; task.a.len()];
        let mut fiber_b = vec![0usize; task.a.len()];
        g_top.iter().for_each(|&s| fiber_top[s] += 1);
        h.iter().for_each(|&s| fiber_b[s] += 1);
        let raw: usize = fiber_top.iter().zip(&fiber_b).map(|(x, y)| x * y).sum();
        if raw > self.cfg.stage_cap.saturating_mul(16) {
            self.chain.log.push(LogEntry::Skipped {
                key: task.key,
                reason: format!("pullback would have {raw} states"),
            });
            return Ok(());
        }

        let g_top_map = Multimap::from_function(top.clone(), task.a.clone(), &g_top)?;
        let am = amalgamate(&task.a, &top, &task.b, &g_top_map, &task.h)?;
        let (z, p0, p1) = trim(&am.system, &am.proj0, &am.proj1);
        if z.len() > self.cfg.stage_cap {
            self.chain.log.push(LogEntry::Skipped {
                key: task.key,
                reason: format!("stage would have {} states (cap {})", z.len(), self.cfg.stage_cap),
            });
            return Ok(());
        }
        let z = Arc::new(z.canonical_names());
        let bond = Multimap::from_function(z.clone(), top, &p0)?;
        let witness = Multimap::from_function(z.clone(), task.b.clone(), &p1)?;
        debug_assert!(classify_multimap(&bond).is_factor && classify_multimap(&witness).is_factor);
        self.chain.stages.push(z);
        self.chain.bonds.push(bond);
        let depth = self.chain.len() - 1;
        self.chain.log.push(LogEntry::Served { task, depth, witness });
        Ok(())
    }
}

/// Greedily drops states of a pullback while both projections stay factors.
///
/// Edges of any subsystem project to edges, so only surjectivity and the back
/// clause (every target edge has a preimage edge) need to be maintained.
fn trim(z: &FiniteSystem, proj0: &Multimap, proj1: &Multimap) -> (FiniteSystem, Vec<usize>, Vec<usize>) {
    let p = [proj0.as_function().expect("factor"), proj1.as_function().expect("factor")];
    let n = z.len();
    let mut alive = vec![true; n];
    let mut state_cover: [HashMap<usize, usize>; 2] = Default::default();
    let mut edge_cover: [HashMap<(usize, usize), usize>; 2] = Default::default();
    for side in 0..2 {
        for &image in &p[side] {
            *state_cover[side].entry(image).or_default() += 1;
        }
        for &(u, v) in z.trans() {
            *edge_cover[side].entry((p[side][u], p[side][v])).or_default() += 1;
        }
    }
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in z.trans() {
        preds[v].push(u);
    }
    for v in 0..n {
        let mut incident: Vec<(usize, usize)> = z
            .successors(v)
            .iter()
            .filter(|&&w| alive[w])
            .map(|&w| (v, w))
            .chain(preds[v].iter().filter(|&&u| alive[u] && u != v).map(|&u| (u, v)))
            .collect();
        incident.sort_unstable();
        incident.dedup();
        let removable = (0..2).all(|side| {
            if state_cover[side][&p[side][v]] <= 1 {
                return false;
            }
            let mut need: HashMap<(usize, usize), usize> = HashMap::new();
            for &(a, b) in &incident {
                *need.entry((p[side][a], p[side][b])).or_default() += 1;
            }
            need.iter().all(|(e, &k)| edge_cover[side][e] > k)
        });
        if removable {
            alive[v] = false;
            for side in 0..2 {
                *state_cover[side].get_mut(&p[side][v]).unwrap() -= 1;
                for &(a, b) in &incident {
                    *edge_cover[side].get_mut(&(p[side][a], p[side][b])).unwrap() -= 1;
                }
            }
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let sub = z.induced(&keep);
    let q0 = keep.iter().map(|&v| p[0][v]).collect();
    let q1 = keep.iter().map(|&v| p[1][v]).collect();
    (sub, q0, q1)
}

/// Builds a chain prefix by serving `budget` tasks in the fixed dovetailed order.
pub fn build_chain(config: &ChainConfig) -> Result<FraisseChain> {
    let mut b = Builder {
        cfg: config.clone(),
        catalog: TaskCatalog::new(config.task_cap)?,
        chain: FraisseChain::initial(),
        round: 0,
        queue: [TaskKey::new(0, 0, 0)].into(),
        deferred: BTreeSet::new(),
        factor_cache: HashMap::new(),
        idle_rounds: 0,
        round_productive: false,
    };
    let mut steps = 0;
    while steps < config.budget {
        let Some(key) = b.next_key() else { break };
        match b.resolve(key)? {
            Resolved::Invalid => continue,
            Resolved::Defer => {
                b.deferred.insert(key);
                continue;
            }
            Resolved::Skip(reason) => {
                b.chain.log.push(LogEntry::Skipped { key, reason });
            }
            Resolved::Task(task) => b.serve(task)?,
        }
        b.round_productive = true;
        steps += 1;
    }
    Ok(b.chain)
}

/// Default node budget for [`check_extension`] searches.
pub const EXTENSION_NODE_BUDGET: u64 = 2_000_000;

/// Smallest depth `j ≥ i` with a factor `u : stages[j] → b` such that
/// `h ∘ u = g ∘ f_{i,j}`, together with that `u`.
pub fn check_extension(
    chain: &FraisseChain,
    i: usize,
    a: &Arc<FiniteSystem>,
    b: &Arc<FiniteSystem>,
    g: &Multimap,
    h: &Multimap,
) -> Result<Option<(usize, Multimap)>> {
    if i >= chain.len() {
        return Err(Error::InvalidArgument(format!("stage {i} not in chain of length {}", chain.len())));
    }
    if g.source() != &chain.stages[i] || g.target() != a || h.source() != b || h.target() != a {
        return Err(Error::EndpointMismatch("expected g: stages[i] -> a and h: b -> a".into()));
    }
    let gv = require_factor(g, "g")?;
    let hv = require_factor(h, "h")?;
    for j in i..chain.len() {
        let comp = chain.bond_composite(i, j);
        let domains: Vec<u64> = comp
            .iter()
            .map(|&v| {
                let want = gv[v];
                hv.iter().enumerate().filter(|&(_, &s)| s == want).fold(0, |acc, (t, _)| acc | 1 << t)
            })
            .collect();
        let found = FactorSearch::new(&chain.stages[j], b)?
            .with_domains(domains)
            .with_node_budget(EXTENSION_NODE_BUDGET)
            .run(1)?;
        if let Some(u) = found.into_iter().next() {
            return Ok(Some((j, Multimap::from_function(chain.stages[j].clone(), b.clone(), &u)?)));
        }
    }
    Ok(None)
}

/// For each level `i`, the number of paths with `len` steps in `stages[i]`
/// that are images of paths at every deeper built level.
pub fn threadable_paths(chain: &FraisseChain, len: usize) -> Result<Vec<usize>> {
    if len == 0 {
        return Err(Error::InvalidArgument("path length must be at least 1".into()));
    }
    let paths: Vec<Vec<Vec<usize>>> = chain.stages.iter().map(|s| s.paths(len)).collect();
    let mut counts = Vec::with_capacity(chain.len());
    for i in 0..chain.len() {
        let mut threaded: BTreeSet<Vec<usize>> = paths[i].iter().cloned().collect();
        for (j, deeper) in paths.iter().enumerate().skip(i + 1) {
            let comp = chain.bond_composite(i, j);
            let image: BTreeSet<Vec<usize>> =
                deeper.iter().map(|p| p.iter().map(|&v| comp[v]).collect()).collect();
            threaded.retain(|p| image.contains(p));
        }
        counts.push(threaded.len());
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_zero_is_initial_object() {
        let chain = build_chain(&ChainConfig::new(0, 2)).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(*chain.stages()[0], FiniteSystem::self_loop());
        assert!(chain.log().is_empty());
    }

    #[test]
    fn first_step_serves_first_two_state_task() {
        let chain = build_chain(&ChainConfig::new(1, 2)).unwrap();
        assert_eq!(chain.len(), 2);
        let (task, depth, witness) = chain.served().next().unwrap();
        assert_eq!(depth, 1);
        assert_eq!(task.key, TaskKey::new(0, 0, 0));
        assert_eq!(task.a.len(), 1);
        assert_eq!(task.b.len(), 2);
        // The first nontrivial two-state system in canonical order: 0 -> 0 only.
        assert_eq!(task.b.trans().iter().copied().collect::<Vec<_>>(), vec![(0, 0)]);
        assert!(classify_multimap(&chain.bonds()[0]).is_factor);
        assert!(classify_multimap(witness).is_factor);
    }

    #[test]
    fn served_tasks_replay() {
        let chain = build_chain(&ChainConfig::new(12, 2)).unwrap();
        assert!(chain.served_count() > 0);
        for (task, depth, witness) in chain.served() {
            let found = check_extension(&chain, task.stage, &task.a, &task.b, &task.g, &task.h)
                .unwrap()
                .expect("served task must extend");
            assert!(found.0 <= depth);
            assert_eq!(witness.source(), &chain.stages()[depth]);
        }
        for bond in chain.bonds() {
            assert!(classify_multimap(bond).is_factor);
        }
    }

    #[test]
    fn deterministic_and_prefix_stable() {
        let a = build_chain(&ChainConfig::new(8, 2)).unwrap();
        let b = build_chain(&ChainConfig::new(8, 2)).unwrap();
        assert_eq!(a, b);
        let c = build_chain(&ChainConfig::new(5, 2)).unwrap();
        assert_eq!(&a.stages()[..c.len()], c.stages());
    }

    #[test]
    fn identity_task_extends_immediately() {
        let chain = build_chain(&ChainConfig::new(3, 2)).unwrap();
        let i = 1;
        let a = chain.stages()[i].clone();
        let id = Multimap::identity(a.clone());
        let (j, u) = check_extension(&chain, i, &a, &a, &id, &id).unwrap().unwrap();
        assert_eq!(j, i);
        assert_eq!(u, id);
    }

    #[test]
    fn short_chain_cannot_serve_new_tasks() {
        let chain = FraisseChain::initial();
        let point = chain.stages()[0].clone();
        let b = Arc::new(FiniteSystem::cycle(&["a", "b"]).unwrap());
        let g = Multimap::identity(point.clone());
        let h = Multimap::constant(b.clone(), point.clone(), 0).unwrap();
        assert_eq!(check_extension(&chain, 0, &point, &b, &g, &h).unwrap(), None);
    }

    #[test]
    fn threadable_counts() {
        let point = Arc::new(FiniteSystem::self_loop());
        let id = Multimap::identity(point.clone());
        let chain = FraisseChain::from_parts(vec![point.clone(), point.clone(), point], vec![id.clone(), id], vec![])
            .unwrap();
        assert_eq!(threadable_paths(&chain, 2).unwrap(), vec![1, 1, 1]);

        let point = Arc::new(FiniteSystem::self_loop());
        let dead = Arc::new(FiniteSystem::new(["a", "b"], [("a", "b")]).unwrap());
        let bond = Multimap::constant(dead.clone(), point.clone(), 0).unwrap();
        let chain = FraisseChain::from_parts(vec![point, dead], vec![bond], vec![]).unwrap();
        assert_eq!(threadable_paths(&chain, 2).unwrap(), vec![0, 0]);
    }

    #[test]
    fn threadable_counts_shrink_with_budget() {
        let small = threadable_paths(&build_chain(&ChainConfig::new(4, 2)).unwrap(), 2).unwrap();
        let large = threadable_paths(&build_chain(&ChainConfig::new(10, 2)).unwrap(), 2).unwrap();
        for (s, l) in small.iter().zip(&large) {
            assert!(l <= s);
        }
    }

    #[test]
    fn trim_keeps_factors() {
        let two = Arc::new(FiniteSystem::cycle(&["a", "b"]).unwrap());
        let am = super::super::joint_embed(&two, &two).unwrap();
        let (z, p0, p1) = trim(&am.system, &am.proj0, &am.proj1);
        assert_eq!(z.len(), 2);
        let z = Arc::new(z);
        assert!(classify_multimap(&Multimap::from_function(z.clone(), two.clone(), &p0).unwrap()).is_factor);
        assert!(classify_multimap(&Multimap::from_function(z, two, &p1).unwrap()).is_factor);
    }
}
