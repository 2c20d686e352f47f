use crate::error::{Error, Result};
use crate::systems::FiniteSystem;

const MAX_TARGET_STATES: usize = 64;

/// Backtracking search for factors `source → target` in lexicographic order
/// of their value vectors, optionally restricted to per-state domains.
///
/// Forward checking prunes with the step clause (`x → x'` forces
/// `f(x) → f(x')`) and with surjectivity; the back clause is checked on
/// complete assignments.
#[derive(Debug, Clone)]
pub struct FactorSearch<'a> {
    source: &'a FiniteSystem,
    target: &'a FiniteSystem,
    domains: Vec<u64>,
    node_budget: Option<u64>,
}

impl<'a> FactorSearch<'a> {
    pub fn new(source: &'a FiniteSystem, target: &'a FiniteSystem) -> Result<Self> {
        if target.len() > MAX_TARGET_STATES {
            return Err(Error::CapExceeded(format!(
                "factor search targets are limited to {MAX_TARGET_STATES} states"
            )));
        }
        let full = if target.len() == 64 { u64::MAX } else { (1u64 << target.len()) - 1 };
        Ok(Self { source, target, domains: vec![full; source.len()], node_budget: None })
    }

    /// Restricts the image of each source state to a bitmask of target states.
    pub fn with_domains(mut self, domains: Vec<u64>) -> Self {
        assert_eq!(domains.len(), self.source.len());
        for (d, r) in self.domains.iter_mut().zip(domains) {
            *d &= r;
        }
        self
    }

    pub fn with_node_budget(mut self, budget: u64) -> Self {
        self.node_budget = Some(budget);
        self
    }

    /// Returns up to `limit` factors as value vectors.
    pub fn run(&self, limit: usize) -> Result<Vec<Vec<usize>>> {
        let n = self.source.len();
        let m = self.target.len();
        let mut out = Vec::new();
        if limit == 0 || m == 0 && n > 0 {
            return Ok(out);
        }
        let succ_mask: Vec<u64> = (0..m)
            .map(|t| self.target.successors(t).iter().fold(0, |acc, &s| acc | 1 << s))
            .collect();
        let mut pred_mask = vec![0u64; m];
        for &(a, b) in self.target.trans() {
            pred_mask[b] |= 1 << a;
        }
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in self.source.trans() {
            preds[b].push(a);
        }
        let ctx = Ctx {
            source: self.source,
            target: self.target,
            succ_mask,
            pred_mask,
            preds,
            all: if m == 64 { u64::MAX } else { (1u64 << m) - 1 },
            limit,
            budget: self.node_budget,
        };
        let mut nodes = 0;
        let mut assign = Vec::with_capacity(n);
        ctx.descend(&mut assign, self.domains.clone(), &mut out, &mut nodes)?;
        Ok(out)
    }
}

struct Ctx<'a> {
    source: &'a FiniteSystem,
    target: &'a FiniteSystem,
    succ_mask: Vec<u64>,
    pred_mask: Vec<u64>,
    preds: Vec<Vec<usize>>,
    all: u64,
    limit: usize,
    budget: Option<u64>,
}

impl Ctx<'_> {
    fn descend(
        &self,
        assign: &mut Vec<usize>,
        domains: Vec<u64>,
        out: &mut Vec<Vec<usize>>,
        nodes: &mut u64,
    ) -> Result<()> {
        *nodes += 1;
        if let Some(b) = self.budget {
            if *nodes > b {
                return Err(Error::CapExceeded(format!("factor search exceeded {b} nodes")));
            }
        }
        let v = assign.len();
        if v == self.source.len() {
            if self.back_clause_holds(assign) {
                out.push(assign.clone());
            }
            return Ok(());
        }
        let hit = assign.iter().fold(0u64, |acc, &t| acc | 1 << t);
        let mut cand = domains[v];
        while cand != 0 {
            let t = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let mut next = domains.clone();
            next[v] = 1 << t;
            if !self.propagate(v, t, &mut next) {
                continue;
            }
            let reach = next[v..].iter().fold(hit, |acc, &d| acc | d);
            if reach != self.all {
                continue;
            }
            assign.push(t);
            self.descend(assign, next, out, nodes)?;
            assign.pop();
            if out.len() >= self.limit {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Restricts neighbours of `v := t`; false when a domain empties.
    fn propagate(&self, v: usize, t: usize, domains: &mut [u64]) -> bool {
        for &w in self.source.successors(v) {
            domains[w] &= self.succ_mask[t];
            if domains[w] == 0 {
                return false;
            }
        }
        for &w in &self.preds[v] {
            domains[w] &= self.pred_mask[t];
            if domains[w] == 0 {
                return false;
            }
        }
        true
    }

    fn back_clause_holds(&self, f: &[usize]) -> bool {
        let covered: std::collections::BTreeSet<(usize, usize)> =
            self.source.trans().iter().map(|&(a, b)| (f[a], f[b])).collect();
        self.target.trans().iter().all(|e| covered.contains(e))
    }
}
