use super::FiniteSystem;
use crate::error::{Error, Result};

const MAX_ENUMERATED_STATES: usize = 4;
const MAX_CANONICAL_STATES: usize = 8;

fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn from_code(n: usize, code: u64) -> FiniteSystem {
    let edges = (0..n * n)
        .filter(|bit| code >> bit & 1 == 1)
        .map(|bit| (bit / n, bit % n));
    FiniteSystem::from_indexed(state_names(n), edges).expect("indices in range")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn permuted_code(n: usize, code: u64, perm: &[usize]) -> u64 {
    let mut out = 0u64;
    for bit in 0..n * n {
        if code >> bit & 1 == 1 {
            let (a, b) = (bit / n, bit % n);
            out |= 1 << (perm[a] * n + perm[b]);
        }
    }
    out
}

/// Adjacency bitmask minimised over all relabelings; equal codes mean
/// isomorphic systems (for equal state counts).
pub fn canonical_code(sys: &FiniteSystem) -> Result<u64> {
    let n = sys.len();
    if n > MAX_CANONICAL_STATES {
        return Err(Error::CapExceeded(format!(
            "canonical form limited to {MAX_CANONICAL_STATES} states"
        )));
    }
    let code = sys
        .trans()
        .iter()
        .fold(0u64, |acc, &(a, b)| acc | 1 << (a * n + b));
    Ok(permutations(n)
        .iter()
        .map(|p| permuted_code(n, code, p))
        .min()
        .unwrap_or(0))
}

/// Every system on the states `"0" .. "n-1"`, in adjacency-code order.
pub fn systems_on(n: usize) -> Result<impl Iterator<Item = FiniteSystem>> {
    if n > MAX_ENUMERATED_STATES {
        return Err(Error::CapExceeded(format!(
            "enumeration limited to {MAX_ENUMERATED_STATES} states"
        )));
    }
    Ok((0..1u64 << (n * n)).map(move |code| from_code(n, code)))
}

/// One representative per isomorphism class of systems with `n` states,
/// ordered by canonical code. Trivial systems are skipped when
/// `nontrivial_only` is set.
pub fn nonisomorphic_systems(n: usize, nontrivial_only: bool) -> Result<Vec<FiniteSystem>> {
    if n > MAX_ENUMERATED_STATES {
        return Err(Error::CapExceeded(format!(
            "enumeration limited to {MAX_ENUMERATED_STATES} states"
        )));
    }
    let perms = permutations(n);
    let start = u64::from(nontrivial_only);
    Ok((start..1u64 << (n * n))
        .filter(|&code| perms.iter().all(|p| permuted_code(n, code, p) >= code))
        .map(|code| from_code(n, code))
        .collect())
}

/// All surjections `{0..n} → {0..k}` as value vectors, in lexicographic order.
pub fn surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let total = k.checked_pow(n as u32).unwrap_or(usize::MAX);
    for mut code in 0..total {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = code % k;
            code /= k;
        }
        let mut hit = vec![false; k];
        v.iter().for_each(|&i| hit[i] = true);
        if hit.iter().all(|&h| h) {
            out.push(v);
        }
    }
    out
}
