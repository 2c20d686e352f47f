//! Acceptance criteria, each checked against an oracle written from the
//! definitions rather than through the library's own checkers.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symdyn::fraisse::{amalgamate, build_chain, check_extension, enumerate_factors, threadable_paths, ChainConfig};
use symdyn::lattice::{check_dynalg_morphism, lift, lift_ef_pair};
use symdyn::proshift::{
    cantor_identity_tower, odometer_orders, odometer_tower, pseudo_orbit, shadow, shadow_is_valid, transitivity_check,
    validate_tower, ShadowResult,
};
use symdyn::shifts::{
    blocks, fiber_product, no_finite_factor_search, path_projection, path_shift, shift_equal, verify_factor_code,
    Alphabet, BlockCode, Sft, Shift, Word,
};
use symdyn::systems::{factor_to_embedding, is_ef_pair, nonisomorphic_systems, systems_on, EfPair, FiniteSystem, Multimap};
use symdyn::Error;

/// Adjacency as successor bitmasks.
#[derive(Clone, PartialEq, Eq)]
struct Graph {
    succ: Vec<u32>,
}

impl Graph {
    fn of(sys: &FiniteSystem) -> Self {
        let mut succ = vec![0; sys.len()];
        for &(a, b) in sys.trans() {
            succ[a] |= 1 << b;
        }
        Self { succ }
    }

    fn len(&self) -> usize {
        self.succ.len()
    }

    fn edge(&self, a: usize, b: usize) -> bool {
        self.succ[a] >> b & 1 == 1
    }

    fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |a| (0..self.len()).filter(move |&b| self.edge(a, b)).map(move |b| (a, b)))
    }

    fn image(&self, set: u32) -> u32 {
        (0..self.len()).filter(|i| set >> i & 1 == 1).fold(0, |acc, i| acc | self.succ[i])
    }
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// A factor `f : Y → X`: surjective function, steps map to steps, and every
/// step of `X` lifts to a step between preimages.
fn oracle_factor(y: &Graph, x: &Graph, f: &[usize]) -> bool {
    let hit = f.iter().fold(0u32, |acc, &v| acc | 1 << v);
    if hit != (1u32 << x.len()) - 1 {
        return false;
    }
    if y.edges().any(|(a, b)| !x.edge(f[a], f[b])) {
        return false;
    }
    x.edges().all(|(p, q)| y.edges().any(|(a, b)| f[a] == p && f[b] == q))
}

/// An ef-pair `(e, f)` with `e` given by rows `e[x] ⊆ Y`.
fn oracle_ef(x: &Graph, y: &Graph, e: &[u32], f: &[usize]) -> bool {
    let all = (1u32 << y.len()) - 1;
    if e.contains(&0) {
        return false;
    }
    let mut union = 0;
    for &r in e {
        if union & r != 0 {
            return false;
        }
        union |= r;
    }
    if union != all {
        return false;
    }
    if (0..x.len()).any(|p| bits(e[p]).any(|q| f[q] != p)) {
        return false;
    }
    if (0..y.len()).any(|q| e[f[q]] >> q & 1 == 0) {
        return false;
    }
    let owner = |q: usize| (0..x.len()).find(|&p| e[p] >> q & 1 == 1).unwrap();
    if x.edges().any(|(p, p2)| !bits(e[p]).any(|q| y.succ[q] & e[p2] != 0)) {
        return false;
    }
    if y.edges().any(|(q, q2)| !x.edge(owner(q), owner(q2))) {
        return false;
    }
    for p in 0..x.len() {
        for q in bits(e[p]) {
            for q2 in bits(y.succ[q]) {
                if !bits(x.succ[p]).any(|p2| e[p2] >> q2 & 1 == 1) {
                    return false;
                }
            }
        }
    }
    oracle_factor(y, x, f)
}

fn all_functions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut v = vec![0; n];
    loop {
        out.push(v.clone());
        let Some(i) = (0..n).rev().find(|&i| v[i] + 1 < k) else {
            return out;
        };
        v[i] += 1;
        v[i + 1..].iter_mut().for_each(|d| *d = 0);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    all_functions(n, n)
        .into_iter()
        .filter(|p| p.iter().fold(0u32, |acc, &v| acc | 1 << v).count_ones() as usize == n)
        .collect()
}

fn canonical(g: &Graph, perms: &[Vec<usize>]) -> u32 {
    let n = g.len();
    perms
        .iter()
        .map(|p| g.edges().fold(0u32, |acc, (a, b)| acc | 1 << (p[a] * n + p[b])))
        .min()
        .unwrap()
}

fn family(max: usize) -> Vec<Arc<FiniteSystem>> {
    (1..=max).flat_map(|n| nonisomorphic_systems(n, true).unwrap()).map(Arc::new).collect()
}

/// Seeded pairs `(Y, X)` from `fam`: alternately uniform, and `X` the family
/// representative of a random quotient of `Y`, so that factors occur.
fn sample_pairs(fam: &[Arc<FiniteSystem>], count: usize, seed: u64) -> Vec<(Arc<FiniteSystem>, Arc<FiniteSystem>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    while pairs.len() < count {
        let y = fam[rng.gen_range(0..fam.len())].clone();
        if pairs.len() % 2 == 0 {
            let x = fam[rng.gen_range(0..fam.len())].clone();
            if x.len() <= y.len() {
                pairs.push((y, x));
            }
            continue;
        }
        let k = rng.gen_range(1..=y.len());
        let onto: Vec<Vec<usize>> = all_functions(y.len(), k)
            .into_iter()
            .filter(|v| v.iter().fold(0u32, |acc, &s| acc | 1 << s) == (1 << k) - 1)
            .collect();
        let v = &onto[rng.gen_range(0..onto.len())];
        let mut quotient = vec![0u32; k];
        for &(a, b) in y.trans() {
            quotient[v[a]] |= 1 << v[b];
        }
        let q = Graph { succ: quotient };
        let perms = permutations(k);
        let code = canonical(&q, &perms);
        let x = fam.iter().find(|r| r.len() == k && canonical(&Graph::of(r), &perms) == code).unwrap();
        pairs.push((y, x.clone()));
    }
    pairs
}

fn values(f: &Multimap) -> Vec<usize> {
    let mut v = vec![usize::MAX; f.source().len()];
    for &(a, b) in f.pairs() {
        assert_eq!(v[a], usize::MAX, "not a function");
        v[a] = b;
    }
    v
}

fn criterion_1() -> String {
    // Nontrivial directed graphs with loops up to isomorphism.
    let known = [1, 9, 103, 3043];
    for n in 1..=4 {
        let perms = permutations(n);
        let reps = nonisomorphic_systems(n, true).unwrap();
        assert_eq!(reps.len(), known[n - 1]);
        let classes: BTreeSet<u32> = reps.iter().map(|s| canonical(&Graph::of(s), &perms)).collect();
        assert_eq!(classes.len(), reps.len(), "duplicate class at n = {n}");
        if n <= 3 {
            let every: BTreeSet<u32> = systems_on(n)
                .unwrap()
                .filter(|s| s.is_nontrivial())
                .map(|s| canonical(&Graph::of(&s), &perms))
                .collect();
            assert_eq!(every, classes);
        }
    }

    let fam = family(4);
    let small: Vec<_> = fam.iter().filter(|s| s.len() <= 2).cloned().collect();
    let mut pairs: Vec<(Arc<FiniteSystem>, Arc<FiniteSystem>)> = Vec::new();
    for y in &small {
        for x in &small {
            pairs.push((y.clone(), x.clone()));
        }
    }
    pairs.extend(sample_pairs(&fam, 300, 1));
    let (mut factors, mut relations) = (0usize, 0u64);
    for (y, x) in &pairs {
        let (gy, gx) = (Graph::of(y), Graph::of(x));
        let expected: Vec<Vec<usize>> =
            all_functions(y.len(), x.len()).into_iter().filter(|f| oracle_factor(&gy, &gx, f)).collect();
        let found: Vec<Vec<usize>> = enumerate_factors(y, x, 1 << 20).unwrap().iter().map(values).collect();
        assert_eq!(found, expected);
        for f in &found {
            factors += 1;
            let fm = Multimap::from_function(y.clone(), x.clone(), f).unwrap();
            let e = factor_to_embedding(&fm).unwrap();
            assert_eq!(e, fm.converse());
            assert!(is_ef_pair(&e, &fm).unwrap().holds);

            let cells = x.len() * y.len();
            let mut pairing = Vec::new();
            for code in 0u32..1 << cells {
                relations += 1;
                let rows: Vec<u32> = (0..x.len()).map(|p| code >> (p * y.len()) & ((1 << y.len()) - 1)).collect();
                if oracle_ef(&gx, &gy, &rows, f) {
                    pairing.push(rows);
                }
            }
            let converse: Vec<u32> =
                (0..x.len()).map(|p| (0..y.len()).filter(|&q| f[q] == p).fold(0, |acc, q| acc | 1 << q)).collect();
            assert_eq!(pairing, vec![converse], "pairing embeddings of {f:?}");

            for (p, q) in (0..x.len()).flat_map(|p| (0..y.len()).map(move |q| (p, q))) {
                let mut rel: BTreeSet<(usize, usize)> = e.pairs().clone();
                if !rel.remove(&(p, q)) {
                    rel.insert((p, q));
                }
                let other = Multimap::new(x.clone(), y.clone(), rel).unwrap();
                assert!(!is_ef_pair(&other, &fm).unwrap().holds);
            }
        }
    }
    assert!(factors >= 100, "only {factors} factors");
    format!("{} pairs, {factors} factors, {relations} relations searched", pairs.len())
}

/// Each state of `x` gets one or two copies; every step of `x` is lifted at
/// least once and no step leaves the lifts of `x`'s steps.
fn random_cover(x: &FiniteSystem, max: usize, rng: &mut ChaCha8Rng) -> (Arc<FiniteSystem>, Vec<usize>) {
    let mut f = Vec::new();
    for p in 0..x.len() {
        let copies = if f.len() + (x.len() - p) < max && rng.gen_bool(0.5) { 2 } else { 1 };
        f.extend(std::iter::repeat_n(p, copies));
    }
    let mut edges = Vec::new();
    for &(p, q) in x.trans() {
        let from: Vec<usize> = (0..f.len()).filter(|&i| f[i] == p).collect();
        let to: Vec<usize> = (0..f.len()).filter(|&i| f[i] == q).collect();
        let forced = (from[rng.gen_range(0..from.len())], to[rng.gen_range(0..to.len())]);
        edges.push(forced);
        for &a in &from {
            for &b in &to {
                if rng.gen_bool(0.4) {
                    edges.push((a, b));
                }
            }
        }
    }
    let names: Vec<String> = (0..f.len()).map(|i| format!("s{i}")).collect();
    (Arc::new(FiniteSystem::from_indexed(names, edges).unwrap()), f)
}

fn random_system(n: usize, rng: &mut ChaCha8Rng) -> FiniteSystem {
    loop {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.4)).collect();
        let names = (0..n).map(|i| format!("x{i}")).collect();
        let sys = FiniteSystem::from_indexed(names, edges).unwrap();
        if sys.is_nontrivial() {
            return sys;
        }
    }
}

fn criterion_2() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let x = Arc::new(random_system(n, &mut rng));
        let (y0, v0) = random_cover(&x, 5, &mut rng);
        let (y1, v1) = random_cover(&x, 5, &mut rng);
        let f0 = Multimap::from_function(y0.clone(), x.clone(), &v0).unwrap();
        let f1 = Multimap::from_function(y1.clone(), x.clone(), &v1).unwrap();
        let (gx, g0, g1) = (Graph::of(&x), Graph::of(&y0), Graph::of(&y1));
        assert!(oracle_factor(&g0, &gx, &v0) && oracle_factor(&g1, &gx, &v1));

        let am = amalgamate(&x, &y0, &y1, &f0, &f1).unwrap();
        let z = &am.system;
        let (p0, p1) = (values(&am.proj0), values(&am.proj1));
        let states: BTreeSet<(usize, usize)> = (0..z.len()).map(|i| (p0[i], p1[i])).collect();
        let expected: BTreeSet<(usize, usize)> =
            (0..y0.len()).flat_map(|a| (0..y1.len()).map(move |b| (a, b))).filter(|&(a, b)| v0[a] == v1[b]).collect();
        assert_eq!(states.len(), z.len());
        assert_eq!(states, expected);
        let gz = Graph::of(z);
        for i in 0..z.len() {
            for j in 0..z.len() {
                assert_eq!(gz.edge(i, j), g0.edge(p0[i], p0[j]) && g1.edge(p1[i], p1[j]));
            }
            assert_eq!(v0[p0[i]], v1[p1[i]]);
        }
        assert!(z.is_nontrivial());
        assert!(oracle_factor(&gz, &g0, &p0) && oracle_factor(&gz, &g1, &p1));
    }

    let x = Arc::new(FiniteSystem::new(["p", "q", "r"], [("p", "q"), ("p", "r"), ("q", "q"), ("r", "r")]).unwrap());
    let y = Arc::new(FiniteSystem::new(["a", "a'", "b", "c"], [("a", "b"), ("a'", "c"), ("b", "b"), ("c", "c")]).unwrap());
    let f = Multimap::from_names(y.clone(), x.clone(), [("a", "p"), ("a'", "p"), ("b", "q"), ("c", "r")]).unwrap();
    assert!(x.is_total() && y.is_total());
    let am = amalgamate(&x, &y, &y, &f, &f).unwrap();
    let dead = am.system.dead_end().map(|d| am.system.name(d).to_string());
    assert!(dead == Some("(a,a')".into()) || dead == Some("(a',a)".into()), "{dead:?}");
    format!("200 squares commute; non-total amalgam has dead end {}", dead.unwrap())
}

fn criterion_3() -> String {
    let fam = family(3);
    let pairs = sample_pairs(&fam, 100, 3);
    let mut checked = 0;
    for (y, x) in &pairs {
        let (gy, gx) = (Graph::of(y), Graph::of(x));
        for v in all_functions(y.len(), x.len()) {
            if !oracle_factor(&gy, &gx, &v) {
                continue;
            }
            let f = Multimap::from_function(y.clone(), x.clone(), &v).unwrap();
            let ef = EfPair::from_factor(f).unwrap();
            let (eps, pi) = lift_ef_pair(&ef).unwrap();
            let (_, alpha) = lift(x).unwrap();
            let (_, beta) = lift(y).unwrap();
            let report = check_dynalg_morphism(&alpha, &beta, &eps, &pi).unwrap();
            assert!(report.all_hold(), "{report}");

            // Subsets as bitmasks; the order is reverse inclusion, so `a ≤ b` is `a ⊇ b`.
            let e_img = |s: u32| bits(s).fold(0u32, |acc, p| acc | (0..y.len()).filter(|&q| v[q] == p).fold(0, |m, q| m | 1 << q));
            let f_img = |t: u32| bits(t).fold(0u32, |acc, q| acc | 1 << v[q]);
            let ge = |a: u32, b: u32| a & b == b;
            for t in 0u32..1 << y.len() {
                assert_eq!(pi.apply(t), f_img(t));
                assert_eq!(beta.apply(t), gy.image(t));
                if t.count_ones() == 1 {
                    assert_eq!(f_img(t).count_ones(), 1);
                }
                assert!(ge(e_img(f_img(t)), t));
                assert!(ge(gx.image(f_img(t)), f_img(gy.image(t))));
            }
            for s in 0u32..1 << x.len() {
                assert_eq!(eps.apply(s), e_img(s));
                assert_eq!(alpha.apply(s), gx.image(s));
                assert_eq!(f_img(e_img(s)), s);
                assert!(ge(f_img(gy.image(e_img(s))), gx.image(s)));
            }
            checked += 1;
        }
    }
    assert!(checked >= 50, "only {checked} ef-pairs");
    format!("100 pairs, {checked} ef-pairs, conditions (1)-(5) hold")
}

fn criterion_4() -> String {
    let started = Instant::now();
    let chain = build_chain(&ChainConfig::new(50, 3)).unwrap();
    let served = chain.served_count();
    assert!(served >= 20, "served {served}");
    let fn_of = |m: &Multimap| values(m);
    for (task, depth, witness) in chain.served() {
        // Bond composite f_{stage,depth} from the raw bonds.
        let mut comp: Vec<usize> = (0..chain.stages()[depth].len()).collect();
        for k in (task.stage..depth).rev() {
            let bond = fn_of(&chain.bonds()[k]);
            comp = comp.iter().map(|&v| bond[v]).collect();
        }
        let (g, h, u) = (fn_of(&task.g), fn_of(&task.h), fn_of(witness));
        let stage = Graph::of(&chain.stages()[depth]);
        assert!(oracle_factor(&stage, &Graph::of(&task.b), &u));
        assert!((0..u.len()).all(|s| h[u[s]] == g[comp[s]]));
        let found = check_extension(&chain, task.stage, &task.a, &task.b, &task.g, &task.h).unwrap();
        let (j, w) = found.expect("extension exists");
        assert!(j <= depth, "found at {j}, logged {depth}");
        let w = fn_of(&w);
        let mut comp_j: Vec<usize> = (0..chain.stages()[j].len()).collect();
        for k in (task.stage..j).rev() {
            let bond = fn_of(&chain.bonds()[k]);
            comp_j = comp_j.iter().map(|&v| bond[v]).collect();
        }
        assert!(oracle_factor(&Graph::of(&chain.stages()[j]), &Graph::of(&task.b), &w));
        assert!((0..w.len()).all(|s| h[w[s]] == g[comp_j[s]]));
    }
    let counts: Vec<Vec<usize>> = [10, 25, 50]
        .iter()
        .map(|&b| threadable_paths(&build_chain(&ChainConfig::new(b, 3)).unwrap(), 2).unwrap())
        .collect();
    for pair in counts.windows(2) {
        for (i, (a, b)) in pair[0].iter().zip(&pair[1]).enumerate() {
            assert!(a >= b, "level {i}: {a} then {b}");
        }
    }
    let last: Vec<String> = counts[2].iter().map(usize::to_string).collect();
    format!("{served} served, all replayed ({:.1}s); threadable at 50: {}", started.elapsed().as_secs_f64(), last.join(" "))
}

fn criterion_5() -> String {
    let mut targets = 0;
    for n in 2..=3 {
        for y in systems_on(n).unwrap().filter(FiniteSystem::is_deterministic) {
            let next: Vec<usize> = (0..n).map(|s| y.successors(s)[0]).collect();
            for k in 1..=3 {
                assert!(no_finite_factor_search(k, &y).unwrap().is_empty());
                // Every k-block map, equivariant on all (k+1)-words and onto.
                let oracle = all_functions(1 << k, n).into_iter().filter(|v| {
                    let onto = v.iter().fold(0u32, |acc, &s| acc | 1 << s) == (1 << n) - 1;
                    onto && (0..2usize << k).all(|w| next[v[w >> 1]] == v[w & ((1 << k) - 1)])
                });
                assert_eq!(oracle.count(), 0);
            }
            targets += 1;
        }
    }
    let point = FiniteSystem::self_loop();
    for k in 1..=3 {
        let found = no_finite_factor_search(k, &point).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].values.iter().all(|&v| v == 0));
    }
    format!("{targets} deterministic targets, k = 1..3: no factors; one-point control: 1")
}

/// `B_n` of the set-theoretic fiber product: pairs of words that avoid the
/// forbidden lists, have equal images, and extend forever.
fn fiber_oracle(y0: &Sft, y1: &Sft, f0: &BlockCode, f1: &BlockCode, n: usize) -> BTreeSet<(Word, Word)> {
    let k = f0.window().max(f1.window()).max(y0.memory() + 1).max(y1.memory() + 1).max(2);
    let (a0, a1) = (y0.alphabet().len(), y1.alphabet().len());
    let states = (a0 * a1).pow(k as u32 - 1);
    let avoids = |w: &[usize], forbidden: &BTreeSet<Word>| {
        forbidden.iter().all(|f| f.len() > w.len() || !w.windows(f.len()).any(|s| s == f.as_slice()))
    };
    let ok = |u: &[usize], v: &[usize]| {
        if !avoids(u, y0.forbidden()) || !avoids(v, y1.forbidden()) {
            return false;
        }
        let (n0, n1) = (f0.window(), f1.window());
        (0..u.len()).filter(|&i| i + n0 <= u.len() && i + n1 <= v.len()).all(|i| {
            let a = f0.map().get(&u[i..i + n0]);
            let b = f1.map().get(&v[i..i + n1]);
            a.is_some() && a == b
        })
    };
    let mut memo: HashMap<(usize, Word, Word), bool> = HashMap::new();
    fn alive(
        u: &mut Word,
        v: &mut Word,
        rest: usize,
        k: usize,
        sizes: (usize, usize),
        ok: &dyn Fn(&[usize], &[usize]) -> bool,
        memo: &mut HashMap<(usize, Word, Word), bool>,
    ) -> bool {
        if rest == 0 {
            return true;
        }
        let tail = u.len().saturating_sub(k - 1);
        let key = (rest, u[tail..].to_vec(), v[tail..].to_vec());
        if let Some(&r) = memo.get(&key) {
            return r;
        }
        let mut result = false;
        'search: for a in 0..sizes.0 {
            for b in 0..sizes.1 {
                u.push(a);
                v.push(b);
                let from = u.len().saturating_sub(k);
                let good = ok(&u[from..], &v[from..]) && alive(u, v, rest - 1, k, sizes, ok, memo);
                u.pop();
                v.pop();
                if good {
                    result = true;
                    break 'search;
                }
            }
        }
        memo.insert(key, result);
        result
    }
    let mut out = BTreeSet::new();
    for u in all_functions(n, a0) {
        for v in all_functions(n, a1) {
            if ok(&u, &v) && alive(&mut u.clone(), &mut v.clone(), states + 1, k, (a0, a1), &ok, &mut memo) {
                out.insert((u.clone(), v));
            }
        }
    }
    out
}

fn criterion_6() -> String {
    let gm = Sft::golden_mean();
    let full = Sft::full(["0", "1"]).unwrap();
    let point = Sft::point();
    let bit = Alphabet::new(["0", "1"]).unwrap();
    let instances: Vec<(&str, Sft, Sft, Sft, BlockCode, BlockCode)> = vec![
        ("identity-fiber", gm.clone(), gm.clone(), gm.clone(), BlockCode::identity(&gm), BlockCode::identity(&gm)),
        (
            "golden-mean pair over point",
            point.clone(),
            gm.clone(),
            gm.clone(),
            BlockCode::constant(&gm, point.alphabet().clone(), 0).unwrap(),
            BlockCode::constant(&gm, point.alphabet().clone(), 0).unwrap(),
        ),
        (
            "xor",
            full.clone(),
            full.clone(),
            full.clone(),
            BlockCode::from_fn(&full, bit, 2, |w| w[0] ^ w[1]).unwrap(),
            BlockCode::identity(&full),
        ),
    ];
    let mut notes = Vec::new();
    for (name, x, y0, y1, f0, f1) in &instances {
        let fp = fiber_product(x, y0, y1, f0, f1).unwrap();
        for len in 1..=2 * fp.window {
            let library: BTreeSet<(Word, Word)> = blocks(&fp.sft, len)
                .iter()
                .map(|w| (fp.proj0.apply_word(w).unwrap(), fp.proj1.apply_word(w).unwrap()))
                .collect();
            assert_eq!(library, fiber_oracle(y0, y1, f0, f1, len), "{name} at length {len}");
            for w in blocks(&fp.sft, len.max(fp.window)) {
                let a = f0.apply_word(&fp.proj0.apply_word(&w).unwrap()).unwrap();
                let b = f1.apply_word(&fp.proj1.apply_word(&w).unwrap()).unwrap();
                let cut = a.len().min(b.len());
                assert_eq!(a[..cut], b[..cut], "{name}: square does not commute on {w:?}");
            }
        }
        notes.push(format!("{name} to length {}", 2 * fp.window));
    }
    notes.join(", ")
}

fn criterion_7() -> String {
    let t = odometer_tower(4).unwrap();
    assert!(validate_tower(&t).valid);
    let orders = odometer_orders(4);
    assert_eq!(orders, [1, 2, 6, 24]);
    let residue = |x: &Sft, s: usize| -> usize { x.alphabet().symbol(s).parse().unwrap() };
    for (i, (x, &s)) in t.levels().iter().zip(&orders).enumerate() {
        assert_eq!(x.alphabet().len(), s);
        // Blocks are runs r, r+1, … mod s; σ^s returns every run to its start.
        let expected: BTreeSet<Vec<usize>> = (0..s).map(|r| (0..s + 4).map(|j| (r + j) % s).collect()).collect();
        let found: BTreeSet<Vec<usize>> =
            blocks(x, s + 4).iter().map(|w| w.iter().map(|&c| residue(x, c)).collect()).collect();
        assert_eq!(found, expected, "level {i}");
        for w in &found {
            assert_eq!(w[s..], w[..4]);
        }
        if i > 0 {
            let bond = &t.bonds()[i - 1];
            let below = &t.levels()[i - 1];
            for c in 0..s {
                let r = residue(x, c);
                let image = residue(below, bond.get(&[c]).unwrap());
                assert_eq!(image, r % orders[i - 1]);
                let next = (0..s).find(|&d| residue(x, d) == (r + 1) % s).unwrap();
                let stepped = residue(below, bond.get(&[next]).unwrap());
                assert_eq!(stepped, (image + 1) % orders[i - 1]);
            }
        }
    }
    "depth 4 valid; sigma^s = id and bond commutes with sigma at orders 1 2 6 24".into()
}

fn criterion_8() -> String {
    let gm = Sft::golden_mean();
    let (k, m) = (3, 1);
    let mut shadowed = 0;
    for seed in 0..100 {
        let po = pseudo_orbit(&gm, k, 32, seed).unwrap();
        assert_eq!(po.len(), 32);
        let lcp = |a: &[usize], b: &[usize]| a.iter().zip(b).take_while(|(x, y)| x == y).count();
        for pair in po.points().windows(2) {
            assert!(lcp(&pair[0][1..], &pair[1]) > k);
        }
        let ShadowResult::Found(w) = shadow(&gm, &po, m).unwrap() else {
            continue;
        };
        assert!(shadow_is_valid(&po, &w, m));
        assert!(!w.windows(2).any(|p| p == [1, 1]), "shadow leaves the golden mean shift");
        assert!(po.points().iter().enumerate().all(|(t, p)| lcp(&w[t..], p) > m));
        shadowed += 1;
    }
    assert_eq!(shadowed, 100);
    "100/100 shadowed and revalidated".into()
}

fn criterion_9() -> String {
    let constant = Sft::constant_sequences(["0", "1"]).unwrap();
    assert!(!transitivity_check(&constant));
    assert!(transitivity_check(&Sft::full(["0", "1"]).unwrap()));
    assert!(transitivity_check(&Sft::golden_mean()));
    let t = cantor_identity_tower(3).unwrap();
    let top = &t.levels()[2];
    assert!(shift_equal(&t.levels()[0], &constant).equal);
    let comp = t.composite(0, 2).unwrap();
    assert!(verify_factor_code(&comp, top, &constant).unwrap().holds);
    for c in 0..top.alphabet().len() {
        let name = top.alphabet().symbol(c);
        assert_eq!(name.len(), 3);
        assert_eq!(t.levels()[0].alphabet().symbol(comp.get(&[c]).unwrap()), &name[..1]);
    }
    "constant-sequence shift not transitive; full and golden mean transitive; level 2 factors onto it".into()
}

fn criterion_10() -> String {
    let (mut total, mut partial) = (0, 0);
    for n in 1..=3 {
        for x in systems_on(n).unwrap() {
            let g = Graph::of(&x);
            let is_total = g.succ.iter().all(|&s| s != 0);
            match path_shift(&x) {
                Err(Error::NotTotal(_)) => {
                    assert!(!is_total);
                    partial += 1;
                }
                Err(e) => panic!("unexpected error {e}"),
                Ok((sft, code)) => {
                    assert!(is_total);
                    total += 1;
                    let b2: BTreeSet<(usize, usize)> = blocks(&sft, 2).iter().map(|w| (w[0], w[1])).collect();
                    let edges: BTreeSet<(usize, usize)> = g.edges().collect();
                    assert_eq!(b2, edges);
                    assert_eq!(code.window(), 1);
                    let x = Arc::new(x);
                    let proj = path_projection(&x, &sft, 2).unwrap();
                    let v = values(&proj);
                    assert!(oracle_factor(&Graph::of(proj.source()), &g, &v));
                }
            }
        }
    }
    format!("{total} total systems give verified factors; {partial} non-total rejected")
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> String);
    let criteria: [Criterion; 10] = [
        ("ef-pair determination", criterion_1),
        ("amalgamation square", criterion_2),
        ("lattice conditions", criterion_3),
        ("Fraisse extension", criterion_4),
        ("full shift has no finite factor", criterion_5),
        ("fiber product", criterion_6),
        ("odometer", criterion_7),
        ("shadowing", criterion_8),
        ("non-transitivity witness", criterion_9),
        ("path shift", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(e) => {
                failed += 1;
                let why = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
