use super::{
    all_words, blocks, compose_codes, extend_window, verify_factor_code, Alphabet, BlockCode, Sft, Shift,
    SoficPresentation,
};
use crate::error::{Error, Result};

/// An SFT amalgam with its two projection codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberProduct {
    pub sft: Sft,
    pub proj0: BlockCode,
    pub proj1: BlockCode,
    /// Common window the input codes were extended to.
    pub window: usize,
}

fn require_factor(code: &BlockCode, y: &impl Shift, x: &impl Shift, what: &str) -> Result<()> {
    let check = verify_factor_code(code, y, x)?;
    match check.failure {
        Some(f) => Err(Error::NotAFactor(format!("{what}: {f}"))),
        None => Ok(()),
    }
}

/// Fiber product of two SFT factors `f0 : y0 → x`, `f1 : y1 → x`.
///
/// The result is the SFT over `A0 × A1` avoiding
/// `F̄0 = {⟨w0, w1⟩ : w0 ∈ F0}`, `F̄1 = {⟨w0, w1⟩ : w1 ∈ F1}` and
/// `F̄ = {⟨w0, w1⟩ ∈ B_N(y0) × B_N(y1) : f0(w0) ≠ f1(w1)}`, where both codes are
/// first extended to the larger window `N`.
pub fn fiber_product(x: &impl Shift, y0: &Sft, y1: &Sft, f0: &BlockCode, f1: &BlockCode) -> Result<FiberProduct> {
    if f0.target_alphabet() != f1.target_alphabet() {
        return Err(Error::AlphabetMismatch("codes land in different alphabets".into()));
    }
    require_factor(f0, y0, x, "f0")?;
    require_factor(f1, y1, x, "f1")?;
    let n = f0.window().max(f1.window());
    let e0 = extend_window(f0, y0, n)?;
    let e1 = extend_window(f1, y1, n)?;

    let (a0, a1) = (y0.alphabet(), y1.alphabet());
    let k1 = a1.len();
    let pair = |a: usize, b: usize| a * k1 + b;
    let names = (0..a0.len())
        .flat_map(|a| (0..k1).map(move |b| format!("({},{})", a0.symbol(a), a1.symbol(b))));
    let alphabet = Alphabet::new(names)?;

    let mut forbidden = Vec::new();
    for w0 in y0.forbidden() {
        for w1 in all_words(k1, w0.len()) {
            forbidden.push(w0.iter().zip(&w1).map(|(&a, &b)| pair(a, b)).collect());
        }
    }
    for w1 in y1.forbidden() {
        for w0 in all_words(a0.len(), w1.len()) {
            forbidden.push(w0.iter().zip(w1).map(|(&a, &b)| pair(a, b)).collect());
        }
    }
    let b1 = blocks(y1, n);
    for w0 in blocks(y0, n) {
        let s0 = e0.map()[&w0];
        for w1 in &b1 {
            if e1.map()[w1] != s0 {
                forbidden.push(w0.iter().zip(w1).map(|(&a, &b)| pair(a, b)).collect());
            }
        }
    }
    let sft = Sft::new(alphabet, forbidden)?;
    let proj0 = BlockCode::from_fn(&sft, a0.clone(), 1, |w| w[0] / k1)?;
    let proj1 = BlockCode::from_fn(&sft, a1.clone(), 1, |w| w[0] % k1)?;
    require_factor(&proj0, &sft, y0, "projection 0")?;
    require_factor(&proj1, &sft, y1, "projection 1")?;
    Ok(FiberProduct { sft, proj0, proj1, window: n })
}

/// The edge shift of a presentation with its labeling code.
pub fn sft_cover(y: &impl Shift) -> Result<(Sft, BlockCode)> {
    let g: SoficPresentation = y.presentation();
    let edges = g.edges();
    if edges.is_empty() {
        return Err(Error::EmptyShift("presentation has no infinite path".into()));
    }
    let alphabet = Alphabet::new((0..edges.len()).map(|i| format!("e{i}")))?;
    let mut forbidden = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        for (j, f) in edges.iter().enumerate() {
            if e.2 != f.0 {
                forbidden.push(vec![i, j]);
            }
        }
    }
    let cover = Sft::new(alphabet, forbidden)?;
    let label = BlockCode::from_fn(&cover, y.alphabet().clone(), 1, |w| edges[w[0]].1)?;
    Ok((cover, label))
}

/// Amalgam of two sofic factors of `x`: lift both to their edge-shift covers,
/// take the fiber product there and compose the projections with the labelings.
pub fn sofic_amalgamate(
    x: &impl Shift,
    y0: &impl Shift,
    y1: &impl Shift,
    f0: &BlockCode,
    f1: &BlockCode,
) -> Result<FiberProduct> {
    require_factor(f0, y0, x, "f0")?;
    require_factor(f1, y1, x, "f1")?;
    let (c0, h0) = sft_cover(y0)?;
    let (c1, h1) = sft_cover(y1)?;
    let k0 = compose_codes(&h0, f0, &c0)?;
    let k1 = compose_codes(&h1, f1, &c1)?;
    let fp = fiber_product(x, &c0, &c1, &k0, &k1)?;
    let g0 = compose_codes(&fp.proj0, &h0, &fp.sft)?;
    let g1 = compose_codes(&fp.proj1, &h1, &fp.sft)?;
    require_factor(&g0, &fp.sft, y0, "projection 0")?;
    require_factor(&g1, &fp.sft, y1, "projection 1")?;
    Ok(FiberProduct { sft: fp.sft, proj0: g0, proj1: g1, window: fp.window })
}
