use std::fmt::Write as _;

use super::{Entity, Workspace};
use crate::error::{Error, Result};
use crate::shifts::{blocks, Shift, Sft, SoficPresentation};
use crate::systems::{FiniteSystem, Multimap};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// States in index order, then transitions in lexicographic order.
pub fn system_dot(name: &str, sys: &FiniteSystem) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for s in sys.states() {
        writeln!(out, "  {};", quote(s)).unwrap();
    }
    for &(x, y) in sys.trans() {
        writeln!(out, "  {} -> {};", quote(sys.name(x)), quote(sys.name(y))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Source and target systems as clusters, transitions solid and the map as
/// dashed cross-edges. Node identifiers are prefixed by `s:` and `t:`.
pub fn multimap_dot(name: &str, source: &str, target: &str, map: &Multimap) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for (tag, label, sys) in [("s", source, map.source()), ("t", target, map.target())] {
        writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{tag}"))).unwrap();
        writeln!(out, "    label={};", quote(label)).unwrap();
        for st in sys.states() {
            writeln!(out, "    {} [label={}];", quote(&format!("{tag}:{st}")), quote(st)).unwrap();
        }
        for &(x, y) in sys.trans() {
            let (x, y) = (format!("{tag}:{}", sys.name(x)), format!("{tag}:{}", sys.name(y)));
            writeln!(out, "    {} -> {};", quote(&x), quote(&y)).unwrap();
        }
        out.push_str("  }\n");
    }
    for &(x, y) in map.pairs() {
        let (x, y) = (format!("s:{}", map.source().name(x)), format!("t:{}", map.target().name(y)));
        writeln!(out, "  {} -> {} [style=dashed];", quote(&x), quote(&y)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Vertices in order, then edges labeled by their symbols.
pub fn presentation_dot(name: &str, g: &SoficPresentation) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for v in g.vertices() {
        writeln!(out, "  {};", quote(v)).unwrap();
    }
    for &(s, l, d) in g.edges() {
        let (s, d) = (&g.vertices()[s], &g.vertices()[d]);
        writeln!(out, "  {} -> {} [label={}];", quote(s), quote(d), quote(g.alphabet().symbol(l))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// The `n`-block graph of an SFT: vertices are the blocks of length `n`, with
/// an edge `u → v` whenever `u` followed by the last symbol of `v` is a block.
pub fn sft_dot(name: &str, x: &Sft, n: usize) -> Result<String> {
    if n == 0 {
        return Err(Error::InvalidWindow("block length must be at least 1".into()));
    }
    let a = x.alphabet();
    let mut out = format!("digraph {} {{\n", quote(name));
    for w in blocks(x, n) {
        writeln!(out, "  {};", quote(&a.format_word(&w))).unwrap();
    }
    for w in blocks(x, n + 1) {
        let (u, v) = (a.format_word(&w[..n]), a.format_word(&w[1..]));
        writeln!(out, "  {} -> {};", quote(&u), quote(&v)).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

/// DOT text for a system, a multimap, a sofic presentation, an SFT (its `block`-block
/// graph, default `max(memory, 1)`) or, given `level`, one level of a tower.
pub fn export_dot(ws: &Workspace, name: &str, block: Option<usize>, level: Option<usize>) -> Result<String> {
    let e = ws.get(name).ok_or_else(|| Error::InvalidArgument(format!("no entity named `{name}`")))?;
    let sft = |x: &Sft, label: &str| sft_dot(label, x, block.unwrap_or(x.memory().max(1)));
    match (e, level) {
        (Entity::System(s), None) => Ok(system_dot(name, s)),
        (Entity::Multimap { source, target, map }, None) => Ok(multimap_dot(name, source, target, map)),
        (Entity::Sofic(g), None) => Ok(presentation_dot(name, g)),
        (Entity::Sft(x), None) => sft(x, name),
        (Entity::Tower { tower, .. }, Some(i)) => {
            let x = tower
                .levels()
                .get(i)
                .ok_or_else(|| Error::InvalidArgument(format!("`{name}` has no level {i}")))?;
            sft(x, &format!("{name}.level{i}"))
        }
        (Entity::Tower { .. }, None) => Err(Error::InvalidArgument("choose a tower level".into())),
        (e, _) => Err(Error::InvalidArgument(format!("no graph export for a {}", e.kind()))),
    }
}
