use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{is_plain_token, is_valid_name, Entity, ServedNames, Workspace};
use crate::fraisse::{LogEntry, TaskKey};
use crate::error::{Error, Result};
use crate::proshift::Tower;
use crate::shifts::{Alphabet, BlockCode, Shift, Sft, SoficPresentation};
use crate::systems::{FiniteSystem, Multimap};

#[derive(Debug, Clone)]
struct Token {
    text: String,
    line: usize,
    column: usize,
}

impl Token {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.column, message: message.into() }
    }

    fn is(&self, s: &str) -> bool {
        self.text == s
    }
}

struct Block {
    kind: Token,
    name: Token,
    header: Vec<Token>,
    lines: Vec<Vec<Token>>,
}

fn tokenize(text: &str) -> Vec<Vec<Token>> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let mut tokens = Vec::new();
            let mut start = None;
            for (j, c) in line.char_indices().chain([(line.len(), ' ')]) {
                if start.is_none() && c == '#' {
                    break;
                }
                match (start, c.is_whitespace()) {
                    (None, false) => start = Some(j),
                    (Some(s), true) => {
                        let column = line[..s].chars().count() + 1;
                        tokens.push(Token { text: line[s..j].to_string(), line: i + 1, column });
                        start = None;
                    }
                    _ => {}
                }
            }
            if let Some(s) = start {
                let column = line[..s].chars().count() + 1;
                tokens.push(Token { text: line[s..].to_string(), line: i + 1, column });
            }
            tokens
        })
        .collect()
}

const KINDS: [&str; 7] = ["system", "multimap", "sft", "sofic", "code", "tower", "chain"];

fn split_blocks(text: &str) -> Result<Vec<Block>> {
    let mut blocks = Vec::new();
    let mut current: Option<Block> = None;
    let total = text.lines().count();
    for mut tokens in tokenize(text) {
        if tokens.is_empty() {
            continue;
        }
        match current.as_mut() {
            None => {
                let kind = tokens[0].clone();
                if !KINDS.contains(&kind.text.as_str()) {
                    return Err(kind.error(format!("expected one of {}, found `{}`", KINDS.join(", "), kind.text)));
                }
                let last = tokens.last().unwrap();
                if !last.is("{") {
                    return Err(Error::Parse {
                        line: last.line,
                        column: last.column + last.text.chars().count(),
                        message: "expected `{` at the end of the header".into(),
                    });
                }
                tokens.pop();
                if tokens.len() < 2 {
                    return Err(kind.error(format!("{} needs a name", kind.text)));
                }
                let name = tokens[1].clone();
                if !is_valid_name(&name.text) {
                    return Err(name.error(format!("invalid name `{}`", name.text)));
                }
                current = Some(Block { kind, name, header: tokens.split_off(2), lines: Vec::new() });
            }
            Some(block) => {
                if tokens[0].is("}") {
                    if let Some(extra) = tokens.get(1) {
                        return Err(extra.error("unexpected text after `}`"));
                    }
                    blocks.push(current.take().unwrap());
                } else {
                    if let Some(t) = tokens.iter().find(|t| t.is("{") || t.is("}")) {
                        return Err(t.error(format!("unexpected `{}`", t.text)));
                    }
                    block.lines.push(tokens);
                }
            }
        }
    }
    if let Some(block) = current {
        return Err(Error::Parse {
            line: total + 1,
            column: 1,
            message: format!("block `{}` is not closed", block.name.text),
        });
    }
    Ok(blocks)
}

/// `: SOURCE -> TARGET` followed by the remaining header tokens.
fn endpoints(block: &Block) -> Result<(&Token, &Token, &[Token])> {
    let h = block.header.as_slice();
    match h {
        [colon, src, arrow, tgt, rest @ ..] if colon.is(":") && arrow.is("->") => Ok((src, tgt, rest)),
        _ => Err(h.first().unwrap_or(&block.name).error(format!("expected `{} NAME : SOURCE -> TARGET`", block.kind.text))),
    }
}

fn no_header(block: &Block) -> Result<()> {
    match block.header.first() {
        Some(t) => Err(t.error(format!("unexpected `{}` in {} header", t.text, block.kind.text))),
        None => Ok(()),
    }
}

fn at(t: &Token) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Parse { .. } => e,
        e => t.error(e.to_string()),
    }
}

fn texts(tokens: &[Token]) -> Vec<String> {
    tokens.iter().map(|t| t.text.clone()).collect()
}

fn check_plain(tokens: &[Token]) -> Result<()> {
    match tokens.iter().find(|t| !is_plain_token(&t.text)) {
        Some(t) => Err(t.error(format!("`{}` cannot be used as a name here", t.text))),
        None => Ok(()),
    }
}

/// Lines of the form `keyword values…`, each keyword at most once, none
/// other than those listed.
fn keyword_lines<'a>(block: &'a Block, allowed: &[&str]) -> Result<HashMap<&'a str, &'a [Token]>> {
    let mut seen = HashMap::new();
    for line in &block.lines {
        let key = &line[0];
        if !allowed.contains(&key.text.as_str()) {
            return Err(key.error(format!("expected one of {} in {} block", allowed.join(", "), block.kind.text)));
        }
        if seen.insert(key.text.as_str(), &line[1..]).is_some() {
            return Err(key.error(format!("repeated `{}`", key.text)));
        }
    }
    Ok(seen)
}

/// Lines of the form `x -> y…`.
fn arrow_lines<'a>(block: &'a Block, skip: &[&str]) -> Result<Vec<(&'a Token, &'a [Token])>> {
    let mut out = Vec::new();
    for line in &block.lines {
        if skip.contains(&line[0].text.as_str()) {
            continue;
        }
        match line.as_slice() {
            [x, arrow, ys @ ..] if arrow.is("->") => out.push((x, ys)),
            _ => return Err(line[0].error("expected `NAME -> NAME…`")),
        }
    }
    Ok(out)
}

fn parse_system(block: &Block) -> Result<FiniteSystem> {
    no_header(block)?;
    let mut states: Vec<Token> = Vec::new();
    let mut seen_states = false;
    for line in &block.lines {
        if line[0].is("states") {
            if seen_states {
                return Err(line[0].error("repeated `states`"));
            }
            seen_states = true;
            states.extend(line[1..].iter().cloned());
        }
    }
    if !seen_states {
        return Err(block.name.error(format!("system `{}` has no `states` line", block.name.text)));
    }
    check_plain(&states)?;
    let mut names: HashMap<&str, &Token> = HashMap::new();
    for t in &states {
        if let Some(first) = names.insert(&t.text, t) {
            return Err(t.error(format!("duplicate state `{}` (also at column {})", t.text, first.column)));
        }
    }
    let mut edges = Vec::new();
    for (x, ys) in arrow_lines(block, &["states"])? {
        for t in std::iter::once(x).chain(ys) {
            if !names.contains_key(t.text.as_str()) {
                return Err(t.error(format!("unknown state `{}`", t.text)));
            }
        }
        edges.extend(ys.iter().map(|y| (x.text.clone(), y.text.clone())));
    }
    FiniteSystem::new(texts(&states), edges).map_err(at(&block.name))
}

fn parse_sft(block: &Block) -> Result<Sft> {
    no_header(block)?;
    let lines = keyword_lines(block, &["alphabet", "forbid"])?;
    let symbols = lines.get("alphabet").ok_or_else(|| block.name.error("sft needs an `alphabet` line"))?;
    check_plain(symbols)?;
    let alphabet = Alphabet::new(texts(symbols)).map_err(at(&block.name))?;
    let mut words = Vec::new();
    for t in lines.get("forbid").copied().unwrap_or_default() {
        words.push(alphabet.parse_word(&t.text).map_err(at(t))?);
    }
    Sft::new(alphabet, words).map_err(at(&block.name))
}

fn parse_sofic(block: &Block) -> Result<SoficPresentation> {
    no_header(block)?;
    let mut alphabet = None;
    let mut vertices: Option<&[Token]> = None;
    let mut edges: Vec<&[Token]> = Vec::new();
    for line in &block.lines {
        match line[0].text.as_str() {
            "alphabet" if alphabet.is_none() => {
                check_plain(&line[1..])?;
                alphabet = Some(Alphabet::new(texts(&line[1..])).map_err(at(&line[0]))?);
            }
            "vertices" if vertices.is_none() => vertices = Some(&line[1..]),
            "edge" if line.len() == 4 => edges.push(&line[1..]),
            "edge" => return Err(line[0].error("expected `edge SOURCE SYMBOL TARGET`")),
            "alphabet" | "vertices" => return Err(line[0].error(format!("repeated `{}`", line[0].text))),
            _ => return Err(line[0].error("expected alphabet, vertices or edge in sofic block")),
        }
    }
    let alphabet = alphabet.ok_or_else(|| block.name.error("sofic needs an `alphabet` line"))?;
    let vertices = vertices.ok_or_else(|| block.name.error("sofic needs a `vertices` line"))?;
    check_plain(vertices)?;
    let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, t)| (t.text.as_str(), i)).collect();
    let mut indexed = Vec::new();
    for e in edges {
        let v = |t: &Token| index.get(t.text.as_str()).copied().ok_or_else(|| t.error(format!("unknown vertex `{}`", t.text)));
        let l = alphabet.index_of(&e[1].text).ok_or_else(|| e[1].error(format!("unknown symbol `{}`", e[1].text)))?;
        indexed.push((v(&e[0])?, l, v(&e[2])?));
    }
    SoficPresentation::from_indexed(texts(vertices), alphabet, indexed).map_err(at(&block.name))
}

/// Looks up a referenced entity of one of the given kinds.
fn reference<'a>(ws: &'a Workspace, t: &Token, kinds: &[&str]) -> Result<&'a Entity> {
    let e = ws.get(&t.text).ok_or_else(|| t.error(format!("unresolved reference `{}`", t.text)))?;
    if !kinds.contains(&e.kind()) {
        return Err(t.error(format!("`{}` is a {}, expected {}", t.text, e.kind(), kinds.join(" or "))));
    }
    Ok(e)
}

fn parse_multimap(block: &Block, ws: &Workspace) -> Result<Entity> {
    let (src, tgt, rest) = endpoints(block)?;
    if let Some(t) = rest.first() {
        return Err(t.error("expected `{`"));
    }
    reference(ws, src, &["system"])?;
    reference(ws, tgt, &["system"])?;
    let (x, y) = (ws.system(&src.text)?.clone(), ws.system(&tgt.text)?.clone());
    let mut pairs = Vec::new();
    for (a, bs) in arrow_lines(block, &[])? {
        let i = x.index_of(&a.text).ok_or_else(|| a.error(format!("unknown state `{}` of `{}`", a.text, src.text)))?;
        for b in bs {
            let j = y.index_of(&b.text).ok_or_else(|| b.error(format!("unknown state `{}` of `{}`", b.text, tgt.text)))?;
            pairs.push((i, j));
        }
    }
    let map = Multimap::new(x, y, pairs).map_err(at(&block.name))?;
    Ok(Entity::Multimap { source: src.text.clone(), target: tgt.text.clone(), map })
}

fn parse_code(block: &Block, ws: &Workspace) -> Result<Entity> {
    let (src, tgt, rest) = endpoints(block)?;
    let window = match rest {
        [kw, n] if kw.is("window") => n.text.parse::<usize>().map_err(|_| n.error(format!("bad window `{}`", n.text)))?,
        _ => return Err(rest.first().unwrap_or(tgt).error("expected `window N {`")),
    };
    reference(ws, src, &["sft", "sofic"])?;
    reference(ws, tgt, &["sft", "sofic"])?;
    let (x, y) = (ws.shift(&src.text)?, ws.shift(&tgt.text)?);
    let mut map = BTreeMap::new();
    for (w, s) in arrow_lines(block, &[])? {
        let [s] = s else {
            return Err(w.error("expected `BLOCK -> SYMBOL`"));
        };
        let word = x.alphabet().parse_word(&w.text).map_err(at(w))?;
        if word.len() != window {
            return Err(w.error(format!("block `{}` does not have length {window}", w.text)));
        }
        let sym = y.alphabet().index_of(&s.text).ok_or_else(|| s.error(format!("unknown symbol `{}`", s.text)))?;
        if map.insert(word, sym).is_some() {
            return Err(w.error(format!("block `{}` mapped twice", w.text)));
        }
    }
    let code = BlockCode::new(&x, y.alphabet().clone(), window, map).map_err(at(&block.name))?;
    Ok(Entity::Code { source: src.text.clone(), target: tgt.text.clone(), code })
}

fn parse_tower(block: &Block, ws: &Workspace) -> Result<Entity> {
    no_header(block)?;
    let lines = keyword_lines(block, &["levels", "bonds"])?;
    let levels = lines.get("levels").copied().unwrap_or_default();
    let bonds = lines.get("bonds").copied().unwrap_or_default();
    if levels.is_empty() {
        return Err(block.name.error("tower needs at least one level"));
    }
    if bonds.len() + 1 != levels.len() {
        return Err(block.name.error(format!("{} levels need {} bonds", levels.len(), levels.len() - 1)));
    }
    for t in levels {
        reference(ws, t, &["sft"])?;
    }
    for (i, t) in bonds.iter().enumerate() {
        reference(ws, t, &["code"])?;
        let (s, d) = ws.code_ends(&t.text)?;
        if s != levels[i + 1].text || d != levels[i].text {
            return Err(t.error(format!("bond {i} must run from `{}` to `{}`", levels[i + 1].text, levels[i].text)));
        }
    }
    let tower = Tower::unchecked(
        levels.iter().map(|t| ws.sft(&t.text).cloned()).collect::<Result<_>>()?,
        bonds.iter().map(|t| ws.code(&t.text).cloned()).collect::<Result<_>>()?,
    );
    Ok(Entity::Tower { levels: texts(levels), bonds: texts(bonds), tower })
}

fn usize_token(t: &Token) -> Result<usize> {
    t.text.parse().map_err(|_| t.error(format!("expected a number, found `{}`", t.text)))
}

/// Checks that a multimap reference runs between the named systems.
fn multimap_between(ws: &Workspace, t: &Token, source: &str, target: &str) -> Result<()> {
    reference(ws, t, &["multimap"])?;
    let Some(Entity::Multimap { source: s, target: d, .. }) = ws.get(&t.text) else { unreachable!() };
    if s != source || d != target {
        return Err(t.error(format!("`{}` must run from `{source}` to `{target}`", t.text)));
    }
    Ok(())
}

fn parse_chain(block: &Block, ws: &Workspace) -> Result<Entity> {
    no_header(block)?;
    let mut stages: Option<&[Token]> = None;
    let mut bonds: Option<&[Token]> = None;
    let mut entries: Vec<&[Token]> = Vec::new();
    for line in &block.lines {
        match line[0].text.as_str() {
            "stages" if stages.is_none() => stages = Some(&line[1..]),
            "bonds" if bonds.is_none() => bonds = Some(&line[1..]),
            "served" | "skipped" => entries.push(line),
            "stages" | "bonds" => return Err(line[0].error(format!("repeated `{}`", line[0].text))),
            _ => return Err(line[0].error("expected stages, bonds, served or skipped in chain block")),
        }
    }
    let stages = stages.unwrap_or_default();
    let bonds = bonds.unwrap_or_default();
    if stages.is_empty() {
        return Err(block.name.error("chain needs at least one stage"));
    }
    if bonds.len() + 1 != stages.len() {
        return Err(block.name.error(format!("{} stages need {} bonds", stages.len(), stages.len() - 1)));
    }
    for t in stages {
        reference(ws, t, &["system"])?;
    }
    for (i, t) in bonds.iter().enumerate() {
        multimap_between(ws, t, &stages[i + 1].text, &stages[i].text)?;
    }
    let mut log = Vec::new();
    let mut names = Vec::new();
    for line in entries {
        if line.len() < 4 {
            return Err(line[0].error("expected `STAGE TRIPLE RANK` after the entry kind"));
        }
        let key = TaskKey::new(usize_token(&line[1])?, usize_token(&line[2])?, usize_token(&line[3])?);
        if line[0].is("skipped") {
            log.push(LogEntry::Skipped { key, reason: texts(&line[4..]).join(" ") });
            names.push(None);
            continue;
        }
        let fields = ["depth", "a", "b", "g", "h", "witness"];
        let rest = &line[4..];
        if rest.len() != 2 * fields.len() || fields.iter().enumerate().any(|(i, f)| !rest[2 * i].is(f)) {
            return Err(line[0].error("expected `served STAGE TRIPLE RANK depth D a A b B g G h H witness W`"));
        }
        let depth = usize_token(&rest[1])?;
        if key.stage >= stages.len() || depth >= stages.len() {
            return Err(rest[1].error("stage out of range"));
        }
        let [a, b, g, h, w] = [&rest[3], &rest[5], &rest[7], &rest[9], &rest[11]];
        reference(ws, a, &["system"])?;
        reference(ws, b, &["system"])?;
        multimap_between(ws, g, &stages[key.stage].text, &a.text)?;
        multimap_between(ws, h, &b.text, &a.text)?;
        multimap_between(ws, w, &stages[depth].text, &b.text)?;
        let n = ServedNames {
            a: a.text.clone(),
            b: b.text.clone(),
            g: g.text.clone(),
            h: h.text.clone(),
            witness: w.text.clone(),
        };
        log.push(ws.served_entry(key, depth, &n)?);
        names.push(Some(n));
    }
    let chain = ws.assemble_chain(&texts(stages), &texts(bonds), log).map_err(at(&block.name))?;
    Ok(Entity::Chain { stages: texts(stages), bonds: texts(bonds), log: names, chain })
}

/// Parses a workspace document. References are resolved after all blocks are
/// read, so blocks may appear in any order.
pub fn parse_workspace(text: &str) -> Result<Workspace> {
    let blocks = split_blocks(text)?;
    let mut first: HashMap<&str, &Token> = HashMap::new();
    for b in &blocks {
        if let Some(prev) = first.insert(&b.name.text, &b.name) {
            return Err(b.name.error(format!("duplicate name `{}` (first defined on line {})", b.name.text, prev.line)));
        }
    }
    // Entities only refer to kinds of a lower rank, so resolving rank by rank
    // never meets an undefined reference to an existing block.
    let rank = |kind: &str| match kind {
        "system" | "sft" | "sofic" => 0,
        "multimap" | "code" => 1,
        _ => 2,
    };
    let mut ws = Workspace::new();
    for r in 0..3 {
        for b in blocks.iter().filter(|b| rank(&b.kind.text) == r) {
            let entity = match b.kind.text.as_str() {
                "system" => Entity::System(Arc::new(parse_system(b)?)),
                "sft" => Entity::Sft(parse_sft(b)?),
                "sofic" => Entity::Sofic(parse_sofic(b)?),
                "multimap" => parse_multimap(b, &ws)?,
                "code" => parse_code(b, &ws)?,
                "tower" => parse_tower(b, &ws)?,
                "chain" => parse_chain(b, &ws)?,
                _ => unreachable!(),
            };
            ws.insert_entity(&b.name.text, entity)?;
        }
    }
    ws.order = blocks.iter().map(|b| b.name.text.clone()).collect();
    Ok(ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_carry_positions() {
        let lines = tokenize("sft  x {  # note\n\talphabet a");
        assert_eq!(lines[0].len(), 3);
        assert_eq!((lines[0][1].text.as_str(), lines[0][1].column), ("x", 6));
        assert_eq!((lines[1][1].line, lines[1][1].column), (2, 11));
    }

    #[test]
    fn unclosed_block() {
        let err = parse_workspace("sft x {\n  alphabet a\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, column: 1, message: "block `x` is not closed".into() });
    }

    #[test]
    fn missing_brace_reports_column() {
        let Error::Parse { line, column, .. } = parse_workspace("system s\n").unwrap_err() else { panic!() };
        assert_eq!((line, column), (1, 9));
    }
}
