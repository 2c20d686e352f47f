//! A single text document holding named systems, maps, shifts, codes,
//! towers and chains.
//!
//! ```text
//! system c2 {
//!   states a b
//!   a -> b
//!   b -> a
//! }
//!
//! sft gm {
//!   alphabet 0 1
//!   forbid 11
//! }
//! ```
//!
//! Blocks may refer to blocks defined anywhere in the document.

mod dot;
mod parse;

pub use dot::{export_dot, multimap_dot, presentation_dot, sft_dot, system_dot};
pub use parse::parse_workspace;

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fraisse::{ExtensionTask, FraisseChain, LogEntry, TaskKey};
use crate::proshift::Tower;
use crate::shifts::{BlockCode, Shift, Sft, SoficPresentation};
use crate::systems::{FiniteSystem, Multimap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entity {
    System(Arc<FiniteSystem>),
    Multimap { source: String, target: String, map: Multimap },
    Sft(Sft),
    Sofic(SoficPresentation),
    Code { source: String, target: String, code: BlockCode },
    /// Stored without validation; see [`crate::proshift::validate_tower`].
    Tower { levels: Vec<String>, bonds: Vec<String>, tower: Tower },
    /// `log[i]` names the entities of the `i`-th log entry when it was served.
    Chain { stages: Vec<String>, bonds: Vec<String>, log: Vec<Option<ServedNames>>, chain: FraisseChain },
}

/// Entities behind a served extension task.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServedNames {
    pub a: String,
    pub b: String,
    pub g: String,
    pub h: String,
    pub witness: String,
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::System(_) => "system",
            Entity::Multimap { .. } => "multimap",
            Entity::Sft(_) => "sft",
            Entity::Sofic(_) => "sofic",
            Entity::Code { .. } => "code",
            Entity::Tower { .. } => "tower",
            Entity::Chain { .. } => "chain",
        }
    }
}

/// Named entities in definition order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workspace {
    order: Vec<String>,
    entities: HashMap<String, Entity>,
}

/// Entity names: ASCII letters, digits, `_`, `-` and `.`.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
}

/// State, vertex and symbol names must survive whitespace tokenization.
pub(crate) fn is_plain_token(token: &str) -> bool {
    !token.is_empty() && token != "->" && !token.chars().any(|c| c.is_whitespace() || "#{}".contains(c))
}

fn check_tokens<'a>(what: &str, tokens: impl IntoIterator<Item = &'a String>) -> Result<()> {
    match tokens.into_iter().find(|t| !is_plain_token(t)) {
        Some(t) => Err(Error::InvalidArgument(format!("{what} `{t}` cannot be written to a workspace"))),
        None => Ok(()),
    }
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.entities.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Entity)> {
        self.order.iter().map(|n| (n.as_str(), &self.entities[n]))
    }

    fn lookup(&self, name: &str, kind: &str) -> Result<&Entity> {
        let e = self.entities.get(name).ok_or_else(|| Error::InvalidArgument(format!("no entity named `{name}`")))?;
        if e.kind() != kind && !(kind == "shift" && matches!(e, Entity::Sft(_) | Entity::Sofic(_))) {
            return Err(Error::InvalidArgument(format!("`{name}` is a {}, not a {kind}", e.kind())));
        }
        Ok(e)
    }

    pub fn system(&self, name: &str) -> Result<&Arc<FiniteSystem>> {
        match self.lookup(name, "system")? {
            Entity::System(s) => Ok(s),
            _ => unreachable!(),
        }
    }

    pub fn multimap(&self, name: &str) -> Result<&Multimap> {
        match self.lookup(name, "multimap")? {
            Entity::Multimap { map, .. } => Ok(map),
            _ => unreachable!(),
        }
    }

    pub fn sft(&self, name: &str) -> Result<&Sft> {
        match self.lookup(name, "sft")? {
            Entity::Sft(x) => Ok(x),
            _ => unreachable!(),
        }
    }

    pub fn sofic(&self, name: &str) -> Result<&SoficPresentation> {
        match self.lookup(name, "sofic")? {
            Entity::Sofic(x) => Ok(x),
            _ => unreachable!(),
        }
    }

    /// A presentation of an SFT or sofic entity.
    pub fn shift(&self, name: &str) -> Result<SoficPresentation> {
        match self.lookup(name, "shift")? {
            Entity::Sft(x) => Ok(x.presentation()),
            Entity::Sofic(x) => Ok(x.clone()),
            _ => unreachable!(),
        }
    }

    pub fn code(&self, name: &str) -> Result<&BlockCode> {
        match self.lookup(name, "code")? {
            Entity::Code { code, .. } => Ok(code),
            _ => unreachable!(),
        }
    }

    /// Source and target names of a code.
    pub fn code_ends(&self, name: &str) -> Result<(&str, &str)> {
        match self.lookup(name, "code")? {
            Entity::Code { source, target, .. } => Ok((source, target)),
            _ => unreachable!(),
        }
    }

    pub fn tower(&self, name: &str) -> Result<&Tower> {
        match self.lookup(name, "tower")? {
            Entity::Tower { tower, .. } => Ok(tower),
            _ => unreachable!(),
        }
    }

    pub fn chain(&self, name: &str) -> Result<&FraisseChain> {
        match self.lookup(name, "chain")? {
            Entity::Chain { chain, .. } => Ok(chain),
            _ => unreachable!(),
        }
    }

    fn insert(&mut self, name: &str, entity: Entity) -> Result<()> {
        if !is_valid_name(name) {
            return Err(Error::InvalidArgument(format!("invalid entity name `{name}`")));
        }
        if self.entities.contains_key(name) {
            return Err(Error::InvalidArgument(format!("duplicate name `{name}`")));
        }
        self.order.push(name.to_string());
        self.entities.insert(name.to_string(), entity);
        Ok(())
    }

    pub fn insert_system(&mut self, name: &str, sys: Arc<FiniteSystem>) -> Result<()> {
        check_tokens("state", sys.states())?;
        self.insert(name, Entity::System(sys))
    }

    /// `source` and `target` must name systems equal to the map's endpoints.
    pub fn insert_multimap(&mut self, name: &str, source: &str, target: &str, map: Multimap) -> Result<()> {
        if **self.system(source)? != **map.source() || **self.system(target)? != **map.target() {
            return Err(Error::EndpointMismatch(format!("`{name}` does not run from `{source}` to `{target}`")));
        }
        let map = Multimap::new(self.system(source)?.clone(), self.system(target)?.clone(), map.pairs().iter().copied())?;
        self.insert(name, Entity::Multimap { source: source.into(), target: target.into(), map })
    }

    pub fn insert_sft(&mut self, name: &str, x: Sft) -> Result<()> {
        check_tokens("symbol", x.alphabet().symbols())?;
        self.insert(name, Entity::Sft(x))
    }

    pub fn insert_sofic(&mut self, name: &str, x: SoficPresentation) -> Result<()> {
        check_tokens("symbol", x.alphabet().symbols())?;
        check_tokens("vertex", x.vertices())?;
        self.insert(name, Entity::Sofic(x))
    }

    /// `source` and `target` must name shifts over the code's alphabets.
    pub fn insert_code(&mut self, name: &str, source: &str, target: &str, code: BlockCode) -> Result<()> {
        let (x, y) = (self.shift(source)?, self.shift(target)?);
        if x.alphabet() != code.source_alphabet() || y.alphabet() != code.target_alphabet() {
            return Err(Error::AlphabetMismatch(format!("`{name}` does not run from `{source}` to `{target}`")));
        }
        code.check_defined_on(&x)?;
        self.insert(name, Entity::Code { source: source.into(), target: target.into(), code })
    }

    /// Adds a tower with its levels as `name.levelI` and bonds as `name.bondI`.
    pub fn add_tower(&mut self, name: &str, tower: &Tower) -> Result<()> {
        let levels: Vec<String> = (0..tower.depth()).map(|i| format!("{name}.level{i}")).collect();
        let bonds: Vec<String> = (0..tower.bonds().len()).map(|i| format!("{name}.bond{i}")).collect();
        for (l, x) in levels.iter().zip(tower.levels()) {
            self.insert_sft(l, x.clone())?;
        }
        for (i, b) in tower.bonds().iter().enumerate() {
            self.insert_code(&bonds[i], &levels[i + 1], &levels[i], b.clone())?;
        }
        self.insert(name, Entity::Tower { levels, bonds, tower: tower.clone() })
    }

    /// Adds a chain with its stages as `name.stageI`, bonds as `name.bondI`
    /// and, for the `i`-th log entry, `name.taskI.g`, `name.taskI.h` and
    /// `name.taskI.witness`; the systems of the tasks become `name.objK`.
    pub fn add_chain(&mut self, name: &str, chain: &FraisseChain) -> Result<()> {
        let stages: Vec<String> = (0..chain.len()).map(|i| format!("{name}.stage{i}")).collect();
        let bonds: Vec<String> = (0..chain.bonds().len()).map(|i| format!("{name}.bond{i}")).collect();
        for (s, x) in stages.iter().zip(chain.stages()) {
            self.insert_system(s, x.clone())?;
        }
        for (i, b) in chain.bonds().iter().enumerate() {
            self.insert_multimap(&bonds[i], &stages[i + 1], &stages[i], b.clone())?;
        }
        let mut objects: Vec<(Arc<FiniteSystem>, String)> = Vec::new();
        let mut object = |ws: &mut Self, sys: &Arc<FiniteSystem>| -> Result<String> {
            if let Some((_, n)) = objects.iter().find(|(s, _)| s == sys) {
                return Ok(n.clone());
            }
            let n = format!("{name}.obj{}", objects.len());
            ws.insert_system(&n, sys.clone())?;
            objects.push((sys.clone(), n.clone()));
            Ok(n)
        };
        let mut log = Vec::new();
        for (i, entry) in chain.log().iter().enumerate() {
            match entry {
                LogEntry::Served { task, depth, witness } => {
                    let a = object(self, &task.a)?;
                    let b = object(self, &task.b)?;
                    let names = ServedNames {
                        g: format!("{name}.task{i}.g"),
                        h: format!("{name}.task{i}.h"),
                        witness: format!("{name}.task{i}.witness"),
                        a,
                        b,
                    };
                    self.insert_multimap(&names.g, &stages[task.stage], &names.a, task.g.clone())?;
                    self.insert_multimap(&names.h, &names.b, &names.a, task.h.clone())?;
                    self.insert_multimap(&names.witness, &stages[*depth], &names.b, witness.clone())?;
                    log.push(Some(names));
                }
                LogEntry::Skipped { reason, .. } => {
                    if reason.split_whitespace().collect::<Vec<_>>().join(" ") != *reason || reason.contains('#') {
                        return Err(Error::InvalidArgument(format!("skip reason `{reason}` cannot be written")));
                    }
                    log.push(None);
                }
            }
        }
        let chain = self.assemble_chain(&stages, &bonds, chain.log().to_vec())?;
        self.insert(name, Entity::Chain { stages, bonds, log, chain })
    }

    pub(crate) fn assemble_chain(&self, stages: &[String], bonds: &[String], log: Vec<LogEntry>) -> Result<FraisseChain> {
        let s = stages.iter().map(|n| self.system(n).cloned()).collect::<Result<Vec<_>>>()?;
        let b = bonds.iter().map(|n| self.multimap(n).cloned()).collect::<Result<Vec<_>>>()?;
        FraisseChain::from_parts(s, b, log)
    }

    /// Rebuilds a served log entry from named parts.
    pub(crate) fn served_entry(&self, key: TaskKey, depth: usize, names: &ServedNames) -> Result<LogEntry> {
        let task = ExtensionTask {
            key,
            stage: key.stage,
            a: self.system(&names.a)?.clone(),
            b: self.system(&names.b)?.clone(),
            g: self.multimap(&names.g)?.clone(),
            h: self.multimap(&names.h)?.clone(),
        };
        Ok(LogEntry::Served { task, depth, witness: self.multimap(&names.witness)?.clone() })
    }

    pub(crate) fn insert_entity(&mut self, name: &str, entity: Entity) -> Result<()> {
        self.insert(name, entity)
    }

    /// The block of one entity.
    pub fn entity_text(&self, name: &str) -> Option<String> {
        let e = self.entities.get(name)?;
        let mut out = String::new();
        write_entity(&mut out, name, e).expect("writing to a string");
        Some(out)
    }

    /// The document text; parsing it gives back an equal workspace.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, (name, e)) in self.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            write_entity(&mut out, name, e).expect("writing to a string");
        }
        out
    }
}

impl fmt::Display for Workspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn write_entity(out: &mut String, name: &str, e: &Entity) -> fmt::Result {
    match e {
        Entity::System(sys) => {
            writeln!(out, "system {name} {{")?;
            writeln!(out, "  states {}", sys.states().join(" "))?;
            for x in 0..sys.len() {
                if !sys.successors(x).is_empty() {
                    let ys: Vec<&str> = sys.successors(x).iter().map(|&y| sys.name(y)).collect();
                    writeln!(out, "  {} -> {}", sys.name(x), ys.join(" "))?;
                }
            }
        }
        Entity::Multimap { source, target, map } => {
            writeln!(out, "multimap {name} : {source} -> {target} {{")?;
            for x in 0..map.source().len() {
                let ys: Vec<&str> = map.image(x).iter().map(|&y| map.target().name(y)).collect();
                if !ys.is_empty() {
                    writeln!(out, "  {} -> {}", map.source().name(x), ys.join(" "))?;
                }
            }
        }
        Entity::Sft(x) => {
            writeln!(out, "sft {name} {{")?;
            writeln!(out, "  alphabet {}", x.alphabet().symbols().join(" "))?;
            if !x.forbidden().is_empty() {
                let words: Vec<String> = x.forbidden().iter().map(|w| x.alphabet().format_word(w)).collect();
                writeln!(out, "  forbid {}", words.join(" "))?;
            }
        }
        Entity::Sofic(x) => {
            writeln!(out, "sofic {name} {{")?;
            writeln!(out, "  alphabet {}", x.alphabet().symbols().join(" "))?;
            writeln!(out, "  vertices {}", x.vertices().join(" "))?;
            for &(s, l, d) in x.edges() {
                writeln!(out, "  edge {} {} {}", x.vertices()[s], x.alphabet().symbol(l), x.vertices()[d])?;
            }
        }
        Entity::Code { source, target, code } => {
            writeln!(out, "code {name} : {source} -> {target} window {} {{", code.window())?;
            for (w, &s) in code.map() {
                writeln!(out, "  {} -> {}", code.source_alphabet().format_word(w), code.target_alphabet().symbol(s))?;
            }
        }
        Entity::Tower { levels, bonds, .. } => {
            writeln!(out, "tower {name} {{")?;
            writeln!(out, "  levels {}", levels.join(" "))?;
            if !bonds.is_empty() {
                writeln!(out, "  bonds {}", bonds.join(" "))?;
            }
        }
        Entity::Chain { stages, bonds, log, chain } => {
            writeln!(out, "chain {name} {{")?;
            writeln!(out, "  stages {}", stages.join(" "))?;
            if !bonds.is_empty() {
                writeln!(out, "  bonds {}", bonds.join(" "))?;
            }
            for (entry, names) in chain.log().iter().zip(log) {
                match (entry, names) {
                    (LogEntry::Served { task, depth, .. }, Some(n)) => {
                        let k = task.key;
                        writeln!(
                            out,
                            "  served {} {} {} depth {depth} a {} b {} g {} h {} witness {}",
                            k.stage, k.triple, k.g_rank, n.a, n.b, n.g, n.h, n.witness
                        )?;
                    }
                    (LogEntry::Skipped { key, reason }, _) => {
                        writeln!(out, "  skipped {} {} {} {reason}", key.stage, key.triple, key.g_rank)?;
                    }
                    (LogEntry::Served { .. }, None) => unreachable!("served entries carry names"),
                }
            }
        }
    }
    writeln!(out, "}}")
}
