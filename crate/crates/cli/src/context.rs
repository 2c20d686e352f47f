use std::fs;
use std::path::{Path, PathBuf};

use symdyn::shifts::{make_standard, Sft, Shift, SoficPresentation, StandardShift};
use symdyn::workspace::{parse_workspace, Entity, Workspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// The loaded workspace and the entities a command adds to it.
pub struct Ctx {
    pub ws: Workspace,
    out: Option<PathBuf>,
}

impl Ctx {
    pub fn load(path: Option<&Path>, out: Option<PathBuf>) -> Result<Self, String> {
        let ws = match path {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                parse_workspace(&text).map_err(|e| format!("{}: {e}", p.display()))?
            }
            None => Workspace::new(),
        };
        Ok(Self { ws, out })
    }

    /// Prints the blocks of newly created entities.
    pub fn print_blocks(&self, names: &[String]) {
        for n in names {
            if let Some(text) = self.ws.entity_text(n) {
                print!("\n{text}");
            }
        }
    }

    /// Resolves a shift argument: a workspace name, or a standard shift such
    /// as `golden`, `full:a,b`, `cyclic:3`, `point` or `constant:a,b`.
    pub fn shift(&self, arg: &str) -> Result<SoficPresentation, String> {
        if self.ws.get(arg).is_some() {
            return self.ws.shift(arg).map_err(err);
        }
        Ok(standard(arg)?.presentation())
    }

    pub fn sft(&self, arg: &str) -> Result<Sft, String> {
        match self.ws.get(arg) {
            Some(Entity::Sft(x)) => Ok(x.clone()),
            Some(e) => Err(format!("`{arg}` is a {}, expected an sft", e.kind())),
            None => standard(arg),
        }
    }

    /// A workspace name for a shift argument, adding a standard shift under
    /// a derived name when needed.
    pub fn shift_name(&mut self, arg: &str) -> Result<String, String> {
        if self.ws.get(arg).is_some() {
            return Ok(arg.to_string());
        }
        let x = standard(arg)?;
        let name: String = arg.chars().map(|c| if c == ':' || c == ',' { '-' } else { c }).collect();
        if self.ws.get(&name).is_none() {
            self.ws.insert_sft(&name, x).map_err(err)?;
        }
        Ok(name)
    }

    pub fn finish(self) -> Result<(), String> {
        if let Some(p) = &self.out {
            fs::write(p, self.ws.to_text()).map_err(|e| format!("{}: {e}", p.display()))?;
        }
        Ok(())
    }
}

fn standard(arg: &str) -> Result<Sft, String> {
    let kind = StandardShift::parse(arg).map_err(|_| format!("`{arg}` is neither a workspace entity nor a standard shift"))?;
    make_standard(&kind).map_err(err)
}

/// Parses `1` or `2^-k` into `k`.
pub fn dyadic(text: &str) -> Result<usize, String> {
    if text == "1" {
        return Ok(0);
    }
    text.strip_prefix("2^-")
        .and_then(|k| k.parse().ok())
        .ok_or_else(|| format!("expected `2^-k` or `1`, found `{text}`"))
}
