use std::sync::Arc;

use clap::{Subcommand, ValueEnum};
use symdyn::lattice::{check_dynalg_morphism, lift, lift_ef_pair};
use symdyn::systems::{
    classify_multimap, compose, factor_to_embedding, is_ef_pair, pushforward, EfPair, Multimap,
};
use symdyn::workspace::Entity;

use crate::context::{err, yes_no, Ctx, Outcome};

#[derive(Clone, Copy, ValueEnum)]
pub enum Expect {
    Morphism,
    Factor,
    Embedding,
}

#[derive(Subcommand)]
pub enum SysCommand {
    /// Checks the morphism clauses of a multimap.
    Classify {
        map: String,
        /// Property that decides the exit code.
        #[arg(long, value_enum, default_value = "morphism")]
        expect: Expect,
    },
    /// Composes `second ∘ first`.
    Compose {
        first: String,
        second: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Checks an ef-pair; without `--embedding` the embedding is derived from the factor.
    Ef {
        factor: String,
        #[arg(long)]
        embedding: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Pushes the dynamics forward along a surjection given as `state=image,…`.
    Push {
        system: String,
        #[arg(long)]
        map: String,
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum LatCommand {
    /// Prints the image map of the dynamics on the powerset lattice.
    Lift { system: String },
    /// Checks the lattice conditions for the lift of an ef-pair.
    Check {
        factor: String,
        #[arg(long)]
        embedding: Option<String>,
    },
}

fn ends(ctx: &Ctx, name: &str) -> Result<(String, String), String> {
    match ctx.ws.get(name) {
        Some(Entity::Multimap { source, target, .. }) => Ok((source.clone(), target.clone())),
        _ => Err(format!("`{name}` is not a multimap")),
    }
}

fn print_class(map: &Multimap) -> symdyn::systems::MorphismClass {
    let class = classify_multimap(map);
    println!("morphism: {}", yes_no(class.is_morphism));
    println!("factor: {}", yes_no(class.is_factor));
    println!("embedding: {}", yes_no(class.is_embedding));
    for v in &class.violations {
        println!("violation: {v}");
    }
    class
}

/// The embedding of the pair: the named one, or the one derived from `factor`
/// and added to the workspace.
fn embedding_for(ctx: &mut Ctx, factor: &str, embedding: Option<String>, name: Option<String>) -> Result<String, String> {
    if let Some(e) = embedding {
        ctx.ws.multimap(&e).map_err(err)?;
        return Ok(e);
    }
    let f = ctx.ws.multimap(factor).map_err(err)?;
    let e = factor_to_embedding(f).map_err(err)?;
    let (s, t) = ends(ctx, factor)?;
    let name = name.unwrap_or_else(|| format!("{factor}.emb"));
    ctx.ws.insert_multimap(&name, &t, &s, e).map_err(err)?;
    println!("embedding: {name} (derived)");
    Ok(name)
}

pub fn run_sys(ctx: &mut Ctx, cmd: SysCommand) -> Result<Outcome, String> {
    match cmd {
        SysCommand::Classify { map, expect } => {
            let class = print_class(ctx.ws.multimap(&map).map_err(err)?);
            Ok(Outcome::from_bool(match expect {
                Expect::Morphism => class.is_morphism,
                Expect::Factor => class.is_factor,
                Expect::Embedding => class.is_embedding,
            }))
        }
        SysCommand::Compose { first, second, name } => {
            let (phi, psi) = (ctx.ws.multimap(&first).map_err(err)?, ctx.ws.multimap(&second).map_err(err)?);
            let (cp, cq) = (classify_multimap(phi), classify_multimap(psi));
            let comp = compose(phi, psi).map_err(err)?;
            let (s, _) = ends(ctx, &first)?;
            let (_, t) = ends(ctx, &second)?;
            let name = name.unwrap_or_else(|| format!("{second}.{first}"));
            println!("composite: {name}");
            let class = print_class(&comp);
            ctx.ws.insert_multimap(&name, &s, &t, comp).map_err(err)?;
            ctx.print_blocks(&[name]);
            let preserved = (!(cp.is_morphism && cq.is_morphism) || class.is_morphism)
                && (!(cp.is_factor && cq.is_factor) || class.is_factor)
                && (!(cp.is_embedding && cq.is_embedding) || class.is_embedding);
            Ok(Outcome::from_bool(preserved))
        }
        SysCommand::Ef { factor, embedding, name } => {
            let e = embedding_for(ctx, &factor, embedding.clone(), name)?;
            let check = is_ef_pair(ctx.ws.multimap(&e).map_err(err)?, ctx.ws.multimap(&factor).map_err(err)?)
                .map_err(err)?;
            println!("ef-pair: {}", yes_no(check.holds));
            if let Some(v) = &check.violation {
                println!("violation: {v}");
            }
            if embedding.is_none() {
                ctx.print_blocks(&[e]);
            }
            Ok(Outcome::from_bool(check.holds))
        }
        SysCommand::Push { system, map, name } => {
            let x = ctx.ws.system(&system).map_err(err)?.clone();
            let mut values = vec![None; x.len()];
            let mut targets: Vec<String> = Vec::new();
            for item in map.split(',').filter(|s| !s.is_empty()) {
                let (a, b) = item.split_once('=').ok_or_else(|| format!("expected `state=image`, found `{item}`"))?;
                let i = x.index_of(a).ok_or_else(|| format!("unknown state `{a}`"))?;
                if !targets.iter().any(|t| t == b) {
                    targets.push(b.to_string());
                }
                values[i] = Some(b.to_string());
            }
            targets.sort();
            let f = values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let v = v.as_ref().ok_or_else(|| format!("no image for `{}`", x.name(i)))?;
                    Ok(targets.iter().position(|t| t == v).unwrap())
                })
                .collect::<Result<Vec<_>, String>>()?;
            let (y, graph) = pushforward(&x, &targets, &f).map_err(err)?;
            let name = name.unwrap_or_else(|| format!("{system}.push"));
            ctx.ws.insert_system(&name, Arc::clone(&y)).map_err(err)?;
            let map_name = format!("{name}.map");
            let class = print_class(&graph);
            ctx.ws.insert_multimap(&map_name, &system, &name, graph).map_err(err)?;
            ctx.print_blocks(&[name, map_name]);
            Ok(Outcome::from_bool(class.is_factor))
        }
    }
}

pub fn run_lat(ctx: &mut Ctx, cmd: LatCommand) -> Result<Outcome, String> {
    match cmd {
        LatCommand::Lift { system } => {
            let (lattice, map) = lift(ctx.ws.system(&system).map_err(err)?).map_err(err)?;
            let show = |s| {
                let names: Vec<String> = lattice.names(s).into_iter().collect();
                format!("{{{}}}", names.join(","))
            };
            println!("elements: {}", lattice.size());
            for a in lattice.elements() {
                println!("{} -> {}", show(a), show(map.apply(a)));
            }
            Ok(Outcome::Pass)
        }
        LatCommand::Check { factor, embedding } => {
            let e = embedding_for(ctx, &factor, embedding, None)?;
            let (e, f) = (ctx.ws.multimap(&e).map_err(err)?, ctx.ws.multimap(&factor).map_err(err)?);
            let pair = EfPair::new(e.clone(), f.clone()).map_err(err)?;
            let (eps, pi) = lift_ef_pair(&pair).map_err(err)?;
            let (_, alpha) = lift(e.source()).map_err(err)?;
            let (_, beta) = lift(e.target()).map_err(err)?;
            let report = check_dynalg_morphism(&alpha, &beta, &eps, &pi).map_err(err)?;
            print!("{report}");
            Ok(Outcome::from_bool(report.all_hold()))
        }
    }
}
