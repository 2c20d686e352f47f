use clap::Subcommand;
use symdyn::fraisse::{build_chain, check_extension, threadable_paths, ChainConfig, FraisseChain, LogEntry};

use crate::context::{err, Ctx, Outcome};

#[derive(Subcommand)]
pub enum FraisseCommand {
    /// Builds a bounded prefix of the chain.
    Build {
        /// Number of tasks to serve or skip.
        #[arg(long)]
        budget: usize,
        /// Largest number of states of task systems.
        #[arg(long)]
        cap: usize,
        #[arg(long, default_value = "u")]
        name: String,
    },
    /// Searches for an extension witness; without a task, replays every served task of the chain.
    CheckExtension {
        chain: String,
        #[arg(long, requires_all = ["a", "b", "g", "h"])]
        stage: Option<usize>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        h: Option<String>,
    },
    /// Counts paths with `len` steps at each stage that lift to every deeper stage.
    Threads {
        /// Chain in the workspace; otherwise a chain is built from `--budget` and `--cap`.
        chain: Option<String>,
        #[arg(long)]
        len: usize,
        #[arg(long, required_unless_present = "chain")]
        budget: Option<usize>,
        #[arg(long, default_value_t = 3)]
        cap: usize,
    },
}

fn summary(chain: &FraisseChain) {
    let sizes: Vec<String> = chain.stages().iter().map(|s| s.len().to_string()).collect();
    let skipped = chain.log().iter().filter(|e| matches!(e, LogEntry::Skipped { .. })).count();
    println!("stages: {}", chain.len());
    println!("stage sizes: {}", sizes.join(" "));
    println!("served: {}", chain.served_count());
    println!("skipped: {skipped}");
}

pub fn run(ctx: &mut Ctx, cmd: FraisseCommand) -> Result<Outcome, String> {
    match cmd {
        FraisseCommand::Build { budget, cap, name } => {
            let chain = build_chain(&ChainConfig::new(budget, cap)).map_err(err)?;
            summary(&chain);
            for e in chain.log() {
                if let LogEntry::Skipped { key, reason } = e {
                    println!("skip: stage {} triple {} rank {}: {reason}", key.stage, key.triple, key.g_rank);
                }
            }
            ctx.ws.add_chain(&name, &chain).map_err(err)?;
            Ok(Outcome::Pass)
        }
        FraisseCommand::CheckExtension { chain, stage, a, b, g, h } => {
            let c = ctx.ws.chain(&chain).map_err(err)?;
            if let (Some(i), Some(a), Some(b), Some(g), Some(h)) = (stage, a, b, g, h) {
                let ws = &ctx.ws;
                let found = check_extension(
                    c,
                    i,
                    ws.system(&a).map_err(err)?,
                    ws.system(&b).map_err(err)?,
                    ws.multimap(&g).map_err(err)?,
                    ws.multimap(&h).map_err(err)?,
                )
                .map_err(err)?;
                return Ok(match found {
                    Some((j, u)) => {
                        println!("extension: stage {j}");
                        println!("witness: {u:?}");
                        Outcome::Pass
                    }
                    None => {
                        println!("extension: none in {} stages", c.len());
                        Outcome::Fail
                    }
                });
            }
            let mut failures = 0;
            for (task, depth, _) in c.served() {
                let found = check_extension(c, task.stage, &task.a, &task.b, &task.g, &task.h).map_err(err)?;
                let ok = matches!(found, Some((j, _)) if j <= depth);
                let k = task.key;
                let at = found.map_or("none".to_string(), |(j, _)| j.to_string());
                println!("task {} {} {}: logged {depth}, found {at}", k.stage, k.triple, k.g_rank);
                failures += usize::from(!ok);
            }
            println!("served: {}", c.served_count());
            println!("failures: {failures}");
            Ok(Outcome::from_bool(failures == 0))
        }
        FraisseCommand::Threads { chain, len, budget, cap } => {
            let built;
            let c = match (&chain, budget) {
                (Some(name), _) => ctx.ws.chain(name).map_err(err)?,
                (None, Some(b)) => {
                    built = build_chain(&ChainConfig::new(b, cap)).map_err(err)?;
                    &built
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            let counts = threadable_paths(c, len).map_err(err)?;
            let text: Vec<String> = counts.iter().map(usize::to_string).collect();
            println!("stages: {}", c.len());
            println!("threadable: {}", text.join(" "));
            Ok(Outcome::Pass)
        }
    }
}
