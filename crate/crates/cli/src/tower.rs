use clap::Subcommand;
use symdyn::proshift::{
    bounded_universal_tower, cantor_identity_tower, odometer_tower, pseudo_orbit, shadow, shadow_is_valid,
    validate_tower, verify_served, ShadowResult, Tower, TowerLogEntry, UniversalCaps,
};
use symdyn::shifts::Shift;

use crate::context::{dyadic, err, yes_no, Ctx, Outcome};

#[derive(Subcommand)]
pub enum TowerCommand {
    /// Cyclic shifts of orders 1!, 2!, … bonded by reduction.
    Odometer {
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value = "odometer")]
        name: String,
    },
    /// Constant sequences over binary strings, bonded by dropping the last bit.
    Cantor {
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value = "cantor")]
        name: String,
    },
    /// Bounded approximation of the universal tower over SFT tasks.
    Universal {
        /// `ALPHABET,FORBIDDEN_LEN,WINDOW`.
        #[arg(long, default_value = "2,2,1")]
        caps: String,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value = "universal")]
        name: String,
    },
    /// Checks every bond of a workspace tower.
    Validate { tower: String },
    /// Generates seeded pseudo-orbits and searches for shadows.
    Shadow {
        /// SFT to run on.
        #[arg(default_value = "golden")]
        shift: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        seed: u64,
        /// Number of pseudo-orbits, with seeds `seed, seed + 1, …`.
        #[arg(long, default_value_t = 1)]
        runs: u64,
    },
}

fn report(tower: &Tower) -> bool {
    let r = validate_tower(tower);
    println!("depth: {}", tower.depth());
    for (i, (x, counts)) in tower.levels().iter().zip(&r.block_counts).enumerate() {
        println!("level {i}: {} symbols, blocks {} {} {}", x.alphabet().len(), counts[0], counts[1], counts[2]);
    }
    println!("valid: {}", yes_no(r.valid));
    if let Some(f) = &r.failure {
        println!("failure: {f}");
    }
    r.valid
}

pub fn run(ctx: &mut Ctx, cmd: TowerCommand) -> Result<Outcome, String> {
    match cmd {
        TowerCommand::Odometer { depth, name } => {
            let t = odometer_tower(depth).map_err(err)?;
            let valid = report(&t);
            ctx.ws.add_tower(&name, &t).map_err(err)?;
            Ok(Outcome::from_bool(valid))
        }
        TowerCommand::Cantor { depth, name } => {
            let t = cantor_identity_tower(depth).map_err(err)?;
            let valid = report(&t);
            ctx.ws.add_tower(&name, &t).map_err(err)?;
            Ok(Outcome::from_bool(valid))
        }
        TowerCommand::Universal { caps, budget, name } => {
            let parts: Vec<usize> = caps
                .split(',')
                .map(|p| p.trim().parse().map_err(|_| format!("bad caps `{caps}`")))
                .collect::<Result<_, String>>()?;
            let [alphabet, forbidden, window] = parts[..] else {
                return Err(format!("expected three caps, found `{caps}`"));
            };
            let ut = bounded_universal_tower(&UniversalCaps::new(alphabet, forbidden, window, budget)).map_err(err)?;
            let valid = report(&ut.tower);
            let mut replayed = true;
            for e in &ut.log {
                match e {
                    TowerLogEntry::Served { task, depth, witness } => {
                        let ok = verify_served(&ut.tower, task, *depth, witness).map_err(err)?;
                        let k = task.key;
                        println!("served {} {} {}: depth {depth}, replay {}", k.stage, k.triple, k.g_rank, yes_no(ok));
                        replayed &= ok;
                    }
                    TowerLogEntry::Skipped { key, reason } => {
                        println!("skipped {} {} {}: {reason}", key.stage, key.triple, key.g_rank);
                    }
                }
            }
            ctx.ws.add_tower(&name, &ut.tower).map_err(err)?;
            Ok(Outcome::from_bool(valid && replayed))
        }
        TowerCommand::Validate { tower } => Ok(Outcome::from_bool(report(ctx.ws.tower(&tower).map_err(err)?))),
        TowerCommand::Shadow { shift, delta, eps, len, seed, runs } => {
            let (k, m) = (dyadic(&delta)?, dyadic(&eps)?);
            let x = ctx.sft(&shift)?;
            let (mut found, mut valid, mut limited) = (0, 0, 0);
            for s in seed..seed + runs {
                let po = pseudo_orbit(&x, k, len, s).map_err(err)?;
                match shadow(&x, &po, m).map_err(err)? {
                    ShadowResult::Found(w) => {
                        found += 1;
                        valid += usize::from(shadow_is_valid(&po, &w, m));
                        if runs == 1 {
                            println!("shadow: {}", x.alphabet().format_word(&w));
                        }
                    }
                    ShadowResult::NotFound => {}
                    ShadowResult::HorizonLimited => limited += 1,
                }
            }
            println!("runs: {runs}");
            println!("shadowed: {found}");
            println!("revalidated: {valid}");
            if limited > 0 {
                println!("horizon limited: {limited}");
            }
            Ok(Outcome::from_bool(found as u64 == runs && valid == found))
        }
    }
}
