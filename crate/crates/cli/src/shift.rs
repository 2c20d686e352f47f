use std::sync::Arc;

use clap::Subcommand;
use symdyn::shifts::{
    apply_code, blocks, fiber_product, no_finite_factor_search, path_projection, path_shift, sft_cover, shift_equal,
    verify_factor_code, Shift,
};
use symdyn::systems::classify_multimap;

use crate::context::{err, yes_no, Ctx, Outcome};

#[derive(Subcommand)]
pub enum ShiftCommand {
    /// Lists the blocks of a given length.
    Blocks {
        shift: String,
        #[arg(long)]
        len: usize,
    },
    /// Compares two shifts by their block languages.
    Equal { left: String, right: String },
    /// Applies a code to a word, or computes the image presentation.
    Apply {
        code: String,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Fiber product of two SFT factors `f0 : y0 → x` and `f1 : y1 → x`.
    Fiber {
        x: String,
        y0: String,
        y1: String,
        f0: String,
        f1: String,
        #[arg(long, default_value = "z")]
        name: String,
    },
    /// Edge-shift cover of a shift with its labeling code.
    Cover {
        shift: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// The SFT of paths through a total system.
    Pathshift {
        system: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Searches for block maps from the full 2-shift onto a deterministic system.
    Nofactor {
        system: String,
        /// Window of the block maps.
        #[arg(long)]
        k: usize,
    },
}

pub fn run(ctx: &mut Ctx, cmd: ShiftCommand) -> Result<Outcome, String> {
    match cmd {
        ShiftCommand::Blocks { shift, len } => {
            let x = ctx.shift(&shift)?;
            let words = blocks(&x, len);
            println!("count: {}", words.len());
            for w in &words {
                println!("{}", x.alphabet().format_word(w));
            }
            Ok(Outcome::Pass)
        }
        ShiftCommand::Equal { left, right } => {
            let cmp = shift_equal(&ctx.shift(&left)?, &ctx.shift(&right)?);
            println!("equal: {}", yes_no(cmp.equal));
            if let Some(w) = &cmp.witness {
                println!("witness: {w}");
            }
            Ok(Outcome::from_bool(cmp.equal))
        }
        ShiftCommand::Apply { code, word, name } => {
            let c = ctx.ws.code(&code).map_err(err)?.clone();
            let (source, _) = ctx.ws.code_ends(&code).map_err(err)?;
            let x = ctx.ws.shift(source).map_err(err)?;
            if let Some(w) = word {
                let word = x.alphabet().parse_word(&w).map_err(err)?;
                let image = c.apply_word(&word).map_err(err)?;
                println!("image: {}", c.target_alphabet().format_word(&image));
                return Ok(Outcome::Pass);
            }
            let image = apply_code(&c, &x).map_err(err)?;
            let name = name.unwrap_or_else(|| format!("{code}.image"));
            println!("vertices: {}", image.vertices().len());
            println!("edges: {}", image.edges().len());
            ctx.ws.insert_sofic(&name, image).map_err(err)?;
            ctx.print_blocks(&[name]);
            Ok(Outcome::Pass)
        }
        ShiftCommand::Fiber { x, y0, y1, f0, f1, name } => {
            let xs = ctx.shift(&x)?;
            let (s0, s1) = (ctx.sft(&y0)?, ctx.sft(&y1)?);
            let (c0, c1) = (ctx.ws.code(&f0).map_err(err)?.clone(), ctx.ws.code(&f1).map_err(err)?.clone());
            let fp = fiber_product(&xs, &s0, &s1, &c0, &c1).map_err(err)?;
            let len = 2 * fp.window;
            let commutes = blocks(&fp.sft, len).iter().all(|w| {
                let a = fp.proj0.apply_word(w).and_then(|v| c0.apply_word(&v));
                let b = fp.proj1.apply_word(w).and_then(|v| c1.apply_word(&v));
                matches!((a, b), (Ok(a), Ok(b)) if a == b)
            });
            println!("window: {}", fp.window);
            println!("alphabet: {}", fp.sft.alphabet().len());
            println!("forbidden: {}", fp.sft.forbidden().len());
            println!("square commutes to length {len}: {}", yes_no(commutes));
            let (n0, n1) = (ctx.shift_name(&y0)?, ctx.shift_name(&y1)?);
            let (p0, p1) = (format!("{name}.proj0"), format!("{name}.proj1"));
            ctx.ws.insert_sft(&name, fp.sft).map_err(err)?;
            ctx.ws.insert_code(&p0, &name, &n0, fp.proj0).map_err(err)?;
            ctx.ws.insert_code(&p1, &name, &n1, fp.proj1).map_err(err)?;
            ctx.print_blocks(&[name, p0, p1]);
            Ok(Outcome::from_bool(commutes))
        }
        ShiftCommand::Cover { shift, name } => {
            let y = ctx.shift(&shift)?;
            let (cover, label) = sft_cover(&y).map_err(err)?;
            let check = verify_factor_code(&label, &cover, &y).map_err(err)?;
            println!("edges: {}", cover.alphabet().len());
            println!("labeling is a factor: {}", yes_no(check.holds));
            let target = ctx.shift_name(&shift)?;
            let name = name.unwrap_or_else(|| format!("{target}.cover"));
            let code = format!("{name}.label");
            ctx.ws.insert_sft(&name, cover).map_err(err)?;
            ctx.ws.insert_code(&code, &name, &target, label).map_err(err)?;
            ctx.print_blocks(&[name, code]);
            Ok(Outcome::from_bool(check.holds))
        }
        ShiftCommand::Pathshift { system, name } => {
            let x = ctx.ws.system(&system).map_err(err)?.clone();
            let (sft, _) = match path_shift(&x) {
                Ok(r) => r,
                Err(e) => {
                    println!("total: no");
                    println!("reason: {e}");
                    return Ok(Outcome::Fail);
                }
            };
            let projection = path_projection(&Arc::clone(&x), &sft, 2).map_err(err)?;
            let factor = classify_multimap(&projection).is_factor;
            println!("total: yes");
            println!("projection is a factor: {}", yes_no(factor));
            let name = name.unwrap_or_else(|| format!("{system}.paths"));
            ctx.ws.insert_sft(&name, sft).map_err(err)?;
            ctx.print_blocks(&[name]);
            Ok(Outcome::from_bool(factor))
        }
        ShiftCommand::Nofactor { system, k } => {
            let y = ctx.ws.system(&system).map_err(err)?;
            let found = no_finite_factor_search(k, y).map_err(err)?;
            println!("states: {}", y.len());
            println!("factors: {}", found.len());
            for m in &found {
                println!("map: {}", m.describe(y));
            }
            Ok(Outcome::from_bool(found.is_empty() || y.len() == 1))
        }
    }
}
