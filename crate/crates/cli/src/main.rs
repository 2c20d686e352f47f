mod context;
mod fraisse;
mod shift;
mod sys;
mod tower;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use context::{Ctx, Outcome};

/// Finite nondeterministic systems, shifts and proshift towers.
#[derive(Parser)]
#[command(name = "symdyn", version)]
struct Cli {
    /// Workspace document to read entities from.
    #[arg(short, long, global = true)]
    workspace: Option<PathBuf>,
    /// Write the workspace, including entities created by the command.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Systems and multimaps.
    #[command(subcommand)]
    Sys(sys::SysCommand),
    /// Powerset lattices of systems.
    #[command(subcommand)]
    Lat(sys::LatCommand),
    /// Amalgamation and the bounded Fraïssé chain.
    #[command(subcommand)]
    Fraisse(fraisse::FraisseCommand),
    /// Shifts of finite type, sofic shifts and block codes.
    #[command(subcommand)]
    Shift(shift::ShiftCommand),
    /// Proshift towers.
    #[command(subcommand)]
    Tower(tower::TowerCommand),
    /// Lists the entities of the workspace.
    Show,
    /// Prints a graph description of an entity.
    Dot {
        name: String,
        /// Block length for the graph of an SFT.
        #[arg(long)]
        block: Option<usize>,
        /// Level of a tower.
        #[arg(long)]
        level: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let mut ctx = Ctx::load(cli.workspace.as_deref(), cli.out)?;
    let outcome = match cli.command {
        Command::Sys(c) => sys::run_sys(&mut ctx, c)?,
        Command::Lat(c) => sys::run_lat(&mut ctx, c)?,
        Command::Fraisse(c) => fraisse::run(&mut ctx, c)?,
        Command::Shift(c) => shift::run(&mut ctx, c)?,
        Command::Tower(c) => tower::run(&mut ctx, c)?,
        Command::Show => {
            for (name, e) in ctx.ws.iter() {
                println!("{name}: {}", e.kind());
            }
            Outcome::Pass
        }
        Command::Dot { name, block, level } => {
            print!("{}", symdyn::workspace::export_dot(&ctx.ws, &name, block, level).map_err(|e| e.to_string())?);
            Outcome::Pass
        }
    };
    ctx.finish()?;
    Ok(outcome)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
