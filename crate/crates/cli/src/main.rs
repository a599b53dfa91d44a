//! `monoforge`: build gadgets, validate and solve instances, check proofs,
//! run reductions and QBF transforms, NAE-solve, and mine.
//!
//! Exit codes: 0 success / SAT / yes, 10 UNSAT / no, 20 validation
//! failure, 1 usage or I/O error.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NO: u8 = 10;
pub const EXIT_INVALID: u8 = 20;
pub const EXIT_ERROR: u8 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "monoforge",
    version,
    about = "Balanced monotone 3-SAT gadgets, reductions and checkers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Guess from the first non-blank character.
    Auto,
    Dimacs,
    List,
    Json,
    Qdimacs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GadgetName {
    M,
    U,
    Core8,
    UNae,
    YCore,
    ZCore,
    F2,
    F3,
    G,
    H,
    MEnforcer,
    MbarEnforcer,
    N,
    S,
    Sbar,
    FrakM,
    FrakMbar,
    Q3,
    Q1mon,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum QbfAction {
    Check,
    #[value(name = "transform-1122")]
    Transform1122,
    #[value(name = "transform-2222")]
    Transform2222,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum NaeAction {
    Solve,
    Graph,
    Check,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Star22,
    #[value(name = "3sat22")]
    ThreeSat22,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a built-in gadget or instance.
    Gadget {
        #[arg(ignore_case = true)]
        name: GadgetName,
        #[arg(long, value_enum, default_value_t = Format::Dimacs)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an instance against a problem class.
    Validate {
        /// mono3sat22, star22, 3sat22 or nae-e2.
        #[arg(long)]
        class: String,
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
    },
    /// Decide satisfiability with the CDCL solver.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
        /// Write a DRUP proof here when the instance is unsatisfiable.
        #[arg(long)]
        proof: Option<PathBuf>,
        #[arg(long, default_value_t = monoforge::sat::DEFAULT_CONFLICT_BUDGET)]
        budget: u64,
    },
    /// Count models, stopping at the cap.
    Count {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
        #[arg(long, default_value_t = 1 << 32)]
        cap: u64,
    },
    /// Check a DRUP proof of unsatisfiability.
    RupCheck {
        input: PathBuf,
        #[arg(long)]
        proof: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
    },
    /// Reduce into Monotone 3-SAT-(2,2).
    Reduce {
        #[arg(long, value_enum)]
        from: SourceArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        provenance: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
    },
    /// Decide or transform a QDIMACS ∀∃ instance.
    Qbf {
        #[arg(value_enum)]
        action: QbfAction,
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monotone NAE 3-SAT with two appearances per variable.
    Nae {
        #[arg(value_enum)]
        action: NaeAction,
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
        /// For `check`: an assignment as signed literals.
        #[arg(long)]
        assignment: Option<PathBuf>,
        /// For `graph`: also list components that are complete on this many vertices.
        #[arg(long)]
        complete: Option<usize>,
    },
    /// Local search for monotone clause sets with few models.
    Mine {
        #[arg(long, required_unless_present = "template")]
        vars: Option<u32>,
        #[arg(long, required_unless_present = "template")]
        clauses: Option<usize>,
        /// Take the profile and clause widths from this formula; it is also
        /// the starting point.
        #[arg(long, conflicts_with_all = ["vars", "clauses"])]
        template: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long)]
        sideways: Option<f64>,
        #[arg(long)]
        stall: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Re-run every stored claim about the gadgets and instances.
    Selftest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
