//! `hog`: solve, compile, and check selection-function games.
//!
//! Exit codes: 0 success, 1 failed checks, 2 parse error (including
//! unreadable input), 3 elaboration error, 4 budget exceeded, 5 theorem
//! violation. Diagnostics go to standard error only; reports are printed
//! to standard output and are byte-identical across runs and `--jobs`
//! values.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hog_core::compiler::{compile_game, verify_compile};
use hog_core::engine::{Game, DEFAULT_PROFILE_BUDGET};
use hog_core::error::Error;
use hog_core::gamedef::{
    self, render_report, serialize_strategic, EquilibriumKind, ReportFormat,
};
use hog_core::hof::{is_context_independent, DEFAULT_CONTEXT_BUDGET};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_ELABORATE: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_THEOREM: u8 = 5;

#[derive(Parser)]
#[command(
    name = "hog",
    version,
    about = "Equilibria of finite games with selection-function agents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Game definition file (.hog).
    input: PathBuf,
    /// Worker threads for the profile search (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Profile budget override (default 10^7; HOG_BUDGET is the fallback).
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game: one report row per strategy profile.
    Solve {
        #[command(flatten)]
        common: CommonOpts,
        /// Which equilibrium columns to print.
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
        /// Output format.
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
    /// Compile a game to a classical 0/1 payoff game and verify the result.
    Compile {
        #[command(flatten)]
        common: CommonOpts,
        /// Write the compiled game here instead of standard output.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Validate a game and report per-agent diagnostics.
    Check {
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Nash,
    Selection,
    Both,
}

impl From<KindArg> for EquilibriumKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Nash => EquilibriumKind::Nash,
            KindArg::Selection => EquilibriumKind::Selection,
            KindArg::Both => EquilibriumKind::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => ReportFormat::Table,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Solve {
            common,
            kind,
            format,
        } => run_in_pool(common, |budget| cmd_solve(common, *kind, *format, budget)),
        Command::Compile { common, out } => {
            run_in_pool(common, |budget| cmd_compile(common, out.as_deref(), budget))
        }
        Command::Check { common } => run_in_pool(common, |budget| cmd_check(common, budget)),
    };
    ExitCode::from(code)
}

fn profile_budget(opts: &CommonOpts) -> u64 {
    opts.budget
        .or_else(|| {
            std::env::var("HOG_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_PROFILE_BUDGET)
}

/// Runs the command inside a rayon pool sized by --jobs. Results are
/// merged in profile order, so the worker count never changes output.
fn run_in_pool(opts: &CommonOpts, body: impl FnOnce(u64) -> u8 + Send) -> u8 {
    let budget = profile_budget(opts);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = opts.jobs {
        builder = builder.num_threads(jobs.max(1));
    }
    match builder.build() {
        Ok(pool) => pool.install(|| body(budget)),
        Err(e) => {
            eprintln!("error: cannot build worker pool: {e}");
            EXIT_CHECK_FAILED
        }
    }
}

/// Parse and elaborate the input file; totality of every agent over its
/// reachable contexts is part of elaboration here.
fn load(path: &Path) -> Result<Game, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    let def = gamedef::parse(&text).map_err(|d| {
        eprintln!("{}: {d}", path.display());
        EXIT_PARSE
    })?;
    let game = gamedef::elaborate(&def).map_err(|d| {
        eprintln!("{}: {d}", path.display());
        EXIT_ELABORATE
    })?;
    game.validate_agent_totality().map_err(|e| {
        eprintln!("{}: error: {e}", path.display());
        EXIT_ELABORATE
    })?;
    Ok(game)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::TheoremViolation(_) => EXIT_THEOREM,
        _ => EXIT_ELABORATE,
    }
}

fn cmd_solve(common: &CommonOpts, kind: KindArg, format: FormatArg, budget: u64) -> u8 {
    let game = match load(&common.input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let report = match game.solve(budget) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    print!("{}", render_report(&report, format.into(), kind.into()));
    0
}

fn cmd_compile(common: &CommonOpts, out: Option<&Path>, budget: u64) -> u8 {
    let game = match load(&common.input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let compiled = match compile_game(&game, budget) {
        Ok(sg) => sg,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let check = match verify_compile(&game, budget) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let text = serialize_strategic(&compiled, &format!("{}_compiled", game.name()));
    let summary = format!(
        "compiled {}: {} profiles\nequal: {}\nequilibria: {}\n",
        game.name(),
        game.profile_count(),
        check.equal,
        check.nash_of_compiled.len()
    );
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_CHECK_FAILED;
            }
            print!("{summary}");
        }
        None => {
            // Game text on stdout, summary on stderr.
            print!("{text}");
            eprint!("{summary}");
        }
    }
    0
}

fn cmd_check(common: &CommonOpts, budget: u64) -> u8 {
    let text = match std::fs::read_to_string(&common.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.input.display());
            return EXIT_PARSE;
        }
    };
    let def = match gamedef::parse(&text) {
        Ok(d) => d,
        Err(d) => {
            eprintln!("{}: {d}", common.input.display());
            return EXIT_PARSE;
        }
    };
    let game = match gamedef::elaborate(&def) {
        Ok(g) => g,
        Err(d) => {
            eprintln!("{}: {d}", common.input.display());
            return EXIT_ELABORATE;
        }
    };

    let mut ok = true;
    println!(
        "check {}: game {}, {} players, {} profiles",
        common.input.display(),
        game.name(),
        game.players().len(),
        game.profile_count()
    );

    // Totality of each agent over its reachable unilateral contexts.
    for (i, player) in game.players().iter().enumerate() {
        let contexts = game.reachable_contexts(i);
        let witness = contexts.iter().find(|p| game.agents()[i].eval(p).is_empty());
        match witness {
            None => println!(
                "agent {player}: total on {} reachable contexts",
                contexts.len()
            ),
            Some(p) => {
                ok = false;
                println!("agent {player}: NOT total, empty on reachable context {p}");
            }
        }
    }

    // Context dependence of each agent's induced quantifier, over the full
    // context space of the declared outcome set.
    for (i, player) in game.players().iter().enumerate() {
        match is_context_independent(&game.agent_quantifier(i), DEFAULT_CONTEXT_BUDGET) {
            Ok(true) => println!("agent {player}: quantifier context-independent"),
            Ok(false) => println!("agent {player}: quantifier context-dependent"),
            Err(e) => println!("agent {player}: context-independence skipped ({e})"),
        }
    }

    // The refinement assertion over the whole profile space.
    match game.solve(budget) {
        Ok(report) => {
            let refined = report
                .rows
                .iter()
                .all(|row| !row.is_selection || row.is_nash);
            if refined {
                println!(
                    "refinement: {} selection equilibria inside {} Nash equilibria",
                    report.selection_count, report.nash_count
                );
            } else {
                ok = false;
                println!("refinement: VIOLATED");
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    }

    if ok {
        println!("result: ok");
        0
    } else {
        println!("result: failed");
        EXIT_CHECK_FAILED
    }
}
