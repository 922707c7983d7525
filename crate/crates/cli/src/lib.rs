//! Command-line front end: argument parsing, file formats, reports and
//! the subcommands `ideal`, `solve`, `igls`, `search`, `grid`, `tables`.

pub mod commands;
pub mod format;
pub mod io;
pub mod report;

use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use surroots::pipeline::LexStrategy;
use surroots::OrderKind;

use commands::{
    GridSettings, IglsSettings, OutputFormat, Outcome, SearchSettings, SolveSettings, TableKind, TableSettings,
};

#[derive(Parser, Debug)]
#[command(name = "surroots", version, about = "All stationary points of SUR likelihoods by exact algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; `grid` defaults to tsv, everything else to a JSON report.
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Report,
    Tsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OrderArg {
    Lex,
    Grevlex,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LexArg {
    /// FGLM conversion from the graded basis.
    Convert,
    /// Buchberger directly under lex.
    Direct,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TableArg {
    Gensur,
    Submodels,
}

#[derive(Args, Debug)]
pub struct Inputs {
    /// Model file (JSON: R, C, pattern, restrictions).
    pub model: PathBuf,
    /// Data file (JSON: X, Y as rows of decimal strings).
    pub data: PathBuf,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
    pub order: OrderArg,
    /// How the lex basis for solving is obtained.
    #[arg(long, value_enum, default_value_t = LexArg::Convert)]
    pub lex: LexArg,
    /// Residual tolerance and root cluster radius.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub real_tol: f64,
    /// Time budget for the Gröbner basis computation.
    #[arg(long)]
    pub budget_secs: Option<f64>,
    /// Include every basis polynomial in the report.
    #[arg(long)]
    pub full_basis: bool,
    /// Include per-stage timings (makes the report run-dependent).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension and degree of the maximum likelihood ideal.
    Ideal {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// All complex solutions and the classified real stationary points.
    Solve {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Iterated generalized least squares from the OLS start.
    Igls {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Search seeded random datasets for many real stationary points.
    Search {
        model: PathBuf,
        /// Subjects per dataset.
        #[arg(long = "subjects", short = 'n')]
        subjects: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Entries are uniform integers in [-range, range].
        #[arg(long, default_value_t = 300)]
        range: i64,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Profile log-likelihood on a grid over two free parameters.
    Grid {
        #[command(flatten)]
        inputs: Inputs,
        /// Range of the first parameter, `lo:hi`.
        #[arg(long, value_parser = parse_range)]
        range1: (f64, f64),
        /// Range of the second parameter, `lo:hi`.
        #[arg(long, value_parser = parse_range)]
        range2: (f64, f64),
        #[arg(long, default_value_t = 60)]
        steps: usize,
    },
    /// Reproduce the dimension/degree tables on seeded generic data.
    Tables {
        #[arg(value_enum)]
        which: TableArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Budget per row; defaults to 60 s, or 30 min for the largest rows.
        #[arg(long)]
        budget_secs: Option<f64>,
        /// Comma-separated 1-based rows to run.
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
        #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
        order: OrderArg,
        /// Rows computed concurrently.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(format!("invalid range {s:?}"));
    }
    Ok((lo, hi))
}

fn order(o: OrderArg) -> OrderKind {
    match o {
        OrderArg::Lex => OrderKind::Lex,
        OrderArg::Grevlex => OrderKind::GrevLex,
    }
}

fn budget(secs: Option<f64>) -> Option<Duration> {
    secs.map(|s| Duration::from_secs_f64(s.max(0.0)))
}

fn solve_settings(a: &SolveArgs, format: OutputFormat) -> SolveSettings {
    SolveSettings {
        order: order(a.order),
        lex: match a.lex {
            LexArg::Convert => LexStrategy::Convert,
            LexArg::Direct => LexStrategy::Direct,
        },
        tol: a.tol,
        real_tol: a.real_tol,
        budget: budget(a.budget_secs),
        format,
        full_basis: a.full_basis,
        timings: a.timings,
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let default = match cli.command {
        Command::Grid { .. } => FormatArg::Tsv,
        _ => FormatArg::Report,
    };
    let format = match cli.format.unwrap_or(default) {
        FormatArg::Report => OutputFormat::Report,
        FormatArg::Tsv => OutputFormat::Tsv,
    };
    match &cli.command {
        Command::Ideal { inputs, solve } => commands::cmd_ideal(&inputs.model, &inputs.data, &solve_settings(solve, format)),
        Command::Solve { inputs, solve } => commands::cmd_solve(&inputs.model, &inputs.data, &solve_settings(solve, format)),
        Command::Igls { inputs, max_iter, tol } => {
            commands::cmd_igls(&inputs.model, &inputs.data, &IglsSettings { max_iter: *max_iter, tol: *tol, format })
        }
        Command::Search { model, subjects, trials, seed, range, solve } => commands::cmd_search(
            model,
            &SearchSettings {
                subjects: *subjects,
                trials: *trials,
                seed: *seed,
                range: *range,
                solve: solve_settings(solve, format),
            },
        ),
        Command::Grid { inputs, range1, range2, steps } => commands::cmd_grid(
            &inputs.model,
            &inputs.data,
            &GridSettings { range1: *range1, range2: *range2, steps: *steps, format },
        ),
        Command::Tables { which, seed, budget_secs, rows, order: o, jobs } => commands::cmd_tables(&TableSettings {
            kind: match which {
                TableArg::Gensur => TableKind::GeneralSur,
                TableArg::Submodels => TableKind::Submodels,
            },
            seed: *seed,
            budget: budget(*budget_secs),
            rows: rows.clone(),
            order: order(*o),
            jobs: *jobs,
            format,
        }),
    }
}
