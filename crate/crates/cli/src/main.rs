//! `blowuplab` command-line front end.
//!
//! Exit status: 0 on success, 2 on usage errors (reported by the argument
//! parser), 1 on domain errors with a one-line `error: …` reason on stderr.

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "blowuplab",
    version,
    about = "Exact asymptotic-expansion calculus for degenerate blow-up",
    arg_required_else_help = true
)]
struct Cli {
    /// Run the built-in reproduction suite and print a pass/fail table.
    #[arg(long)]
    golden_check: bool,

    /// Worker threads for parallel stages (defaults to all cores).
    #[arg(long, value_name = "N", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of h_J, lowest degree first.
    Hermite { j: u32 },
    /// Triple-product constant γ(L,M,N) as an exact rational.
    Gamma { l: i64, m: i64, n: i64 },
    /// Formal expansion around the profile up to a given grade.
    Expand(ExpandArgs),
    /// Recentered projection table of a series.
    RecenterTable(RecenterArgs),
    /// Exponent sets E1, E2, E3 for an even order m ≥ 6.
    ExponentSets(ExponentArgs),
    /// Admissible blow-up-set regimes (β, α) and their constraints.
    Regimes(RegimeArgs),
    /// Integrate the Galerkin truncation of the similarity-variable flow.
    Galerkin(GalerkinArgs),
    /// Nonpositivity and degenerate directions of the order-m form.
    Form(FormArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    /// Profile order m (even, ≥ 4).
    #[arg(long)]
    m: u32,
    /// Leading coefficients, comma separated: `C[4,0]` keeps a symbol,
    /// `C[4,0]=-1` fixes a value. Unlisted ones are zero; `generic` keeps all.
    #[arg(long, default_value = "generic")]
    seed: String,
    /// Higher-grade constants set to zero, comma separated.
    #[arg(long, default_value = "")]
    zero: String,
    /// Truncation grade M ≥ m.
    #[arg(long)]
    order: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct RecenterArgs {
    /// Series JSON as written by `expand --format json`.
    #[arg(long)]
    series: PathBuf,
    /// Shift components `y1,y2`.
    #[arg(long, default_value = "A*Bn*e(tau/2),A*e(tau/2)")]
    shift: String,
    /// Target modes, e.g. `00,10,01`.
    #[arg(long, default_value = "00,10,01")]
    modes: String,
    /// Bn exponent θ; with it the columns are grouped by dominance.
    #[arg(long)]
    theta: Option<String>,
    /// Logarithmic exponent α (used with --theta).
    #[arg(long, default_value = "0")]
    alpha: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ExponentArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RegimeArgs {
    /// Profile order m (4, or even ≥ 6).
    #[arg(long)]
    m: u32,
    /// Exact values for constants, e.g. `C[5,3]=-2,C[4,0]=-1`.
    #[arg(long, default_value = "")]
    bind: String,
    /// Dominance margin δ0 ∈ (0, 1/2).
    #[arg(long, default_value = "1/10")]
    delta0: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct GalerkinArgs {
    /// Truncation degree D.
    #[arg(long)]
    degree: u32,
    /// Initial data: a state `{"s":…,"modes":[{"mode":[a,b],"value":…}]}` or
    /// a series JSON evaluated at --from with --bind.
    #[arg(long)]
    init: PathBuf,
    /// Start time when --init is a series.
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    /// Final time.
    #[arg(long)]
    until: f64,
    /// RK4 step.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Values for the constants of series inputs, e.g. `C[4,0]=-1e-3`.
    #[arg(long, default_value = "")]
    bind: String,
    /// Series to compare against; prints per-mode relative deviations.
    #[arg(long)]
    expect: Option<PathBuf>,
    /// Write every n-th step to the CSV.
    #[arg(long, default_value_t = 1)]
    every: usize,
    /// Write the trajectory CSV here instead of standard output.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FormArgs {
    /// Coefficients C[m,0..=m], comma separated.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // only fails when a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let result = match (cli.golden_check, cli.command) {
        (true, None) => commands::golden_check(),
        (true, Some(_)) => {
            eprintln!("error: --golden-check takes no subcommand");
            return ExitCode::from(2);
        }
        (false, None) => {
            eprintln!("error: a subcommand or --golden-check is required");
            return ExitCode::from(2);
        }
        (false, Some(cmd)) => run(cmd),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Domain(msg)) => {
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> commands::Outcome {
    match cmd {
        Command::Hermite { j } => commands::hermite(j),
        Command::Gamma { l, m, n } => commands::gamma(l, m, n),
        Command::Expand(a) => {
            commands::expand(a.m, &a.seed, &a.zero, a.order, a.format == Format::Json)
        }
        Command::RecenterTable(a) => commands::recenter_table(&commands::RecenterRequest {
            series: &a.series,
            shift: &a.shift,
            modes: &a.modes,
            theta: a.theta.as_deref(),
            alpha: &a.alpha,
            json: a.json || a.format == Format::Json,
        }),
        Command::ExponentSets(a) => commands::exponent_sets(a.m, a.json),
        Command::Regimes(a) => commands::regimes(a.m, &a.bind, &a.delta0, a.json),
        Command::Galerkin(a) => commands::galerkin(&commands::GalerkinRequest {
            degree: a.degree,
            init: &a.init,
            from: a.from,
            until: a.until,
            step: a.step,
            bind: &a.bind,
            expect: a.expect.as_deref(),
            every: a.every,
            csv: a.csv.as_deref(),
        }),
        Command::Form(a) => commands::form(&a.coeffs),
    }
}
