mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "mumford", version, about = "Exact checks for Artin-Schreier-Mumford curves")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Naive,
    Trace,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    t: usize,
}

#[derive(Args, Debug, Clone)]
struct CurveArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Element of F_q as a polynomial in the generator `w`.
    #[arg(long, default_value = "1")]
    c: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// F(g) against 12(g-1); `--from/--to` sweeps a range.
    Bound {
        #[arg(long, required_unless_present = "from")]
        g: Option<u64>,
        #[arg(long, requires = "to", conflicts_with = "g")]
        from: Option<u64>,
        #[arg(long, requires = "from")]
        to: Option<u64>,
    },
    /// The t with g = (p^t - 1)^2, if any.
    Admissible {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        p: u64,
    },
    /// Number of points over F_{q^m}.
    CurveCount {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Method::Trace)]
        method: Method,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
    },
    /// L-polynomial and genus verification.
    CurveZeta {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
        /// Also try every genus up to this value.
        #[arg(long)]
        search_genus: Option<usize>,
    },
    /// Point count fibre by fibre over the z-line.
    CurveTowerCheck {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
    },
    /// Order of the closure of the standard generators.
    AutOrder {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// Every group element preserves the curve equation.
    AutVerify {
        #[command(flatten)]
        curve: CurveArgs,
        /// Degree of the grid field; defaults to the smallest that works.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// Decomposition (E x E') x| D_{q-1}.
    AutStructure {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// Orbits with nontrivial stabilizer, searching the field degree upward.
    AutCensus {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = 1 << 20)]
        budget: u128,
    },
    /// Disjoint isometric circles for the parameter C.
    SchottkyCertify {
        #[command(flatten)]
        field: FieldArgs,
        /// Laurent polynomial in T, e.g. `T^-1`.
        #[arg(long = "C", default_value = "T^-1")]
        c_param: String,
    },
    /// Every reduced word up to length L is non-identity and hyperbolic.
    SchottkyFreeness {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "C", default_value = "T^-1")]
        c_param: String,
        #[arg(long = "L")]
        length: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// Direct-product lemma over all groups of order q^2.
    LemmaCheck {
        #[arg(long)]
        q: u64,
    },
    /// Every check for one (p, t), cheapest first.
    All {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let outcome = commands::run(&cli.command);
    let code = match &outcome {
        Outcome::Done { pass: true, .. } => 0,
        Outcome::Done { pass: false, .. } => 1,
        Outcome::Error { .. } => 2,
    };
    print!("{}", outcome.render(cli.format));
    ExitCode::from(code)
}
