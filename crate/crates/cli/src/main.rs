//! `bhf`: command-line front end for bordered Floer computations.

mod commands;
mod error;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "bhf", version, about = "Bordered Heegaard Floer computations over F2")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect the algebra of a pointed matched circle.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Check, reduce or compare type D / DD structures.
    Dmod {
        #[command(subcommand)]
        op: DmodOp,
    },
    /// Morphism complex between two modules, optionally through a bimodule.
    Pair(PairArgs),
    /// Homology of a free F2[U] complex.
    Homology {
        #[arg(long = "in")]
        input: String,
        /// Rank of the complex mod U^n instead.
        #[arg(long)]
        truncate: Option<u32>,
    },
    /// Knot Floer complexes.
    Knot {
        #[command(subcommand)]
        op: KnotOp,
    },
    /// Satellite of a knot by a pattern module.
    Satellite(SatelliteArgs),
    /// HF-hat rank of a genus-1 closed manifold given by a twist word.
    Hf3m {
        /// Letters Tm, Tl with a trailing ' for inverses, e.g. "Tm Tm Tl'".
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Solid torus the word acts on: inf, 0 or -1.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        start: String,
        /// Solid torus glued on last: inf, 0 or -1.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        closing: String,
    },
    /// Built-in fixtures.
    Catalog {
        #[command(subcommand)]
        op: CatalogOp,
    },
    /// Run the built-in invariant suite.
    Verify,
}

#[derive(Subcommand)]
enum AlgebraOp {
    /// Dimensions of the algebra and its summands.
    Info {
        #[arg(long)]
        pmc: String,
    },
    /// Labels of the basis, optionally of one summand.
    Basis {
        #[arg(long)]
        pmc: String,
        #[arg(long, allow_hyphen_values = true)]
        summand: Option<i64>,
    },
    /// Product of two elements written as sums of labels.
    Mul {
        #[arg(long)]
        pmc: String,
        a: String,
        b: String,
    },
    /// Differential of an element.
    Diff {
        #[arg(long)]
        pmc: String,
        a: String,
    },
}

#[derive(Subcommand)]
enum DmodOp {
    /// Validate a module document and count its data.
    Check {
        #[arg(long = "in")]
        input: String,
    },
    /// Cancel unit arrows.
    Reduce {
        #[arg(long = "in")]
        input: String,
    },
    /// Search for an isomorphism.
    Iso {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

#[derive(clap::Args)]
struct PairArgs {
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    /// Bimodule applied to the right-hand module first.
    #[arg(long)]
    dd: Option<String>,
    /// Which action of the bimodule is contracted.
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    side: SideArg,
    /// Report the homology instead of the complex.
    #[arg(long)]
    homology: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand)]
enum KnotOp {
    /// Check the filtration, parities and d^2 = 0.
    Validate {
        #[arg(long = "in")]
        input: String,
    },
    Tau {
        #[arg(long = "in")]
        input: String,
    },
    Alexander {
        #[arg(long = "in")]
        input: String,
    },
    /// Vertical, horizontal and diagonal arrows.
    Classify {
        #[arg(long = "in")]
        input: String,
    },
    /// Search for a vertically and horizontally simplified basis.
    Simplify {
        #[arg(long = "in")]
        input: String,
    },
    /// Type D module of the framed complement.
    Cfd {
        #[arg(long = "in")]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        framing: i64,
    },
    Satellite(SatelliteArgs),
}

#[derive(clap::Args)]
pub struct SatelliteArgs {
    /// Companion knot complex.
    #[arg(long = "in", alias = "companion")]
    input: String,
    #[arg(long, default_value = "cable21")]
    pattern: String,
    #[arg(long, allow_hyphen_values = true)]
    framing: i64,
}

#[derive(Subcommand)]
enum CatalogOp {
    /// Names accepted wherever a document is expected.
    List,
    /// Print a fixture, or re-emit any document in canonical form.
    Dump { name: String },
}

fn run(cli: Cli) -> Result<commands::Output, CliError> {
    use commands as c;
    match cli.cmd {
        Cmd::Algebra { op } => match op {
            AlgebraOp::Info { pmc } => c::algebra_info(&pmc),
            AlgebraOp::Basis { pmc, summand } => c::algebra_basis(&pmc, summand),
            AlgebraOp::Mul { pmc, a, b } => c::algebra_mul(&pmc, &a, &b),
            AlgebraOp::Diff { pmc, a } => c::algebra_diff(&pmc, &a),
        },
        Cmd::Dmod { op } => match op {
            DmodOp::Check { input } => c::dmod_check(&input),
            DmodOp::Reduce { input } => c::dmod_reduce(&input),
            DmodOp::Iso { left, right } => c::dmod_iso(&left, &right),
        },
        Cmd::Pair(a) => c::pair(&a.left, &a.right, a.dd.as_deref(), a.side, a.homology),
        Cmd::Homology { input, truncate } => c::homology(&input, truncate),
        Cmd::Knot { op } => match op {
            KnotOp::Validate { input } => c::knot_validate(&input),
            KnotOp::Tau { input } => c::knot_tau(&input),
            KnotOp::Alexander { input } => c::knot_alexander(&input),
            KnotOp::Classify { input } => c::knot_classify(&input),
            KnotOp::Simplify { input } => c::knot_simplify(&input),
            KnotOp::Cfd { input, framing } => c::knot_cfd(&input, framing),
            KnotOp::Satellite(a) => c::satellite(&a.input, &a.pattern, a.framing),
        },
        Cmd::Satellite(a) => c::satellite(&a.input, &a.pattern, a.framing),
        Cmd::Hf3m { word, start, closing } => c::hf3m(&word, &start, &closing),
        Cmd::Catalog { op } => match op {
            CatalogOp::List => Ok(c::catalog_list()),
            CatalogOp::Dump { name } => c::catalog_dump(&name),
        },
        Cmd::Verify => c::verify(),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("BHF_THREADS") else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| CliError::Usage(format!("BHF_THREADS must be a number, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    let result = configure_threads().and_then(|()| run(cli));
    match result {
        Ok(out) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{}", out.render(format));
            if out.gate_failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
