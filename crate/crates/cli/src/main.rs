use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use craut_core::groebner::CgsLimits;
use craut_core::liealg::{compute_component, compute_full_algebra, AlgebraOptions, FundamentalMode};
use craut_core::model::CRModel;
use craut_core::report::{CgsInput, Report};
use craut_core::Error;

#[derive(Parser)]
#[command(name = "craut", version, about = "Infinitesimal CR-automorphisms of weighted homogeneous CR models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Lie algebra (or one graded piece) of a model file.
    Run(RunArgs),
    /// Compute a comprehensive Gröbner system of a parametric ideal.
    Cgs(CgsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Maximum number of parameter branches.
    #[arg(long, default_value_t = 64)]
    max_branches: usize,
    /// Maximum case-split depth.
    #[arg(long, default_value_t = 32)]
    max_depth: usize,
    /// Print elapsed time to stderr.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct RunArgs {
    model: PathBuf,
    /// Only the component of weight T.
    #[arg(long, value_name = "T", allow_negative_numbers = true, conflicts_with_all = ["up_to", "full"])]
    component: Option<i64>,
    /// The cumulative piece of all weights up to T.
    #[arg(long, value_name = "T", allow_negative_numbers = true, conflicts_with = "full")]
    up_to: Option<i64>,
    /// The whole algebra (default).
    #[arg(long)]
    full: bool,
    /// Compute g_0..g_N without the termination rule.
    #[arg(long, value_name = "N")]
    max_weight: Option<i64>,
    /// Skip the fundamentality check and assume it holds.
    #[arg(long, conflicts_with = "check_fundamental")]
    assume_fundamental: bool,
    /// Check that g_-1 generates the negative part (default).
    #[arg(long)]
    check_fundamental: bool,
    /// Print the tangency systems as grouped per defining equation.
    #[arg(long)]
    show_systems: bool,
    /// Highest weight tried before the termination rule gives up.
    #[arg(long, default_value_t = 24)]
    weight_cap: i64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CgsArgs {
    input: PathBuf,
    #[command(flatten)]
    common: Common,
}

fn limits(c: &Common) -> CgsLimits {
    CgsLimits { max_branches: c.max_branches, max_depth: c.max_depth }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn run(args: &RunArgs) -> Result<String, Error> {
    let text = read(&args.model)?;
    let (model, violations) = CRModel::load(&text)?;
    let warnings: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    let limits = limits(&args.common);
    let mut report = if let Some(t) = args.component.or(args.up_to) {
        let branches = compute_component(&model, t, args.up_to.is_some(), limits)?;
        Report::from_component(&model, t, &branches, warnings)
    } else {
        let opts = AlgebraOptions {
            max_weight: args.max_weight.or(model.max_weight),
            fundamental: if args.assume_fundamental { FundamentalMode::Assume } else { FundamentalMode::Check },
            limits,
            weight_cap: args.weight_cap,
        };
        let alg = compute_full_algebra(&model, &opts)?;
        Report::from_algebra(&model, &alg, warnings)
    };
    if args.show_systems {
        let weights: Vec<i64> = match (args.component, args.up_to) {
            (Some(t), _) => vec![t],
            (None, Some(t)) => (-model.rho()..=t).collect(),
            _ => {
                let top = report.branches.iter().flat_map(|b| b.dims.keys().copied()).max().unwrap_or(-1);
                (-model.rho()..=top).collect()
            }
        };
        for t in weights {
            report.add_systems(&model, t)?;
        }
    }
    Ok(match args.common.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    })
}

fn cgs(args: &CgsArgs) -> Result<String, Error> {
    let input = CgsInput::parse(&read(&args.input)?)?;
    let report = input.solve(limits(&args.common))?;
    Ok(match args.common.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (result, timing) = match &cli.command {
        Command::Run(a) => (run(a), a.common.timing),
        Command::Cgs(a) => (cgs(a), a.common.timing),
    };
    if timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::TerminationCap { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
