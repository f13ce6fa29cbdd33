use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cubicbranch::pipeline::{emit, run, summary_text, Format, ProblemParams, RunOptions, Verdict};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(
    name = "cubicbranch",
    version,
    about = "Verified positive solution branch of -Δu = λu + u³ on the unit square"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run continuation, verification, branch certificates and endgame.
    Run(RunArgs),
    /// Print the default configuration as TOML.
    DefaultConfig,
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with problem parameters; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    lambda_bar: Option<f64>,
    #[arg(long)]
    grid_step: Option<f64>,
    /// Largest mode index of the approximate solutions.
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Reuse verified grid-point results cached under the output directory.
    #[arg(long)]
    resume: bool,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Comma-separated subset of json, csv, text.
    #[arg(long, value_delimiter = ',', default_value = "json,csv,text")]
    emit: Vec<String>,
}

fn load_params(args: &RunArgs) -> Result<ProblemParams, String> {
    let mut params = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            ProblemParams::from_toml(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => ProblemParams::default(),
    };
    if let Some(v) = args.lambda_bar {
        params.lambda_bar = v;
    }
    if let Some(v) = args.grid_step {
        params.grid_step = v;
    }
    if let Some(v) = args.n {
        params.n = v;
    }
    if let Some(v) = args.sigma {
        params.sigma = v;
    }
    params.validate().map_err(|e| e.to_string())?;
    Ok(params)
}

fn run_command(args: RunArgs) -> Result<ExitCode, String> {
    let params = load_params(&args)?;
    let formats = args
        .emit
        .iter()
        .map(|f| f.parse::<Format>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let opts = RunOptions {
        workers: args.workers,
        cache_dir: Some(args.out_dir.join("cache")),
        resume: args.resume,
        fault: None,
    };
    let cert = run(&params, &opts);
    let written = emit(&cert, &args.out_dir, &formats).map_err(|e| e.to_string())?;
    for path in &written {
        tracing::debug!(path = %path.display(), "wrote");
    }
    print!("{}", summary_text(&cert));
    Ok(match cert.verdict {
        Verdict::Failed { .. } => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    })
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("warn")))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::DefaultConfig => Ok({
            print!("{}", ProblemParams::default_toml());
            ExitCode::SUCCESS
        }),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })
}
