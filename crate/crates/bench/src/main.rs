use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mcbcast_bench::config::parse_interference;
use mcbcast_bench::{run_single, run_sweep, Algorithm, AreaRule, BenchError, ExperimentConfig, ModelFlags};

#[derive(Parser)]
#[command(name = "mcbcast", version, about = "Multi-channel broadcast scheduling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded sweep over node and channel counts and write a CSV.
    Sweep(SweepArgs),
    /// Schedule and verify one topology file.
    Run(RunArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// bts, ets or both.
    #[arg(long, default_value = "both")]
    algo: String,
    /// Drop dominators that have nobody left to inform (default).
    #[arg(long, overrides_with = "no_prune")]
    prune: bool,
    /// Keep every dominator, even with no receivers.
    #[arg(long, overrides_with = "prune")]
    no_prune: bool,
    /// literal or aware.
    #[arg(long, default_value = "aware")]
    interference: String,
}

impl ModelArgs {
    fn flags(&self) -> Result<ModelFlags, BenchError> {
        Ok(ModelFlags {
            prune_empty: !self.no_prune,
            interference: parse_interference(&self.interference)?,
        })
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', default_value = "100,200,300,400,500,600,700,800,900,1000")]
    n_list: Vec<usize>,
    /// Comma-separated channel counts.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    k_list: Vec<u32>,
    #[arg(long, default_value_t = 100.0)]
    radius: f64,
    /// `scaled` (side = n) or `fixed:<side>`.
    #[arg(long, default_value = "scaled")]
    area: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    topology: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
}

fn sweep(args: SweepArgs) -> Result<(), BenchError> {
    let cfg = ExperimentConfig {
        n_values: args.n_list,
        k_values: args.k_list,
        radius: args.radius,
        area: args.area.parse::<AreaRule>()?,
        trials: args.trials,
        master_seed: args.seed,
        algorithms: Algorithm::parse_set(&args.model.algo)?,
        flags: args.model.flags()?,
        ..Default::default()
    };
    let result = run_sweep(&cfg)?;
    result.write_csv(&args.out)?;
    print!("{}", result.render_summary());
    Ok(())
}

fn run(args: RunArgs) -> Result<(), BenchError> {
    let text = std::fs::read_to_string(&args.topology)?;
    let flags = args.model.flags()?;
    let algos = Algorithm::parse_set(&args.model.algo)?;
    for (i, algo) in algos.into_iter().enumerate() {
        if i > 0 {
            println!();
        }
        print!("{}", run_single(&text, algo, flags)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Run(args) => run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
