use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use gbpa_cli::{sweep, tabulate, ExperimentConfig, SweepAxis};
use gbpa_core::verify::{all_pass, run_all_checks, CheckOptions};
use std::path::PathBuf;
use std::process::ExitCode;

/// Adversarial-bandit experiment harness: smoothed-potential round loops,
/// regret bounds, and distribution diagnostics.
#[derive(Parser)]
#[command(name = "gbpa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one multi-seed experiment from a JSON config.
    Run(RunArgs),
    /// Run the experiment once per value of a swept parameter.
    Sweep(SweepArgs),
    /// Run the oracle-backed property batteries; exit 0 iff all pass.
    Verify(VerifyArgs),
    /// Print hazard suprema and expected maxima for the noise families.
    TabulateDistributions(TabulateArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `output_path`.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// One of: n, t, alpha, eta, distribution.
    #[arg(long)]
    axis: String,
    /// Comma-separated axis values.
    #[arg(long, value_delimiter = ',')]
    values: Vec<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Trim sample counts (smoke-test strength).
    #[arg(long)]
    quick: bool,
    /// Write the machine-readable summary here.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TabulateArgs {
    /// Number of iid draws in the maximum.
    #[arg(long, default_value_t = 10)]
    arms: u64,
    #[arg(long, default_value_t = 200_000)]
    mc_samples: u64,
    /// Write the table as JSON here.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn init_threads() {
    if let Ok(value) = std::env::var("GBPA_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
}

fn output_dir(cli_output: Option<PathBuf>, config: &ExperimentConfig) -> PathBuf {
    cli_output
        .or_else(|| config.output_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("gbpa-out"))
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let config = ExperimentConfig::from_path(&args.config)?;
    let dir = output_dir(args.output, &config);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let trace_sink = config.write_traces.then(|| dir.join("traces.jsonl"));
    let report = gbpa_cli::experiment::run_experiment_to(&config, trace_sink.as_deref())?;
    report.write_json(&dir.join("report.json"))?;
    report.write_curve_csv(&dir.join("curve.csv"))?;
    println!("{}", report.summary_line());
    println!("wrote {}", dir.join("report.json").display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let config = ExperimentConfig::from_path(&args.config)?;
    let axis: SweepAxis = args.axis.parse()?;
    let dir = output_dir(args.output, &config);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let report = sweep(&config, axis, &args.values)?;
    report.write_json(&dir.join("sweep.json"))?;
    report.write_summary_csv(&dir.join("sweep.csv"))?;
    for (value, inner) in args.values.iter().zip(&report.reports) {
        println!("{}={}: {}", args.axis, value, inner.summary_line());
    }
    if let Some(slope) = report.log_log_slope {
        println!("log-log slope vs T: {slope:.4}");
    }
    println!("wrote {}", dir.join("sweep.json").display());
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let opts = CheckOptions {
        quick: args.quick,
        ..CheckOptions::default()
    };
    let results = run_all_checks(&opts);
    for r in &results {
        println!("{} {} — {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    let ok = all_pass(&results);
    println!(
        "{}: {}/{} checks passed",
        if ok { "OK" } else { "FAILED" },
        results.iter().filter(|r| r.pass).count(),
        results.len()
    );
    if let Some(path) = args.output {
        let summary = serde_json::json!({
            "all_pass": ok,
            "checks": results,
        });
        std::fs::write(&path, serde_json::to_string_pretty(&summary)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ok)
}

fn cmd_tabulate(args: TabulateArgs) -> Result<()> {
    let table = tabulate(&gbpa_cli::default_models(), args.arms, args.mc_samples)?;
    print!("{}", gbpa_cli::render(&table));
    if let Some(path) = args.output {
        std::fs::write(&path, serde_json::to_string_pretty(&table)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args).map(|_| true),
        Command::Sweep(args) => cmd_sweep(args).map(|_| true),
        Command::Verify(args) => cmd_verify(args),
        Command::TabulateDistributions(args) => cmd_tabulate(args).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
