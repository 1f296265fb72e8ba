use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hilbert_dyn::metric::hilbert_distance;
use hilbert_dyn::Point;

use hilbert_dyn_cli::config::{BodySpec, ExperimentConfig, ScaleSpec};
use hilbert_dyn_cli::{runner, sweep, validate};

/// Hilbert-metric dynamics: iterate nonexpansive maps on bounded convex
/// domains, estimate their asymptotic invariants, and test single-face
/// accumulation.
#[derive(Parser)]
#[command(name = "hilbert-dyn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and emit orbit.csv / report.json / orbit.svg.
    Run(RunArgs),
    /// Run every config in a directory and tabulate summary.csv.
    Sweep(SweepArgs),
    /// Print one Hilbert distance.
    Metric(MetricArgs),
    /// Run the built-in oracle suites.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the experiment JSON.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Directory of experiment JSONs.
    #[arg(long)]
    dir: PathBuf,
    /// Output directory (one subdirectory per run).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricArgs {
    /// Path to a JSON body spec.
    #[arg(long)]
    body: PathBuf,
    /// First point, comma-separated decimals.
    #[arg(long)]
    x: String,
    /// Second point, comma-separated decimals.
    #[arg(long)]
    y: String,
    /// Metric scale convention.
    #[arg(long, value_parser = parse_scale, default_value = "one")]
    scale: ScaleSpec,
}

#[derive(Args)]
struct ValidateArgs {
    /// Seed for every randomized suite.
    #[arg(long, default_value_t = 73)]
    seed: u64,
    /// Deliberately evaluate the chord route at the wrong scale
    /// (negative control: the simplex suite must fail).
    #[arg(long, hide = true)]
    inject_scale_mismatch: bool,
}

fn parse_scale(s: &str) -> Result<ScaleSpec, String> {
    match s {
        "one" => Ok(ScaleSpec::One),
        "half" => Ok(ScaleSpec::Half),
        _ => Err(format!("unknown scale `{s}` (use `one` or `half`)")),
    }
}

fn parse_csv_point(s: &str) -> Result<Point, String> {
    let coords: Result<Vec<f64>, _> = s.split(',').map(|c| c.trim().parse::<f64>()).collect();
    let coords = coords.map_err(|e| format!("bad coordinate list `{s}`: {e}"))?;
    Point::new(coords).map_err(|e| format!("{e}"))
}

const EXIT_OK: u8 = 0;
const EXIT_CONFIG: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Metric(args) => cmd_metric(args),
        Command::Validate(args) => cmd_validate(args),
    };
    ExitCode::from(code)
}

fn cmd_run(args: RunArgs) -> u8 {
    let prepared = match ExperimentConfig::load(&args.config).and_then(runner::prepare) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("config error: {e:#}");
            return EXIT_CONFIG;
        }
    };
    match runner::execute(&prepared, &args.out) {
        Ok(report) => {
            println!(
                "{}: verdict {} after {} iterations ({})",
                prepared.config.run_name(),
                report.limit.verdict.as_str(),
                report.iterations,
                args.out.display()
            );
            EXIT_OK
        }
        Err(e) => {
            eprintln!("runtime error: {e:#}");
            EXIT_RUNTIME
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> u8 {
    match sweep::sweep(&args.dir, &args.out) {
        Ok((succeeded, total)) if succeeded > 0 => {
            println!("sweep: {succeeded}/{total} runs succeeded ({})", args.out.display());
            EXIT_OK
        }
        Ok((_, total)) => {
            eprintln!("sweep: all {total} runs failed");
            EXIT_RUNTIME
        }
        Err(e) => {
            eprintln!("config error: {e:#}");
            EXIT_CONFIG
        }
    }
}

fn cmd_metric(args: MetricArgs) -> u8 {
    let body = match std::fs::read_to_string(&args.body)
        .map_err(|e| format!("cannot read {}: {e}", args.body.display()))
        .and_then(|text| {
            serde_json::from_str::<BodySpec>(&text).map_err(|e| format!("body spec: {e}"))
        })
        .and_then(|spec| spec.build().map_err(|e| format!("{e:#}")))
    {
        Ok(b) => b,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let (x, y) = match (parse_csv_point(&args.x), parse_csv_point(&args.y)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    match hilbert_distance(&body, &x, &y, args.scale.convention()) {
        Ok(d) => {
            // 12 significant digits
            println!("{d:.11e}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("runtime error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn cmd_validate(args: ValidateArgs) -> u8 {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match validate::run_validate(args.seed, args.inject_scale_mismatch, &mut out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VALIDATION,
        Err(e) => {
            eprintln!("runtime error: {e:#}");
            EXIT_RUNTIME
        }
    }
}
