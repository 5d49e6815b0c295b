use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};

use paramctl::harness::{
    emit_all, runs_row, ExperimentConfig, ALGORITHMS, CONTROLLERS, PROBLEMS, RUNS_HEADER,
};
use paramctl::operators::FlipOperator;
use paramctl::oracles::{
    brute_force_hitting_time, doubling_parallel_bound, drift_max_strength, flip_kernel, lo_expected_time,
    lo_fixed_target_dp, mixed_bounds, onemax_drift, standard_bit_kernel, OracleMethod, OracleValue,
};
use paramctl::problems::{BitProblem, LeadingOnes, OneMax};
use paramctl::repro::{self, ReproContext};
use paramctl::Error;

const PARTIAL: &str = "runs.partial.csv";

#[derive(Parser)]
#[command(name = "paramctl", version, about = "Parameter control experiments for discrete black-box optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config and write its CSV files.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Master seed; overrides the config and PARAMCTL_SEED.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 1 runs serially.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print an exact or analytical reference value.
    Oracle(OracleArgs),
    /// Run a named acceptance experiment; `all` runs every one.
    Repro {
        id: String,
        /// Directory for CSV files written by the experiment.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List problems, algorithms, controllers, oracles and repro targets.
    List,
}

#[derive(Args)]
struct OracleArgs {
    /// lo-expected-time, lo-fixed-target, onemax-drift, drift-max-strength,
    /// mixed-bounds, doubling-bound or hitting-time
    name: String,
    #[arg(long)]
    n: usize,
    /// Mutation rate, or the 1-bit probability for mixed-bounds.
    #[arg(long)]
    p: Option<f64>,
    /// OneMax fitness of the parent.
    #[arg(long)]
    f: Option<usize>,
    /// Number of flipped bits.
    #[arg(long)]
    l: Option<usize>,
    /// Comma-separated strengths for lo-fixed-target.
    #[arg(long, value_delimiter = ',')]
    strengths: Vec<usize>,
    /// onemax or leadingones, for hitting-time.
    #[arg(long, default_value = "onemax")]
    problem: String,
}

const ORACLES: &[&str] = &[
    "lo-expected-time",
    "lo-fixed-target",
    "onemax-drift",
    "drift-max-strength",
    "mixed-bounds",
    "doubling-bound",
    "hitting-time",
];

enum Failure {
    Acceptance,
    Config(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidArgument(_) => Failure::Config(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            out,
            workers,
        } => run(&config, seed, out, workers),
        Command::Oracle(args) => oracle(&args),
        Command::Repro { id, out } => run_repro(&id, out),
        Command::List => {
            list();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Acceptance) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(path: &Path, seed: Option<u64>, out: Option<PathBuf>, workers: Option<usize>) -> Result<(), Failure> {
    let mut config = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    if workers.is_some() {
        config.workers = workers;
    }
    let dir = out.or_else(|| config.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));
    config.validate()?;
    fs::create_dir_all(&dir)?;

    // completed runs are appended here as they finish, so an interrupted
    // experiment keeps its results
    let partial_path = dir.join(PARTIAL);
    let mut partial = File::create(&partial_path)?;
    writeln!(partial, "{RUNS_HEADER}")?;
    let partial = Mutex::new(partial);
    let records = paramctl::harness::run_experiment_with(&config, &|record| {
        let mut file = partial.lock().unwrap_or_else(|e| e.into_inner());
        // a failed write only loses the partial copy
        let _ = writeln!(file, "{}", runs_row(record)).and_then(|_| file.flush());
    })?;
    drop(partial);

    for written in emit_all(&records, &dir)? {
        println!("wrote {}", written.display());
    }
    fs::remove_file(&partial_path)?;
    let successes = records.iter().filter(|r| r.outcome.success).count();
    println!("{} runs, {successes} reached the optimum or target", records.len());
    Ok(())
}

fn require<T>(value: Option<T>, flag: &str, name: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Config(format!("oracle {name} needs --{flag}")))
}

fn oracle(args: &OracleArgs) -> Result<(), Failure> {
    let n = args.n;
    let name = args.name.as_str();
    let value = match name {
        "lo-expected-time" => {
            OracleValue::new(lo_expected_time(n, require(args.p, "p", name)?)?, OracleMethod::ClosedForm)
        }
        "lo-fixed-target" => {
            let strengths = if args.strengths.is_empty() { vec![1] } else { args.strengths.clone() };
            let dp = lo_fixed_target_dp(n, &strengths)?;
            for (s, k) in strengths.iter().enumerate() {
                println!("k={k}: {}", dp.total(s));
            }
            OracleValue::new(dp.best_total(), OracleMethod::DynamicProgram)
        }
        "onemax-drift" => OracleValue::new(
            onemax_drift(n, require(args.f, "f", name)?, require(args.l, "l", name)?),
            OracleMethod::ClosedForm,
        ),
        "drift-max-strength" => OracleValue::new(
            drift_max_strength(n, require(args.f, "f", name)?)? as f64,
            OracleMethod::Exhaustive,
        ),
        "mixed-bounds" => {
            let b = mixed_bounds(n, require(args.p, "p", name)?)?;
            println!("lower: {}", b.lower);
            OracleValue::new(b.upper, OracleMethod::ClosedForm)
        }
        "doubling-bound" => OracleValue::new(doubling_parallel_bound(n), OracleMethod::ClosedForm),
        "hitting-time" => {
            let problem: Box<dyn BitProblem> = match args.problem.as_str() {
                "onemax" => Box::new(OneMax::new(n)),
                "leadingones" => Box::new(LeadingOnes::new(n)),
                other => {
                    return Err(Failure::Config(format!(
                        "hitting-time supports onemax and leadingones, not {other:?}"
                    )))
                }
            };
            match (args.p, args.l) {
                (Some(p), None) => brute_force_hitting_time(problem.as_ref(), &standard_bit_kernel(n, p))?,
                (None, Some(l)) => {
                    brute_force_hitting_time(problem.as_ref(), &flip_kernel(n, FlipOperator::Distinct(l)))?
                }
                _ => return Err(Failure::Config("hitting-time needs exactly one of --p and --l".into())),
            }
        }
        other => {
            return Err(Failure::Config(format!(
                "unknown oracle {other:?}; valid: {}",
                ORACLES.join(", ")
            )))
        }
    };
    println!("{value}");
    Ok(())
}

fn run_repro(id: &str, out: Option<PathBuf>) -> Result<(), Failure> {
    let ctx = out.map(|out_dir| ReproContext { out_dir }).unwrap_or_default();
    let selected: Vec<_> = if id == "all" {
        repro::criteria().iter().collect()
    } else {
        match repro::find(id) {
            Some(c) => vec![c],
            None => {
                let ids: Vec<&str> = repro::criteria().iter().map(|c| c.id).collect();
                return Err(Failure::Config(format!("unknown criterion {id:?}; valid: {}", ids.join(", "))));
            }
        }
    };
    let mut failed = 0;
    for c in selected {
        let report = c.run(&ctx)?;
        print!("{report}");
        failed += !report.pass() as usize;
    }
    if failed > 0 {
        Err(Failure::Acceptance)
    } else {
        Ok(())
    }
}

fn list() {
    println!("problems: {}", PROBLEMS.join(", "));
    println!("algorithms: {}", ALGORITHMS.join(", "));
    println!("controllers:");
    for (algorithm, controls) in CONTROLLERS {
        println!("  {algorithm}: {}", controls.join(", "));
    }
    println!("oracles: {}", ORACLES.join(", "));
    println!("repro targets:");
    for c in repro::criteria() {
        println!("  {:<22} {}", c.id, c.description);
    }
}
