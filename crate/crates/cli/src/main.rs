use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use amenable_cli::config::{ExperimentConfig, Operation};
use amenable_cli::error::{CliError, CliResult, ExitStatus};
use amenable_cli::report::{to_json, write_atomic};
use amenable_cli::suite::{run_criteria, Scale, SuiteOptions};
use amenable_cli::{parse, run};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "amenable", version, about = "Exact finite-scale experiments on large sets in amenable groups")]
struct Cli {
    /// Write the JSON report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized trials.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for data-parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Query budget for bounded searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Group: z, z^d, sym or alt.
    #[arg(long, global = true, default_value = "z")]
    group: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the example sets.
    #[command(subcommand)]
    Construct(Construct),
    /// Exact densities along a Følner sequence.
    Density(DensityArgs),
    /// Structure detectors.
    #[command(subcommand)]
    Detect(Detect),
    /// Følner defects and Reiter weights.
    #[command(subcommand)]
    Folner(Folner),
    /// Orbit points and empirical cylinder frequencies.
    #[command(subcommand)]
    Symbolic(Symbolic),
    /// Run the acceptance suite.
    Suite(SuiteArgs),
    /// Run a JSON experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum Construct {
    Straus {
        #[arg(long)]
        eps: String,
        /// Materialize the set on `lo:hi`.
        #[arg(long, allow_hyphen_values = true)]
        emit_window: Option<String>,
    },
    Nonpws {
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        window: i64,
        #[arg(long, default_value_t = 5)]
        core_k: i64,
    },
    Alt {
        #[arg(long, default_value_t = 9)]
        n_max: usize,
    },
    Doubling {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        emit_window: String,
    },
    Family {
        #[arg(long)]
        depth: usize,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    Greedy {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long, allow_hyphen_values = true)]
    set: String,
    #[arg(long, default_value = "initial")]
    folner: String,
    /// Index range `lo..hi`.
    #[arg(long)]
    range: String,
    #[arg(long, default_value_t = 40)]
    points: usize,
    /// Also write the table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Detect {
    /// Shifted finite-sums set inside a subset of ℤ.
    Fs {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        generator_bound: i64,
        #[arg(long)]
        shift_bound: i64,
    },
    /// A subset sum divisible by `t`.
    Multiples {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xs: Vec<i64>,
        #[arg(long)]
        t: i64,
    },
    Syndetic {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    Thick {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Require the translate to lie outside `K`.
        #[arg(long)]
        avoid_k: bool,
    },
    Pws {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        k_prime: String,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Finite-products chain search (mode fpi, fpd or fp).
    Fp {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        mode: String,
        #[arg(long, allow_hyphen_values = true)]
        candidates: String,
        #[arg(long)]
        escaping: bool,
    },
    /// Increasing products chain inside a thick set.
    Extract {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        m: usize,
    },
    /// Exhaustive check that no coset product lands in the A(ℕ) example.
    Obstruction {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window_level: usize,
    },
}

#[derive(Subcommand)]
enum Folner {
    Defect {
        #[arg(long)]
        folner: String,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    Reiter {
        #[arg(long)]
        folner: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        two_sided: bool,
    },
}

#[derive(Subcommand)]
enum Symbolic {
    Measure {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        n: usize,
        /// Pattern `x:bit,...`, e.g. `0:1,1:0`.
        #[arg(long, allow_hyphen_values = true)]
        cylinder: String,
    },
    Probe {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        domain: String,
        #[arg(long)]
        samples: usize,
        #[arg(long, allow_hyphen_values = true)]
        sample_window: String,
    },
    Unique {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// fast or full.
    name: String,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
}

fn operation(command: Command) -> CliResult<(Operation, Option<PathBuf>)> {
    let op = match command {
        Command::Construct(c) => match c {
            Construct::Straus { eps, emit_window } => Operation::ConstructStraus { eps, emit_window },
            Construct::Nonpws {
                eps,
                depth,
                window,
                core_k,
            } => Operation::ConstructNonpws {
                eps,
                depth,
                window,
                core_k,
            },
            Construct::Alt { n_max } => Operation::ConstructAlt { n_max },
            Construct::Doubling { set, emit_window } => Operation::ConstructDoubling { set, emit_window },
            Construct::Family { depth, window } => Operation::ConstructFamily { depth, window },
            Construct::Greedy { s, f } => Operation::ConstructGreedy { s, f },
        },
        Command::Density(a) => {
            let (lo, hi) = parse::index_range(&a.range)?;
            return Ok((
                Operation::Density {
                    set: a.set,
                    folner: a.folner,
                    range: [lo, hi],
                    points: a.points,
                },
                a.csv,
            ));
        }
        Command::Detect(d) => match d {
            Detect::Fs {
                set,
                m,
                generator_bound,
                shift_bound,
            } => Operation::DetectFs {
                set,
                m,
                bounds: [generator_bound, shift_bound],
            },
            Detect::Multiples { xs, t } => Operation::DetectMultiples { xs, t },
            Detect::Syndetic { set, k, window } => Operation::DetectSyndetic { set, k, window },
            Detect::Thick { set, k, window, avoid_k } => Operation::DetectThick { set, k, window, avoid_k },
            Detect::Pws { set, k, k_prime, window } => Operation::DetectPws { set, k, k_prime, window },
            Detect::Fp {
                set,
                m,
                mode,
                candidates,
                escaping,
            } => Operation::DetectFp {
                set,
                m,
                mode,
                candidates,
                escaping,
            },
            Detect::Extract { set, m } => Operation::ExtractFpi { set, m },
            Detect::Obstruction { n, window_level } => Operation::Obstruction { n, window_level },
        },
        Command::Folner(f) => match f {
            Folner::Defect { folner, n, g } => Operation::Defect { folner, n, g },
            Folner::Reiter { folner, n, two_sided } => Operation::Reiter { folner, n, two_sided },
        },
        Command::Symbolic(s) => match s {
            Symbolic::Measure { set, psi, n, cylinder } => Operation::Measure { set, psi, n, cylinder },
            Symbolic::Probe {
                set,
                k,
                domain,
                samples,
                sample_window,
            } => Operation::Probe {
                set,
                k,
                domain,
                samples,
                sample_window,
            },
            Symbolic::Unique { set, window } => Operation::Unique { set, window },
        },
        Command::Suite(_) | Command::Run { .. } => unreachable!("handled before dispatch"),
    };
    Ok((op, None))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_suite(args: &SuiteArgs, seed: u64, out: Option<&Path>) -> CliResult<ExitStatus> {
    let scale: Scale = args.name.parse()?;
    let report = run_criteria(&SuiteOptions::new(scale, seed), &args.only);
    for c in &report.criteria {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("{verdict} {:>2} {} ({:.1}s)", c.id, c.name, c.elapsed.as_secs_f64());
    }
    emit(out, &to_json(&report)?)?;
    let failing = report.failing();
    if failing.is_empty() {
        Ok(ExitStatus::Ok)
    } else {
        let names: Vec<String> = failing.iter().map(|c| format!("{} ({})", c.id, c.name)).collect();
        eprintln!("failing criteria: {}", names.join(", "));
        Ok(ExitStatus::SuiteFailure)
    }
}

fn execute(cli: Cli) -> CliResult<ExitStatus> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    let out = cli.out.as_deref();
    match cli.command {
        Command::Suite(args) => run_suite(&args, cli.seed, out),
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", config.display())))?;
            let mut c: ExperimentConfig = serde_json::from_str(&text)?;
            if cli.budget.is_some() {
                c.budget = cli.budget;
            }
            finish(&c, None, out)
        }
        command => {
            let (op, csv) = operation(command)?;
            let config = ExperimentConfig {
                group: cli.group,
                seed: cli.seed,
                budget: cli.budget,
                op,
            };
            finish(&config, csv, out)
        }
    }
}

fn finish(config: &ExperimentConfig, csv: Option<PathBuf>, out: Option<&Path>) -> CliResult<ExitStatus> {
    let start = Instant::now();
    let report = run(config)?;
    eprintln!("{} finished in {:.2}s", config.op.name(), start.elapsed().as_secs_f64());
    emit(out, &report.to_json()?)?;
    if let (Some(path), Some(table)) = (csv, &report.csv) {
        write_atomic(&path, table)?;
    }
    for name in report.failed_certificates() {
        eprintln!("certificate failed: {name}");
    }
    if report.metrics.budget_exhausted {
        eprintln!("search budget exhausted after {} queries", report.metrics.queries);
    }
    Ok(report.status())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status().code() as u8)
        }
    }
}
