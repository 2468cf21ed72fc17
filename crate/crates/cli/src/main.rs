//! `naimark-bounds`: entropic uncertainty bounds for rank-1 POVMs.
//!
//! Exit codes: 0 success, 1 bound violation found, 2 input error,
//! 3 invariant violation, 4 optimizer did not converge.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use naimark_core::bounds::BoundMethod;
use naimark_core::demo::run_demo;
use naimark_core::ensemble::{run_ensemble, write_csv, EnsembleConfig};
use naimark_core::io::{read_povm, ExtensionJson, IoError};
use naimark_core::measurement::{Pvm, Rank1Povm};
use naimark_core::naimark::dilate;
use naimark_core::optimize::OptimizerConfig;
use naimark_core::verify::{compute_bound, verify_bound, Instance};
use naimark_core::Error;

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_NOT_CONVERGED: u8 = 4;

const THREADS_ENV: &str = "NAIMARK_BOUNDS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "naimark-bounds", version, about = "Entropic uncertainty bounds for rank-1 POVMs")]
struct Cli {
    #[command(flatten)]
    opt: OptArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OptArgs {
    /// Optimizer seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Optimizer restarts.
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,
    /// Pattern-search step tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Maximum sweeps per optimizer stage.
    #[arg(long, global = true, default_value_t = 2000)]
    max_iters: usize,
}

impl OptArgs {
    fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical Naimark extension of a POVM file.
    Dilate { file: PathBuf },
    /// Compute a bound.
    Bound {
        #[arg(long)]
        method: String,
        /// Also report the uncorrected historical value.
        #[arg(long)]
        compare: bool,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Compute a bound and check it against a state search.
    Verify {
        #[arg(long)]
        method: String,
        /// Multiply the bound before checking (harness self-test).
        #[arg(long, default_value_t = 1.0)]
        inflate: f64,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Random-instance soundness ensemble.
    Ensemble {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Comma-separated system dimensions.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        dims: Vec<usize>,
        /// Smallest outcome count (default d).
        #[arg(long)]
        k_min: Option<usize>,
        /// Largest outcome count (default 2d).
        #[arg(long)]
        k_max: Option<usize>,
        /// Write the CSV here and the summary JSON to stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Built-in demonstration: trine, mub, larsen or mixed.
    Demo { name: String },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let code = match e {
            IoError::Invalid(_) => EXIT_INVARIANT,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig(_) => EXIT_INPUT,
            _ => EXIT_INVARIANT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn parse_method(name: &str) -> Result<BoundMethod, Failure> {
    name.parse().map_err(|_| {
        let names: Vec<_> = BoundMethod::ALL.iter().map(|m| m.cli_name()).collect();
        input_error(format!("unknown method `{name}`; expected one of: {}", names.join(", ")))
    })
}

/// Loaded POVMs in the shape the method needs.
enum Loaded {
    Single(Rank1Povm),
    Pair(Rank1Povm, Rank1Povm),
    Mixed(Pvm, Pvm),
}

impl Loaded {
    fn instance(&self) -> Instance<'_> {
        match self {
            Self::Single(m) => Instance::Single(m),
            Self::Pair(m, n) => Instance::Pair(m, n),
            Self::Mixed(a, b) => Instance::Mixed(a, b),
        }
    }
}

fn load(method: BoundMethod, files: &[PathBuf]) -> Result<Loaded, Failure> {
    let wanted = if method.is_pair() || method == BoundMethod::MixedPvm { 2 } else { 1 };
    if files.len() != wanted {
        return Err(input_error(format!(
            "method `{}` takes {wanted} POVM file(s), got {}",
            method.cli_name(),
            files.len()
        )));
    }
    let povms = files.iter().map(|f| read_povm(f)).collect::<Result<Vec<_>, _>>()?;
    let mut it = povms.into_iter();
    Ok(match (method, it.next(), it.next()) {
        (BoundMethod::MixedPvm, Some(a), Some(b)) => Loaded::Mixed(Pvm::try_from_povm(a)?, Pvm::try_from_povm(b)?),
        (_, Some(m), Some(n)) => Loaded::Pair(m, n),
        (_, Some(m), None) => Loaded::Single(m),
        _ => unreachable!("file count checked above"),
    })
}

fn print_json(value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| input_error(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn cmd_dilate(file: &Path) -> Result<u8, Failure> {
    let povm = read_povm(file)?;
    let ext = dilate(&povm)?;
    print_json(&ExtensionJson::from_extension(&ext, &povm))?;
    Ok(0)
}

fn cmd_bound(method: &str, compare: bool, files: &[PathBuf], cfg: &OptimizerConfig) -> Result<u8, Failure> {
    let method = parse_method(method)?;
    let loaded = load(method, files)?;
    let mut report = compute_bound(method, loaded.instance(), cfg)?;
    if compare {
        report = report.with_comparison();
    }
    print_json(&report)?;
    if !report.converged {
        eprintln!("warning: optimizer did not converge; reported value may be below the optimum");
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(0)
}

fn cmd_verify(method: &str, inflate: f64, files: &[PathBuf], cfg: &OptimizerConfig) -> Result<u8, Failure> {
    let method = parse_method(method)?;
    if !inflate.is_finite() || inflate < 0.0 {
        return Err(input_error("--inflate must be a finite non-negative number"));
    }
    let loaded = load(method, files)?;
    let (_, cert) = verify_bound(method, loaded.instance(), cfg, inflate)?;
    print_json(&cert)?;
    Ok(if cert.violated { EXIT_VIOLATION } else { 0 })
}

fn cmd_ensemble(cfg: EnsembleConfig, csv: Option<&Path>) -> Result<u8, Failure> {
    let out = run_ensemble(&cfg)?;
    let summary = serde_json::to_string_pretty(&out.summary).map_err(|e| input_error(e.to_string()))?;
    match csv {
        Some(path) => {
            let file = File::create(path)?;
            write_csv(&out.rows, BufWriter::new(file))?;
            println!("{summary}");
        }
        None => {
            let stdout = io::stdout();
            write_csv(&out.rows, stdout.lock())?;
            eprintln!("{summary}");
        }
    }
    io::stdout().flush()?;
    Ok(if out.summary.violations > 0 { EXIT_VIOLATION } else { 0 })
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| input_error(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| input_error(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    let cfg = cli.opt.config();
    cfg.validate()?;
    match cli.command {
        Command::Dilate { file } => cmd_dilate(&file),
        Command::Bound { method, compare, files } => cmd_bound(&method, compare, &files, &cfg),
        Command::Verify { method, inflate, files } => cmd_verify(&method, inflate, &files, &cfg),
        Command::Ensemble {
            trials,
            dims,
            k_min,
            k_max,
            csv,
        } => cmd_ensemble(
            EnsembleConfig {
                trials,
                dims,
                k_min,
                k_max,
                seed: cfg.seed,
                optimizer: cfg,
            },
            csv.as_deref(),
        ),
        Command::Demo { name } => {
            print!("{}", run_demo(&name, &cfg)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
