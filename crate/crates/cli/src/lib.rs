//! `mimo-sim`: BER sweeps, complexity tables and self-checks.
//!
//! Exit codes: 0 success, 1 failed self-test, 2 configuration error,
//! 3 numerical failure during a sweep (the CSV is still written).

pub mod config;
pub mod parse;
pub mod selftest;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use mimo_core::complexity::{comparison_table, table_csv, DEFAULT_ITERATIONS, DEFAULT_USERS};
use mimo_core::cplx::Convention;
use mimo_core::montecarlo::{records_csv, run_sweep, summarize};
use mimo_core::{Constellation, Modulation};

use config::{ExperimentFile, SweepEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mimo-sim", version, about = "Massive-MIMO detector simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte-Carlo BER sweep; writes ber_<N>x<U>_<mod>.csv
    Ber(BerArgs),
    /// Real-multiplication model vs measured counts; writes complexity.csv
    Complexity(ComplexityArgs),
    /// Fast invariant checks
    Selftest(SelftestArgs),
    /// Export a constellation as label,re,im
    Constellation(ConstellationArgs),
}

#[derive(Debug, Args, Default)]
pub struct BerArgs {
    /// fig2 .. fig6
    #[arg(long)]
    pub preset: Option<String>,
    /// TOML experiment file; flags override its sweep fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub u: Option<usize>,
    /// qpsk, 16qam or 64qam
    #[arg(long = "mod")]
    pub modulation: Option<String>,
    /// start:step:stop in dB, or a comma-separated list
    #[arg(long)]
    pub snr: Option<String>,
    /// Detector, repeatable or comma-separated: mmse[:qr|chol|ldl|direct], zf[:..],
    /// nsa:T, gs:T[:diag], cg:T, admin:T[:SCALE|:beta=B], simo
    #[arg(long = "det", value_delimiter = ',')]
    pub detectors: Vec<String>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed; required with --preset
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-curve, per-SNR error budget; 0 disables early stopping
    #[arg(long)]
    pub stop_at_errors: Option<u64>,
    /// Worker threads (results do not depend on it)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// BER level for the gap summary
    #[arg(long)]
    pub target_ber: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    /// Comma-separated user counts [default: 4,8,16,32,64,128]
    #[arg(long = "u")]
    pub users: Option<String>,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    pub t: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Weight complex products as 3 real multiplications (negative control)
    #[arg(long, hide = true)]
    pub corrupt_convention: bool,
}

#[derive(Debug, Args)]
pub struct ConstellationArgs {
    #[arg(long = "mod")]
    pub modulation: Modulation,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.into(),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: format!("out: cannot write {}: {e}", path.display()),
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Ber(args) => cmd_ber(args),
        Command::Complexity(args) => args
            .users
            .as_deref()
            .map(parse::user_list)
            .transpose()
            .map_err(|e| config_error(format!("u: {e}")))
            .and_then(|users| cmd_complexity(users, args.t, &args.out)),
        Command::Selftest(args) => cmd_selftest(args),
        Command::Constellation(args) => cmd_constellation(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn flag_entry(args: &BerArgs) -> SweepEntry {
    SweepEntry {
        preset: args.preset.clone(),
        n: args.n,
        u: args.u,
        modulation: args.modulation.clone(),
        snr: args.snr.clone(),
        detectors: (!args.detectors.is_empty()).then(|| args.detectors.clone()),
        trials: args.trials,
        seed: args.seed,
        stop_at_errors: args.stop_at_errors,
    }
}

fn cmd_ber(args: BerArgs) -> Result<i32, Failure> {
    let file = match &args.config {
        Some(path) => ExperimentFile::load(path).map_err(config_error)?,
        None => ExperimentFile::default(),
    };
    let flags = flag_entry(&args);
    let entries: Vec<SweepEntry> = if file.sweeps.is_empty() {
        vec![flags]
    } else {
        file.sweeps.iter().map(|s| flags.clone().over(s)).collect()
    };
    let sweeps = entries
        .iter()
        .map(SweepEntry::resolve)
        .collect::<Result<Vec<_>, _>>()
        .map_err(config_error)?;
    if let Some(t) = args.target_ber {
        if !(t > 0.0 && t < 1.0) {
            return Err(config_error("target-ber: must lie in (0, 1)"));
        }
    }
    let out = args.out.or(file.out).unwrap_or_else(|| PathBuf::from("."));
    let threads = args.threads.or(file.threads);
    if threads == Some(0) {
        return Err(config_error("threads: must be >= 1"));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = builder
        .build()
        .map_err(|e| config_error(format!("threads: {e}")))?;
    fs::create_dir_all(&out).map_err(|e| io_error(&out, e))?;

    let mut code = EXIT_OK;
    for (cfg, preset) in &sweeps {
        let started = Instant::now();
        eprintln!(
            "sweep {}x{} {}: {} curves x {} SNR points, up to {} trials, seed {}, SNR = per-antenna Es/N0 (sigma2 = U/SNR)",
            cfg.n,
            cfg.u,
            cfg.modulation,
            cfg.curves.len(),
            cfg.snr_db.len(),
            cfg.trials,
            cfg.master_seed
        );
        let records = match pool.install(|| run_sweep(cfg)) {
            Ok(r) => r,
            Err(e) => {
                return Err(Failure {
                    code: EXIT_NUMERICAL,
                    message: format!("sweep failed: {e}"),
                })
            }
        };
        let path = out.join(cfg.csv_name());
        fs::write(&path, records_csv(&records)).map_err(|e| io_error(&path, e))?;
        let target = args
            .target_ber
            .unwrap_or_else(|| preset.map_or(mimo_core::presets::APPROX_TARGET_BER, |p| p.target_ber()));
        print!("{}", summarize(&records, target));
        eprintln!("wrote {} in {:.1}s", path.display(), started.elapsed().as_secs_f64());
        let failures: u64 = records.iter().map(|r| r.failures).sum();
        if failures > 0 {
            eprintln!("warning: {failures} detector failures counted as all-bit errors");
            code = EXIT_NUMERICAL;
        }
    }
    if let Some(c) = file.complexity {
        cmd_complexity(c.users, c.t.unwrap_or(DEFAULT_ITERATIONS), &out)?;
    }
    Ok(code)
}

fn cmd_complexity(users: Option<Vec<u64>>, t: u64, out: &Path) -> Result<i32, Failure> {
    let users = users.unwrap_or_else(|| DEFAULT_USERS.to_vec());
    if users.is_empty() || users.contains(&0) {
        return Err(config_error("u: user counts must be >= 1"));
    }
    if t == 0 {
        return Err(config_error("t: must be >= 1"));
    }
    if t == 1 {
        eprintln!("note: at t=1 the Neumann series is the diagonal inverse alone; NSA rows are 0");
    }
    let rows = comparison_table(&users, t).map_err(|e| Failure {
        code: EXIT_NUMERICAL,
        message: e.to_string(),
    })?;
    fs::create_dir_all(out).map_err(|e| io_error(out, e))?;
    let path = out.join("complexity.csv");
    let csv = table_csv(&rows);
    fs::write(&path, &csv).map_err(|e| io_error(&path, e))?;
    print!("{csv}");
    eprintln!("wrote {}", path.display());
    Ok(EXIT_OK)
}

fn cmd_selftest(args: SelftestArgs) -> Result<i32, Failure> {
    let convention = if args.corrupt_convention {
        Convention {
            complex_mul: 3,
            ..Convention::STANDARD
        }
    } else {
        Convention::STANDARD
    };
    let checks = selftest::run(convention);
    print!("{}", selftest::render(&checks));
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed == 0 {
        println!("all {} checks passed", checks.len());
        Ok(EXIT_OK)
    } else {
        println!("{failed} of {} checks failed", checks.len());
        Ok(EXIT_SELFTEST)
    }
}

fn cmd_constellation(args: ConstellationArgs) -> Result<i32, Failure> {
    let csv = Constellation::new(args.modulation).to_csv();
    match args.out {
        Some(path) => fs::write(&path, csv).map_err(|e| io_error(&path, e))?,
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}
