//! Command-line front end: domain grammar, scenario commands, structured
//! CSV/JSON output, reproducibility controls.
//!
//! Exit codes: `0` success with all assertions passing, `2` usage error,
//! `3` assertion failure, `4` insufficient samples or too many timeouts,
//! `1` i/o failure. Diagnostics go to stderr with an `error:` prefix.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiments::{
    self, default_slit_grid, default_starlike_suite, ExperimentReport, Quantity,
};
use crate::geometry::parse_domain;
use crate::oracles;
use crate::wos::{self, WosConfig};

#[derive(Parser, Debug)]
#[command(name = "hmlab", version, about = "Harmonic-measure estimates on planar domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate omega and/or omega-hat for one domain and radius.
    Estimate(EstimateArgs),
    /// Sweep the Koebe-domain profiles over a radius grid.
    Sweep(SweepArgs),
    /// Run a counter-example construction over its probe radii.
    Counterexample(CounterexampleArgs),
    /// Check the starlike bound omega_hat <= 2*omega on a test family.
    Starlike(StarlikeArgs),
    /// Validate the walk kernel against the slit-disk formula grid.
    Validate(CommonArgs),
    /// Strong-Markov consistency check on nested disks.
    Markov(CommonArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Monte Carlo walk count.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,

    /// Absorption shell thickness, relative to the probed radius.
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,

    /// Base seed of the per-sample random streams; defaults to HMLAB_SEED
    /// or 1. The flag wins over the environment.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker thread count. Partitions work only; never changes the streams.
    #[arg(long)]
    threads: Option<usize>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    out: OutFormat,

    /// Output path; stdout when omitted.
    #[arg(long)]
    out_path: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Domain name, e.g. disk, koebe, slit-disk:a=0.5, ce1:levels=2,
    /// star:k=4,rin=1,rout=3.
    #[arg(long)]
    domain: String,

    /// Probed radius.
    #[arg(long = "R", value_name = "R")]
    r: f64,

    /// Which profile to estimate.
    #[arg(long, value_enum, default_value_t = QuantityArg::Both)]
    quantity: QuantityArg,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Domain name; the sweep is defined for the Koebe domain.
    #[arg(long, default_value = "koebe")]
    domain: String,

    /// Comma-separated increasing radius grid, e.g. 1e2,1e3,1e4.
    #[arg(long = "R", value_name = "R", value_delimiter = ',')]
    r: Vec<f64>,

    /// Skip Monte Carlo; report closed-form values only.
    #[arg(long)]
    exact: bool,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct CounterexampleArgs {
    /// Which construction: ce1 (obstacle arcs) or ce2 (arcs plus walls).
    #[arg(long)]
    domain: String,

    /// Probe levels, a subset of 1,2.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1u32, 2u32])]
    ns: Vec<u32>,

    /// Optional t = log(r_n) - n feeding the first construction's
    /// arcsinh diagnostic.
    #[arg(long)]
    t: Option<f64>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct StarlikeArgs {
    /// Optional single domain to test; defaults to the standard family.
    #[arg(long)]
    domain: Option<String>,

    /// Radii for the single-domain form.
    #[arg(long = "R", value_name = "R", value_delimiter = ',')]
    r: Vec<f64>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum QuantityArg {
    Omega,
    #[value(name = "omega-hat")]
    OmegaHat,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum OutFormat {
    Csv,
    Json,
}

/// Parses `argv` (including the program name) and runs the selected command.
/// Returns the process exit code.
pub fn parse_and_dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap print its rich help/version output itself.
            if e.use_stderr() {
                let msg = e.to_string();
                if msg.starts_with("error:") {
                    eprint!("{msg}");
                } else {
                    eprintln!("error: {msg}");
                }
                return 2;
            }
            let _ = e.print();
            return 0;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InsufficientSamples(_) | Error::TooManyTimeouts(_) => 4,
                Error::Io(_) => 1,
                _ => 2,
            }
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let common = match &cli.command {
        Command::Estimate(a) => a.common.clone(),
        Command::Sweep(a) => a.common.clone(),
        Command::Counterexample(a) => a.common.clone(),
        Command::Starlike(a) => a.common.clone(),
        Command::Validate(a) => a.clone(),
        Command::Markov(a) => a.clone(),
    };
    let cfg = wos_config(&common)?;
    let report = match &common.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(*n)
                .build()
                .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(&cli.command, &cfg))?
        }
        None => dispatch(&cli.command, &cfg)?,
    };
    match &common.out_path {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            write_report(&report, common.out, &mut file)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_report(&report, common.out, &mut lock)?;
        }
    }
    if report.insufficient {
        eprintln!("error: insufficient samples for a bounded ratio interval");
        return Ok(4);
    }
    if !report.all_pass() {
        for a in report.assertions.iter().filter(|a| !a.pass) {
            eprintln!("error: assertion failed: {}", a.name);
        }
        return Ok(3);
    }
    Ok(0)
}

fn wos_config(common: &CommonArgs) -> Result<WosConfig> {
    let seed = match common.seed {
        Some(s) => s,
        None => match std::env::var("HMLAB_SEED") {
            Ok(v) => v
                .parse::<u64>()
                .map_err(|_| Error::invalid(format!("HMLAB_SEED = '{v}' is not a u64")))?,
            Err(_) => 1,
        },
    };
    let mut cfg = WosConfig::new(common.samples, seed).with_eps(common.eps);
    cfg.batch = cfg.batch.min(cfg.samples.max(1));
    Ok(cfg)
}

fn dispatch(command: &Command, cfg: &WosConfig) -> Result<ExperimentReport> {
    match command {
        Command::Estimate(args) => estimate(args, cfg),
        Command::Sweep(args) => {
            if args.domain != "koebe" {
                return Err(Error::invalid(format!(
                    "sweep is defined for the koebe domain, got '{}'",
                    args.domain
                )));
            }
            experiments::koebe_sweep(&args.r, if args.exact { None } else { Some(cfg) })
        }
        Command::Counterexample(args) => {
            let which = match args.domain.split(':').next().unwrap_or("") {
                "ce1" => 1,
                "ce2" => 2,
                other => {
                    return Err(Error::invalid(format!(
                        "counterexample domain must be ce1 or ce2, got '{other}'"
                    )))
                }
            };
            experiments::counterexample_run(which, &args.ns, cfg, args.t)
        }
        Command::Starlike(args) => {
            let suite = match &args.domain {
                Some(name) => {
                    if args.r.is_empty() {
                        return Err(Error::invalid(
                            "single-domain starlike runs need --R".to_string(),
                        ));
                    }
                    vec![(parse_domain(name)?, args.r.clone())]
                }
                None => default_starlike_suite()?,
            };
            experiments::starlike_suite(&suite, cfg)
        }
        Command::Validate(_) => experiments::slit_validation(&default_slit_grid(), cfg),
        Command::Markov(_) => experiments::markov_check(cfg),
    }
}

fn estimate(args: &EstimateArgs, cfg: &WosConfig) -> Result<ExperimentReport> {
    let domain = parse_domain(&args.domain)?;
    let r = args.r;
    let hat = match args.quantity {
        QuantityArg::OmegaHat | QuantityArg::Both => {
            Some(Quantity::Estimated(wos::estimate_omega_hat(&domain, r, cfg)?))
        }
        QuantityArg::Omega => None,
    };
    let omega = match args.quantity {
        QuantityArg::Omega | QuantityArg::Both => {
            Some(Quantity::Estimated(wos::estimate_omega(&domain, r, cfg)?))
        }
        QuantityArg::OmegaHat => None,
    };
    let mut diagnostics = BTreeMap::new();
    if domain.name() == "koebe" && r > 0.25 {
        diagnostics.insert("exact_omega_hat".to_string(), oracles::koebe_omega_hat(r)?);
        diagnostics.insert("exact_omega".to_string(), oracles::koebe_omega(r)?);
    }
    Ok(experiments::single_row_report(
        "estimate",
        &domain,
        cfg,
        r,
        hat,
        omega,
        diagnostics,
    ))
}

/// Serializes a report. CSV uses the fixed header
/// `R,omega_hat,omega_hat_stderr,omega,omega_stderr,ratio,ratio_lo,ratio_hi,ambiguous_frac,timeout_frac,seed`
/// with nine-significant-digit floats and `\n` line endings; JSON nests the
/// same fields per row plus the configuration echo. Output for a fixed seed
/// is byte-identical across runs and thread counts.
pub fn write_report(
    report: &ExperimentReport,
    format: OutFormat,
    out: &mut dyn Write,
) -> Result<()> {
    match format {
        OutFormat::Csv => {
            out.write_all(
                b"R,omega_hat,omega_hat_stderr,omega,omega_stderr,ratio,ratio_lo,ratio_hi,ambiguous_frac,timeout_frac,seed\n",
            )?;
            for row in &report.rows {
                let mut fields: Vec<String> = Vec::with_capacity(11);
                fields.push(fmt9(Some(row.r)));
                fields.push(fmt9(row.omega_hat));
                fields.push(fmt9(row.omega_hat_stderr));
                fields.push(fmt9(row.omega));
                fields.push(fmt9(row.omega_stderr));
                fields.push(fmt9(row.ratio));
                fields.push(fmt9(row.ratio_lo));
                // A present ratio with an absent upper limit is unbounded.
                if row.ratio.is_some() && row.ratio_hi.is_none() {
                    fields.push("inf".to_string());
                } else {
                    fields.push(fmt9(row.ratio_hi));
                }
                fields.push(fmt9(Some(row.ambiguous_frac)));
                fields.push(fmt9(Some(row.timeout_frac)));
                fields.push(row.seed.to_string());
                out.write_all(fields.join(",").as_bytes())?;
                out.write_all(b"\n")?;
            }
        }
        OutFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, report)
                .map_err(|e| Error::Io(std::io::Error::other(e)))?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn fmt9(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.8e}"),
        None => "nan".to_string(),
    }
}
