use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mzi_core::interferometer::LossKind;
use mzi_core::optimize::{Scheme, SweepSpec, SweepVariable};
use mzi_core::resource::ResourceKind;
use mzi_lab::output::{write_records, Format, Record};
use mzi_lab::{presets, validate, EXIT_NUMERIC, EXIT_USAGE, THREADS_ENV};

/// Phase sensitivity of a lossy Mach-Zehnder interferometer fed with Gaussian light.
#[derive(Parser)]
#[command(name = "mzi-lab", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MuArg {
    /// Hold the CSV squeezed fraction fixed: at the given value, or without a
    /// value at its lossless optimum. Default is to optimize it per point.
    #[arg(long, num_args = 0..=1, value_name = "MU")]
    fixed_mu: Option<Option<f64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Optimized sensitivity at one point.
    Point {
        #[arg(long)]
        scheme: Scheme,
        #[arg(long)]
        resource: ResourceKind,
        #[arg(long)]
        nbar: f64,
        #[arg(long, default_value = "symmetric")]
        loss: LossKind,
        /// Loss rate 1 - η.
        #[arg(long, default_value_t = 0.0)]
        rate: f64,
        #[command(flatten)]
        mu: MuArg,
    },
    /// A figure preset or a custom sweep over loss rate or photon number.
    Sweep {
        /// Figure preset (2a..2f, 3a..6d, a1, a2).
        #[arg(long, conflicts_with_all = ["variable", "lo", "hi", "points"])]
        figure: Option<String>,
        /// `loss` or `nbar`.
        #[arg(long, required_unless_present = "figure")]
        variable: Option<SweepVariable>,
        #[arg(long, required_unless_present = "figure")]
        lo: Option<f64>,
        #[arg(long, required_unless_present = "figure")]
        hi: Option<f64>,
        #[arg(long, required_unless_present = "figure")]
        points: Option<usize>,
        /// Photon number of a loss sweep.
        #[arg(long, default_value_t = 10.0)]
        nbar: f64,
        /// Loss rate of a photon-number sweep.
        #[arg(long, default_value_t = 0.2)]
        rate: f64,
        #[arg(long, default_value = "symmetric")]
        loss: LossKind,
        #[arg(long, value_delimiter = ',', default_value = "qfi")]
        scheme: Vec<Scheme>,
        #[arg(long, value_delimiter = ',', default_value = "csv,tmsv,coherent")]
        resource: Vec<ResourceKind>,
        #[command(flatten)]
        mu: MuArg,
    },
    /// Loss rate at which a scheme stops beating the shot-noise limit.
    Threshold {
        #[arg(long)]
        scheme: Scheme,
        #[arg(long)]
        resource: ResourceKind,
        #[arg(long)]
        nbar: f64,
        #[arg(long, default_value = "symmetric")]
        loss: LossKind,
        #[command(flatten)]
        mu: MuArg,
    },
    /// Cross-check against the truncated Fock-space oracle (slow).
    Validate {
        #[arg(long, default_value_t = mzi_core::fock::DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// List the figure presets.
    Figures,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<mzi_core::Error> for Failure {
    fn from(e: mzi_core::Error) -> Self {
        Failure { code: mzi_lab::exit_code(&e) as u8, msg: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_NUMERIC as u8, msg: format!("write failed: {e}") }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE as u8, msg: msg.into() }
}

fn emit<R: Record>(cli_out: &Option<PathBuf>, format: Format, records: &[R]) -> Result<(), Failure> {
    match cli_out {
        Some(path) => {
            let file = File::create(path).map_err(|e| usage(format!("cannot create {}: {e}", path.display())))?;
            write_records(BufWriter::new(file), records, format)?;
        }
        None => write_records(io::stdout().lock(), records, format)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let threads = mzi_lab::threads_from_env(std::env::var(THREADS_ENV).ok().as_deref())?;
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| usage(e.to_string()))?;
    }
    match cli.command {
        Command::Point { scheme, resource, nbar, loss, rate, mu } => {
            let rec = mzi_lab::point(scheme, resource, nbar, loss, rate, mzi_lab::mu_mode(mu.fixed_mu)?)?;
            emit(&cli.out, cli.format, &[rec])
        }
        Command::Sweep { figure, variable, lo, hi, points, nbar, rate, loss, scheme, resource, mu } => {
            let mu = mzi_lab::mu_mode(mu.fixed_mu)?;
            let specs = match figure {
                Some(name) => {
                    presets::preset(&name, mu).ok_or_else(|| usage(format!("unknown figure preset '{name}'")))?.sweeps
                }
                None => vec![SweepSpec {
                    variable: variable.expect("required by clap"),
                    lo: lo.expect("required by clap"),
                    hi: hi.expect("required by clap"),
                    points: points.expect("required by clap"),
                    nbar,
                    loss_rate: rate,
                    loss_kind: loss,
                    schemes: scheme,
                    resources: resource,
                    mu,
                }],
            };
            let rows = mzi_lab::sweep(&specs)?;
            emit(&cli.out, cli.format, &rows)?;
            match rows.iter().filter(|r| !r.is_ok()).count() {
                0 => Ok(()),
                n => Err(Failure {
                    code: EXIT_NUMERIC as u8,
                    msg: format!("{n} sweep cell(s) failed, see the status column"),
                }),
            }
        }
        Command::Threshold { scheme, resource, nbar, loss, mu } => {
            let rec = mzi_lab::threshold(scheme, resource, nbar, loss, mzi_lab::mu_mode(mu.fixed_mu)?)?;
            emit(&cli.out, cli.format, &[rec])
        }
        Command::Validate { cutoff } => {
            let rows = validate::run_suite(cutoff)?;
            emit(&cli.out, cli.format, &rows)?;
            match rows.iter().filter(|r| !r.pass()).count() {
                0 => Ok(()),
                n => Err(Failure { code: EXIT_NUMERIC as u8, msg: format!("{n} oracle check(s) failed") }),
            }
        }
        Command::Figures => {
            let mut out = io::stdout().lock();
            for name in presets::FIGURES {
                writeln!(out, "{name}")?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mzi-lab: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
