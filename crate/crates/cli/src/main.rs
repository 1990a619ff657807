//! `ssops` — command-line experiments.

mod commands;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex;
use ssops::scan::FamilyKind;
use ssops::SsopsError;

use output::Format;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(name = "ssops", version, about = "Fractional integration operators singular on the unit sphere")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "SSOPS_THREADS")]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Run the subcommand's built-in sanity examples instead.
    #[arg(long, global = true)]
    selftest: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum Family {
    Standard,
    Natural,
    Flat,
    SWeighted,
    BesselPotential,
    Theta,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// `re[,im]`.
    #[arg(long, default_value = "1.0", value_parser = parse_complex)]
    pub alpha: Complex<f64>,
    #[arg(long, value_enum, default_value = "standard")]
    pub family: Family,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    /// Analytic-family parameter, `re[,im]`.
    #[arg(long, default_value = "0", value_parser = parse_complex)]
    pub z: Complex<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// J_{μ+iν}(ρ).
    Bessel {
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        nu: f64,
        /// One or more comma-separated arguments.
        #[arg(long, value_delimiter = ',', default_value = "1.5707963")]
        rho: Vec<f64>,
    },
    /// Radial profile of a physical kernel on `[0, 1)`.
    Kernel {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Radial multiplier on `[0, rho-max]`.
    Multiplier {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 10.0)]
        rho_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Admissible exponent region.
    Region {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        /// Adds the row for this α and selects the highlighted segment in SVG output.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 13)]
        steps: usize,
        /// Same as `--format`.
        #[arg(long, value_enum)]
        emit: Option<Format>,
        /// With `--inv-q` and `--alpha`: classify the point instead.
        #[arg(long, requires = "alpha")]
        inv_p: Option<f64>,
        #[arg(long, requires = "inv_p")]
        inv_q: Option<f64>,
    },
    /// Discrete transform of the sampled kernel against the multiplier.
    TransformCheck {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 2.0)]
        half_width: f64,
        #[arg(long, default_value_t = 32.0)]
        xi_max: f64,
        /// Largest accepted sup-relative mismatch.
        #[arg(long, default_value_t = 0.03)]
        tolerance: f64,
    },
    /// Norm ratios over a test family.
    Scan {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1.5)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[arg(long, default_value_t = 0.75)]
        inv_p: f64,
        #[arg(long, default_value_t = 0.25)]
        inv_q: f64,
        #[arg(long, default_value = "gaussian_dilates", value_parser = parse_family)]
        family: FamilyKind,
        /// Explicit scales; otherwise `2^coarsest … 2^finest`.
        #[arg(long, value_delimiter = ',')]
        scales: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        coarsest: i32,
        #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
        finest: i32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Points per axis (default 512 for n = 2, 128 for n = 3).
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 4.0)]
        half_width: f64,
        /// Allow exponents outside the hypotheses.
        #[arg(long)]
        diagnostic: bool,
    },
    /// Averaged maximal operator and Hedberg-type constants over the standard family.
    Hedberg {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.75)]
        inv_p: f64,
        #[arg(long, default_value_t = 0.25)]
        inv_q: f64,
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        rho: Vec<u32>,
        /// Samples per (shell, direction) in the inclusion check.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Forced wave equation and the Duhamel estimate.
    Wave {
        /// Forcing directory or manifest; a built-in 3-d pulse otherwise.
        #[arg(long)]
        forcing: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Time step of the built-in forcing.
        #[arg(long, default_value_t = 1.0 / 64.0)]
        dt: f64,
        #[arg(long, default_value_t = 0.75)]
        inv_p: f64,
        #[arg(long, default_value_t = 0.25)]
        inv_q: f64,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        /// Also save u(·, t) as a field file.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Endpoint identities of the analytic family.
    ThetaCheck {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "1.0", value_parser = parse_complex)]
        alpha: Complex<f64>,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bessel { .. } => "bessel",
            Command::Kernel { .. } => "kernel",
            Command::Multiplier { .. } => "multiplier",
            Command::Region { .. } => "region",
            Command::TransformCheck { .. } => "transform-check",
            Command::Scan { .. } => "scan",
            Command::Hedberg { .. } => "hedberg",
            Command::Wave { .. } => "wave",
            Command::ThetaCheck { .. } => "theta-check",
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex<f64>, String> {
    let mut parts = s.split(',');
    let mut next = |what: &str| -> Result<f64, String> {
        match parts.next() {
            Some(p) => p.trim().parse().map_err(|_| format!("bad {what} part `{p}`")),
            None => Ok(0.0),
        }
    };
    let re = next("real")?;
    let im = next("imaginary")?;
    if parts.next().is_some() {
        return Err(format!("expected re[,im], got `{s}`"));
    }
    Ok(Complex::new(re, im))
}

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    s.replace('-', "_").parse().map_err(|e: SsopsError| e.to_string())
}

pub enum Failure {
    Usage(String),
    Core(SsopsError),
    Selftest(usize),
}

impl From<SsopsError> for Failure {
    fn from(e: SsopsError) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_USAGE } else { EXIT_OK });
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let result = if cli.selftest {
        selftest::run(&cli.command)
    } else {
        commands::run(&cli)
    };
    match result {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Selftest(failed)) => {
            eprintln!("{failed} selftest check(s) failed");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INVALID })
        }
    }
}
