//! `padic-mra`: construct, certify and report p-adic scaling functions,
//! wavelets and frame bounds.
//!
//! Exit status: 0 when the result is certified, 2 when it is refuted, 1 on
//! usage, parse or precondition errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use padic_mra::io::{OutputFormat, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "padic-mra",
    version,
    about = "p-adic multiresolution analysis toolkit"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Magnitude at or below which a value counts as zero.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed of the wavelet-mask search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Decide zeros with exact cyclotomic arithmetic where the mask allows it.
    #[arg(long, global = true)]
    exact: bool,
    /// Largest frequency support exponent searched.
    #[arg(long = "max-support", global = true, default_value_t = 20)]
    max_support: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write artifacts into this directory instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Haar MRA for a prime p, with the Kozyrev wavelet and its frame when p = 2.
    Haar {
        #[arg(long, value_parser = parse_prime)]
        p: u32,
    },
    /// Mask with m(0) = 1 vanishing at the given points.
    MaskFromZeros {
        #[arg(long, value_parser = parse_prime)]
        p: u32,
        #[arg(long)]
        degree: usize,
        /// Comma-separated points such as `1/2^2,3/2^3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        zeros: Vec<String>,
    },
    /// Scaling function of a mask and its certification report.
    Scaling {
        #[arg(long)]
        mask: PathBuf,
        /// Refinement exponent; defaults to the least N with deg m < p^{N+1}.
        #[arg(long = "N")]
        n: Option<i64>,
    },
    /// Certify a test function as the scaling function of an MRA.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Wavelet package of a dyadic mask.
    Wavelet {
        #[arg(long)]
        mask: PathBuf,
        #[arg(long = "N")]
        n: Option<i64>,
    },
    /// Frame bounds of the translates of a generator.
    FrameBounds {
        #[arg(long)]
        psi: PathBuf,
        /// Shift radius exponent R.
        #[arg(long)]
        radius: u32,
        /// Scale range `jmin:jmax`.
        #[arg(long, allow_hyphen_values = true)]
        scales: Option<String>,
    },
    /// Fourier transform of a test function.
    Transform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
}

fn parse_prime(text: &str) -> Result<u32, String> {
    let p: u32 = text
        .parse()
        .map_err(|e| format!("{text:?} is not an integer: {e}"))?;
    padic_mra::padic::check_prime(p).map_err(|e| e.to_string())?;
    Ok(p)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let config = RunConfig {
        tol: cli.global.tol,
        max_support: cli.global.max_support,
        seed: cli.global.seed,
        exact: cli.global.exact,
        output_format: match cli.global.format {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
    };
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let sink = commands::Sink::new(cli.global.out.clone());
    match commands::run(&cli.command, &config, &sink) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
