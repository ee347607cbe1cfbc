use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use convkern::cli::{self, ConventionChoice, Options, Report};
use convkern::newton::Convention;
use convkern::Error;

#[derive(Parser)]
#[command(
    name = "convkern",
    version,
    about = "Kernels of convolution and subdivision operators"
)]
struct Args {
    /// Override every verification tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Extra grid points added to the certified window.
    #[arg(long, global = true, default_value_t = 0)]
    window_pad: usize,
    /// How P_θ is built; `auto` runs the calibration.
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Auto)]
    convention: ConventionArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Auto,
    WithSigma,
    WithoutSigma,
}

#[derive(Subcommand)]
enum Command {
    /// Check dual conditions and certify the kernel of a filter set.
    Verify {
        /// JSON array of impulses ("-" for stdin)
        filters: String,
        /// JSON spectrum: zeros θ with multiplicity bases
        spectrum: String,
    },
    /// Emit the P_θ bases of a spectrum.
    BuildKernel {
        /// JSON spectrum
        spectrum: String,
    },
    /// Hermite fundamental polynomials of a spectrum.
    Hermite {
        /// JSON spectrum
        spectrum: String,
    },
    /// Symmetric zeros and kernel candidates of a subdivision operator.
    Subdivide {
        /// JSON impulse holding the mask
        mask: String,
        /// JSON {"Xi": [[..], ..]}
        dilation: String,
        /// JSON {"candidates": [{"theta": [..], "order": k}, ..]}
        candidates: String,
    },
    /// Eigen-sequence conditions for a single filter.
    Eigen {
        /// JSON impulse
        filter: String,
        /// JSON {"theta", "lambda", optional "Q_basis" and "shift"}
        eigen_spec: String,
    },
}

/// Reads a file, or standard input for "-".
fn read_input(path: &str) -> Result<String, Error> {
    let mut s = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    Ok(s)
}

fn run(args: &Args) -> Result<Report, Error> {
    let opts = Options {
        tol: args.tol,
        window_pad: args.window_pad,
        convention: match args.convention {
            ConventionArg::Auto => ConventionChoice::Auto,
            ConventionArg::WithSigma => ConventionChoice::Fixed(Convention::WithSigmaMinus),
            ConventionArg::WithoutSigma => ConventionChoice::Fixed(Convention::WithoutSigmaMinus),
        },
    };
    match &args.command {
        Command::Verify { filters, spectrum } => {
            cli::cmd_verify(&read_input(filters)?, &read_input(spectrum)?, &opts)
        }
        Command::BuildKernel { spectrum } => cli::cmd_build_kernel(&read_input(spectrum)?, &opts),
        Command::Hermite { spectrum } => cli::cmd_hermite(&read_input(spectrum)?, &opts),
        Command::Subdivide {
            mask,
            dilation,
            candidates,
        } => cli::cmd_subdivide(
            &read_input(mask)?,
            &read_input(dilation)?,
            &read_input(candidates)?,
            &opts,
        ),
        Command::Eigen { filter, eigen_spec } => {
            cli::cmd_eigen(&read_input(filter)?, &read_input(eigen_spec)?, &opts)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(report) => {
            // a closed pipe is not worth a panic; the exit code still stands
            let _ = writeln!(std::io::stdout().lock(), "{}", report.to_json());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::error_exit_code(&e) as u8)
        }
    }
}
