mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mathieu_core::harness::FamilyKind;

/// Exact moment experiments on SU(2) and admissible Laurent polynomials.
///
/// Inputs are file paths, inline JSON, or `corpus:NAME` for a built-in
/// fixture. Exit codes: 0 success, 1 failed check, 2 refusal, 3 parse error,
/// 4 inconclusive or under-resolved.
#[derive(Parser, Debug)]
#[command(name = "mathieu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone, Default)]
struct QuadArgs {
    /// Uniform nodes per torus variable (default: smallest exact count).
    #[arg(long)]
    torus_nodes: Option<usize>,
    /// Gauss–Legendre order per cube variable (default: smallest exact order).
    #[arg(long)]
    cube_order: Option<usize>,
    /// Euler-angle nodes as `PHI,THETA,PSI`.
    #[arg(long, value_parser = parse_triple)]
    euler_nodes: Option<(usize, usize, usize)>,
    /// Tolerance for numeric-versus-exact comparisons.
    #[arg(long)]
    tol: Option<f64>,
}

fn parse_triple(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<usize> =
        s.split(',').map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}"))).collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err("expected three comma-separated counts".into()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact power moments `∫ f^P` for `P = 1..=pmax`.
    Moment {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 8)]
        pmax: u32,
        /// Also evaluate each moment by quadrature.
        #[arg(long)]
        numeric: bool,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Smallest `P ≤ pmax` with a nonzero moment.
    Search {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 12)]
        pmax: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Certify that all moments up to `pmax` vanish when 0 is outside the hull.
    VerifyVanishing {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 12)]
        pmax: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Certify `∫ h^P g = 0` on the window `(P₀, P₀ + window]`.
    VerifyMathieu {
        /// The function `h`.
        #[arg(long)]
        input: String,
        /// The weight `g`.
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 20)]
        window: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the three exact SU(2) moment pipelines and Euler quadrature.
    BridgeCheck {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 5)]
        pmax: u32,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Critical-value curves of trinomial families.
    #[command(subcommand)]
    Worm(WormCommand),
    /// `∫ (b* b)^n = 1/(n+1)` exactly and by quadrature.
    HaarCheck {
        #[arg(long, default_value_t = 50)]
        nmax: u32,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded random instance.
    Gen {
        #[arg(long, value_enum, default_value = "su2")]
        kind: KindArg,
        #[arg(long, default_value_t = 1)]
        min_terms: usize,
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
        #[arg(long, default_value_t = 3)]
        exponent_bound: u32,
        #[arg(long, default_value_t = 5)]
        height_bound: u32,
        #[arg(long, default_value_t = 1)]
        zvars: usize,
        #[arg(long, default_value_t = 1)]
        xvars: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(clap::ValueEnum, Debug, Clone, Copy)]
enum KindArg {
    Su2,
    Admissible,
}

impl From<KindArg> for FamilyKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Su2 => FamilyKind::Su2,
            KindArg::Admissible => FamilyKind::Admissible,
        }
    }
}

#[derive(Subcommand, Debug)]
enum WormCommand {
    /// Sample both critical values along `x ∈ [0, 1]`.
    Trace {
        #[arg(long, default_value = "corpus:worm-family")]
        input: String,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Also write the samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write plot-ready polylines as JSON.
        #[arg(long)]
        polyline: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether the curves enclose the origin.
    Enclose {
        #[arg(long, default_value = "corpus:worm-family")]
        input: String,
        #[arg(long, default_value_t = 2001)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Truncated generating function against the residue formula.
    Series {
        #[arg(long, default_value = "corpus:z-plus-zinv")]
        input: String,
        #[arg(long, default_value_t = 16)]
        pmax: u32,
        /// Evaluation points (repeatable).
        #[arg(long = "t", default_values_t = [0.05, 0.1])]
        t: Vec<f64>,
        /// Gauss–Legendre order for the `x` integral.
        #[arg(long, default_value_t = 64)]
        x_order: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = commands::run(cli.command);
    match result {
        Ok((report, status)) => {
            let text = report.to_json_pretty() + "\n";
            match &common.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            if let Some(note) = status.note() {
                eprintln!("{note}");
            }
            ExitCode::from(status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
