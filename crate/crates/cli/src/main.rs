//! Command-line interface over the certified counting library. Exit codes:
//! 0 success/certified, 1 refuted claim or violated invariant, 2 for
//! inconclusive results and input errors.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use weyl_certify::commands::{self, AdmissibleArgs, BoundsArgs, FamilySource};
use weyl_certify::Outcome;
use weyl_certify_core::error::{Error, Result};

#[derive(Parser)]
#[command(
    name = "weyl-certify",
    version,
    about = "Certified eigenvalue-counting bounds, exact box spectra, and \
             ε-loss counting certification for rectilinear domains"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the dimensional constants for one dimension as JSON.
    Constants {
        #[arg(long)]
        n: u32,
    },
    /// List the exact spectrum of a box-union domain up to a threshold.
    Spectrum {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long = "lambda-max")]
        lambda_max: f64,
        /// Write the index,eigenvalue table to a file instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact strict and closed eigenvalue counts at one threshold.
    Count {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        lambda: f64,
    },
    /// Evaluate one certified bound family at a threshold.
    Bounds {
        /// riesz1d | product | cube | rect2d | bly | improved2d | improved3d
        #[arg(long)]
        family: String,
        #[arg(long)]
        lambda: f64,
        /// Interval or first box side, where the family needs one.
        #[arg(long)]
        len: Option<f64>,
        /// Second factor length for product-style families.
        #[arg(long)]
        len2: Option<f64>,
        /// Riesz order for the interval family (0.5, 1, or p > 1).
        #[arg(long)]
        p: Option<f64>,
        /// Cross-section volume for product-style families.
        #[arg(long)]
        vol1: Option<f64>,
        #[arg(long)]
        volume: Option<f64>,
        #[arg(long)]
        side: Option<f64>,
        #[arg(long)]
        n: Option<u32>,
        /// upper | lower, for families that offer both sides.
        #[arg(long)]
        direction: Option<String>,
        /// Use the sharpened windowed variant where one exists.
        #[arg(long)]
        with_constant: bool,
    },
    /// Certified geometric metrics of a domain as JSON.
    Metrics {
        #[arg(long)]
        domain: PathBuf,
        /// Also write the metrics to a JSON file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Interior dyadic decomposition summary, optionally property-checked.
    Whitney {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// Verify size/distance/touching/coverage properties (exit 1 on failure).
        #[arg(long)]
        check: bool,
    },
    /// Solve for the threshold above which the relative loss stays below ε.
    LambdaEps {
        /// Metrics JSON produced by `metrics --json`.
        #[arg(long)]
        metrics: Option<PathBuf>,
        /// Domain JSON; metrics are computed on the fly.
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long)]
        epsilon: f64,
        /// Use the convex form (no tube-ratio constant).
        #[arg(long)]
        convex: bool,
    },
    /// Certify the ε-loss counting inequality for a domain end to end.
    Certify {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        epsilon: f64,
        /// Stop at this λ and emit a partial certificate.
        #[arg(long = "lambda-cap")]
        lambda_cap: Option<f64>,
        /// Skip the convex fast path even when the domain is a single box.
        #[arg(long)]
        force_lipschitz: bool,
        /// Also write the certificate to a JSON file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Validate removed-cube families and their counting hypotheses.
    Admissible {
        /// Family JSON file.
        #[arg(long)]
        family: Option<PathBuf>,
        /// Build the dyadic example family in this dimension instead.
        #[arg(long = "builtin-n")]
        builtin_n: Option<u32>,
        #[arg(long = "builtin-depth", default_value_t = 40)]
        builtin_depth: u32,
        /// rectangle-removal | product-base | thickening
        #[arg(long)]
        check: Option<String>,
        /// Base volume for rectangle-removal and product-base checks.
        #[arg(long = "base-volume")]
        base_volume: Option<f64>,
        /// Tile count for the rectangle-removal check.
        #[arg(long = "m-tiles", default_value_t = 1)]
        m_tiles: u64,
        /// Remaining base volume for the thickening check.
        #[arg(long = "remaining-volume")]
        remaining_volume: Option<f64>,
        /// Interval length for the thickening check.
        #[arg(long = "interval-length")]
        interval_length: Option<f64>,
        /// Write the (possibly built-in) family to a JSON file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Exact counts vs every applicable bound across a λ grid (CSV).
    Sweep {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long = "lambda-max")]
        lambda_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Jitter the λ grid deterministically from this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the table to a file instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the ten-criterion acceptance campaign.
    Acceptance {
        /// Comma-separated criterion numbers (default: all ten).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<usize>>,
    },
}

fn dispatch(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Constants { n } => commands::cmd_constants(n),
        Cmd::Spectrum { domain, lambda_max, csv } => {
            commands::cmd_spectrum(&domain, lambda_max, csv.as_deref())
        }
        Cmd::Count { domain, lambda } => commands::cmd_count(&domain, lambda),
        Cmd::Bounds {
            family,
            lambda,
            len,
            len2,
            p,
            vol1,
            volume,
            side,
            n,
            direction,
            with_constant,
        } => commands::cmd_bounds(&BoundsArgs {
            family,
            len,
            len2,
            p,
            lambda,
            vol1,
            volume,
            side,
            n,
            direction,
            with_constant,
        }),
        Cmd::Metrics { domain, json } => commands::cmd_metrics(&domain, json.as_deref()),
        Cmd::Whitney { domain, depth, check } => commands::cmd_whitney(&domain, depth, check),
        Cmd::LambdaEps { metrics, domain, epsilon, convex } => {
            commands::cmd_lambda_eps(metrics.as_deref(), domain.as_deref(), epsilon, convex)
        }
        Cmd::Certify { domain, epsilon, lambda_cap, force_lipschitz, json } => {
            commands::cmd_certify(&domain, epsilon, lambda_cap, force_lipschitz, json.as_deref())
        }
        Cmd::Admissible {
            family,
            builtin_n,
            builtin_depth,
            check,
            base_volume,
            m_tiles,
            remaining_volume,
            interval_length,
            emit,
        } => {
            let source = match (&family, builtin_n) {
                (Some(p), None) => FamilySource::File(p),
                (None, Some(n)) => FamilySource::Builtin { n, depth: builtin_depth },
                _ => {
                    return Err(Error::invalid(
                        "exactly one of --family and --builtin-n must be given",
                    ))
                }
            };
            commands::cmd_admissible(&AdmissibleArgs {
                family: source,
                check,
                base_volume,
                m_tiles,
                remaining_volume,
                interval_length,
                emit_family: emit.as_deref(),
            })
        }
        Cmd::Sweep { domain, lambda_max, points, seed, csv } => {
            commands::cmd_sweep(&domain, lambda_max, points, seed, csv.as_deref())
        }
        Cmd::Acceptance { only } => Ok(commands::cmd_acceptance(only.as_deref())),
    }
}

/// Restore the default SIGPIPE disposition so a downstream reader closing the
/// pipe (e.g. `weyl-certify metrics … | head`) ends the process quietly with
/// the conventional 141 status instead of a broken-pipe panic.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    if let Ok(v) = std::env::var("WEYL_CERTIFY_THREADS") {
        match v.parse::<usize>() {
            Ok(t) if t >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
            _ => {
                eprintln!("warning: ignoring WEYL_CERTIFY_THREADS={v} (want a positive integer)");
            }
        }
    }
    match dispatch(Cli::parse().cmd) {
        Ok(outcome) => ExitCode::from(outcome.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
