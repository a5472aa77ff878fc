//! Command-line front end: runs the verification experiments and emits
//! machine-readable reports.
//!
//! Exit codes are a stable contract for scripts:
//!   0  success / affirmative result
//!   1  a check failed or a result could not be certified
//!   2  precision ceiling reached before a result was certified
//!   3  collisions found (`collide` only, so both outcomes are assertable)
//!   64 bad usage or invalid run configuration

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use floorsidon::certreal::PrecisionPolicy;

mod base;
mod commands;
mod envelope;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PRECISION: i32 = 2;
pub const EXIT_COLLISIONS: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "floorsidon",
    version,
    about = "Certified experiments on floor-power sequences and their Sidon structure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Starting working precision in bits.
    #[arg(long, global = true, default_value_t = 64)]
    precision_init: u32,

    /// Precision ceiling in bits; runs fail with exit 2 beyond it.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    precision_max: u32,

    /// Seed for randomized workloads; echoed into every run record.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format. CSV is available only for table exports
    /// (seq, orbit, decay); structured reports are JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Floor-power sequence table: n, a_n = floor(x^n), the trace-route
    /// correction u_n when the base has a monic integer polynomial, and
    /// the working precision that certified each floor.
    Seq {
        /// Base selector: plastic | kfib:K | dyadic:VALUE | root:C0,C1,...
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Scan floor(x^n) for Sidon collisions a_p + a_q = a_r + a_s.
    /// Exit 0 when the range is collision-free, 3 when collisions exist.
    Collide {
        /// Base selector: plastic | kfib:K | dyadic:VALUE | root:C0,C1,...
        #[arg(long, conflicts_with = "values")]
        base: Option<String>,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long, required_unless_present = "values")]
        to: Option<u64>,
        /// Scan an explicit comma-separated integer list instead of a base;
        /// indices in the report are 1-based positions in the list.
        #[arg(long)]
        values: Option<String>,
    },
    /// Run a named verification suite and report each check.
    Verify {
        /// Suite: plastic | kfib | chain | thm1 | aphit
        #[arg(long)]
        suite: String,
        /// Scan bound (plastic: pattern indices, kfib: indices, chain:
        /// termwise range). Default depends on the suite.
        #[arg(long)]
        to: Option<u64>,
        /// Recurrence order for the kfib suite (odd, at least 5).
        #[arg(long, default_value_t = 13)]
        k: usize,
        /// Slab parameter delta for the thm1 suite, as an exact decimal.
        #[arg(long, default_value = "0.5")]
        delta: String,
        /// Monte Carlo sample count for the thm1 suite.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Collision scan depth per sample for the thm1 suite.
        #[arg(long, default_value_t = 60)]
        depth: u64,
    },
    /// Rotation-orbit statistics for the base's dominant conjugate angle:
    /// which n have n*omega/2pi mod 1 inside a window, plus the star
    /// discrepancy of the whole orbit prefix.
    Orbit {
        /// Base selector (must have a complex conjugate pair):
        /// plastic | kfib:K | root:C0,C1,...
        #[arg(long, default_value = "plastic")]
        base: String,
        #[arg(long, default_value_t = 100_000)]
        horizon: u64,
        /// Window on the unit circle as two decimals in [0, 1), e.g.
        /// 0.25,0.5. Defaults to the certified collision window for the
        /// plastic base; required for other bases.
        #[arg(long)]
        window: Option<String>,
    },
    /// Monte Carlo decay curve of the bad-parameter set measure.
    Decay {
        /// Slab parameter delta as an exact decimal in (0, 1).
        #[arg(long, default_value = "0.5")]
        delta: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        d_lo: u64,
        #[arg(long, default_value_t = 60)]
        d_hi: u64,
        /// Collision scan depth per sample (at least d-hi).
        #[arg(long, default_value_t = 60)]
        depth: u64,
    },
    /// Build a nested interval certificate whose powers hit each requested
    /// progression class, diagonal-enumerated (d, r) specs.
    AphitBuild {
        /// How many diagonal (modulus, residue) classes to satisfy.
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Starting interval as two decimals, low,high (must lie above 1).
        #[arg(long, default_value = "2.0625,2.125")]
        start: String,
        /// Hard cap on witness exponents.
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
    },
    /// Find the least exponent at which some n-th power cell of a residue
    /// class meets a window, with a certified cell enclosure.
    AphitProbe {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        residue: u64,
        /// Search starts at this exponent.
        #[arg(long, default_value_t = 1)]
        min_exponent: u64,
        /// Window as two decimals, low,high (must lie above 1).
        #[arg(long)]
        window: String,
        /// Root enclosure precision in bits.
        #[arg(long, default_value_t = 64)]
        bits: u32,
    },
}

/// A command's outcome: the rendered report plus the exit code it earned.
pub struct CommandOutput {
    pub text: String,
    pub exit: i32,
}

/// Failures that map onto the exit-code contract.
pub enum CliFailure {
    Usage(String),
    Check(String),
    Precision(String),
}

impl CliFailure {
    fn exit(&self) -> i32 {
        match self {
            CliFailure::Usage(_) => EXIT_USAGE,
            CliFailure::Check(_) => EXIT_CHECK_FAILED,
            CliFailure::Precision(_) => EXIT_PRECISION,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliFailure::Usage(m) | CliFailure::Check(m) | CliFailure::Precision(m) => m,
        }
    }
}

impl From<floorsidon::certreal::CertError> for CliFailure {
    fn from(e: floorsidon::certreal::CertError) -> CliFailure {
        use floorsidon::certreal::CertError::*;
        match e {
            PrecisionExhausted { .. } => CliFailure::Precision(e.to_string()),
            BadParameter { .. } | BadDegree { .. } | EmptyWindow | NotMonic => {
                CliFailure::Usage(e.to_string())
            }
            other => CliFailure::Check(other.to_string()),
        }
    }
}

/// Shared per-run context handed to every command.
pub struct RunContext {
    pub policy: PrecisionPolicy,
    pub precision_init: u32,
    pub precision_max: u32,
    pub seed: u64,
    pub format: Format,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    if cli.precision_init < 8 || cli.precision_init > cli.precision_max {
        eprintln!(
            "error: precision-init must be at least 8 and at most precision-max ({} > {})",
            cli.precision_init, cli.precision_max
        );
        return EXIT_USAGE;
    }
    let ctx = RunContext {
        policy: PrecisionPolicy::new(cli.precision_init, cli.precision_max),
        precision_init: cli.precision_init,
        precision_max: cli.precision_max,
        seed: cli.seed,
        format: cli.format,
    };

    let result = match &cli.command {
        Command::Seq { base, from, to } => commands::seq::run(&ctx, base, *from, *to),
        Command::Collide {
            base,
            from,
            to,
            values,
        } => commands::collide::run(&ctx, base.as_deref(), *from, *to, values.as_deref()),
        Command::Verify {
            suite,
            to,
            k,
            delta,
            samples,
            depth,
        } => commands::verify::run(&ctx, suite, *to, *k, delta, *samples, *depth),
        Command::Orbit {
            base,
            horizon,
            window,
        } => commands::orbit::run(&ctx, base, *horizon, window.as_deref()),
        Command::Decay {
            delta,
            samples,
            d_lo,
            d_hi,
            depth,
        } => commands::decay::run(&ctx, delta, *samples, (*d_lo, *d_hi), *depth),
        Command::AphitBuild { count, start, cap } => {
            commands::aphit::run_build(&ctx, *count, start, *cap)
        }
        Command::AphitProbe {
            modulus,
            residue,
            min_exponent,
            window,
            bits,
        } => commands::aphit::run_probe(&ctx, *modulus, *residue, *min_exponent, window, *bits),
    };

    match result {
        Ok(output) => {
            if let Err(e) = write_report(&cli.out, &output.text) {
                eprintln!("error: could not write report: {e}");
                return EXIT_CHECK_FAILED;
            }
            output.exit
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.exit()
        }
    }
}

fn write_report(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}
