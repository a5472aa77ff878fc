//! `decay`: Monte Carlo decay curve of the bad-parameter set measure.

use floorsidon::measure::{scan_bad_measure, BadSetConfig};
use serde::Serialize;

use crate::base::{parse_decimal, usage};
use crate::{envelope, CliFailure, CommandOutput, Format, RunContext, EXIT_OK};

#[derive(Serialize)]
struct Config<'a> {
    delta: &'a str,
    samples: u64,
    d_lo: u64,
    d_hi: u64,
    depth: u64,
}

#[derive(Serialize)]
struct RowOut {
    d: u64,
    hit_count: u64,
    sample_count: u64,
    estimated_measure: f64,
}

#[derive(Serialize)]
struct Report {
    fitted_log_slope: f64,
    slope_stderr: f64,
    excluded_samples: u64,
    rows: Vec<RowOut>,
    /// (largest collision index, number of samples attaining it)
    sample_max_hist: Vec<[u64; 2]>,
}

pub fn run(
    ctx: &RunContext,
    delta: &str,
    samples: u64,
    d_range: (u64, u64),
    depth: u64,
) -> Result<CommandOutput, CliFailure> {
    let delta_q = parse_decimal(delta)
        .ok_or_else(|| usage(format!("delta must be a decimal in (0, 1), got {delta:?}")))?;
    let config = BadSetConfig::new(delta_q, d_range, samples, ctx.seed, depth)?;
    let curve = scan_bad_measure(&config);

    let text = match ctx.format {
        Format::Csv => curve.to_csv(),
        Format::Json => {
            let report = Report {
                fitted_log_slope: curve.fitted_log_slope(),
                slope_stderr: curve.slope_stderr(),
                excluded_samples: curve.excluded_samples(),
                rows: curve
                    .rows()
                    .iter()
                    .map(|r| RowOut {
                        d: r.d,
                        hit_count: r.hit_count,
                        sample_count: r.sample_count,
                        estimated_measure: r.estimated_measure,
                    })
                    .collect(),
                sample_max_hist: curve
                    .sample_max_hist()
                    .iter()
                    .map(|&(m, c)| [m, c])
                    .collect(),
            };
            envelope::render(
                ctx,
                "decay",
                Config {
                    delta,
                    samples,
                    d_lo: d_range.0,
                    d_hi: d_range.1,
                    depth,
                },
                report,
            )
        }
    };
    Ok(CommandOutput { text, exit: EXIT_OK })
}
