//! `orbit`: rotation-orbit statistics for the dominant conjugate angle of
//! an algebraic base. Reports which n land the orbit point n*theta mod 1
//! inside a window, with every membership decided by exact integer
//! comparison (undecidable boundary cases are listed, never guessed).

use floorsidon::algnum::{conjugate_spectrum, trig::pi};
use floorsidon::certreal::DyadicInterval;
use floorsidon::measure::{orbit_visits, plastic_window};
use serde::Serialize;

use crate::base::{parse_base, parse_decimal_pair, usage};
use crate::commands::rational_interval;
use crate::{envelope, CliFailure, CommandOutput, Format, RunContext, EXIT_OK};

const ANGLE_BITS: u32 = 256;

#[derive(Serialize)]
struct Config<'a> {
    base: &'a str,
    horizon: u64,
    /// circle window actually used, unit-interval coordinates
    window: [f64; 2],
    window_source: &'static str,
}

#[derive(Serialize)]
struct Report {
    /// enclosure of omega / 2 pi, the rotation number
    theta: [String; 2],
    visit_count: usize,
    visit_fraction: f64,
    star_discrepancy: f64,
    undecided: Vec<u64>,
    visits: Vec<u64>,
}

pub fn run(
    ctx: &RunContext,
    base: &str,
    horizon: u64,
    window: Option<&str>,
) -> Result<CommandOutput, CliFailure> {
    let x = parse_base(base)?;
    let spectrum = conjugate_spectrum(&x, ANGLE_BITS)?;
    let omega = spectrum.dominant_pair_argument().ok_or_else(|| {
        usage(format!(
            "base {base:?} has no complex conjugate pair, so no rotation angle"
        ))
    })?;
    let two_pi = pi(ANGLE_BITS + 64).mul_pow2(1);
    let theta = omega.div(&two_pi);

    let (win, window_source) = match window {
        Some(spec) => {
            let (lo, hi) = parse_decimal_pair(spec).ok_or_else(|| {
                usage(format!("window must be LO,HI decimals with LO < HI, got {spec:?}"))
            })?;
            (
                (
                    rational_interval(&lo, ANGLE_BITS),
                    rational_interval(&hi, ANGLE_BITS),
                ),
                "explicit",
            )
        }
        None => {
            if base != "plastic" {
                return Err(usage(
                    "--window is required for bases other than plastic".into(),
                ));
            }
            let arcs = plastic_window(omega, 8, ANGLE_BITS)?;
            ((arcs.0.div(&two_pi), arcs.1.div(&two_pi)), "certified collision window")
        }
    };

    let stats = orbit_visits(&theta, &win, horizon)?;
    let config = Config {
        base,
        horizon,
        window: [win.0.midpoint().to_f64(), win.1.midpoint().to_f64()],
        window_source,
    };
    let report = Report {
        theta: decimal_bounds(&theta),
        visit_count: stats.visit_indices().len(),
        visit_fraction: stats.visit_fraction(),
        star_discrepancy: stats.discrepancy(),
        undecided: stats.undecided_indices().to_vec(),
        visits: stats.visit_indices().to_vec(),
    };
    let text = match ctx.format {
        Format::Json => envelope::render(ctx, "orbit", config, report),
        Format::Csv => to_csv(&report),
    };
    Ok(CommandOutput { text, exit: EXIT_OK })
}

fn decimal_bounds(enc: &DyadicInterval) -> [String; 2] {
    [enc.lo().to_decimal_string(), enc.hi().to_decimal_string()]
}

fn to_csv(report: &Report) -> String {
    let mut out = String::from("n\n");
    for n in &report.visits {
        out.push_str(&format!("{n}\n"));
    }
    out
}
