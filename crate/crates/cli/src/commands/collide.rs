//! `collide`: Sidon collision scan. Exit 0 when the range is clean, 3 when
//! collisions exist, so scripts can assert either outcome directly.

use floorsidon::floorpow::FloorPowerSequence;
use floorsidon::sidon::{find_collisions, find_collisions_in_values};
use num_bigint::BigInt;
use serde::Serialize;

use crate::base::{parse_base, usage};
use crate::{envelope, CliFailure, CommandOutput, Format, RunContext, EXIT_COLLISIONS, EXIT_OK};

#[derive(Serialize)]
struct Config<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    from: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    to: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<&'a str>,
}

pub fn run(
    ctx: &RunContext,
    base: Option<&str>,
    from: u64,
    to: Option<u64>,
    values: Option<&str>,
) -> Result<CommandOutput, CliFailure> {
    if ctx.format == Format::Csv {
        return Err(usage(
            "collision reports are nested; use --format json".into(),
        ));
    }

    let (config, report) = match (base, values) {
        (None, Some(list)) => {
            let parsed: Result<Vec<BigInt>, _> =
                list.split(',').map(|v| v.trim().parse()).collect();
            let parsed = parsed
                .map_err(|_| usage(format!("values must be integers, got {list:?}")))?;
            let indices: Vec<u64> = (1..=parsed.len() as u64).collect();
            let report = find_collisions_in_values(&indices, &parsed, "explicit list")?;
            (
                Config {
                    base: None,
                    from: None,
                    to: None,
                    values: Some(list),
                },
                report,
            )
        }
        (Some(sel), None) => {
            let to = to.ok_or_else(|| usage("--to is required with --base".into()))?;
            if from < 1 || from > to {
                return Err(usage(format!(
                    "index range [{from}, {to}] is empty or starts below 1"
                )));
            }
            let x = parse_base(sel)?;
            let seq = FloorPowerSequence::compute(&x, from, to, &ctx.policy)?;
            let report = find_collisions(&seq, from, to)?;
            (
                Config {
                    base: Some(sel),
                    from: Some(from),
                    to: Some(to),
                    values: None,
                },
                report,
            )
        }
        _ => {
            return Err(usage(
                "exactly one of --base or --values must be given".into(),
            ))
        }
    };

    let exit = if report.collisions().is_empty() {
        EXIT_OK
    } else {
        EXIT_COLLISIONS
    };
    let text = envelope::render(ctx, "collide", config, report.record());
    Ok(CommandOutput { text, exit })
}
