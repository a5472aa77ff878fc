//! `seq`: floor-power sequence table with the dual-route cross-check.

use floorsidon::floorpow::{floor_pow, TraceSequence};
use num_bigint::BigInt;
use serde::Serialize;

use crate::base::{parse_base, usage};
use crate::{envelope, CliFailure, CommandOutput, Format, RunContext, EXIT_OK};

#[derive(Serialize)]
struct Config<'a> {
    base: &'a str,
    from: u64,
    to: u64,
}

#[derive(Serialize)]
struct Row {
    n: u64,
    /// floor(x^n), decimal string
    a: String,
    /// trace-route correction T_n - a_n when the base is an algebraic
    /// integer and the difference lands in {0, 1}
    #[serde(skip_serializing_if = "Option::is_none")]
    u: Option<u8>,
    /// true when the trace route reproduced the direct floor
    #[serde(skip_serializing_if = "Option::is_none")]
    dual_route_ok: Option<bool>,
    /// working precision that certified this floor
    bits: u32,
}

#[derive(Serialize)]
struct Report {
    rows: Vec<Row>,
    /// whether trace columns are present (monic integer polynomial base)
    trace_route: bool,
}

pub fn run(ctx: &RunContext, base: &str, from: u64, to: u64) -> Result<CommandOutput, CliFailure> {
    if from < 1 || from > to {
        return Err(usage(format!("index range [{from}, {to}] is empty or starts below 1")));
    }
    let x = parse_base(base)?;

    // the trace route only exists for algebraic integers; degrade politely
    let traces = TraceSequence::new(x.min_poly()).ok().map(|mut ts| {
        ts.extend_to(to);
        ts
    });

    let mut rows = Vec::with_capacity((to - from + 1) as usize);
    for n in from..=to {
        let (a, bits) = floor_pow(&x, n, &ctx.policy)?;
        let (u, dual_route_ok) = match &traces {
            Some(ts) => {
                let diff = ts.value(n).expect("extended above") - &a;
                if diff == BigInt::from(0u8) {
                    (Some(0), Some(true))
                } else if diff == BigInt::from(1u8) {
                    (Some(1), Some(true))
                } else {
                    (None, Some(false))
                }
            }
            None => (None, None),
        };
        rows.push(Row {
            n,
            a: a.to_string(),
            u,
            dual_route_ok,
            bits,
        });
    }

    let report = Report {
        trace_route: traces.is_some(),
        rows,
    };
    let text = match ctx.format {
        Format::Json => envelope::render(
            ctx,
            "seq",
            Config { base, from, to },
            report,
        ),
        Format::Csv => to_csv(&report),
    };
    Ok(CommandOutput { text, exit: EXIT_OK })
}

fn to_csv(report: &Report) -> String {
    let mut out = String::from("n,a,u,dual_route_ok,bits\n");
    for row in &report.rows {
        let u = row.u.map(|v| v.to_string()).unwrap_or_default();
        let ok = row
            .dual_route_ok
            .map(|v| v.to_string())
            .unwrap_or_default();
        out.push_str(&format!("{},{},{},{},{}\n", row.n, row.a, u, ok, row.bits));
    }
    out
}
