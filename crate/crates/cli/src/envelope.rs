//! Reproducibility envelope wrapped around every JSON report. Struct
//! serialization keeps field order fixed, so identical config and seed
//! produce byte-identical output except for `timestamp_unix_ms`, which is
//! deliberately a separate field that consumers strip before comparing.

use serde::Serialize;

use crate::RunContext;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct PrecisionEcho {
    pub init: u32,
    pub max: u32,
}

#[derive(Serialize)]
pub struct Envelope<C: Serialize, R: Serialize> {
    pub schema_version: u32,
    pub artifact_version: &'static str,
    pub command: &'static str,
    pub config: C,
    pub seed: u64,
    pub precision: PrecisionEcho,
    pub timestamp_unix_ms: u64,
    pub report: R,
}

pub fn render<C: Serialize, R: Serialize>(
    ctx: &RunContext,
    command: &'static str,
    config: C,
    report: R,
) -> String {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        artifact_version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        seed: ctx.seed,
        precision: PrecisionEcho {
            init: ctx.precision_init,
            max: ctx.precision_max,
        },
        timestamp_unix_ms: now_ms(),
        report,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("report serialization");
    text.push('\n');
    text
}

fn now_ms() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}
