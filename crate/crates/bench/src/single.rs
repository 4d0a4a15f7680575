use std::fmt::Write as _;

use mcbcast::{build_layers, lower_bound, replay, Topology};

use crate::config::{Algorithm, ModelFlags};
use crate::sweep::{latency_ratio, schedule_with};
use crate::BenchError;

/// Schedules one topology given in text form and renders the schedule, the
/// replay report and the latency figures. A schedule that fails strict
/// replay is returned as [`BenchError::Verification`].
pub fn run_single(topology_text: &str, algo: Algorithm, flags: ModelFlags) -> Result<String, BenchError> {
    let t = Topology::from_text(topology_text)?;
    let d = build_layers(&t);
    let schedule = schedule_with(&t, &d, algo, flags)?;
    let report = replay(&t, &schedule, true);
    if !report.ok {
        return Err(BenchError::Verification {
            algo: flags.label(algo),
            n: t.len(),
            k: t.channel_count(),
            seed: 0,
            detail: report.violations[0].to_string(),
        });
    }

    let l = lower_bound(&d);
    let horizon = schedule.horizon();
    let mut out = schedule.to_text();
    out.push_str(&report.render());
    let _ = writeln!(out, "algorithm: {}", flags.label(algo));
    let _ = writeln!(out, "horizon: {horizon}");
    let _ = writeln!(out, "lower_bound: {l}");
    let _ = writeln!(out, "ratio: {:.4}", latency_ratio(horizon, l));
    Ok(out)
}
