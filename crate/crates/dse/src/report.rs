//! Sweep driver and machine-readable output.

use crate::circuit::ScheduledCircuit;
use crate::config::{IllegalConfig, SweepCell};
use crate::lower::{count_instructions, DseReport, SetupMode};

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub benchmark: String,
    pub config_id: u8,
    pub w: u8,
    pub w_pi: u8,
    pub scheme: &'static str,
    pub somq: bool,
    pub report: DseReport,
    /// Instruction count relative to config 1 at w = 1 for the same
    /// benchmark.
    pub normalized: f64,
}

/// Counts every (cell, circuit) combination and normalizes against the
/// baseline cell (config 1, w = 1), which must be present.
pub fn sweep(
    cells: &[SweepCell],
    circuits: &[(String, ScheduledCircuit)],
    mode: SetupMode,
) -> Result<Vec<SweepRow>, IllegalConfig> {
    let mut rows = Vec::with_capacity(cells.len() * circuits.len());
    for (name, circuit) in circuits {
        let baseline = cells
            .iter()
            .find(|c| c.config_id == 1 && c.config.vliw_width == 1)
            .map(|c| count_instructions(circuit, &c.config, mode))
            .transpose()?
            .map(|r| r.total)
            .unwrap_or(0);
        for cell in cells {
            let report = count_instructions(circuit, &cell.config, mode)?;
            let normalized = if baseline == 0 {
                0.0
            } else {
                report.total as f64 / baseline as f64
            };
            rows.push(SweepRow {
                benchmark: name.clone(),
                config_id: cell.config_id,
                w: cell.config.vliw_width,
                w_pi: cell.config.pi_width,
                scheme: cell.config.scheme.name(),
                somq: cell.config.somq,
                report,
                normalized,
            });
        }
    }
    Ok(rows)
}

pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "benchmark,config_id,w,w_pi,scheme,somq,total,qwaits,bundles,eff_ops_per_bundle,normalized\n",
    );
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{:.4},{:.4}\n",
            row.benchmark,
            row.config_id,
            row.w,
            row.w_pi,
            row.scheme,
            row.somq,
            row.report.total,
            row.report.qwaits,
            row.report.bundles,
            row.report.eff_ops_per_bundle,
            row.normalized,
        ));
    }
    out
}
