//! Results tables: per-instance summaries over repeated seeded runs, with
//! an optional gap column against a baseline method.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// Aggregates of the best objective over a batch of runs on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub instance: String,
    pub best: f64,
    pub avg: f64,
    pub cpu_s: f64,
}

/// Collapses per-run best costs and run times into one summary row.
pub fn summarize(instance: &str, bests: &[f64], cpu_seconds: &[f64]) -> InstanceSummary {
    let best = bests.iter().copied().fold(f64::INFINITY, f64::min);
    let avg = if bests.is_empty() { f64::NAN } else { bests.iter().sum::<f64>() / bests.len() as f64 };
    let cpu_s = if cpu_seconds.is_empty() {
        0.0
    } else {
        cpu_seconds.iter().sum::<f64>() / cpu_seconds.len() as f64
    };
    InstanceSummary { instance: instance.to_string(), best, avg, cpu_s }
}

/// Percentage gap of `best` against a baseline best: 100 (best - base) / base.
pub fn gap_pct(best: f64, baseline: f64) -> f64 {
    100.0 * (best - baseline) / baseline
}

/// Renders the CSV table `instance,best,avg,cpu_s,gap_pct`. Rows without a
/// baseline entry leave the gap cell empty.
pub fn results_table(
    rows: &[InstanceSummary],
    baseline: Option<&HashMap<String, f64>>,
) -> String {
    let mut out = String::from("instance,best,avg,cpu_s,gap_pct\n");
    for row in rows {
        let gap = baseline
            .and_then(|b| b.get(&row.instance))
            .map(|&base| format!("{:.3}", gap_pct(row.best, base)))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.3},{}\n",
            row.instance, row.best, row.avg, row.cpu_s, gap
        ));
    }
    out
}
