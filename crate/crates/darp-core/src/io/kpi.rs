//! Key performance indicators computed on finished solutions: coverage
//! rate, empty-mileage share and mean excess ride time.

use serde::{Deserialize, Serialize};

use crate::model::{Instance, StrictFlags};
use crate::schedule::{schedule_route, Infeasibility, Solution, EPS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KpiReport {
    /// Percentage of served requests.
    pub kpi1: f64,
    /// Percentage of route time driven with no passenger onboard.
    pub kpi2: f64,
    /// Mean minutes a passenger spends beyond the direct ride.
    pub kpi3: f64,
}

/// Computes the three KPIs. By default the empty-mileage shares are
/// averaged over vehicles and the excess ride time over served requests;
/// the strict switches restore the published aggregation instead.
pub fn compute_kpis(
    inst: &Instance,
    sol: &Solution,
    strict: &StrictFlags,
) -> Result<KpiReport, Infeasibility> {
    let n = inst.num_requests();
    let served = sol.served_count(inst);
    let kpi1 = if n == 0 { 100.0 } else { served as f64 / n as f64 * 100.0 };

    let mut empty_ratios = Vec::with_capacity(sol.routes.len());
    let mut excess_total = 0.0;
    for route in &sol.routes {
        let schedule = schedule_route(inst, route)?;
        let times = &schedule.start_times;
        let span = times[times.len() - 1] - times[0];
        let mut empty = 0.0;
        for i in 0..route.stops.len() - 1 {
            if schedule.loads[i] == 0 {
                empty += times[i + 1] - times[i];
            }
        }
        empty_ratios.push(if span > EPS { empty / span } else { 0.0 });

        for id in route.request_ids(inst) {
            let r = inst.request(id);
            let p = route.stops.iter().position(|&s| s == r.pickup).unwrap();
            let d = route.stops.iter().position(|&s| s == r.delivery).unwrap();
            let actual = times[d] - (times[p] + inst.vertex(r.pickup).service);
            excess_total += actual - inst.travel_time(r.pickup, r.delivery);
        }
    }

    let kpi2 = if strict.kpi2_sum_routes {
        empty_ratios.iter().sum::<f64>() * 100.0
    } else if empty_ratios.is_empty() {
        0.0
    } else {
        empty_ratios.iter().sum::<f64>() / empty_ratios.len() as f64 * 100.0
    };

    let kpi3_denominator = if strict.kpi3_all_requests { n } else { served };
    let kpi3 = if kpi3_denominator == 0 {
        0.0
    } else {
        excess_total / kpi3_denominator as f64
    };

    Ok(KpiReport { kpi1, kpi2, kpi3 })
}
