//! File formats and reporting: versioned JSON for instances and solutions,
//! the trip-data instance generator, KPI computation and results tables.

pub mod generate;
pub mod import;
pub mod kpi;
pub mod results;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{validate_instance, Instance, SolverParams};
use crate::schedule::{schedule_route, Route, Solution};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid solution: {0}")]
    InvalidSolution(String),
    #[error("{0}")]
    Other(String),
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    schema_version: u32,
    #[serde(flatten)]
    instance: Instance,
}

/// Serializes an instance as versioned JSON. `parse_instance` is its exact
/// inverse.
pub fn write_instance(inst: &Instance) -> String {
    let file = InstanceFile { schema_version: SCHEMA_VERSION, instance: inst.clone() };
    serde_json::to_string_pretty(&file).expect("instance serialization cannot fail")
}

/// Parses and structurally validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(IoError::SchemaVersion(file.schema_version));
    }
    let report = validate_instance(&file.instance);
    if !report.is_valid() {
        return Err(IoError::InvalidInstance(report.violations.join("; ")));
    }
    Ok(file.instance)
}

#[derive(Serialize, Deserialize)]
struct SolutionFile {
    schema_version: u32,
    instance: String,
    routes: Vec<RouteFile>,
    rejected: Vec<usize>,
    cost: crate::schedule::Cost,
}

#[derive(Serialize, Deserialize)]
struct RouteFile {
    vehicle: usize,
    stops: Vec<usize>,
    start_times: Vec<f64>,
    loads: Vec<i32>,
}

/// Serializes a solution with its computed schedules and cost breakdown.
pub fn write_solution(inst: &Instance, sol: &Solution) -> Result<String, IoError> {
    let mut routes = Vec::with_capacity(sol.routes.len());
    for route in &sol.routes {
        let schedule = schedule_route(inst, route)
            .map_err(|e| IoError::InvalidSolution(e.to_string()))?;
        routes.push(RouteFile {
            vehicle: route.vehicle,
            stops: route.stops.clone(),
            start_times: schedule.start_times,
            loads: schedule.loads,
        });
    }
    let file = SolutionFile {
        schema_version: SCHEMA_VERSION,
        instance: inst.name.clone(),
        routes,
        rejected: sol.rejected.iter().copied().collect(),
        cost: sol.cost,
    };
    Ok(serde_json::to_string_pretty(&file).expect("solution serialization cannot fail"))
}

/// Parses a solution document and re-validates it against the instance:
/// stops must resolve, routes must schedule, recorded start times and cost
/// must match the recomputation within 1e-6.
pub fn parse_solution(
    text: &str,
    inst: &Instance,
    params: &SolverParams,
) -> Result<Solution, IoError> {
    const TOL: f64 = 1e-6;
    let file: SolutionFile = serde_json::from_str(text)?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(IoError::SchemaVersion(file.schema_version));
    }
    for rf in &file.routes {
        for &s in &rf.stops {
            if s >= inst.vertices.len() {
                return Err(IoError::InvalidSolution(format!(
                    "route of vehicle {} references unknown vertex {s}",
                    rf.vehicle
                )));
            }
        }
    }
    let routes: Vec<Route> = file
        .routes
        .iter()
        .map(|rf| Route { vehicle: rf.vehicle, stops: rf.stops.clone() })
        .collect();
    let sol = Solution::from_routes(inst, params, routes)
        .map_err(|e| IoError::InvalidSolution(e.to_string()))?;

    for (rf, route) in file.routes.iter().zip(&sol.routes) {
        let schedule = schedule_route(inst, route)
            .map_err(|e| IoError::InvalidSolution(e.to_string()))?;
        if rf.start_times.len() != schedule.start_times.len() {
            return Err(IoError::InvalidSolution(format!(
                "vehicle {}: start_times length mismatch",
                rf.vehicle
            )));
        }
        for (i, (&recorded, &actual)) in
            rf.start_times.iter().zip(&schedule.start_times).enumerate()
        {
            if (recorded - actual).abs() > TOL {
                return Err(IoError::InvalidSolution(format!(
                    "vehicle {}: start time at stop index {i} is {recorded}, expected {actual}",
                    rf.vehicle
                )));
            }
        }
    }
    if (file.cost.weighted - sol.cost.weighted).abs() > TOL {
        return Err(IoError::InvalidSolution(format!(
            "recorded cost {} differs from recomputed {}",
            file.cost.weighted, sol.cost.weighted
        )));
    }
    let recorded: std::collections::BTreeSet<usize> = file.rejected.iter().copied().collect();
    if recorded != sol.rejected {
        return Err(IoError::InvalidSolution(
            "recorded rejection pool differs from the routes' complement".into(),
        ));
    }
    Ok(sol)
}
