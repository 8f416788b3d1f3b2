//! Wire types of the HTTP API, shared between server and client.

use serde::{Deserialize, Serialize};

use darp_core::engine::RunStats;
use darp_core::exact::Limits;
use darp_core::io::generate::Scenario;
use darp_core::io::kpi::KpiReport;
use darp_core::model::{SolverParams, ValidationReport};
use darp_core::schedule::FeasibilityReport;

/// Uniform error envelope. `kind` is machine-readable: bad_request,
/// over_limits, infeasible, not_found, internal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiError {
    pub kind: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidateRequest {
    /// An instance document (the JSON file format, embedded).
    pub instance: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRequest {
    pub instance: serde_json::Value,
    /// A solution document (the JSON file format, embedded).
    pub solution: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KpiRequest {
    pub instance: serde_json::Value,
    pub solution: serde_json::Value,
    #[serde(default)]
    pub strict: darp_core::model::StrictFlags,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExportLpRequest {
    pub instance: serde_json::Value,
    #[serde(default)]
    pub options: darp_core::exact::MilpOptions,
    #[serde(default)]
    pub params: Option<SolverParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleRequest {
    pub instance: serde_json::Value,
    #[serde(default)]
    pub limits: Option<Limits>,
    #[serde(default)]
    pub params: Option<SolverParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub trips_csv: String,
    pub zones_csv: String,
    /// Generate the full 28-instance suite when true; `sizes` plus
    /// `scenario` otherwise.
    #[serde(default)]
    pub suite: bool,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub scenario: Option<Scenario>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateResponse {
    /// Instance documents, ready to be written to disk verbatim.
    pub instances: Vec<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveRequest {
    pub instance: serde_json::Value,
    #[serde(default)]
    pub params: Option<SolverParams>,
    /// Number of seeded replicas; seeds run seed, seed+1, ...
    #[serde(default = "default_runs")]
    pub runs: u64,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_runs() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveSubmitted {
    pub job_id: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOutcome {
    pub seed: u64,
    /// Solution document (the JSON file format, embedded).
    pub solution: serde_json::Value,
    pub stats: RunStats,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveResult {
    pub instance: String,
    pub runs: Vec<RunOutcome>,
    /// Index of the best run (service level first, then cost).
    pub best_run: usize,
    /// True when the best run's solution satisfies every constraint.
    pub feasible: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum JobStatus {
    Running,
    Done { result: Box<SolveResult> },
    Failed { error: String },
}

pub type ValidateResponse = ValidationReport;
pub type CheckResponse = FeasibilityReport;
pub type KpiResponse = KpiReport;
