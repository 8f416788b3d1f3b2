//! HTTP service exposing the solver toolkit: validation, feasibility
//! checking, KPI reporting, LP export, the exhaustive oracle, instance
//! generation and asynchronous solve jobs.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use uuid::Uuid;

use darp_client::types::*;
use darp_core::engine::run_eils;
use darp_core::exact::{brute_force_solve, export_milp, ExactError};
use darp_core::io::generate::{generate_instances, generate_suite, parse_trips, Scenario};
use darp_core::io::kpi::compute_kpis;
use darp_core::io::{parse_instance, parse_solution, write_instance, write_solution};
use darp_core::model::{validate_instance, Instance, SolverParams};
use darp_core::schedule::check_feasibility;

#[derive(Default)]
pub struct AppState {
    jobs: Mutex<HashMap<Uuid, JobStatus>>,
}

pub type SharedState = Arc<AppState>;

pub fn app() -> Router {
    app_with_state(Arc::new(AppState::default()))
}

pub fn app_with_state(state: SharedState) -> Router {
    Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route("/api/v1/validate", post(validate))
        .route("/api/v1/check", post(check))
        .route("/api/v1/kpi", post(kpi))
        .route("/api/v1/export-lp", post(export_lp))
        .route("/api/v1/oracle", post(oracle))
        .route("/api/v1/generate", post(generate))
        .route("/api/v1/solve", post(solve))
        .route("/api/v1/jobs/{id}", get(job_status))
        .with_state(state)
}

struct Failure {
    status: StatusCode,
    body: ApiError,
}

impl Failure {
    fn bad_request(error: impl Into<String>) -> Failure {
        Failure {
            status: StatusCode::BAD_REQUEST,
            body: ApiError { kind: "bad_request".into(), error: error.into() },
        }
    }

    fn unprocessable(kind: &str, error: impl Into<String>) -> Failure {
        Failure {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            body: ApiError { kind: kind.into(), error: error.into() },
        }
    }

    fn not_found(error: impl Into<String>) -> Failure {
        Failure {
            status: StatusCode::NOT_FOUND,
            body: ApiError { kind: "not_found".into(), error: error.into() },
        }
    }

    fn internal(error: impl Into<String>) -> Failure {
        Failure {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ApiError { kind: "internal".into(), error: error.into() },
        }
    }
}

impl IntoResponse for Failure {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

/// Re-parses an embedded instance document through the file-format path so
/// the API applies exactly the validation the CLI does.
fn instance_from(value: &serde_json::Value) -> Result<Instance, Failure> {
    parse_instance(&value.to_string()).map_err(|e| Failure::bad_request(e.to_string()))
}

async fn validate(
    Json(req): Json<ValidateRequest>,
) -> Result<Json<ValidateResponse>, Failure> {
    // Validation is report-style: a structurally broken instance is a
    // report, not a transport error, as long as the JSON itself parses.
    let file: serde_json::Value = req.instance;
    let parsed: Result<Instance, _> = serde_json::from_value(strip_version(file.clone())?);
    match parsed {
        Ok(inst) => Ok(Json(validate_instance(&inst))),
        Err(e) => Err(Failure::bad_request(e.to_string())),
    }
}

/// Removes and checks the schema_version field of an embedded document.
fn strip_version(mut value: serde_json::Value) -> Result<serde_json::Value, Failure> {
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Failure::bad_request("instance document must be an object"))?;
    match obj.remove("schema_version") {
        Some(v) if v == 1 => Ok(value),
        Some(v) => Err(Failure::bad_request(format!("unsupported schema version {v}"))),
        None => Err(Failure::bad_request("missing schema_version")),
    }
}

async fn check(Json(req): Json<CheckRequest>) -> Result<Json<CheckResponse>, Failure> {
    let inst = instance_from(&req.instance)?;
    let params = SolverParams::default();
    let sol = parse_solution(&req.solution.to_string(), &inst, &params)
        .map_err(|e| Failure::bad_request(e.to_string()))?;
    Ok(Json(check_feasibility(&inst, &sol)))
}

async fn kpi(Json(req): Json<KpiRequest>) -> Result<Json<KpiResponse>, Failure> {
    let inst = instance_from(&req.instance)?;
    let params = SolverParams::default();
    let sol = parse_solution(&req.solution.to_string(), &inst, &params)
        .map_err(|e| Failure::bad_request(e.to_string()))?;
    let report = compute_kpis(&inst, &sol, &req.strict)
        .map_err(|e| Failure::unprocessable("infeasible", e.to_string()))?;
    Ok(Json(report))
}

async fn export_lp(Json(req): Json<ExportLpRequest>) -> Result<String, Failure> {
    let inst = instance_from(&req.instance)?;
    let params = req.params.unwrap_or_default();
    params.validate().map_err(Failure::bad_request)?;
    Ok(export_milp(&inst, &params, req.options))
}

async fn oracle(
    Json(req): Json<OracleRequest>,
) -> Result<Json<darp_core::exact::ExactResult>, Failure> {
    let inst = instance_from(&req.instance)?;
    let params = req.params.unwrap_or_default();
    let limits = req.limits.unwrap_or_default();
    match brute_force_solve(&inst, &params, limits) {
        Ok(result) => Ok(Json(result)),
        Err(e @ ExactError::OverLimits { .. }) => {
            Err(Failure::unprocessable("over_limits", e.to_string()))
        }
        Err(e @ ExactError::Infeasible(_)) => {
            Err(Failure::unprocessable("infeasible", e.to_string()))
        }
        Err(e) => Err(Failure::bad_request(e.to_string())),
    }
}

async fn generate(
    Json(req): Json<GenerateRequest>,
) -> Result<Json<GenerateResponse>, Failure> {
    let trips = parse_trips(&req.trips_csv, &req.zones_csv)
        .map_err(|e| Failure::bad_request(e.to_string()))?;
    let instances = if req.suite {
        generate_suite(&trips, req.seed)
    } else {
        let scenario = req.scenario.clone().unwrap_or_else(Scenario::default);
        if req.sizes.is_empty() {
            return Err(Failure::bad_request("sizes must be nonempty unless suite is set"));
        }
        generate_instances(&trips, &req.sizes, &scenario, req.seed)
    }
    .map_err(|e| Failure::unprocessable("infeasible", e.to_string()))?;
    let documents = instances
        .iter()
        .map(|inst| serde_json::from_str(&write_instance(inst)).expect("own format parses"))
        .collect();
    Ok(Json(GenerateResponse { instances: documents }))
}

async fn solve(
    State(state): State<SharedState>,
    Json(req): Json<SolveRequest>,
) -> Result<(StatusCode, Json<SolveSubmitted>), Failure> {
    let inst = instance_from(&req.instance)?;
    let mut params = req.params.unwrap_or_default();
    params.validate().map_err(Failure::bad_request)?;
    if req.runs == 0 {
        return Err(Failure::bad_request("runs must be at least 1"));
    }
    let base_seed = req.seed.unwrap_or(params.rng_seed);
    let job_id = Uuid::new_v4();
    state.jobs.lock().unwrap().insert(job_id, JobStatus::Running);

    let state_for_job = state.clone();
    let worker =
        tokio::task::spawn_blocking(move || run_job(&inst, &mut params, base_seed, req.runs));
    tokio::spawn(async move {
        // A panicking worker must surface as a failed job, not hang it.
        let status = match worker.await {
            Ok(Ok(result)) => JobStatus::Done { result: Box::new(result) },
            Ok(Err(e)) => JobStatus::Failed { error: e },
            Err(join_error) => JobStatus::Failed { error: join_error.to_string() },
        };
        state_for_job.jobs.lock().unwrap().insert(job_id, status);
    });

    Ok((StatusCode::ACCEPTED, Json(SolveSubmitted { job_id: job_id.to_string() })))
}

fn run_job(
    inst: &Instance,
    params: &mut SolverParams,
    base_seed: u64,
    replicas: u64,
) -> Result<SolveResult, String> {
    let mut runs = Vec::with_capacity(replicas as usize);
    for offset in 0..replicas {
        let seed = base_seed + offset;
        params.rng_seed = seed;
        let (solution, stats) = run_eils(inst, params).map_err(|e| e.to_string())?;
        let doc = write_solution(inst, &solution).map_err(|e| e.to_string())?;
        runs.push(RunOutcome {
            seed,
            solution: serde_json::from_str(&doc).expect("own format parses"),
            stats,
        });
    }
    let best_run = runs
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (!a.stats.feasible, a.stats.best_cost)
                .partial_cmp(&(!b.stats.feasible, b.stats.best_cost))
                .unwrap()
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    let feasible = runs[best_run].stats.feasible;
    Ok(SolveResult { instance: inst.name.clone(), runs, best_run, feasible })
}

async fn job_status(
    State(state): State<SharedState>,
    Path(id): Path<String>,
) -> Result<Json<JobStatus>, Failure> {
    let uuid = Uuid::parse_str(&id).map_err(|_| Failure::bad_request("malformed job id"))?;
    let jobs = state.jobs.lock().map_err(|_| Failure::internal("job store poisoned"))?;
    match jobs.get(&uuid) {
        Some(status) => Ok(Json(status.clone())),
        None => Err(Failure::not_found(format!("no job {id}"))),
    }
}
