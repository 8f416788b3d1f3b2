//! End-to-end API tests: a real server on an ephemeral port driven through
//! the blocking client.

use std::time::Duration;

use darp_client::types::*;
use darp_client::{Client, ClientError};
use darp_core::io::{write_instance, write_solution};
use darp_core::model::SolverParams;
use darp_core::schedule::{Route, Solution};
use darp_core::synthetic;

/// Boots the service on its own runtime thread and returns a client for it.
fn spawn_server() -> Client {
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(async move {
            let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
            tx.send(listener.local_addr().unwrap()).unwrap();
            axum::serve(listener, darp_server::app()).await.unwrap();
        });
    });
    let addr = rx.recv_timeout(Duration::from_secs(10)).unwrap();
    let client = Client::new(&format!("http://{addr}"));
    for _ in 0..100 {
        if client.health().is_ok() {
            return client;
        }
        std::thread::sleep(Duration::from_millis(20));
    }
    panic!("server never became healthy");
}

fn instance_doc(inst: &darp_core::model::Instance) -> serde_json::Value {
    serde_json::from_str(&write_instance(inst)).unwrap()
}

#[test]
fn full_api_round_trip() {
    let client = spawn_server();
    let inst = synthetic::random_instance(3, 1, 42);
    let params = SolverParams::default();
    let doc = instance_doc(&inst);

    // Validation: clean instance, then a broken window.
    let report = client.validate(&ValidateRequest { instance: doc.clone() }).unwrap();
    assert!(report.is_valid());
    let mut broken = doc.clone();
    broken["vertices"][1]["earliest"] = serde_json::json!(9999.0);
    let report = client.validate(&ValidateRequest { instance: broken }).unwrap();
    assert!(!report.is_valid());

    // Solve: submit, poll, re-validate the returned best solution.
    let result = client
        .solve(
            &SolveRequest {
                instance: doc.clone(),
                params: Some(SolverParams {
                    max_iterations: Some(30),
                    cpu_max: 1e9,
                    ..SolverParams::default()
                }),
                runs: 2,
                seed: Some(9),
            },
            Duration::from_secs(120),
        )
        .unwrap();
    assert_eq!(result.runs.len(), 2);
    assert_eq!(result.runs[0].seed, 9);
    assert_eq!(result.runs[1].seed, 10);
    let best = &result.runs[result.best_run];
    let parsed = darp_core::io::parse_solution(&best.solution.to_string(), &inst, &params)
        .expect("returned solution re-validates");

    // Feasibility check and KPIs on the returned solution.
    let check = client
        .check(&CheckRequest { instance: doc.clone(), solution: best.solution.clone() })
        .unwrap();
    assert_eq!(check.is_feasible(), result.feasible);
    let kpis = client
        .kpi(&KpiRequest {
            instance: doc.clone(),
            solution: best.solution.clone(),
            strict: Default::default(),
        })
        .unwrap();
    assert!(kpis.kpi1 >= 0.0 && kpis.kpi1 <= 100.0);
    assert_eq!(
        kpis.kpi1,
        parsed.served_count(&inst) as f64 / inst.num_requests() as f64 * 100.0
    );

    // LP export.
    let lp = client
        .export_lp(&ExportLpRequest { instance: doc.clone(), options: Default::default(), params: None })
        .unwrap();
    assert!(lp.contains("Minimize"));
    assert!(lp.contains("Binaries"));

    // Oracle matches or beats the metaheuristic.
    let exact = client
        .oracle(&OracleRequest { instance: doc.clone(), limits: None, params: None })
        .unwrap();
    assert!(exact.proven);
    assert!(exact.optimum.weighted <= best.stats.best_cost + 1e-9);
}

#[test]
fn oracle_refuses_oversized_instances() {
    let client = spawn_server();
    let inst = synthetic::random_instance(9, 1, 7);
    let err = client
        .oracle(&OracleRequest { instance: instance_doc(&inst), limits: None, params: None })
        .unwrap_err();
    match err {
        ClientError::Api { kind, .. } => assert_eq!(kind, "over_limits"),
        other => panic!("expected api error, got {other}"),
    }
}

#[test]
fn generate_endpoint_builds_instances() {
    let client = spawn_server();
    let (trips_csv, zones_csv) = synthetic::random_trips_csv(120, 5);
    let response = client
        .generate(&GenerateRequest {
            trips_csv,
            zones_csv,
            suite: false,
            sizes: vec![10, 15],
            scenario: None,
            seed: 3,
        })
        .unwrap();
    assert_eq!(response.instances.len(), 2);
    for doc in &response.instances {
        let inst = darp_core::io::parse_instance(&doc.to_string()).unwrap();
        assert!(darp_core::model::validate_instance(&inst).is_valid());
    }
}

#[test]
fn tampered_solution_is_rejected() {
    let client = spawn_server();
    let inst = synthetic::two_request_line();
    let params = SolverParams::default();
    let sol = Solution::from_routes(
        &inst,
        &params,
        vec![Route { vehicle: 0, stops: vec![0, 1, 3, 2, 4, 5] }],
    )
    .unwrap();
    let mut doc: serde_json::Value =
        serde_json::from_str(&write_solution(&inst, &sol).unwrap()).unwrap();
    doc["cost"]["weighted"] = serde_json::json!(1.0);
    let err = client
        .check(&CheckRequest { instance: instance_doc(&inst), solution: doc })
        .unwrap_err();
    match err {
        ClientError::Api { kind, error } => {
            assert_eq!(kind, "bad_request");
            assert!(error.contains("cost"), "{error}");
        }
        other => panic!("expected api error, got {other}"),
    }
}

#[test]
fn unknown_job_is_not_found() {
    let client = spawn_server();
    let err = client.job_status(&uuid_like()).unwrap_err();
    match err {
        ClientError::Api { kind, .. } => assert_eq!(kind, "not_found"),
        other => panic!("expected api error, got {other}"),
    }
}

fn uuid_like() -> String {
    "00000000-0000-4000-8000-000000000000".to_string()
}
