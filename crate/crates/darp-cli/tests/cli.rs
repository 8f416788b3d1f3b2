//! End-to-end tests of the `darp` binary: real processes, real files.

use std::path::Path;
use std::process::{Command, Output};

use darp_core::io::{parse_solution, write_instance};
use darp_core::model::SolverParams;
use darp_core::synthetic;

fn darp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_darp"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn write_tiny_instance(dir: &Path) -> std::path::PathBuf {
    let inst = synthetic::random_instance(3, 1, 21);
    let path = dir.join("tiny.json");
    std::fs::write(&path, write_instance(&inst)).unwrap();
    path
}

#[test]
fn solve_writes_artifacts_and_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tiny_instance(dir.path());
    let output = run(darp()
        .args(["solve", "--instance"])
        .arg(&instance)
        .args(["--runs", "2", "--seed", "4", "--iter-budget", "40", "--trace"])
        .arg("--out")
        .arg(dir.path()));
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));

    let inst = darp_core::io::parse_instance(&std::fs::read_to_string(&instance).unwrap()).unwrap();
    let name = &inst.name;
    let solution_text =
        std::fs::read_to_string(dir.path().join(format!("{name}_best.solution.json"))).unwrap();
    let solution = parse_solution(&solution_text, &inst, &SolverParams::default()).unwrap();
    assert!(darp_core::schedule::check_feasibility(&inst, &solution).is_feasible());

    let stats_text =
        std::fs::read_to_string(dir.path().join(format!("{name}_runstats.json"))).unwrap();
    let stats: serde_json::Value = serde_json::from_str(&stats_text).unwrap();
    assert_eq!(stats.as_array().unwrap().len(), 2);

    let results =
        std::fs::read_to_string(dir.path().join(format!("{name}_results.csv"))).unwrap();
    assert!(results.starts_with("instance,best,avg,cpu_s,gap_pct\n"));

    let trace =
        std::fs::read_to_string(dir.path().join(format!("{name}_seed4_trace.csv"))).unwrap();
    assert!(trace.starts_with("iteration,current_cost,best_cost,temperature,"));
    assert_eq!(trace.lines().count(), 41);
}

#[test]
fn seeded_solves_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tiny_instance(dir.path());
    let mut outputs = Vec::new();
    for round in 0..2 {
        let out = dir.path().join(format!("round{round}"));
        let output = run(darp()
            .args(["solve", "--instance"])
            .arg(&instance)
            .args(["--runs", "1", "--seed", "11", "--iter-budget", "50"])
            .arg("--out")
            .arg(&out));
        assert!(output.status.success());
        let inst_name = "rand_n3_m1_s21";
        outputs.push(
            std::fs::read_to_string(out.join(format!("{inst_name}_best.solution.json"))).unwrap(),
        );
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn zero_runs_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tiny_instance(dir.path());
    let output = run(darp().args(["solve", "--instance"]).arg(&instance).args(["--runs", "0"]));
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn generate_subset_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let output = run(darp()
            .args([
                "generate",
                "--synthetic-trips",
                "80",
                "--sizes",
                "10,15",
                "--window",
                "b",
                "--fleet",
                "ceil",
                "--seed",
                "5",
            ])
            .arg("--out")
            .arg(out));
        assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    }
    for name in ["inst_b10_2.json", "inst_b15_2.json"] {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical invocations");
    }
}

#[test]
fn full_suite_has_28_instances() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(darp()
        .args(["generate", "--synthetic-trips", "400", "--suite", "--seed", "7"])
        .arg("--out")
        .arg(dir.path()));
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let count = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| {
            e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json")
        })
        .count();
    assert_eq!(count, 28);
    assert!(dir.path().join("inst_a200_23.json").exists());
}

#[test]
fn export_lp_has_the_sections() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tiny_instance(dir.path());
    let output = run(darp().args(["export-lp", "--instance"]).arg(&instance));
    assert!(output.status.success());
    let text = stdout(&output);
    for section in ["Minimize", "Subject To", "Bounds", "Binaries", "End"] {
        assert!(text.contains(section), "missing {section}");
    }
}

#[test]
fn oracle_solves_small_and_refuses_large() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tiny_instance(dir.path());
    let output = run(darp()
        .args(["oracle", "--instance"])
        .arg(&instance)
        .arg("--out")
        .arg(dir.path()));
    assert!(output.status.success());
    assert!(stdout(&output).contains("proven optimum"));

    let big = synthetic::random_instance(9, 2, 3);
    let big_path = dir.path().join("big.json");
    std::fs::write(&big_path, write_instance(&big)).unwrap();
    let output = run(darp().args(["oracle", "--instance"]).arg(&big_path));
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn kpi_and_check_consume_oracle_output() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tiny_instance(dir.path());
    let output = run(darp()
        .args(["oracle", "--instance"])
        .arg(&instance)
        .arg("--out")
        .arg(dir.path()));
    assert!(output.status.success());
    let solution = dir.path().join("rand_n3_m1_s21_oracle.solution.json");

    let output = run(darp()
        .args(["kpi", "--instance"])
        .arg(&instance)
        .arg("--solution")
        .arg(&solution));
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let kpi1 = report["kpi1"].as_f64().unwrap();
    assert!((0.0..=100.0).contains(&kpi1));

    let output = run(darp()
        .args(["check", "--instance"])
        .arg(&instance)
        .arg("--solution")
        .arg(&solution));
    assert!(output.status.success());
    assert!(stdout(&output).contains("feasible"));
}

#[test]
fn bench_builds_a_results_table() {
    let dir = tempfile::tempdir().unwrap();
    let instances = dir.path().join("instances");
    std::fs::create_dir_all(&instances).unwrap();
    for seed in [21, 22] {
        let inst = synthetic::random_instance(3, 1, seed);
        std::fs::write(instances.join(format!("{}.json", inst.name)), write_instance(&inst))
            .unwrap();
    }
    let output = run(darp()
        .args(["bench", "--instances"])
        .arg(&instances)
        .args(["--runs", "2", "--seed", "1", "--iter-budget", "20"])
        .arg("--out")
        .arg(dir.path()));
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("instance,best,avg,cpu_s,gap_pct\n"));
}

#[test]
fn help_enumerates_every_subcommand_and_flag() {
    let output = run(darp().arg("--help"));
    let text = stdout(&output);
    for sub in ["solve", "generate", "export-lp", "oracle", "kpi", "check", "bench"] {
        assert!(text.contains(sub), "top-level help misses {sub}");
    }
    for flag in ["--server", "--out"] {
        assert!(text.contains(flag), "top-level help misses {flag}");
    }

    let expectations: &[(&str, &[&str])] = &[
        (
            "solve",
            &[
                "--instance",
                "--runs",
                "--trace",
                "--report-miles",
                "--params",
                "--seed",
                "--iter-budget",
                "--cpu-max",
                "--strict-cluster-mean",
                "--strict-perturb-parity",
                "--verbose-moves",
            ],
        ),
        (
            "generate",
            &[
                "--trips",
                "--zones",
                "--synthetic-trips",
                "--suite",
                "--sizes",
                "--window",
                "--fleet",
                "--seed",
            ],
        ),
        ("export-lp", &["--instance", "--lp-out", "--no-duration-row"]),
        ("oracle", &["--instance", "--max-requests", "--max-vehicles"]),
        ("kpi", &["--instance", "--solution", "--strict-kpi2-sum", "--strict-kpi3-all"]),
        ("check", &["--instance", "--solution"]),
        ("bench", &["--instances", "--runs", "--baseline", "--seed", "--iter-budget"]),
    ];
    for (sub, flags) in expectations {
        let output = run(darp().args([*sub, "--help"]));
        let text = stdout(&output);
        for flag in *flags {
            assert!(text.contains(flag), "{sub} --help misses {flag}");
        }
    }
}
