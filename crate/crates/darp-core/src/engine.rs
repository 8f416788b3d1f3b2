//! The outer search loop: construction, learning local search, path
//! relinking against the elite archive, annealing acceptance, scheduled
//! perturbation and geometric cooling with reheating.

use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::build_initial;
use crate::lns::{perturb, repair, InsertionKind};
use crate::model::{Instance, SolverParams};
use crate::neighborhoods::learning_local_search;
use crate::relink::{path_relink, EliteSet};
use crate::schedule::{check_feasibility, Solution, EPS};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("instance has no vehicles")]
    EmptyFleet,
    #[error("negative time budget: {0}")]
    NegativeBudget(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaDecision {
    AcceptNew,
    KeepCurrent,
}

/// Probability of accepting the candidate: 1 for an improvement, otherwise
/// the annealing exponential exp(-(f_new - f_cur) / T).
pub fn acceptance_probability(f_cur: f64, f_new: f64, temperature: f64) -> f64 {
    if f_new < f_cur {
        1.0
    } else {
        (-(f_new - f_cur) / temperature).exp()
    }
}

/// Metropolis rule at the given temperature.
pub fn sa_accept(
    f_cur: f64,
    f_new: f64,
    temperature: f64,
    rng: &mut ChaCha8Rng,
) -> SaDecision {
    debug_assert!(temperature > 0.0);
    let p = acceptance_probability(f_cur, f_new, temperature);
    if p >= 1.0 || rng.random::<f64>() < p {
        SaDecision::AcceptNew
    } else {
        SaDecision::KeepCurrent
    }
}

/// One line of the optional per-iteration trace. While the best solution
/// is below the service level its coverage climbs (cost may rise with it);
/// once `best_feasible` holds, the best cost decreases monotonically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iteration: u64,
    pub current_cost: f64,
    pub best_cost: f64,
    pub best_served: usize,
    pub best_feasible: bool,
    pub temperature: f64,
    pub probabilities: [f64; 5],
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComponentTimings {
    pub construct_s: f64,
    pub local_search_s: f64,
    pub relink_s: f64,
    pub perturb_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub instance: String,
    pub seed: u64,
    /// Seeds handed to the local-search, relinking, perturbation and
    /// acceptance generators, in that order.
    pub component_seeds: [u64; 4],
    pub iterations: u64,
    pub improvements: u64,
    pub sa_accepts: u64,
    pub sa_rejects: u64,
    pub perturbations: u64,
    pub initial_cost: f64,
    pub best_cost: f64,
    pub best_iteration: u64,
    pub served: usize,
    pub feasible: bool,
    pub elapsed_seconds: f64,
    pub timings: ComponentTimings,
    pub final_probabilities: [f64; 5],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<IterationTrace>,
}

/// Service-level feasibility first, then weighted cost.
fn better_than(inst: &Instance, candidate: &Solution, incumbent: &Solution) -> bool {
    let cand_ok = candidate.meets_service_level(inst);
    let inc_ok = incumbent.meets_service_level(inst);
    match (cand_ok, inc_ok) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => candidate.cost.weighted < incumbent.cost.weighted - EPS,
        // Serving more outranks cheaper until the service level is met:
        // coverage is the top of the objective hierarchy.
        (false, false) => {
            let cand = candidate.served_count(inst);
            let inc = incumbent.served_count(inst);
            cand > inc
                || (cand == inc && candidate.cost.weighted < incumbent.cost.weighted - EPS)
        }
    }
}

/// Runs the full metaheuristic. Stops at the wall-clock budget or, when
/// set, the iteration budget — the latter makes runs fully deterministic
/// for a given seed.
pub fn run_eils(
    inst: &Instance,
    params: &SolverParams,
) -> Result<(Solution, RunStats), EngineError> {
    params.validate().map_err(EngineError::InvalidParams)?;
    if inst.num_vehicles() == 0 {
        return Err(EngineError::EmptyFleet);
    }
    if params.cpu_max < 0.0 || params.cpu_max.is_nan() {
        return Err(EngineError::NegativeBudget(params.cpu_max));
    }

    let start = Instant::now();
    let mut master = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let component_seeds = [
        master.next_u64(),
        master.next_u64(),
        master.next_u64(),
        master.next_u64(),
    ];
    let mut lls_rng = ChaCha8Rng::seed_from_u64(component_seeds[0]);
    let mut pr_rng = ChaCha8Rng::seed_from_u64(component_seeds[1]);
    let mut lns_rng = ChaCha8Rng::seed_from_u64(component_seeds[2]);
    let mut sa_rng = ChaCha8Rng::seed_from_u64(component_seeds[3]);

    let t_max = params.temperature_max(inst);
    let t_min = params.temperature_min(inst);

    let construct_started = Instant::now();
    let initial = build_initial(inst, params);
    let mut timings =
        ComponentTimings { construct_s: construct_started.elapsed().as_secs_f64(), ..Default::default() };

    let mut current = initial.clone();
    let mut best = initial.clone();
    let mut elite = EliteSet::new(params.size_e);
    if current.meets_service_level(inst) {
        elite.update(inst, &current);
    }

    let mut temperature = t_max;
    let mut no_improve = 0u64;
    let mut stats = RunStats {
        instance: inst.name.clone(),
        seed: params.rng_seed,
        component_seeds,
        iterations: 0,
        improvements: 0,
        sa_accepts: 0,
        sa_rejects: 0,
        perturbations: 0,
        initial_cost: initial.cost.weighted,
        best_cost: initial.cost.weighted,
        best_iteration: 0,
        served: 0,
        feasible: false,
        elapsed_seconds: 0.0,
        timings: ComponentTimings::default(),
        final_probabilities: [0.2; 5],
        trace: Vec::new(),
    };

    loop {
        if start.elapsed().as_secs_f64() >= params.cpu_max {
            break;
        }
        if let Some(budget) = params.max_iterations {
            if stats.iterations >= budget {
                break;
            }
        }
        stats.iterations += 1;

        let phase = Instant::now();
        let searched = learning_local_search(
            inst,
            params,
            current.clone(),
            best.cost.weighted,
            &mut lls_rng,
        );
        timings.local_search_s += phase.elapsed().as_secs_f64();
        stats.final_probabilities = searched.scores.probabilities();
        let improved = searched.solution;

        let phase = Instant::now();
        let candidate = match elite.pick(&mut pr_rng) {
            Some(guide) => path_relink(inst, params, &improved, guide),
            None => improved,
        };
        timings.relink_s += phase.elapsed().as_secs_f64();

        if candidate.cost.weighted < current.cost.weighted - EPS {
            stats.improvements += 1;
            current = candidate;
        } else {
            no_improve += 1;
            if sa_accept(
                current.cost.weighted,
                candidate.cost.weighted,
                temperature,
                &mut sa_rng,
            ) == SaDecision::AcceptNew
            {
                stats.sa_accepts += 1;
                current = candidate;
            } else {
                stats.sa_rejects += 1;
            }
        }
        if better_than(inst, &current, &best) {
            best = current.clone();
            stats.best_iteration = stats.iterations;
        }

        if current.meets_service_level(inst) {
            elite.update(inst, &current);
        }

        let fire_perturbation = if params.strict.literal_perturb_parity {
            no_improve % 2 == 1
        } else {
            no_improve > 0 && no_improve.is_multiple_of(2)
        };
        if fire_perturbation {
            let phase = Instant::now();
            current = perturb(inst, params, &current, &mut lns_rng);
            if !current.meets_service_level(inst) {
                // One extra repair pass before the next iteration.
                current = repair(inst, params, &current, InsertionKind::Best, &mut lns_rng);
            }
            timings.perturb_s += phase.elapsed().as_secs_f64();
            stats.perturbations += 1;
            if better_than(inst, &current, &best) {
                best = current.clone();
                stats.best_iteration = stats.iterations;
            }
        }

        temperature *= params.alpha_t;
        if temperature <= t_min {
            temperature = t_max;
        }

        if params.record_trace {
            stats.trace.push(IterationTrace {
                iteration: stats.iterations,
                current_cost: current.cost.weighted,
                best_cost: best.cost.weighted,
                best_served: best.served_count(inst),
                best_feasible: best.meets_service_level(inst),
                temperature,
                probabilities: stats.final_probabilities,
            });
        }
    }

    debug_assert!(check_feasibility(inst, &best).hard_feasible());
    stats.best_cost = best.cost.weighted;
    stats.served = best.served_count(inst);
    stats.feasible = check_feasibility(inst, &best).is_feasible();
    stats.elapsed_seconds = start.elapsed().as_secs_f64();
    stats.timings = timings;
    Ok((best, stats))
}
