//! The five local-search move operators and the score-driven operator
//! selection. Operators run first-improvement over a randomized candidate
//! order and never change which requests are served.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Instance, SolverParams};
use crate::schedule::{
    check_feasibility, route_cost, schedule_route, try_insert, Route, Solution, EPS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    Relocate,
    Exchange,
    ExchangeNatural,
    R4Opt,
    Shift,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] = [
        MoveKind::Relocate,
        MoveKind::Exchange,
        MoveKind::ExchangeNatural,
        MoveKind::R4Opt,
        MoveKind::Shift,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&k| k == self).unwrap()
    }
}

impl std::fmt::Display for MoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            MoveKind::Relocate => "relocate",
            MoveKind::Exchange => "exchange",
            MoveKind::ExchangeNatural => "exchange_natural",
            MoveKind::R4Opt => "r4opt",
            MoveKind::Shift => "shift",
        };
        f.write_str(name)
    }
}

/// How an operator application turned out, for scoring purposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveOutcome {
    NewBest,
    Improving,
    Worse,
}

/// Per-operator scores and the selection probabilities they induce.
/// Scores stay strictly positive: rewards add, the penalty multiplies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorScores {
    pub scores: [f64; 5],
}

impl Default for OperatorScores {
    fn default() -> Self {
        Self::new()
    }
}

impl OperatorScores {
    /// Every move starts with the same score of 1.
    pub fn new() -> OperatorScores {
        OperatorScores { scores: [1.0; 5] }
    }

    /// Selection probabilities: each score over the score total.
    pub fn probabilities(&self) -> [f64; 5] {
        let total: f64 = self.scores.iter().sum();
        let mut p = self.scores;
        for x in &mut p {
            *x /= total;
        }
        p
    }

    /// Applies the reward/penalty rule for one outcome.
    pub fn update(&mut self, kind: MoveKind, outcome: MoveOutcome, params: &SolverParams) {
        let s = &mut self.scores[kind.index()];
        match outcome {
            MoveOutcome::NewBest => *s += params.alpha * params.beta1,
            MoveOutcome::Improving => *s += params.alpha * params.beta2,
            MoveOutcome::Worse => *s *= params.gamma,
        }
    }
}

/// Weighted cost of one route, None when it cannot be scheduled.
fn route_weighted(inst: &Instance, params: &SolverParams, route: &Route) -> Option<f64> {
    route_cost(inst, route)
        .ok()
        .map(|(t, l)| params.w1 * t + params.w2 * l)
}

/// Commits replacement routes into a copy of the solution.
fn with_routes(
    inst: &Instance,
    params: &SolverParams,
    sol: &Solution,
    replacements: Vec<(usize, Route)>,
) -> Solution {
    let mut next = sol.clone();
    for (idx, route) in replacements {
        next.routes[idx] = route;
    }
    next.reevaluate(inst, params).expect("evaluated routes schedule");
    debug_assert!(check_feasibility(inst, &next).hard_feasible());
    next
}

/// Maximal stop ranges over which the vehicle is never empty: each block
/// starts right after a zero-load stop and ends at the next one. Returned
/// as inclusive (start, end) stop-index pairs, interior stops only.
fn natural_sequences(schedule_loads: &[i32], len: usize) -> Vec<(usize, usize)> {
    let zeros: Vec<usize> = (0..len).filter(|&i| schedule_loads[i] == 0).collect();
    zeros
        .windows(2)
        .filter(|z| z[1] <= len - 2)
        .map(|z| (z[0] + 1, z[1]))
        .collect()
}

enum Candidate {
    /// Move a request to another route.
    Relocate { request: usize, from: usize, to: usize },
    /// Swap two requests between their routes.
    Exchange { r1: usize, route1: usize, r2: usize, route2: usize },
    /// Swap a natural sequence of one route with one of another.
    NaturalSwap { route1: usize, span1: (usize, usize), route2: usize, span2: (usize, usize) },
    /// Reorder the three vertices inside four consecutive arcs.
    FourArc { route: usize, start: usize, order: [usize; 3] },
    /// Swap two stops of a single route.
    StopSwap { route: usize, i: usize, j: usize },
}

fn relocate_candidates(inst: &Instance, sol: &Solution) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (from, route) in sol.routes.iter().enumerate() {
        for request in route.request_ids(inst) {
            for to in 0..sol.routes.len() {
                if to != from {
                    out.push(Candidate::Relocate { request, from, to });
                }
            }
        }
    }
    out
}

fn exchange_candidates(inst: &Instance, sol: &Solution) -> Vec<Candidate> {
    let mut out = Vec::new();
    for route1 in 0..sol.routes.len() {
        for route2 in route1 + 1..sol.routes.len() {
            for r1 in sol.routes[route1].request_ids(inst) {
                for r2 in sol.routes[route2].request_ids(inst) {
                    out.push(Candidate::Exchange { r1, route1, r2, route2 });
                }
            }
        }
    }
    out
}

fn natural_swap_candidates(inst: &Instance, sol: &Solution) -> Vec<Candidate> {
    let spans: Vec<Vec<(usize, usize)>> = sol
        .routes
        .iter()
        .map(|route| match schedule_route(inst, route) {
            Ok(s) => natural_sequences(&s.loads, route.stops.len()),
            Err(_) => Vec::new(),
        })
        .collect();
    let mut out = Vec::new();
    for route1 in 0..sol.routes.len() {
        for route2 in route1 + 1..sol.routes.len() {
            for &span1 in &spans[route1] {
                for &span2 in &spans[route2] {
                    out.push(Candidate::NaturalSwap { route1, span1, route2, span2 });
                }
            }
        }
    }
    out
}

const INNER_ORDERS: [[usize; 3]; 5] =
    [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn four_arc_candidates(sol: &Solution) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (idx, route) in sol.routes.iter().enumerate() {
        let len = route.stops.len();
        // Four consecutive arcs only make sense with at least five of them.
        if len < 6 {
            continue;
        }
        for start in 0..=len - 5 {
            for order in INNER_ORDERS {
                out.push(Candidate::FourArc { route: idx, start, order });
            }
        }
    }
    out
}

fn stop_swap_candidates(sol: &Solution, rng: &mut ChaCha8Rng) -> Vec<Candidate> {
    // One randomly chosen route; all interior stop pairs of it.
    let eligible: Vec<usize> = sol
        .routes
        .iter()
        .enumerate()
        .filter(|(_, r)| r.stops.len() >= 4)
        .map(|(i, _)| i)
        .collect();
    let Some(&route) = eligible.as_slice().choose(rng) else {
        return Vec::new();
    };
    let len = sol.routes[route].stops.len();
    let mut out = Vec::new();
    for i in 1..len - 1 {
        for j in i + 1..len - 1 {
            out.push(Candidate::StopSwap { route, i, j });
        }
    }
    out
}

/// Evaluates a candidate; Some(replacements, delta) when every touched
/// route schedules.
fn evaluate(
    inst: &Instance,
    params: &SolverParams,
    sol: &Solution,
    candidate: &Candidate,
) -> Option<(Vec<(usize, Route)>, f64)> {
    match *candidate {
        Candidate::Relocate { request, from, to } => {
            let old_from = route_weighted(inst, params, &sol.routes[from])?;
            let new_from = sol.routes[from].without_request(inst, request);
            let new_from_cost = route_weighted(inst, params, &new_from)?;
            let ins = try_insert(inst, params, &sol.routes[to], request)?;
            let delta = (new_from_cost - old_from) + ins.delta;
            Some((vec![(from, new_from), (to, ins.route)], delta))
        }
        Candidate::Exchange { r1, route1, r2, route2 } => {
            let old1 = route_weighted(inst, params, &sol.routes[route1])?;
            let old2 = route_weighted(inst, params, &sol.routes[route2])?;
            let bare1 = sol.routes[route1].without_request(inst, r1);
            let bare2 = sol.routes[route2].without_request(inst, r2);
            let ins2 = try_insert(inst, params, &bare1, r2)?;
            let ins1 = try_insert(inst, params, &bare2, r1)?;
            let new1 = route_weighted(inst, params, &ins2.route)?;
            let new2 = route_weighted(inst, params, &ins1.route)?;
            let delta = (new1 - old1) + (new2 - old2);
            Some((vec![(route1, ins2.route), (route2, ins1.route)], delta))
        }
        Candidate::NaturalSwap { route1, span1, route2, span2 } => {
            let a = &sol.routes[route1];
            let b = &sol.routes[route2];
            let old = route_weighted(inst, params, a)? + route_weighted(inst, params, b)?;
            let mut stops_a = a.stops[..span1.0].to_vec();
            stops_a.extend_from_slice(&b.stops[span2.0..=span2.1]);
            stops_a.extend_from_slice(&a.stops[span1.1 + 1..]);
            let mut stops_b = b.stops[..span2.0].to_vec();
            stops_b.extend_from_slice(&a.stops[span1.0..=span1.1]);
            stops_b.extend_from_slice(&b.stops[span2.1 + 1..]);
            let new_a = Route { vehicle: a.vehicle, stops: stops_a };
            let new_b = Route { vehicle: b.vehicle, stops: stops_b };
            let new =
                route_weighted(inst, params, &new_a)? + route_weighted(inst, params, &new_b)?;
            Some((vec![(route1, new_a), (route2, new_b)], new - old))
        }
        Candidate::FourArc { route, start, order } => {
            let r = &sol.routes[route];
            let old = route_weighted(inst, params, r)?;
            let mut stops = r.stops.clone();
            let inner = [r.stops[start + 1], r.stops[start + 2], r.stops[start + 3]];
            for (offset, &pick) in order.iter().enumerate() {
                stops[start + 1 + offset] = inner[pick];
            }
            let new_route = Route { vehicle: r.vehicle, stops };
            let new = route_weighted(inst, params, &new_route)?;
            Some((vec![(route, new_route)], new - old))
        }
        Candidate::StopSwap { route, i, j } => {
            let r = &sol.routes[route];
            let old = route_weighted(inst, params, r)?;
            let mut stops = r.stops.clone();
            stops.swap(i, j);
            let new_route = Route { vehicle: r.vehicle, stops };
            let new = route_weighted(inst, params, &new_route)?;
            Some((vec![(route, new_route)], new - old))
        }
    }
}

/// Applies one operator with first-improvement semantics: candidates are
/// visited in random order and the first strictly improving feasible
/// neighbor wins. Evaluation stops after size_n * n candidates. The served
/// request set never changes.
pub fn apply_move(
    kind: MoveKind,
    inst: &Instance,
    params: &SolverParams,
    sol: &Solution,
    rng: &mut ChaCha8Rng,
) -> Option<Solution> {
    let mut candidates = match kind {
        MoveKind::Relocate => relocate_candidates(inst, sol),
        MoveKind::Exchange => exchange_candidates(inst, sol),
        MoveKind::ExchangeNatural => natural_swap_candidates(inst, sol),
        MoveKind::R4Opt => four_arc_candidates(sol),
        MoveKind::Shift => stop_swap_candidates(sol, rng),
    };
    candidates.shuffle(rng);
    let budget = params.size_n * inst.num_requests().max(1);
    for candidate in candidates.into_iter().take(budget) {
        if let Some((replacements, delta)) = evaluate(inst, params, sol, &candidate) {
            if delta < -EPS {
                let next = with_routes(inst, params, sol, replacements);
                if params.log_moves {
                    eprintln!(
                        "move {kind}: delta {delta:.6}, cost {:.6}",
                        next.cost.weighted
                    );
                }
                return Some(next);
            }
        }
    }
    None
}

/// Repeatedly applies the cheapest-first stop swap until no swap improves;
/// deterministic scan order.
pub fn optimize_route_by_shift(inst: &Instance, params: &SolverParams, route: &Route) -> Route {
    let mut current = route.clone();
    'outer: loop {
        let Some(old) = route_weighted(inst, params, &current) else {
            return current;
        };
        let len = current.stops.len();
        for i in 1..len.saturating_sub(1) {
            for j in i + 1..len - 1 {
                let mut stops = current.stops.clone();
                stops.swap(i, j);
                let cand = Route { vehicle: current.vehicle, stops };
                if let Some(new) = route_weighted(inst, params, &cand) {
                    if new < old - EPS {
                        current = cand;
                        continue 'outer;
                    }
                }
            }
        }
        return current;
    }
}

/// Result of one learning local search descent.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub solution: Solution,
    pub scores: OperatorScores,
}

/// Score-driven descent: one probability threshold per outer iteration
/// builds the candidate operator pool, operators are drawn at random from
/// it, rewards and penalties reshape the probabilities, and the search
/// stops after `iter_max` consecutive failures. The returned solution never
/// costs more than the input.
pub fn learning_local_search(
    inst: &Instance,
    params: &SolverParams,
    sol: Solution,
    best_cost: f64,
    rng: &mut ChaCha8Rng,
) -> SearchResult {
    let mut scores = OperatorScores::new();
    let mut current = sol;
    let mut best_cost = best_cost;
    let mut no_improve = 0usize;

    while no_improve < params.iter_max {
        let probs = scores.probabilities();
        let threshold: f64 = rng.random();
        let mut pool: Vec<MoveKind> = MoveKind::ALL
            .into_iter()
            .filter(|k| probs[k.index()] > threshold)
            .collect();
        if pool.is_empty() {
            // Fall back to the most promising operator so the inner loop
            // always has something to try.
            let top = MoveKind::ALL
                .into_iter()
                .max_by(|a, b| probs[a.index()].partial_cmp(&probs[b.index()]).unwrap())
                .unwrap();
            pool.push(top);
        }
        let initial_pool = pool.clone();

        while !pool.is_empty() {
            let slot = rng.random_range(0..pool.len());
            let kind = pool[slot];
            match apply_move(kind, inst, params, &current, rng) {
                Some(next) => {
                    if next.cost.weighted < best_cost - EPS {
                        scores.update(kind, MoveOutcome::NewBest, params);
                        best_cost = next.cost.weighted;
                    } else {
                        scores.update(kind, MoveOutcome::Improving, params);
                    }
                    current = next;
                    pool = initial_pool.clone();
                    no_improve = 0;
                }
                None => {
                    scores.update(kind, MoveOutcome::Worse, params);
                    pool.remove(slot);
                    no_improve += 1;
                }
            }
        }
    }

    SearchResult { solution: current, scores }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    use crate::construct::build_initial;
    use crate::model::SolverParams;
    use crate::synthetic;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn score_updates_match_the_constants() {
        let params = SolverParams::default();
        let mut scores = OperatorScores::new();
        scores.update(MoveKind::Relocate, MoveOutcome::NewBest, &params);
        assert!((scores.scores[0] - 1.5).abs() < 1e-12);
        let mut scores = OperatorScores::new();
        scores.update(MoveKind::Exchange, MoveOutcome::Improving, &params);
        assert!((scores.scores[1] - 1.1).abs() < 1e-12);
        let mut scores = OperatorScores::new();
        scores.update(MoveKind::Shift, MoveOutcome::Worse, &params);
        assert!((scores.scores[4] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn probabilities_normalize() {
        let scores = OperatorScores::new();
        for p in scores.probabilities() {
            assert!((p - 0.2).abs() < 1e-12);
        }
        let scores = OperatorScores { scores: [1.5, 1.0, 1.0, 1.0, 1.0] };
        let probs = scores.probabilities();
        assert!((probs[0] - 1.5 / 5.5).abs() < 1e-12);
        assert!((probs[1] - 1.0 / 5.5).abs() < 1e-12);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let scores = OperatorScores { scores: [0.9, 1.0, 1.0, 1.0, 1.0] };
        assert!((scores.probabilities()[0] - 0.9 / 4.9).abs() < 1e-12);
    }

    #[test]
    fn relocate_moves_a_request_toward_its_corridor() {
        // The request starts on vehicle 0 but lives along vehicle 1's line.
        let inst = corridor_swap_instance();
        let params = SolverParams::default();
        let r0 = Route { vehicle: 0, stops: vec![0, 2, 3, 4] };
        let r1 = Route { vehicle: 1, stops: vec![1, 5] };
        let sol = Solution::from_routes(&inst, &params, vec![r0, r1]).unwrap();
        let improved = apply_move(MoveKind::Relocate, &inst, &params, &sol, &mut rng(1))
            .expect("relocation strictly improves");
        assert!(improved.cost.weighted < sol.cost.weighted - EPS);
        assert_eq!(improved.route_serving(&inst, 0), Some(1));
    }

    /// Vehicle 0 runs along y=0, vehicle 1 along y=10; the single request
    /// hugs vehicle 1's line but is parked on vehicle 0.
    fn corridor_swap_instance() -> crate::model::Instance {
        use crate::model::{Instance, Request, Vehicle, Vertex};
        let mk = |id: usize, x: f64, y: f64, q: i32| Vertex {
            id,
            x,
            y,
            earliest: 0.0,
            latest: 500.0,
            service: 0.0,
            load_delta: q,
        };
        Instance {
            name: "corridor_swap".into(),
            vertices: vec![
                mk(0, 0.0, 0.0, 0),
                mk(1, 0.0, 10.0, 0),
                mk(2, 3.0, 10.0, 1),
                mk(3, 5.0, 10.0, -1),
                mk(6, 8.0, 0.0, 0),
                mk(7, 8.0, 10.0, 0),
            ]
            .into_iter()
            .enumerate()
            .map(|(i, mut v)| {
                v.id = i;
                v
            })
            .collect(),
            requests: vec![Request { id: 0, pickup: 2, delivery: 3, demand: 1 }],
            vehicles: vec![
                Vehicle { id: 0, origin: 0, destination: 4, capacity: 3, dest_tolerance: 5.0 },
                Vehicle { id: 1, origin: 1, destination: 5, capacity: 3, dest_tolerance: 5.0 },
            ],
            max_route_duration: 500.0,
            max_ride_time: 100.0,
            time_factor: 1.0,
            served_fraction_min: 0.8,
        }
    }

    #[test]
    fn no_move_improves_a_lone_direct_request() {
        let mut inst = synthetic::n_request_line(1);
        inst.max_ride_time = 10.0;
        let params = SolverParams::default();
        let route = Route { vehicle: 0, stops: vec![0, 1, 2, 3] };
        let sol = Solution::from_routes(&inst, &params, vec![route]).unwrap();
        let mut r = rng(3);
        for kind in MoveKind::ALL {
            assert!(apply_move(kind, &inst, &params, &sol, &mut r).is_none(), "{kind}");
        }
    }

    #[test]
    fn four_arc_needs_five_arcs() {
        let inst = synthetic::two_request_line();
        let params = SolverParams::default();
        // Four arcs only: origin, one request pair, second pair rejected.
        let route = Route { vehicle: 0, stops: vec![0, 1, 3, 2, 4, 5] };
        let short = Route { vehicle: 0, stops: vec![0, 1, 3, 5] };
        let sol = Solution::from_routes(&inst, &params, vec![short]).unwrap();
        assert!(apply_move(MoveKind::R4Opt, &inst, &params, &sol, &mut rng(4)).is_none());
        // Five arcs allow two window positions, five reorderings each.
        let full = Solution::from_routes(&inst, &params, vec![route]).unwrap();
        assert_eq!(four_arc_candidates(&full).len(), 10);
    }

    #[test]
    fn shift_unscrambles_a_line_route() {
        let inst = synthetic::n_request_line(3);
        let params = SolverParams::default();
        // First two pickups visited out of order; one swap repairs it.
        let route = Route { vehicle: 0, stops: vec![0, 2, 1, 4, 5, 3, 6, 7] };
        let base = Solution::from_routes(&inst, &params, vec![route.clone()]).unwrap();
        let optimized = optimize_route_by_shift(&inst, &params, &route);
        let after = Solution::from_routes(&inst, &params, vec![optimized]).unwrap();
        assert!(after.cost.weighted < base.cost.weighted - EPS);
    }

    #[test]
    fn natural_sequences_split_on_empty_vehicle() {
        // loads for [s, p0, d0, p1, d1, t]
        let loads = [0, 1, 0, 1, 0, 0];
        assert_eq!(natural_sequences(&loads, 6), vec![(1, 2), (3, 4)]);
        // Interleaved pair forms a single block.
        let loads = [0, 1, 2, 1, 0, 0];
        assert_eq!(natural_sequences(&loads, 6), vec![(1, 4)]);
    }

    #[test]
    fn search_never_worsens_and_preserves_served_set() {
        for seed in 0..10 {
            let inst = synthetic::random_instance(6, 2, seed);
            let params = SolverParams::default();
            let initial = build_initial(&inst, &params);
            let before_cost = initial.cost.weighted;
            let before_assignment: Vec<bool> =
                initial.assignment(&inst).iter().map(Option::is_some).collect();
            let result =
                learning_local_search(&inst, &params, initial, f64::INFINITY, &mut rng(seed));
            assert!(result.solution.cost.weighted <= before_cost + EPS);
            let after: Vec<bool> =
                result.solution.assignment(&inst).iter().map(Option::is_some).collect();
            assert_eq!(before_assignment, after, "served set changed (seed {seed})");
        }
    }

    #[test]
    fn zero_patience_returns_the_input() {
        let inst = synthetic::two_request_line();
        let params = SolverParams { iter_max: 0, ..SolverParams::default() };
        let initial = build_initial(&inst, &params);
        let result =
            learning_local_search(&inst, &params, initial.clone(), f64::INFINITY, &mut rng(7));
        assert_eq!(result.solution, initial);
        assert_eq!(result.scores, OperatorScores::new());
    }

    #[test]
    fn stuck_search_penalizes_what_it_tried() {
        let mut inst = synthetic::n_request_line(1);
        inst.max_ride_time = 10.0;
        let params = SolverParams::default();
        let route = Route { vehicle: 0, stops: vec![0, 1, 2, 3] };
        let sol = Solution::from_routes(&inst, &params, vec![route]).unwrap();
        let result = learning_local_search(&inst, &params, sol.clone(), f64::INFINITY, &mut rng(5));
        assert_eq!(result.solution, sol);
        assert!(result.scores.scores.iter().all(|&s| s <= 1.0));
        assert!(result.scores.scores.iter().any(|&s| s < 1.0));
    }

    #[test]
    fn search_recovers_a_displaced_optimum() {
        use crate::exact::{brute_force_solve, Limits};
        use crate::relink::{apply_delta_move, DeltaAction, DeltaMove};

        // Take proven optima, displace one request onto the other vehicle,
        // and require the descent to find its way back to the optimal cost.
        let params = SolverParams::default();
        let mut recovered = 0;
        for seed in 0..30u64 {
            let inst = synthetic::random_instance(3, 2, 2_000 + seed);
            let Ok(exact) = brute_force_solve(&inst, &params, Limits::default()) else {
                continue;
            };
            let assignment = exact.solution.assignment(&inst);
            let Some(displaced) = (0..inst.num_requests()).find_map(|r| {
                let from = assignment[r]?;
                let to = (from + 1) % inst.num_vehicles();
                apply_delta_move(
                    &inst,
                    &params,
                    &exact.solution,
                    DeltaMove { request: r, action: DeltaAction::Reassign { vehicle: to } },
                )
            }) else {
                continue;
            };
            if displaced.cost.weighted <= exact.optimum.weighted + EPS {
                continue; // displacement happened to tie the optimum
            }
            let result = learning_local_search(
                &inst,
                &params,
                displaced,
                f64::INFINITY,
                &mut rng(seed),
            );
            if (result.solution.cost.weighted - exact.optimum.weighted).abs() < 1e-6 {
                recovered += 1;
            }
        }
        assert!(recovered >= 10, "only {recovered} displaced optima recovered");
    }

    #[test]
    fn search_trace_is_reproducible() {
        let inst = synthetic::random_instance(6, 2, 42);
        let params = SolverParams::default();
        let initial = build_initial(&inst, &params);
        let a = learning_local_search(&inst, &params, initial.clone(), f64::INFINITY, &mut rng(9));
        let b = learning_local_search(&inst, &params, initial, f64::INFINITY, &mut rng(9));
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.scores, b.scores);
    }
}
