//! Elite-solution archive and path relinking over request-to-route
//! assignment differences.
//!
//! Relinking walks from an initial solution toward a guiding one by
//! repeatedly applying the cheapest assignment-difference move; after every
//! applied move the two walkers swap roles, so the path is built from both
//! ends and meets in the middle. The best service-level-feasible solution
//! seen along the path is returned.

use serde::{Deserialize, Serialize};

use crate::model::{Instance, SolverParams};
use crate::schedule::{try_insert, Solution, EPS};

/// Bounded archive of the best solutions found, kept distinct by their
/// request-to-route assignment and ordered by weighted cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliteSet {
    pub solutions: Vec<Solution>,
    capacity: usize,
}

impl EliteSet {
    pub fn new(capacity: usize) -> EliteSet {
        EliteSet { solutions: Vec::new(), capacity: capacity.max(1) }
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn best(&self) -> Option<&Solution> {
        self.solutions.first()
    }

    /// Inserts a candidate if its assignment signature is new and it either
    /// fits or beats the worst member. Returns true when the set changed.
    pub fn update(&mut self, inst: &Instance, candidate: &Solution) -> bool {
        let signature = candidate.assignment(inst);
        if self.solutions.iter().any(|s| s.assignment(inst) == signature) {
            return false;
        }
        if self.solutions.len() < self.capacity {
            self.insert_sorted(candidate.clone());
            return true;
        }
        let worst = self.solutions.last().expect("capacity is at least 1");
        if candidate.cost.weighted < worst.cost.weighted - EPS {
            self.solutions.pop();
            self.insert_sorted(candidate.clone());
            return true;
        }
        false
    }

    fn insert_sorted(&mut self, sol: Solution) {
        let at = self
            .solutions
            .partition_point(|s| s.cost.weighted <= sol.cost.weighted);
        self.solutions.insert(at, sol);
    }

    /// Uniformly random member.
    pub fn pick(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Option<&Solution> {
        use rand::Rng;
        if self.solutions.is_empty() {
            None
        } else {
            Some(&self.solutions[rng.random_range(0..self.solutions.len())])
        }
    }
}

/// What to do with one request to move a solution toward the guide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeltaAction {
    /// Rejected here, served by the guide: insert into that vehicle's route.
    Insert { vehicle: usize },
    /// Served here, rejected by the guide: drop into the rejection pool.
    Remove,
    /// Served by both on different vehicles: move to the guide's vehicle.
    Reassign { vehicle: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaMove {
    pub request: usize,
    pub action: DeltaAction,
}

/// One move per request whose service status or vehicle differs between
/// the two solutions.
pub fn compute_delta(inst: &Instance, from: &Solution, guide: &Solution) -> Vec<DeltaMove> {
    let a = from.assignment(inst);
    let b = guide.assignment(inst);
    let mut out = Vec::new();
    for r in 0..inst.num_requests() {
        let action = match (a[r], b[r]) {
            (None, Some(k)) => DeltaAction::Insert { vehicle: k },
            (Some(_), None) => DeltaAction::Remove,
            (Some(i), Some(k)) if i != k => DeltaAction::Reassign { vehicle: k },
            _ => continue,
        };
        out.push(DeltaMove { request: r, action });
    }
    out
}

/// Applies one assignment move, re-placing the request at its best feasible
/// position. None when no feasible placement exists (the solution is left
/// untouched in that case).
pub fn apply_delta_move(
    inst: &Instance,
    params: &SolverParams,
    sol: &Solution,
    mv: DeltaMove,
) -> Option<Solution> {
    let mut next = sol.clone();
    match mv.action {
        DeltaAction::Remove => {
            let idx = sol.route_serving(inst, mv.request)?;
            next.routes[idx] = next.routes[idx].without_request(inst, mv.request);
        }
        DeltaAction::Insert { vehicle } => {
            let target = next.routes.iter().position(|r| r.vehicle == vehicle)?;
            let ins = try_insert(inst, params, &next.routes[target], mv.request)?;
            next.routes[target] = ins.route;
        }
        DeltaAction::Reassign { vehicle } => {
            let from = sol.route_serving(inst, mv.request)?;
            let target = next.routes.iter().position(|r| r.vehicle == vehicle)?;
            let stripped = next.routes[from].without_request(inst, mv.request);
            let ins = try_insert(inst, params, &next.routes[target], mv.request)?;
            next.routes[from] = stripped;
            next.routes[target] = ins.route;
        }
    }
    next.reevaluate(inst, params).ok()?;
    Some(next)
}

fn action_toward(
    current: Option<usize>,
    target: Option<usize>,
) -> Option<DeltaAction> {
    match (current, target) {
        (None, Some(k)) => Some(DeltaAction::Insert { vehicle: k }),
        (Some(_), None) => Some(DeltaAction::Remove),
        (Some(i), Some(k)) if i != k => Some(DeltaAction::Reassign { vehicle: k }),
        _ => None,
    }
}

/// Back-and-forward path relinking between two feasible solutions. The
/// result never costs more than the cheaper endpoint; intermediates must
/// respect the hard route constraints, and only those that also meet the
/// service level can become the result.
pub fn path_relink(
    inst: &Instance,
    params: &SolverParams,
    initial: &Solution,
    guide: &Solution,
) -> Solution {
    let mut best = if initial.cost.weighted <= guide.cost.weighted {
        initial.clone()
    } else {
        guide.clone()
    };

    let mut pending: Vec<usize> =
        compute_delta(inst, initial, guide).iter().map(|m| m.request).collect();
    let mut walker = initial.clone();
    let mut target = guide.clone();

    while pending.len() > 1 {
        let walker_assign = walker.assignment(inst);
        let target_assign = target.assignment(inst);

        // Ids whose assignments already agree are resolved.
        pending.retain(|&r| walker_assign[r] != target_assign[r]);
        if pending.len() <= 1 {
            break;
        }

        // Cheapest applicable move; infeasible moves rank last and the
        // best of those is simply dropped from the difference set.
        let mut best_step: Option<(f64, usize, Solution)> = None;
        let mut fallback: Option<usize> = None;
        for &r in &pending {
            let action = action_toward(walker_assign[r], target_assign[r])
                .expect("pending ids differ by construction");
            match apply_delta_move(inst, params, &walker, DeltaMove { request: r, action }) {
                Some(candidate) => {
                    let cost = candidate.cost.weighted;
                    if best_step.as_ref().is_none_or(|(c, _, _)| cost < c - EPS) {
                        best_step = Some((cost, r, candidate));
                    }
                }
                None => fallback = fallback.or(Some(r)),
            }
        }

        match best_step {
            Some((_, r, candidate)) => {
                pending.retain(|&x| x != r);
                walker = candidate;
                if walker.cost.weighted < best.cost.weighted - EPS
                    && walker.meets_service_level(inst)
                {
                    best = walker.clone();
                }
                std::mem::swap(&mut walker, &mut target);
            }
            None => {
                let r = fallback.expect("pending is nonempty");
                pending.retain(|&x| x != r);
            }
        }
    }

    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::exact::{brute_force_solve, Limits};
    use crate::schedule::{check_feasibility, Route};
    use crate::synthetic;

    fn params() -> SolverParams {
        SolverParams::default()
    }

    #[test]
    fn identical_solutions_have_empty_delta() {
        let inst = synthetic::two_request_line();
        let sol = Solution::from_routes(
            &inst,
            &params(),
            vec![Route { vehicle: 0, stops: vec![0, 1, 3, 2, 4, 5] }],
        )
        .unwrap();
        assert!(compute_delta(&inst, &sol, &sol).is_empty());
        let relinked = path_relink(&inst, &params(), &sol, &sol);
        assert_eq!(relinked, sol);
    }

    #[test]
    fn reassignment_is_detected() {
        let inst = synthetic::random_instance(2, 2, 3);
        let p = params();
        let full = |k0: usize, k1: usize| {
            let mut routes =
                vec![Route::empty(&inst, 0), Route::empty(&inst, 1)];
            let ins = try_insert(&inst, &p, &routes[k0], 0).unwrap();
            routes[k0] = ins.route;
            let ins = try_insert(&inst, &p, &routes[k1], 1).unwrap();
            routes[k1] = ins.route;
            Solution::from_routes(&inst, &p, routes).unwrap()
        };
        let a = full(0, 1);
        let b = full(1, 1);
        let delta = compute_delta(&inst, &a, &b);
        assert_eq!(
            delta,
            vec![DeltaMove { request: 0, action: DeltaAction::Reassign { vehicle: 1 } }]
        );
    }

    #[test]
    fn opposite_rejections_produce_insert_and_remove() {
        let inst = synthetic::random_instance(2, 1, 8);
        let p = params();
        let serve_only = |r: usize| {
            let route = Route::empty(&inst, 0);
            let ins = try_insert(&inst, &p, &route, r).unwrap();
            Solution::from_routes(&inst, &p, vec![ins.route]).unwrap()
        };
        let a = serve_only(0);
        let b = serve_only(1);
        let delta = compute_delta(&inst, &a, &b);
        assert_eq!(
            delta,
            vec![
                DeltaMove { request: 0, action: DeltaAction::Remove },
                DeltaMove { request: 1, action: DeltaAction::Insert { vehicle: 0 } },
            ]
        );
    }

    #[test]
    fn remove_shrinks_to_the_empty_route() {
        let inst = synthetic::n_request_line(1);
        let p = params();
        let sol = Solution::from_routes(
            &inst,
            &p,
            vec![Route { vehicle: 0, stops: vec![0, 1, 2, 3] }],
        )
        .unwrap();
        let next = apply_delta_move(
            &inst,
            &p,
            &sol,
            DeltaMove { request: 0, action: DeltaAction::Remove },
        )
        .unwrap();
        assert_eq!(next.routes[0].stops, vec![0, 3]);
        assert!(next.rejected.contains(&0));
    }

    #[test]
    fn insert_into_saturated_route_fails() {
        let mut inst = synthetic::n_request_line(2);
        // Pickup 2's window closes immediately; no feasible slot exists.
        inst.vertices[2].latest = 0.0;
        inst.vertices[0].earliest = 5.0;
        let p = params();
        let sol =
            Solution::from_routes(&inst, &p, vec![Route { vehicle: 0, stops: vec![0, 1, 3, 5] }])
                .unwrap();
        let blocked = apply_delta_move(
            &inst,
            &p,
            &sol,
            DeltaMove { request: 1, action: DeltaAction::Insert { vehicle: 0 } },
        );
        assert!(blocked.is_none());
    }

    #[test]
    fn relink_never_returns_worse_than_the_endpoints() {
        let p = params();
        for seed in 0..20u64 {
            let inst = synthetic::random_instance(2, 2, 300 + seed);
            let both_on = |k: usize| {
                let mut route = Route::empty(&inst, k);
                for r in 0..2 {
                    match try_insert(&inst, &p, &route, r) {
                        Some(ins) => route = ins.route,
                        None => return None,
                    }
                }
                let mut routes = vec![Route::empty(&inst, 0), Route::empty(&inst, 1)];
                routes[k] = route;
                Solution::from_routes(&inst, &p, routes).ok()
            };
            let (Some(a), Some(b)) = (both_on(0), both_on(1)) else {
                continue;
            };
            let relinked = path_relink(&inst, &p, &a, &b);
            assert!(
                relinked.cost.weighted <= a.cost.weighted.min(b.cost.weighted) + EPS,
                "seed {seed}"
            );
            assert!(check_feasibility(&inst, &relinked).is_feasible(), "seed {seed}");
        }
    }

    /// Two corridors, one request each. The endpoints pile both requests
    /// onto one vehicle; the proven optimum assigns each to its own
    /// corridor and lies strictly between the endpoints, so relinking must
    /// find it as an intermediate.
    #[test]
    fn relink_finds_the_optimal_crossover_between_two_endpoints() {
        use crate::model::{Instance, Request, Vehicle, Vertex};
        let mk = |id: usize, x: f64, y: f64, q: i32| Vertex {
            id, x, y, earliest: 0.0, latest: 400.0, service: 0.0, load_delta: q,
        };
        let inst = Instance {
            name: "crossover".into(),
            vertices: vec![
                mk(0, 0.0, 0.0, 0),
                mk(1, 0.0, 12.0, 0),
                mk(2, 2.0, 0.0, 1),
                mk(3, 2.0, 12.0, 1),
                mk(4, 5.0, 0.0, -1),
                mk(5, 5.0, 12.0, -1),
                mk(6, 8.0, 0.0, 0),
                mk(7, 8.0, 12.0, 0),
            ],
            requests: vec![
                Request { id: 0, pickup: 2, delivery: 4, demand: 1 },
                Request { id: 1, pickup: 3, delivery: 5, demand: 1 },
            ],
            vehicles: vec![
                Vehicle { id: 0, origin: 0, destination: 6, capacity: 3, dest_tolerance: 5.0 },
                Vehicle { id: 1, origin: 1, destination: 7, capacity: 3, dest_tolerance: 5.0 },
            ],
            max_route_duration: 400.0,
            max_ride_time: 100.0,
            time_factor: 1.0,
            served_fraction_min: 0.8,
        };
        let p = params();
        let both_on = |k: usize| {
            let mut route = Route::empty(&inst, k);
            for r in 0..2 {
                route = try_insert(&inst, &p, &route, r).unwrap().route;
            }
            let mut routes = vec![Route::empty(&inst, 0), Route::empty(&inst, 1)];
            routes[k] = route;
            Solution::from_routes(&inst, &p, routes).unwrap()
        };
        let a = both_on(0);
        let b = both_on(1);
        let exact = brute_force_solve(&inst, &p, Limits::default()).unwrap();
        // The optimum splits the requests: neither endpoint matches it.
        assert_eq!(exact.solution.assignment(&inst), vec![Some(0), Some(1)]);
        assert!(exact.optimum.weighted < a.cost.weighted.min(b.cost.weighted) - EPS);

        let relinked = path_relink(&inst, &p, &a, &b);
        assert!(
            (relinked.cost.weighted - exact.optimum.weighted).abs() < 1e-9,
            "relinked {} vs optimum {}",
            relinked.cost.weighted,
            exact.optimum.weighted
        );
    }

    #[test]
    fn elite_set_keeps_best_distinct_solutions() {
        // Request 1's pickup sits off the line so detours cost extra.
        let mut inst = synthetic::two_request_line();
        inst.vertices[2].y = 2.0;
        let p = params();
        let build = |stops: Vec<usize>| {
            Solution::from_routes(&inst, &p, vec![Route { vehicle: 0, stops }]).unwrap()
        };
        let both = build(vec![0, 1, 3, 2, 4, 5]);
        let only_first = build(vec![0, 1, 3, 5]);
        let only_second = build(vec![0, 2, 4, 5]);
        assert!(only_first.cost.weighted < only_second.cost.weighted);
        assert!(only_second.cost.weighted < both.cost.weighted);

        let mut elite = EliteSet::new(1);
        assert!(elite.update(&inst, &both));
        assert_eq!(elite.solutions.len(), 1);
        // Same signature again: unchanged.
        assert!(!elite.update(&inst, &both.clone()));
        // Cheaper distinct solution replaces the incumbent at capacity 1.
        assert!(elite.update(&inst, &only_first));
        assert_eq!(elite.solutions.len(), 1);
        assert_eq!(elite.best().unwrap().cost.weighted, only_first.cost.weighted);
        // Costlier distinct solution is refused at capacity.
        assert!(!elite.update(&inst, &only_second));
    }

    #[test]
    fn elite_set_stays_sorted_under_random_updates() {
        let p = params();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for seed in 0..10u64 {
            let inst = synthetic::random_instance(4, 2, 400 + seed);
            let mut elite = EliteSet::new(3);
            for s in 0..15u64 {
                let sol = random_solution(&inst, &p, seed * 100 + s);
                elite.update(&inst, &sol);
                let costs: Vec<f64> =
                    elite.solutions.iter().map(|x| x.cost.weighted).collect();
                assert!(costs.windows(2).all(|w| w[0] <= w[1] + EPS), "unsorted: {costs:?}");
                assert!(elite.solutions.len() <= 3);
                let sigs: Vec<_> =
                    elite.solutions.iter().map(|x| x.assignment(&inst)).collect();
                for i in 0..sigs.len() {
                    for j in i + 1..sigs.len() {
                        assert_ne!(sigs[i], sigs[j]);
                    }
                }
            }
            let _ = elite.pick(&mut rng);
        }
    }

    /// Greedy randomized solution used to stress the elite set.
    fn random_solution(inst: &Instance, p: &SolverParams, seed: u64) -> Solution {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..inst.num_requests()).collect();
        order.shuffle(&mut rng);
        let mut routes: Vec<Route> =
            (0..inst.num_vehicles()).map(|k| Route::empty(inst, k)).collect();
        for r in order {
            use rand::Rng;
            let k = rng.random_range(0..routes.len());
            if let Some(ins) = try_insert(inst, p, &routes[k], r) {
                routes[k] = ins.route;
            }
        }
        Solution::from_routes(inst, p, routes).unwrap()
    }
}
