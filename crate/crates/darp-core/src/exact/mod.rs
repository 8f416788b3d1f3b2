//! Ground truth for tiny instances: an exhaustive solver that enumerates
//! request subsets, vehicle assignments and stop orderings, plus an
//! LP-format exporter of the full mixed-integer model.

pub mod milp;

pub use milp::{export_milp, MilpOptions};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Instance, SolverParams};
use crate::schedule::{schedule_route, Cost, Route, Solution, EPS};

/// Hard caps on what the exhaustive solver will attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_requests: usize,
    pub max_vehicles: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_requests: 7, max_vehicles: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub optimum: Cost,
    pub solution: Solution,
    /// Complete stop orderings evaluated; reproducible because the
    /// enumeration order is canonical.
    pub nodes_explored: u64,
    /// True when the enumeration ran to completion.
    pub proven: bool,
}

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("instance exceeds the exhaustive limits: n={n} (max {max_n}), m={m} (max {max_m})")]
    OverLimits { n: usize, m: usize, max_n: usize, max_m: usize },
    #[error("no feasible solution: {0}")]
    Infeasible(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Best route of vehicle `k` serving exactly the requests in `mask`:
/// (travel, lateness, route), or None when no ordering is feasible.
type RouteMemo = HashMap<u32, Option<(f64, f64, Route)>>;

struct RouteSearch<'a> {
    inst: &'a Instance,
    params: &'a SolverParams,
    vehicle: usize,
    nodes: u64,
}

impl<'a> RouteSearch<'a> {
    /// Depth-first enumeration over precedence-feasible orderings. Pruning
    /// uses only facts independent of the final departure shift: earliest
    /// arrivals beyond a latest service start, and capacity.
    fn best_route(&mut self, mask: u32) -> Option<(f64, f64, Route)> {
        let v = self.inst.vehicle(self.vehicle);
        let origin = self.inst.vertex(v.origin);
        let mut stops = vec![v.origin];
        let mut best: Option<(f64, f64, Route)> = None;
        self.extend(mask, 0, origin.earliest, 0, &mut stops, &mut best);
        best
    }

    fn extend(
        &mut self,
        pickups_left: u32,
        onboard: u32,
        time: f64,
        load: i32,
        stops: &mut Vec<usize>,
        best: &mut Option<(f64, f64, Route)>,
    ) {
        let v = self.inst.vehicle(self.vehicle);
        if pickups_left == 0 && onboard == 0 {
            stops.push(v.destination);
            self.nodes += 1;
            let route = Route { vehicle: self.vehicle, stops: stops.clone() };
            if let Ok(schedule) = schedule_route(self.inst, &route) {
                let travel = crate::schedule::route_travel(self.inst, &route);
                let weighted =
                    self.params.w1 * travel + self.params.w2 * schedule.lateness;
                let incumbent = best
                    .as_ref()
                    .map(|(t, l, _)| self.params.w1 * t + self.params.w2 * l);
                if incumbent.is_none_or(|c| weighted < c - EPS) {
                    *best = Some((travel, schedule.lateness, route));
                }
            }
            stops.pop();
            return;
        }

        // Candidate next stops in ascending vertex order keeps the
        // enumeration canonical.
        let mut candidates: Vec<(usize, usize, bool)> = Vec::new();
        for r in 0..self.inst.num_requests() {
            let bit = 1u32 << r;
            if pickups_left & bit != 0 {
                candidates.push((self.inst.request(r).pickup, r, true));
            } else if onboard & bit != 0 {
                candidates.push((self.inst.request(r).delivery, r, false));
            }
        }
        candidates.sort_unstable();

        let prev = *stops.last().unwrap();
        let prev_service = self.inst.vertex(prev).service;
        for (vertex, r, is_pickup) in candidates {
            let vx = self.inst.vertex(vertex);
            let arrival = (time + prev_service + self.inst.travel_time(prev, vertex))
                .max(vx.earliest);
            if arrival > vx.latest + EPS {
                continue;
            }
            let new_load = load + vx.load_delta;
            if new_load > v.capacity {
                continue;
            }
            let bit = 1u32 << r;
            stops.push(vertex);
            if is_pickup {
                self.extend(pickups_left & !bit, onboard | bit, arrival, new_load, stops, best);
            } else {
                self.extend(pickups_left, onboard & !bit, arrival, new_load, stops, best);
            }
            stops.pop();
        }
    }
}

/// Exhaustively solves a tiny instance: every request subset meeting the
/// service-level bound, every assignment to vehicles and every
/// precedence-feasible ordering. The returned optimum is proven.
pub fn brute_force_solve(
    inst: &Instance,
    params: &SolverParams,
    limits: Limits,
) -> Result<ExactResult, ExactError> {
    params.validate().map_err(ExactError::InvalidParams)?;
    let n = inst.num_requests();
    let m = inst.num_vehicles();
    if n > limits.max_requests || m > limits.max_vehicles {
        return Err(ExactError::OverLimits {
            n,
            m,
            max_n: limits.max_requests,
            max_m: limits.max_vehicles,
        });
    }

    let mut memos: Vec<RouteMemo> = vec![RouteMemo::new(); m];
    let mut nodes = 0u64;
    let mut assignment = vec![usize::MAX; n];
    let mut incumbent: Option<(f64, Vec<Route>)> = None;

    // Option order: reject first, then vehicles in id order; combined with
    // in-order recursion this visits assignments canonically.
    enumerate_assignments(
        inst,
        params,
        &mut memos,
        &mut nodes,
        &mut assignment,
        0,
        0,
        &mut incumbent,
    );

    let Some((_, routes)) = incumbent else {
        return Err(ExactError::Infeasible(format!(
            "no assignment serves at least {} of {} requests within the hard constraints",
            inst.min_served(),
            n
        )));
    };
    let solution = Solution::from_routes(inst, params, routes)
        .expect("memoized routes schedule");
    Ok(ExactResult { optimum: solution.cost, solution, nodes_explored: nodes, proven: true })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_assignments(
    inst: &Instance,
    params: &SolverParams,
    memos: &mut [RouteMemo],
    nodes: &mut u64,
    assignment: &mut Vec<usize>,
    next: usize,
    served: usize,
    incumbent: &mut Option<(f64, Vec<Route>)>,
) {
    let n = inst.num_requests();
    let remaining = n - next;
    if served + remaining < inst.min_served() {
        return;
    }
    if next == n {
        let m = inst.num_vehicles();
        let mut masks = vec![0u32; m];
        for (r, &k) in assignment.iter().enumerate() {
            if k != usize::MAX {
                masks[k] |= 1 << r;
            }
        }
        let mut total = 0.0;
        let mut routes = Vec::with_capacity(m);
        for k in 0..m {
            let entry = match memos[k].get(&masks[k]) {
                Some(entry) => entry.clone(),
                None => {
                    let mut search =
                        RouteSearch { inst, params, vehicle: k, nodes: 0 };
                    let found = search.best_route(masks[k]);
                    *nodes += search.nodes;
                    memos[k].insert(masks[k], found.clone());
                    found
                }
            };
            match entry {
                Some((travel, lateness, route)) => {
                    total += params.w1 * travel + params.w2 * lateness;
                    routes.push(route);
                }
                None => return,
            }
        }
        if incumbent.as_ref().is_none_or(|(best, _)| total < best - EPS) {
            *incumbent = Some((total, routes));
        }
        return;
    }

    assignment[next] = usize::MAX;
    enumerate_assignments(inst, params, memos, nodes, assignment, next + 1, served, incumbent);
    for k in 0..inst.num_vehicles() {
        assignment[next] = k;
        enumerate_assignments(
            inst,
            params,
            memos,
            nodes,
            assignment,
            next + 1,
            served + 1,
            incumbent,
        );
    }
    assignment[next] = usize::MAX;
}
