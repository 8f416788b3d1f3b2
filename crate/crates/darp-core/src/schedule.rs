//! Route representation, service-start scheduling, feasibility checking and
//! objective evaluation. This module is the single source of truth for cost:
//! every other component evaluates candidate routes through it.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Instance, SolverParams};

/// Absolute tolerance for cost comparisons and constraint checks.
pub const EPS: f64 = 1e-9;

/// An ordered stop sequence for one vehicle, origin first, destination last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub vehicle: usize,
    pub stops: Vec<usize>,
}

impl Route {
    /// The empty route: straight from the vehicle's origin to its destination.
    pub fn empty(inst: &Instance, vehicle: usize) -> Route {
        let v = inst.vehicle(vehicle);
        Route { vehicle, stops: vec![v.origin, v.destination] }
    }

    /// Number of requests fully contained in this route.
    pub fn num_requests(&self) -> usize {
        (self.stops.len() - 2) / 2
    }

    /// Route without the given request's pickup and delivery stops.
    pub fn without_request(&self, inst: &Instance, request: usize) -> Route {
        let r = inst.request(request);
        Route {
            vehicle: self.vehicle,
            stops: self
                .stops
                .iter()
                .copied()
                .filter(|&s| s != r.pickup && s != r.delivery)
                .collect(),
        }
    }

    /// Ids of the requests whose pickup appears in this route.
    pub fn request_ids(&self, inst: &Instance) -> Vec<usize> {
        let members: BTreeSet<usize> = self.stops.iter().copied().collect();
        inst.requests
            .iter()
            .filter(|r| members.contains(&r.pickup))
            .map(|r| r.id)
            .collect()
    }
}

/// Computed timing and loading of a route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// Service start time per stop (T_i).
    pub start_times: Vec<f64>,
    /// Passengers on board after servicing each stop (Q_i).
    pub loads: Vec<i32>,
    /// Total route duration in minutes.
    pub duration: f64,
    /// Lateness at the driver destination: max(0, arrival - latest).
    pub lateness: f64,
}

/// Why a route cannot be scheduled, in reporting priority order.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Infeasibility {
    #[error("structural defect: {0}")]
    Structure(String),
    #[error("time window missed at vertex {stop}")]
    TimeWindow { stop: usize },
    #[error("ride time of request {request} exceeds the maximum")]
    RideTime { request: usize },
    #[error("capacity exceeded after vertex {stop}")]
    Capacity { stop: usize },
    #[error("route duration {duration:.3} exceeds the maximum")]
    Duration { duration: f64 },
    #[error("destination lateness {lateness:.3} exceeds the tolerance")]
    DestinationLateness { lateness: f64 },
}

impl Infeasibility {
    fn priority(&self) -> u8 {
        match self {
            Infeasibility::Structure(_) => 0,
            Infeasibility::TimeWindow { .. } => 1,
            Infeasibility::RideTime { .. } => 2,
            Infeasibility::Capacity { .. } => 3,
            Infeasibility::Duration { .. } => 4,
            Infeasibility::DestinationLateness { .. } => 5,
        }
    }
}

/// Scheduling plus the full list of violated constraint families.
#[derive(Debug, Clone)]
pub struct RouteAnalysis {
    pub schedule: Option<Schedule>,
    pub violations: Vec<Infeasibility>,
}

fn structural_violations(inst: &Instance, route: &Route) -> Vec<String> {
    let mut out = Vec::new();
    let vehicle = inst.vehicle(route.vehicle);
    if route.stops.len() < 2 {
        out.push("route needs at least origin and destination".into());
        return out;
    }
    if route.stops[0] != vehicle.origin {
        out.push(format!(
            "route of vehicle {} does not start at its origin",
            route.vehicle
        ));
    }
    if *route.stops.last().unwrap() != vehicle.destination {
        out.push(format!(
            "route of vehicle {} does not end at its destination",
            route.vehicle
        ));
    }
    let mut seen = BTreeSet::new();
    for &s in &route.stops {
        if s >= inst.vertices.len() {
            out.push(format!("unknown vertex {s} in route"));
            return out;
        }
        if !seen.insert(s) {
            out.push(format!("vertex {s} appears twice"));
        }
    }
    let pos: HashMap<usize, usize> =
        route.stops.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    for r in &inst.requests {
        match (pos.get(&r.pickup), pos.get(&r.delivery)) {
            (Some(p), Some(d)) if p >= d => {
                out.push(format!("delivery of request {} precedes its pickup", r.id))
            }
            (Some(_), None) => {
                out.push(format!("request {} has pickup but no delivery", r.id))
            }
            (None, Some(_)) => {
                out.push(format!("request {} has delivery but no pickup", r.id))
            }
            _ => {}
        }
    }
    // Interior stops must belong to some request.
    let request_vertices: BTreeSet<usize> = inst
        .requests
        .iter()
        .flat_map(|r| [r.pickup, r.delivery])
        .collect();
    for &s in &route.stops[1..route.stops.len() - 1] {
        if !request_vertices.contains(&s) {
            out.push(format!("interior stop {s} is not a request vertex"));
        }
    }
    out
}

fn forward_pass(inst: &Instance, stops: &[usize], depart: f64) -> Vec<f64> {
    let mut times = Vec::with_capacity(stops.len());
    times.push(depart.max(inst.vertex(stops[0]).earliest));
    for w in stops.windows(2) {
        let prev = inst.vertex(w[0]);
        let arrival = times.last().unwrap() + prev.service + inst.travel_time(w[0], w[1]);
        times.push(arrival.max(inst.vertex(w[1]).earliest));
    }
    times
}

/// Schedules a route and collects every violated constraint family.
///
/// Scheduling is two-pass: a forward pass sets each start time to the
/// earliest feasible value, then the origin departure is delayed by the
/// largest slack that respects every downstream latest time (waiting along
/// the route absorbs part of the delay). The destination's slack bound is
/// capped so the delay never creates lateness that the forward pass avoided.
pub fn analyze_route(inst: &Instance, route: &Route) -> RouteAnalysis {
    let structural = structural_violations(inst, route);
    if !structural.is_empty() {
        return RouteAnalysis {
            schedule: None,
            violations: structural.into_iter().map(Infeasibility::Structure).collect(),
        };
    }

    let stops = &route.stops;
    let last = stops.len() - 1;
    let vehicle = inst.vehicle(route.vehicle);
    let dest = inst.vertex(vehicle.destination);
    let mut violations = Vec::new();

    let mut times = forward_pass(inst, stops, inst.vertex(stops[0]).earliest);

    let window_ok = stops[1..last]
        .iter()
        .zip(&times[1..last])
        .all(|(&s, &t)| t <= inst.vertex(s).latest + EPS);

    if window_ok {
        // Maximal departure delay: slack at stop i is the accumulated
        // waiting up to i plus the remaining window headroom there.
        let latest_at = |idx: usize, s: usize, t: f64| -> f64 {
            if idx == last {
                dest.latest.max(t)
            } else {
                inst.vertex(s).latest
            }
        };
        let mut slack = latest_at(0, stops[0], times[0]) - times[0];
        let mut waiting = 0.0;
        for i in 1..=last {
            let prev = inst.vertex(stops[i - 1]);
            let arrival = times[i - 1] + prev.service + inst.travel_time(stops[i - 1], stops[i]);
            waiting += times[i] - arrival;
            slack = slack.min(waiting + latest_at(i, stops[i], times[i]) - times[i]);
        }
        if slack > EPS {
            times = forward_pass(inst, stops, times[0] + slack);
            debug_assert!(stops[1..last]
                .iter()
                .zip(&times[1..last])
                .all(|(&s, &t)| t <= inst.vertex(s).latest + 1e-6));
        }
    } else {
        for (&s, &t) in stops[1..last].iter().zip(&times[1..last]) {
            if t > inst.vertex(s).latest + EPS {
                violations.push(Infeasibility::TimeWindow { stop: s });
            }
        }
    }

    // Ride times.
    let pos: HashMap<usize, usize> =
        stops.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    for r in &inst.requests {
        if let (Some(&p), Some(&d)) = (pos.get(&r.pickup), pos.get(&r.delivery)) {
            let ride = times[d] - (times[p] + inst.vertex(r.pickup).service);
            if ride > inst.max_ride_time + EPS {
                violations.push(Infeasibility::RideTime { request: r.id });
            }
        }
    }

    // Loads.
    let mut loads = Vec::with_capacity(stops.len());
    let mut load = 0i32;
    for &s in stops.iter() {
        load += inst.vertex(s).load_delta;
        loads.push(load);
        if load < 0 || load > vehicle.capacity {
            violations.push(Infeasibility::Capacity { stop: s });
        }
    }

    let duration = times[last] - times[0];
    if duration > inst.max_route_duration + EPS {
        violations.push(Infeasibility::Duration { duration });
    }

    let lateness = (times[last] - dest.latest).max(0.0);
    if lateness > vehicle.dest_tolerance + EPS {
        violations.push(Infeasibility::DestinationLateness { lateness });
    }

    violations.sort_by_key(|v| v.priority());
    RouteAnalysis {
        schedule: Some(Schedule { start_times: times, loads, duration, lateness }),
        violations,
    }
}

/// Schedules a route, failing on the highest-priority violated constraint.
pub fn schedule_route(inst: &Instance, route: &Route) -> Result<Schedule, Infeasibility> {
    let analysis = analyze_route(inst, route);
    match analysis.violations.into_iter().next() {
        Some(v) => Err(v),
        None => Ok(analysis.schedule.expect("no violations implies a schedule")),
    }
}

/// Travel minutes along the route's consecutive stop pairs.
pub fn route_travel(inst: &Instance, route: &Route) -> f64 {
    route
        .stops
        .windows(2)
        .map(|w| inst.travel_time(w[0], w[1]))
        .sum()
}

/// Per-route objective contribution: (travel minutes, lateness minutes).
pub fn route_cost(inst: &Instance, route: &Route) -> Result<(f64, f64), Infeasibility> {
    let schedule = schedule_route(inst, route)?;
    Ok((route_travel(inst, route), schedule.lateness))
}

/// Aggregated objective components of a solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cost {
    pub travel: f64,
    pub lateness_total: f64,
    pub weighted: f64,
    pub served: usize,
}

impl Cost {
    pub fn from_parts(params: &SolverParams, travel: f64, lateness_total: f64, served: usize) -> Cost {
        Cost {
            travel,
            lateness_total,
            weighted: params.w1 * travel + params.w2 * lateness_total,
            served,
        }
    }
}

/// One route per vehicle plus the pool of unserved requests and the cached
/// objective. Rejections are data, not errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub routes: Vec<Route>,
    pub rejected: BTreeSet<usize>,
    pub cost: Cost,
}

impl Solution {
    /// Builds a solution from routes, deriving the rejection pool and the
    /// cached cost. Fails if any route cannot be scheduled.
    pub fn from_routes(
        inst: &Instance,
        params: &SolverParams,
        routes: Vec<Route>,
    ) -> Result<Solution, Infeasibility> {
        let mut served = BTreeSet::new();
        for route in &routes {
            for id in route.request_ids(inst) {
                served.insert(id);
            }
        }
        let rejected = inst
            .requests
            .iter()
            .map(|r| r.id)
            .filter(|id| !served.contains(id))
            .collect();
        let mut sol = Solution {
            routes,
            rejected,
            cost: Cost { travel: 0.0, lateness_total: 0.0, weighted: 0.0, served: 0 },
        };
        sol.reevaluate(inst, params)?;
        Ok(sol)
    }

    /// Recomputes the cached cost and rejection pool from the routes.
    pub fn reevaluate(
        &mut self,
        inst: &Instance,
        params: &SolverParams,
    ) -> Result<(), Infeasibility> {
        let mut served = BTreeSet::new();
        for route in &self.routes {
            for id in route.request_ids(inst) {
                served.insert(id);
            }
        }
        self.rejected = inst
            .requests
            .iter()
            .map(|r| r.id)
            .filter(|id| !served.contains(id))
            .collect();
        self.cost = solution_cost(inst, params, self)?;
        Ok(())
    }

    /// Index of the route serving the request, if any.
    pub fn route_serving(&self, inst: &Instance, request: usize) -> Option<usize> {
        let pickup = inst.request(request).pickup;
        self.routes.iter().position(|r| r.stops.contains(&pickup))
    }

    /// The request -> vehicle assignment, None for rejected requests.
    /// Two solutions with equal assignments serve every request identically.
    pub fn assignment(&self, inst: &Instance) -> Vec<Option<usize>> {
        let mut map = vec![None; inst.num_requests()];
        for route in &self.routes {
            for id in route.request_ids(inst) {
                map[id] = Some(route.vehicle);
            }
        }
        map
    }

    pub fn served_count(&self, inst: &Instance) -> usize {
        inst.num_requests() - self.rejected.len()
    }

    /// True when the rejection pool respects the served-fraction bound.
    pub fn meets_service_level(&self, inst: &Instance) -> bool {
        self.rejected.len() <= inst.max_rejected()
    }
}

/// Recomputes the full cost of a solution from scratch.
pub fn solution_cost(
    inst: &Instance,
    params: &SolverParams,
    sol: &Solution,
) -> Result<Cost, Infeasibility> {
    let mut travel = 0.0;
    let mut lateness = 0.0;
    let mut served = 0;
    for route in &sol.routes {
        let (t, l) = route_cost(inst, route)?;
        travel += t;
        lateness += l;
        served += route.num_requests();
    }
    Ok(Cost::from_parts(params, travel, lateness, served))
}

/// A violated constraint found by [`check_feasibility`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    Route { vehicle: usize, detail: String },
    DuplicateService { request: usize },
    MissingVehicleRoute { vehicle: usize },
    ServiceLevel { served: usize, required: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Route { vehicle, detail } => {
                write!(f, "vehicle {vehicle}: {detail}")
            }
            Violation::DuplicateService { request } => {
                write!(f, "request {request} served by more than one route")
            }
            Violation::MissingVehicleRoute { vehicle } => {
                write!(f, "no route for vehicle {vehicle}")
            }
            Violation::ServiceLevel { served, required } => {
                write!(f, "only {served} requests served, {required} required")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    /// Ignores the service-level constraint; true when every route is sound.
    pub fn hard_feasible(&self) -> bool {
        self.violations
            .iter()
            .all(|v| matches!(v, Violation::ServiceLevel { .. }))
    }
}

/// Checks every constraint family of a solution, including the bound on
/// rejected requests. Empty report means feasible.
pub fn check_feasibility(inst: &Instance, sol: &Solution) -> FeasibilityReport {
    let mut violations = Vec::new();

    if sol.routes.len() != inst.num_vehicles() {
        for k in 0..inst.num_vehicles() {
            if !sol.routes.iter().any(|r| r.vehicle == k) {
                violations.push(Violation::MissingVehicleRoute { vehicle: k });
            }
        }
    }

    let mut seen = vec![0usize; inst.num_requests()];
    for route in &sol.routes {
        for id in route.request_ids(inst) {
            seen[id] += 1;
        }
        for v in analyze_route(inst, route).violations {
            violations.push(Violation::Route { vehicle: route.vehicle, detail: v.to_string() });
        }
    }
    for (id, &count) in seen.iter().enumerate() {
        if count > 1 {
            violations.push(Violation::DuplicateService { request: id });
        }
        if count == 0 && !sol.rejected.contains(&id) {
            violations.push(Violation::Route {
                vehicle: usize::MAX,
                detail: format!("request {id} neither served nor rejected"),
            });
        }
    }

    let served = seen.iter().filter(|&&c| c == 1).count();
    if served < inst.min_served() {
        violations.push(Violation::ServiceLevel { served, required: inst.min_served() });
    }

    FeasibilityReport { violations }
}

/// The cheapest feasible way to add a request to a route.
#[derive(Debug, Clone, PartialEq)]
pub struct BestInsertion {
    /// Index of the pickup in the new stop sequence.
    pub pickup_pos: usize,
    /// Index of the delivery in the new stop sequence.
    pub delivery_pos: usize,
    /// Weighted cost increase over the route as it was.
    pub delta: f64,
    pub route: Route,
}

/// Scans every (pickup, delivery) position pair and returns the feasible
/// one with the smallest weighted cost increase; ties go to the lowest
/// pickup position, then the lowest delivery position.
pub fn try_insert(
    inst: &Instance,
    params: &SolverParams,
    route: &Route,
    request: usize,
) -> Option<BestInsertion> {
    let mut best: Option<BestInsertion> = None;
    scan_insertions(inst, params, route, request, |candidate| {
        if best.as_ref().is_none_or(|b| candidate.delta < b.delta - EPS) {
            best = Some(candidate);
        }
    });
    best
}

/// Every feasible insertion of the request into the route, in ascending
/// position order.
pub fn enumerate_insertions(
    inst: &Instance,
    params: &SolverParams,
    route: &Route,
    request: usize,
) -> Vec<BestInsertion> {
    let mut all = Vec::new();
    scan_insertions(inst, params, route, request, |candidate| all.push(candidate));
    all
}

fn scan_insertions(
    inst: &Instance,
    params: &SolverParams,
    route: &Route,
    request: usize,
    mut visit: impl FnMut(BestInsertion),
) {
    let r = inst.request(request);
    debug_assert!(!route.stops.contains(&r.pickup));
    let base = match route_cost(inst, route) {
        Ok((t, l)) => params.w1 * t + params.w2 * l,
        Err(_) => return,
    };

    let len = route.stops.len();
    for p in 1..len {
        let mut with_pickup = route.stops.clone();
        with_pickup.insert(p, r.pickup);
        for d in p + 1..=len {
            let mut stops = with_pickup.clone();
            stops.insert(d, r.delivery);
            let candidate = Route { vehicle: route.vehicle, stops };
            let Ok((t, l)) = route_cost(inst, &candidate) else {
                continue;
            };
            let delta = params.w1 * t + params.w2 * l - base;
            visit(BestInsertion { pickup_pos: p, delivery_pos: d, delta, route: candidate });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Instance, Vehicle, Vertex};
    use crate::synthetic;

    fn params() -> SolverParams {
        SolverParams::default()
    }

    /// Origin at (0,0) with window [490,610]; destination 10 miles away with
    /// window [550,600]; time factor 2 makes the leg 20 minutes.
    fn commute_instance() -> Instance {
        Instance {
            name: "commute".into(),
            vertices: vec![
                Vertex { id: 0, x: 0.0, y: 0.0, earliest: 490.0, latest: 610.0, service: 0.0, load_delta: 0 },
                Vertex { id: 1, x: 10.0, y: 0.0, earliest: 550.0, latest: 600.0, service: 0.0, load_delta: 0 },
            ],
            requests: vec![],
            vehicles: vec![Vehicle { id: 0, origin: 0, destination: 1, capacity: 3, dest_tolerance: 5.0 }],
            max_route_duration: 90.0,
            max_ride_time: 30.0,
            time_factor: 2.0,
            served_fraction_min: 0.8,
        }
    }

    #[test]
    fn departure_shifts_to_the_latest_safe_minute() {
        let inst = commute_instance();
        let route = Route::empty(&inst, 0);
        let s = schedule_route(&inst, &route).unwrap();
        assert!((s.start_times[0] - 580.0).abs() < EPS);
        assert!((s.start_times[1] - 600.0).abs() < EPS);
        assert_eq!(s.lateness, 0.0);
        assert!((s.duration - 20.0).abs() < EPS);
    }

    #[test]
    fn ride_time_breach_is_infeasible() {
        let mut inst = synthetic::two_request_line();
        // Stretch request 1's leg to 61 minutes of direct travel (T_M = 60).
        inst.vertices[4].x = 64.0;
        inst.vertices[5].x = 66.0;
        inst.max_route_duration = 1000.0;
        inst.vertices.iter_mut().for_each(|v| {
            v.latest = 1000.0;
        });
        let route = Route { vehicle: 0, stops: vec![0, 2, 4, 5] };
        match schedule_route(&inst, &route) {
            Err(Infeasibility::RideTime { request }) => assert_eq!(request, 1),
            other => panic!("expected ride-time infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn capacity_breach_is_infeasible() {
        let mut inst = synthetic::n_request_line(4);
        inst.vehicles[0].capacity = 3;
        // Pick up all four before delivering anyone.
        let stops = vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 9];
        let route = Route { vehicle: 0, stops };
        match schedule_route(&inst, &route) {
            Err(Infeasibility::Capacity { .. }) => {}
            other => panic!("expected capacity infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn delaying_departure_never_breaks_windows() {
        // The shifted schedule of any feasible random route stays feasible;
        // this exercises the slack computation with waiting along the route.
        for seed in 0..30 {
            let inst = synthetic::random_instance(3, 1, seed);
            let mut stops = vec![inst.vehicles[0].origin];
            for r in &inst.requests {
                stops.push(r.pickup);
                stops.push(r.delivery);
            }
            stops.push(inst.vehicles[0].destination);
            let route = Route { vehicle: 0, stops };
            // analyze_route must agree with schedule_route on feasibility.
            let analysis = analyze_route(&inst, &route);
            assert_eq!(analysis.violations.is_empty(), schedule_route(&inst, &route).is_ok());
        }
    }

    #[test]
    fn zero_movement_costs_zero() {
        let mut inst = commute_instance();
        inst.vertices[1].x = 0.0; // co-located origin/destination
        inst.vertices[1].earliest = 490.0;
        let sol = Solution::from_routes(&inst, &params(), vec![Route::empty(&inst, 0)]).unwrap();
        assert_eq!(sol.cost.weighted, 0.0);
        assert_eq!(sol.cost.served, 0);
    }

    #[test]
    fn single_request_cost_matches_hand_computation() {
        let inst = synthetic::two_request_line();
        let p = params();
        let route = Route { vehicle: 0, stops: vec![0, 1, 3, 5] };
        let sol = Solution::from_routes(&inst, &p, vec![route]).unwrap();
        // Legs: 0->1 (1), 1->3 (1), 3->5 (4); lateness 0.
        let expected = p.w1 * 6.0;
        assert!((sol.cost.weighted - expected).abs() < EPS);
        assert_eq!(sol.cost.served, 1);
        assert_eq!(sol.rejected.len(), 1);
    }

    #[test]
    fn feasibility_flags_service_level() {
        let inst = synthetic::two_request_line();
        let sol = Solution::from_routes(&inst, &params(), vec![Route::empty(&inst, 0)]).unwrap();
        let report = check_feasibility(&inst, &sol);
        assert!(!report.is_feasible());
        assert!(report.hard_feasible());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ServiceLevel { served: 0, required: 2 })));
    }

    #[test]
    fn feasibility_flags_precedence() {
        let inst = synthetic::two_request_line();
        let route = Route { vehicle: 0, stops: vec![0, 3, 1, 5] };
        let mut sol =
            Solution::from_routes(&inst, &params(), vec![Route::empty(&inst, 0)]).unwrap();
        sol.routes = vec![route];
        let report = check_feasibility(&inst, &sol);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Route { detail, .. } if detail.contains("precedes"))));
    }

    #[test]
    fn insertion_into_empty_route() {
        let inst = synthetic::two_request_line();
        let route = Route::empty(&inst, 0);
        let ins = try_insert(&inst, &params(), &route, 0).unwrap();
        assert_eq!((ins.pickup_pos, ins.delivery_pos), (1, 2));
        assert!(ins.delta >= 0.0);
        assert_eq!(ins.route.stops, vec![0, 1, 3, 5]);
    }

    #[test]
    fn insertion_fails_on_closed_window() {
        let mut inst = synthetic::two_request_line();
        // Pickup of request 0 closes before the vehicle can arrive.
        inst.vertices[0].earliest = 100.0;
        inst.vertices[1].latest = 50.0;
        inst.vertices[1].earliest = 0.0;
        let route = Route::empty(&inst, 0);
        assert!(try_insert(&inst, &params(), &route, 0).is_none());
    }

    #[test]
    fn insertion_delta_matches_full_reevaluation() {
        let inst = synthetic::two_request_line();
        let p = params();
        let base = Route { vehicle: 0, stops: vec![0, 2, 4, 5] };
        let before = Solution::from_routes(&inst, &p, vec![base.clone()]).unwrap();
        let ins = try_insert(&inst, &p, &base, 0).unwrap();
        let after = Solution::from_routes(&inst, &p, vec![ins.route.clone()]).unwrap();
        assert!((after.cost.weighted - before.cost.weighted - ins.delta).abs() < EPS);
    }
}
