//! Initial solution construction: requests are clustered around each
//! driver's origin->destination segment, then inserted sequentially per
//! route and in parallel for requests claimed by several clusters.

use serde::{Deserialize, Serialize};

use crate::model::{Instance, SolverParams};
use crate::schedule::{try_insert, Route, Solution, EPS};

/// Distance in miles from a point to the closed segment [a, b]; the
/// projection parameter is clamped to [0, 1], so a degenerate segment
/// falls back to the distance to `a`.
pub fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (abx, aby) = (b.0 - a.0, b.1 - a.1);
    let len_sq = abx * abx + aby * aby;
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * abx + (p.1 - a.1) * aby) / len_sq).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.0 + t * abx, a.1 + t * aby);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Outcome of the clustering phase. Every request lands in exactly one of
/// the three buckets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    /// Requests claimed by exactly one vehicle, per vehicle.
    pub per_vehicle: Vec<Vec<usize>>,
    /// Requests claimed by several vehicles, with their candidates.
    pub multi_cluster: Vec<(usize, Vec<usize>)>,
    /// Requests no vehicle claimed; they start in the rejection pool.
    pub unassigned: Vec<usize>,
}

fn segment_of(inst: &Instance, vehicle: usize) -> ((f64, f64), (f64, f64)) {
    let v = inst.vehicle(vehicle);
    let o = inst.vertex(v.origin);
    let d = inst.vertex(v.destination);
    ((o.x, o.y), (d.x, d.y))
}

/// Assigns requests to the vehicles whose direction they lie along: a
/// request joins cluster k when both its pickup and its delivery sit
/// strictly below the mean vertex distance to vehicle k's segment.
///
/// The mean averages the request vertices only; vehicle endpoints sit on
/// their own segment at distance zero and would drag the radius down.
/// `strict.cluster_mean_all_vertices` restores the every-vertex mean.
pub fn cluster_requests(inst: &Instance, params: &SolverParams) -> ClusterAssignment {
    let m = inst.num_vehicles();
    let n = inst.num_requests();
    let mut claimed: Vec<Vec<usize>> = vec![Vec::new(); n];

    for k in 0..m {
        let (a, b) = segment_of(inst, k);
        let dist = |vertex: usize| {
            let v = inst.vertex(vertex);
            point_segment_distance((v.x, v.y), a, b)
        };
        let mut total = 0.0;
        let mut count = 0usize;
        for r in &inst.requests {
            total += dist(r.pickup) + dist(r.delivery);
            count += 2;
        }
        if params.strict.cluster_mean_all_vertices {
            for v in &inst.vehicles {
                total += dist(v.origin) + dist(v.destination);
                count += 2;
            }
        }
        if count == 0 {
            continue;
        }
        let mean = total / count as f64;
        for r in &inst.requests {
            if dist(r.pickup) < mean && dist(r.delivery) < mean {
                claimed[r.id].push(k);
            }
        }
    }

    let mut assignment = ClusterAssignment {
        per_vehicle: vec![Vec::new(); m],
        multi_cluster: Vec::new(),
        unassigned: Vec::new(),
    };
    for (r, vehicles) in claimed.into_iter().enumerate() {
        match vehicles.len() {
            0 => assignment.unassigned.push(r),
            1 => assignment.per_vehicle[vehicles[0]].push(r),
            _ => assignment.multi_cluster.push((r, vehicles)),
        }
    }
    assignment
}

/// Upper bound for the start of service of a request:
/// min(l_pickup, l_delivery - travel(pickup, delivery) - service(delivery)).
pub fn service_start_upper_bound(inst: &Instance, request: usize) -> f64 {
    let r = inst.request(request);
    let pickup = inst.vertex(r.pickup);
    let delivery = inst.vertex(r.delivery);
    pickup
        .latest
        .min(delivery.latest - inst.travel_time(r.pickup, r.delivery) - delivery.service)
}

/// Builds the initial solution: sequential insertion of each vehicle's own
/// cluster in ascending service-start order, then parallel insertion of the
/// shared requests into whichever candidate route takes them cheapest.
/// Requests that cannot be placed go to the rejection pool; the result may
/// therefore fall short of the service-level constraint, but every route
/// respects the hard constraints. Deterministic: no randomness involved.
pub fn build_initial(inst: &Instance, params: &SolverParams) -> Solution {
    let clusters = cluster_requests(inst, params);
    let mut routes: Vec<Route> =
        (0..inst.num_vehicles()).map(|k| Route::empty(inst, k)).collect();

    for (k, route) in routes.iter_mut().enumerate() {
        let mut list = clusters.per_vehicle[k].clone();
        list.sort_by(|&a, &b| {
            service_start_upper_bound(inst, a)
                .partial_cmp(&service_start_upper_bound(inst, b))
                .unwrap()
                .then(a.cmp(&b))
        });
        for r in list {
            if let Some(ins) = try_insert(inst, params, route, r) {
                *route = ins.route;
            }
        }
    }

    for (r, candidates) in &clusters.multi_cluster {
        let mut best: Option<(f64, usize, Route)> = None;
        for &k in candidates {
            if let Some(ins) = try_insert(inst, params, &routes[k], *r) {
                if best.as_ref().is_none_or(|(delta, _, _)| ins.delta < delta - EPS) {
                    best = Some((ins.delta, k, ins.route));
                }
            }
        }
        if let Some((_, k, route)) = best {
            routes[k] = route;
        }
    }

    Solution::from_routes(inst, params, routes)
        .expect("insertion-guarded routes always schedule")
}
