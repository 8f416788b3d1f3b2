//! Perturbation as destroy/repair search: four removal operators, three
//! insertion operators and the metrics they rank by. Removals that would
//! leave a route unschedulable are skipped, so every intermediate solution
//! keeps its hard feasibility.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Instance, SolverParams};
use crate::neighborhoods::optimize_route_by_shift;
use crate::schedule::{
    check_feasibility, enumerate_insertions, schedule_route, try_insert, Solution, EPS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RemovalKind {
    Route,
    Random,
    Greedy,
    Related,
}

impl RemovalKind {
    pub const ALL: [RemovalKind; 4] =
        [RemovalKind::Route, RemovalKind::Random, RemovalKind::Greedy, RemovalKind::Related];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InsertionKind {
    Best,
    Random,
    Compatibility,
}

impl InsertionKind {
    pub const ALL: [InsertionKind; 3] =
        [InsertionKind::Best, InsertionKind::Random, InsertionKind::Compatibility];
}

/// Travel saved by extracting a served request from its route: the bypass
/// of both its stops, collapsing to a single three-arc bypass when pickup
/// and delivery are adjacent.
pub fn removal_saving(inst: &Instance, sol: &Solution, request: usize) -> Option<f64> {
    let idx = sol.route_serving(inst, request)?;
    let stops = &sol.routes[idx].stops;
    let r = inst.request(request);
    let p = stops.iter().position(|&s| s == r.pickup)?;
    let d = stops.iter().position(|&s| s == r.delivery)?;
    let t = |a: usize, b: usize| inst.travel_time(stops[a], stops[b]);
    if d == p + 1 {
        Some(t(p - 1, p) + t(p, d) + t(d, d + 1) - t(p - 1, d + 1))
    } else {
        Some(
            (t(p - 1, p) + t(p, p + 1) - t(p - 1, p + 1))
                + (t(d - 1, d) + t(d, d + 1) - t(d - 1, d + 1)),
        )
    }
}

/// Attribute ranges over all requests, precomputed once per instance for
/// similarity normalization. Attributes: pickup and delivery positions
/// (scalarized as distance from the coordinate origin), pickup ready time,
/// delivery due time.
#[derive(Debug, Clone)]
pub struct SimilarityContext {
    ranges: [(f64, f64); 4],
}

fn request_attributes(inst: &Instance, request: usize) -> [f64; 4] {
    let r = inst.request(request);
    let p = inst.vertex(r.pickup);
    let d = inst.vertex(r.delivery);
    [
        (p.x * p.x + p.y * p.y).sqrt(),
        (d.x * d.x + d.y * d.y).sqrt(),
        p.earliest,
        d.latest,
    ]
}

impl SimilarityContext {
    pub fn new(inst: &Instance) -> SimilarityContext {
        let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); 4];
        for r in 0..inst.num_requests() {
            let values = request_attributes(inst, r);
            for (range, v) in ranges.iter_mut().zip(values) {
                range.0 = range.0.min(v);
                range.1 = range.1.max(v);
            }
        }
        SimilarityContext { ranges }
    }
}

/// Mean per-attribute similarity in [0, 1]: 1 - |difference| / range, with
/// a degenerate range contributing full similarity.
pub fn similarity(
    inst: &Instance,
    ctx: &SimilarityContext,
    r_i: usize,
    r_j: usize,
) -> f64 {
    let a = request_attributes(inst, r_i);
    let b = request_attributes(inst, r_j);
    let mut total = 0.0;
    for k in 0..4 {
        let (lo, hi) = ctx.ranges[k];
        let span = hi - lo;
        total += if span <= EPS { 1.0 } else { 1.0 - (a[k] - b[k]).abs() / span };
    }
    total / 4.0
}

/// Temporal compatibility of two requests: the four-term sum of worst-case
/// window-to-window slacks over their pickup/delivery vertex pairs. Lower
/// means more compatible; symmetric in its arguments (the pair is ordered
/// internally so the summation order cannot differ).
pub fn comp_measure(inst: &Instance, r1: usize, r2: usize) -> f64 {
    let a = inst.request(r1.min(r2));
    let b = inst.request(r1.max(r2));
    let term = |i: usize, j: usize| -> f64 {
        let vi = inst.vertex(i);
        let vj = inst.vertex(j);
        let t = inst.travel_time(i, j);
        (vi.latest - vj.earliest - t).abs().max((vj.latest - vi.earliest - t).abs())
    };
    term(a.pickup, b.pickup)
        + term(a.pickup, b.delivery)
        + term(a.delivery, b.pickup)
        + term(a.delivery, b.delivery)
}

/// Removes a request if its route still schedules afterwards. Returns true
/// on success.
fn remove_if_schedulable(inst: &Instance, sol: &mut Solution, request: usize) -> bool {
    let Some(idx) = sol.route_serving(inst, request) else {
        return false;
    };
    let candidate = sol.routes[idx].without_request(inst, request);
    if schedule_route(inst, &candidate).is_err() {
        return false;
    }
    sol.routes[idx] = candidate;
    true
}

/// Applies one removal operator, moving up to `count` requests into the
/// rejection pool. Returns the damaged solution and the removed ids.
pub fn destroy(
    inst: &Instance,
    params: &SolverParams,
    sol: &Solution,
    kind: RemovalKind,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> (Solution, Vec<usize>) {
    let mut work = sol.clone();
    let mut removed = Vec::new();

    match kind {
        RemovalKind::Route => {
            // Emptying the least-loaded nonempty route; count is ignored.
            let victim = work
                .routes
                .iter()
                .enumerate()
                .filter(|(_, r)| r.num_requests() > 0)
                .min_by_key(|(idx, r)| (r.num_requests(), *idx))
                .map(|(idx, _)| idx);
            if let Some(idx) = victim {
                for request in work.routes[idx].request_ids(inst) {
                    if remove_if_schedulable(inst, &mut work, request) {
                        removed.push(request);
                    }
                }
            }
        }
        RemovalKind::Random => {
            let mut served: Vec<usize> = served_requests(inst, &work);
            served.shuffle(rng);
            let mut touched = Vec::new();
            for request in served.into_iter().take(count) {
                let route = work.route_serving(inst, request);
                if remove_if_schedulable(inst, &mut work, request) {
                    removed.push(request);
                    if let Some(idx) = route {
                        if !touched.contains(&idx) {
                            touched.push(idx);
                        }
                    }
                }
            }
            for idx in touched {
                work.routes[idx] = optimize_route_by_shift(inst, params, &work.routes[idx]);
            }
        }
        RemovalKind::Greedy => {
            for _ in 0..count {
                let mut ranked: Vec<(usize, f64)> = served_requests(inst, &work)
                    .into_iter()
                    .filter_map(|r| removal_saving(inst, &work, r).map(|s| (r, s)))
                    .collect();
                ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
                let Some(&(request, _)) =
                    ranked.iter().find(|(r, _)| removable(inst, &work, *r))
                else {
                    break;
                };
                remove_if_schedulable(inst, &mut work, request);
                removed.push(request);
            }
        }
        RemovalKind::Related => {
            let served = served_requests(inst, &work);
            let Some(&seed) = served.as_slice().choose(rng) else {
                return (work, removed);
            };
            let ctx = SimilarityContext::new(inst);
            let mut ranked: Vec<(usize, f64)> = served
                .iter()
                .filter(|&&r| r != seed)
                .map(|&r| (r, similarity(inst, &ctx, seed, r)))
                .collect();
            ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            let mut victims = vec![seed];
            victims.extend(ranked.iter().take(count.saturating_sub(1)).map(|(r, _)| *r));
            for request in victims {
                if remove_if_schedulable(inst, &mut work, request) {
                    removed.push(request);
                }
            }
        }
    }

    work.reevaluate(inst, params).expect("guarded removals keep routes schedulable");
    (work, removed)
}

fn served_requests(inst: &Instance, sol: &Solution) -> Vec<usize> {
    (0..inst.num_requests()).filter(|&r| !sol.rejected.contains(&r)).collect()
}

fn removable(inst: &Instance, sol: &Solution, request: usize) -> bool {
    sol.route_serving(inst, request)
        .map(|idx| {
            schedule_route(inst, &sol.routes[idx].without_request(inst, request)).is_ok()
        })
        .unwrap_or(false)
}

/// Applies one insertion operator to the current rejection pool. Requests
/// without a feasible placement stay rejected.
pub fn repair(
    inst: &Instance,
    params: &SolverParams,
    sol: &Solution,
    kind: InsertionKind,
    rng: &mut ChaCha8Rng,
) -> Solution {
    let mut work = sol.clone();
    let mut pool: Vec<usize> = work.rejected.iter().copied().collect();
    pool.shuffle(rng);

    for request in pool {
        match kind {
            InsertionKind::Best => {
                let mut best: Option<(f64, usize, crate::schedule::Route)> = None;
                for (idx, route) in work.routes.iter().enumerate() {
                    if let Some(ins) = try_insert(inst, params, route, request) {
                        if best.as_ref().is_none_or(|(d, _, _)| ins.delta < d - EPS) {
                            best = Some((ins.delta, idx, ins.route));
                        }
                    }
                }
                if let Some((_, idx, route)) = best {
                    work.routes[idx] = route;
                }
            }
            InsertionKind::Random => {
                let mut slots = Vec::new();
                for (idx, route) in work.routes.iter().enumerate() {
                    for ins in enumerate_insertions(inst, params, route, request) {
                        slots.push((idx, ins));
                    }
                }
                if !slots.is_empty() {
                    let (idx, ins) = slots.swap_remove(rng.random_range(0..slots.len()));
                    work.routes[idx] = ins.route;
                }
            }
            InsertionKind::Compatibility => {
                let mut order: Vec<(f64, usize)> = work
                    .routes
                    .iter()
                    .enumerate()
                    .map(|(idx, route)| {
                        let members = route.request_ids(inst);
                        let score = if members.is_empty() {
                            // Never preferred over a route with context.
                            f64::INFINITY
                        } else {
                            members
                                .iter()
                                .map(|&q| comp_measure(inst, request, q))
                                .sum::<f64>()
                                / members.len() as f64
                        };
                        (score, idx)
                    })
                    .collect();
                order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                for (_, idx) in order {
                    if let Some(ins) = try_insert(inst, params, &work.routes[idx], request) {
                        work.routes[idx] = ins.route;
                        break;
                    }
                }
            }
        }
    }

    work.reevaluate(inst, params).expect("insertions are feasibility-guarded");
    work
}

/// One destroy/repair round: a uniformly drawn removal count, operator pair
/// and the repair of whatever the pool then holds. Hard route feasibility
/// is preserved; the served set may shrink or grow.
pub fn perturb(
    inst: &Instance,
    params: &SolverParams,
    sol: &Solution,
    rng: &mut ChaCha8Rng,
) -> Solution {
    let served = sol.served_count(inst);
    let max_remove = ((served as f64 * 0.15).floor() as usize).max(1);
    let count = rng.random_range(1..=max_remove);
    let removal = *RemovalKind::ALL.as_slice().choose(rng).expect("nonempty");
    let insertion = *InsertionKind::ALL.as_slice().choose(rng).expect("nonempty");
    let (damaged, _) = destroy(inst, params, sol, removal, count, rng);
    let repaired = repair(inst, params, &damaged, insertion, rng);
    debug_assert!(check_feasibility(inst, &repaired).hard_feasible());
    repaired
}
