//! Problem data: vertices, requests, vehicles, travel metric and solver
//! parameters. Everything here is immutable once built; validation is
//! report-style so callers can surface every defect at once.

use serde::{Deserialize, Serialize};

/// A node of the network. Vehicle origins/destinations and request
/// pickups/deliveries are all plain vertices; the role is implied by who
/// references them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    /// Position in miles.
    pub x: f64,
    pub y: f64,
    /// Earliest service start, minutes from midnight.
    pub earliest: f64,
    /// Latest service start, minutes from midnight.
    pub latest: f64,
    /// Service duration in minutes.
    pub service: f64,
    /// Passengers picked up (positive) or dropped off (negative).
    pub load_delta: i32,
}

/// A transport request: one pickup vertex paired with one delivery vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub id: usize,
    pub pickup: usize,
    pub delivery: usize,
    pub demand: i32,
}

/// A taxi with its own origin, destination of interest and arrival tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vehicle {
    pub id: usize,
    pub origin: usize,
    pub destination: usize,
    pub capacity: i32,
    /// Tolerated lateness at the destination, minutes.
    pub dest_tolerance: f64,
}

/// A complete problem instance.
///
/// Vertex layout convention (produced by the generator and expected by
/// [`validate_instance`]): delivery index = pickup index + n for every
/// request, where n is the number of requests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub requests: Vec<Request>,
    pub vehicles: Vec<Vehicle>,
    /// Maximum route duration in minutes (T_r).
    pub max_route_duration: f64,
    /// Maximum in-vehicle time per request in minutes (T_M).
    pub max_ride_time: f64,
    /// Minutes of travel per mile of Euclidean distance.
    pub time_factor: f64,
    /// Minimum fraction of requests a feasible solution must serve.
    #[serde(default = "default_served_fraction")]
    pub served_fraction_min: f64,
}

pub(crate) fn default_served_fraction() -> f64 {
    0.8
}

impl Instance {
    /// Number of requests (n).
    pub fn num_requests(&self) -> usize {
        self.requests.len()
    }

    /// Number of vehicles (m).
    pub fn num_vehicles(&self) -> usize {
        self.vehicles.len()
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    /// Euclidean distance in miles. Panics on an unknown vertex id.
    pub fn distance_miles(&self, i: usize, j: usize) -> f64 {
        let a = &self.vertices[i];
        let b = &self.vertices[j];
        ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
    }

    /// Travel time in minutes: Euclidean distance scaled by `time_factor`.
    /// Symmetric, zero on the diagonal. Panics on an unknown vertex id.
    pub fn travel_time(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        self.distance_miles(i, j) * self.time_factor
    }

    /// Smallest number of served requests a feasible solution may have.
    ///
    /// The 1e-9 slack compensates for `served_fraction_min * n` landing a
    /// hair above an integer in floating point (e.g. 0.8 * 15).
    pub fn min_served(&self) -> usize {
        let n = self.num_requests() as f64;
        (self.served_fraction_min * n - 1e-9).ceil().max(0.0) as usize
    }

    /// Largest number of rejected requests a feasible solution may have.
    pub fn max_rejected(&self) -> usize {
        self.num_requests() - self.min_served()
    }

    pub fn request(&self, id: usize) -> &Request {
        &self.requests[id]
    }

    pub fn vehicle(&self, id: usize) -> &Vehicle {
        &self.vehicles[id]
    }
}

/// Weights, learning constants, temperatures and budgets for the solver.
/// Defaults are the tuned values; temperatures derive from instance size
/// when not overridden.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverParams {
    /// Weight of the travel term in the objective.
    pub w1: f64,
    /// Weight of the driver-lateness term in the objective.
    pub w2: f64,
    /// Reaction factor for operator score updates.
    pub alpha: f64,
    /// Reward when an operator finds a new best solution.
    pub beta1: f64,
    /// Reward when an operator improves the current solution.
    pub beta2: f64,
    /// Multiplicative penalty when an operator fails to improve.
    pub gamma: f64,
    /// Neighborhood size: bounds candidate evaluations per operator call.
    pub size_n: usize,
    /// Capacity of the elite solution archive.
    pub size_e: usize,
    /// Geometric cooling rate.
    pub alpha_t: f64,
    /// Temperature floor override; defaults to m/2.
    pub t_min: Option<f64>,
    /// Temperature ceiling override; defaults to n/2.
    pub t_max: Option<f64>,
    /// Wall-clock budget in seconds.
    pub cpu_max: f64,
    /// Local-search iterations without improvement before giving up.
    pub iter_max: usize,
    /// Optional outer-loop iteration budget; makes runs deterministic.
    pub max_iterations: Option<u64>,
    pub rng_seed: u64,
    pub strict: StrictFlags,
    /// Log every accepted local-search move to stderr.
    pub log_moves: bool,
    /// Record a per-iteration trace in the run statistics.
    pub record_trace: bool,
}

/// Switches that reproduce behaviors exactly as published instead of the
/// defaults documented on each component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct StrictFlags {
    /// Cluster radius averages over every vertex, vehicle endpoints included.
    pub cluster_mean_all_vertices: bool,
    /// Perturb on odd no-improvement counts (literal `NoImprov mod 2`).
    pub literal_perturb_parity: bool,
    /// KPI2 sums per-vehicle ratios instead of averaging them.
    pub kpi2_sum_routes: bool,
    /// KPI3 divides by all requests instead of served ones.
    pub kpi3_all_requests: bool,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            w1: 40.0,
            w2: 60.0,
            alpha: 0.1,
            beta1: 5.0,
            beta2: 1.0,
            gamma: 0.9,
            size_n: 3,
            size_e: 1,
            alpha_t: 0.99,
            t_min: None,
            t_max: None,
            cpu_max: 300.0,
            iter_max: 10,
            max_iterations: None,
            rng_seed: 0,
            strict: StrictFlags::default(),
            log_moves: false,
            record_trace: false,
        }
    }
}

impl SolverParams {
    /// Checks the structural invariants on the parameter set.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.w1 > 0.0 && self.w2 > 0.0) {
            return Err(format!("weights must be positive: w1={}, w2={}", self.w1, self.w2));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(format!("gamma must lie in (0,1): {}", self.gamma));
        }
        if !(self.alpha_t > 0.0 && self.alpha_t < 1.0) {
            return Err(format!("alpha_t must lie in (0,1): {}", self.alpha_t));
        }
        if self.size_e < 1 {
            return Err("size_e must be at least 1".into());
        }
        if self.alpha < 0.0 || self.beta1 < 0.0 || self.beta2 < 0.0 {
            return Err("learning constants must be non-negative".into());
        }
        Ok(())
    }

    /// Temperature ceiling: n/2 unless overridden.
    pub fn temperature_max(&self, inst: &Instance) -> f64 {
        self.t_max
            .unwrap_or(inst.num_requests() as f64 / 2.0)
            .max(1e-6)
    }

    /// Temperature floor: m/2 unless overridden, clamped below the ceiling
    /// when the fleet outnumbers the requests.
    pub fn temperature_min(&self, inst: &Instance) -> f64 {
        let t_max = self.temperature_max(inst);
        let t_min = self.t_min.unwrap_or(inst.num_vehicles() as f64 / 2.0);
        if t_min >= t_max {
            t_max / 2.0
        } else {
            t_min
        }
    }
}

/// Outcome of [`validate_instance`]: empty means the instance is well formed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant of an instance and reports all
/// violations. Pure and idempotent; never mutates.
pub fn validate_instance(inst: &Instance) -> ValidationReport {
    let mut v = Vec::new();
    let nv = inst.vertices.len();
    let n = inst.num_requests();

    for (idx, vx) in inst.vertices.iter().enumerate() {
        if vx.id != idx {
            v.push(format!("vertex at position {idx} carries id {}", vx.id));
        }
        if vx.earliest > vx.latest {
            v.push(format!("earliest > latest at vertex {}", vx.id));
        }
        if vx.service < 0.0 {
            v.push(format!("negative service time at vertex {}", vx.id));
        }
    }

    if inst.time_factor <= 0.0 {
        v.push(format!("time_factor must be positive: {}", inst.time_factor));
    }
    if !(inst.served_fraction_min > 0.0 && inst.served_fraction_min <= 1.0) {
        v.push(format!(
            "served_fraction_min must lie in (0,1]: {}",
            inst.served_fraction_min
        ));
    }
    if inst.max_route_duration <= 0.0 {
        v.push("max_route_duration must be positive".into());
    }
    if inst.max_ride_time <= 0.0 {
        v.push("max_ride_time must be positive".into());
    }

    let mut role: Vec<Option<String>> = vec![None; nv];
    let mut claim = |slot: usize, what: String, v: &mut Vec<String>| {
        if slot >= nv {
            v.push(format!("{what} references unknown vertex {slot}"));
            return;
        }
        if let Some(prev) = &role[slot] {
            v.push(format!("vertex {slot} used by both {prev} and {what}"));
        } else {
            role[slot] = Some(what);
        }
    };

    for (idx, r) in inst.requests.iter().enumerate() {
        if r.id != idx {
            v.push(format!("request at position {idx} carries id {}", r.id));
        }
        claim(r.pickup, format!("pickup of request {}", r.id), &mut v);
        claim(r.delivery, format!("delivery of request {}", r.id), &mut v);
        if r.demand < 1 {
            v.push(format!("request {} has demand {} < 1", r.id, r.demand));
        }
        if r.pickup == r.delivery {
            v.push(format!("request {} picks up and delivers at the same vertex", r.id));
        }
        if r.delivery != r.pickup + n {
            v.push(format!(
                "pairing violation at request {}: delivery {} != pickup {} + {}",
                r.id, r.delivery, r.pickup, n
            ));
        }
        if r.pickup < nv && inst.vertices[r.pickup].load_delta != r.demand {
            v.push(format!(
                "pickup load_delta of request {} does not match its demand",
                r.id
            ));
        }
        if r.delivery < nv && inst.vertices[r.delivery].load_delta != -r.demand {
            v.push(format!(
                "delivery load_delta of request {} does not negate its demand",
                r.id
            ));
        }
    }

    for (idx, k) in inst.vehicles.iter().enumerate() {
        if k.id != idx {
            v.push(format!("vehicle at position {idx} carries id {}", k.id));
        }
        claim(k.origin, format!("origin of vehicle {}", k.id), &mut v);
        claim(k.destination, format!("destination of vehicle {}", k.id), &mut v);
        if k.capacity < 1 {
            v.push(format!("vehicle {} has capacity {} < 1", k.id, k.capacity));
        }
        if k.dest_tolerance < 0.0 {
            v.push(format!("vehicle {} has negative dest_tolerance", k.id));
        }
        for slot in [k.origin, k.destination] {
            if slot < nv {
                let vx = &inst.vertices[slot];
                if vx.service != 0.0 {
                    v.push(format!("vehicle endpoint {slot} has nonzero service time"));
                }
                if vx.load_delta != 0 {
                    v.push(format!("vehicle endpoint {slot} has nonzero load_delta"));
                }
            }
        }
    }

    ValidationReport { violations: v }
}
