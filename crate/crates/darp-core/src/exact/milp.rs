//! CPLEX-LP export of the mixed-integer model.
//!
//! Variable naming, documented in the file header and fixed by contract:
//! `x_i_j_k` (binary: vehicle k drives arc i->j), `y_i_k` (binary: pickup i
//! served by vehicle k), `T_i_k` (service start), `Q_i_k` (load after i),
//! `L_k` (destination lateness slack). Time windows and load ranges live in
//! the Bounds section; diagonal arcs are fixed to zero there so an idle
//! self-loop can never stand in for real service.

use serde::{Deserialize, Serialize};

use crate::model::{Instance, SolverParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MilpOptions {
    /// Emit the route-duration rows T_t - T_s <= T_r.
    pub include_duration: bool,
}

impl Default for MilpOptions {
    fn default() -> Self {
        MilpOptions { include_duration: true }
    }
}

fn fmt(x: f64) -> String {
    // Shortest round-trip representation; LP readers accept exponents.
    format!("{x}")
}

/// Appends `terms` as a wrapped linear expression.
fn push_expr(out: &mut String, terms: &[String]) {
    for (i, term) in terms.iter().enumerate() {
        if i > 0 {
            if i % 8 == 0 {
                out.push_str("\n   ");
            } else {
                out.push(' ');
            }
            if !term.starts_with('-') {
                out.push_str("+ ");
            }
        }
        if i > 0 && term.starts_with('-') {
            out.push_str("- ");
            out.push_str(&term[1..]);
        } else {
            out.push_str(term);
        }
    }
}

/// Writes the instance as an LP-format MILP. Deterministic text for a given
/// instance and parameter set.
pub fn export_milp(inst: &Instance, params: &SolverParams, options: MilpOptions) -> String {
    let n = inst.num_requests();
    let m = inst.num_vehicles();
    let nv = inst.vertices.len();

    let x = |i: usize, j: usize, k: usize| format!("x_{i}_{j}_{k}");
    let y = |i: usize, k: usize| format!("y_{i}_{k}");
    let t = |i: usize, k: usize| format!("T_{i}_{k}");
    let q = |i: usize, k: usize| format!("Q_{i}_{k}");
    let l = |k: usize| format!("L_{k}");

    // Latest possible service start, used for arc big-M values.
    let latest_start = |i: usize| -> f64 {
        let vx = inst.vertex(i);
        for v in &inst.vehicles {
            if v.destination == i {
                return vx.latest + v.dest_tolerance;
            }
        }
        vx.latest
    };

    let request_vertices: Vec<usize> =
        inst.requests.iter().flat_map(|r| [r.pickup, r.delivery]).collect();

    let mut out = String::new();
    out.push_str(&format!("\\ DARPDP model for instance {}\n", inst.name));
    out.push_str("\\ variables: x_i_j_k arc binaries, y_i_k service binaries,\n");
    out.push_str("\\ T_i_k service starts, Q_i_k loads, L_k lateness slack.\n");
    out.push_str("\\ time windows and load limits are enforced in Bounds.\n");
    out.push_str(&format!(
        "\\ n={n} requests, m={m} vehicles, |V|={nv}, min served={}\n",
        inst.min_served()
    ));

    // Objective.
    out.push_str("Minimize\n obj: ");
    let mut terms = Vec::new();
    for k in 0..m {
        for i in 0..nv {
            for j in 0..nv {
                if i != j {
                    let c = params.w1 * inst.travel_time(i, j);
                    terms.push(format!("{} {}", fmt(c), x(i, j, k)));
                }
            }
        }
    }
    for k in 0..m {
        terms.push(format!("{} {}", fmt(params.w2), l(k)));
    }
    push_expr(&mut out, &terms);
    out.push('\n');

    out.push_str("Subject To\n");

    // Service level: total served pickups at least the minimum.
    let mut terms = Vec::new();
    for r in &inst.requests {
        for k in 0..m {
            terms.push(y(r.pickup, k));
        }
    }
    out.push_str(" served: ");
    push_expr(&mut out, &terms);
    out.push_str(&format!(" >= {}\n", inst.min_served()));

    // Each pickup served at most once.
    for r in &inst.requests {
        let terms: Vec<String> = (0..m).map(|k| y(r.pickup, k)).collect();
        out.push_str(&format!(" once_{}: ", r.id));
        push_expr(&mut out, &terms);
        out.push_str(" <= 1\n");
    }

    // Arc use is consistent with service.
    for r in &inst.requests {
        let mut terms = Vec::new();
        for k in 0..m {
            for j in 0..nv {
                if j != r.pickup {
                    terms.push(x(r.pickup, j, k));
                }
            }
        }
        for k in 0..m {
            terms.push(format!("-{}", y(r.pickup, k)));
        }
        out.push_str(&format!(" link_{}: ", r.id));
        push_expr(&mut out, &terms);
        out.push_str(" = 0\n");
    }

    // Pickup and delivery ride in the same vehicle.
    for r in &inst.requests {
        for k in 0..m {
            let dest = inst.vehicle(k).destination;
            let mut terms = Vec::new();
            for j in 0..nv {
                if j != dest && j != r.pickup {
                    terms.push(x(j, r.pickup, k));
                }
            }
            for j in 0..nv {
                if j != dest && j != r.delivery {
                    terms.push(format!("-{}", x(j, r.delivery, k)));
                }
            }
            out.push_str(&format!(" pair_{}_{}: ", r.id, k));
            push_expr(&mut out, &terms);
            out.push_str(" = 0\n");
        }
    }

    // Every vehicle leaves its origin exactly once, not straight into a
    // delivery.
    for k in 0..m {
        let origin = inst.vehicle(k).origin;
        let deliveries: Vec<usize> = inst.requests.iter().map(|r| r.delivery).collect();
        let terms: Vec<String> = (0..nv)
            .filter(|&j| j != origin && !deliveries.contains(&j))
            .map(|j| x(origin, j, k))
            .collect();
        out.push_str(&format!(" depart_{k}: "));
        push_expr(&mut out, &terms);
        out.push_str(" = 1\n");
    }

    // Flow conservation on request vertices.
    for &i in &request_vertices {
        for k in 0..m {
            let v = inst.vehicle(k);
            let mut terms = Vec::new();
            for j in 0..nv {
                if j != v.destination && j != i {
                    terms.push(x(j, i, k));
                }
            }
            for j in 0..nv {
                if j != v.origin && j != i {
                    terms.push(format!("-{}", x(i, j, k)));
                }
            }
            out.push_str(&format!(" flow_{i}_{k}: "));
            push_expr(&mut out, &terms);
            out.push_str(" = 0\n");
        }
    }

    // Every vehicle arrives at its destination exactly once, not straight
    // from a pickup.
    for k in 0..m {
        let dest = inst.vehicle(k).destination;
        let pickups: Vec<usize> = inst.requests.iter().map(|r| r.pickup).collect();
        let terms: Vec<String> = (0..nv)
            .filter(|&i| i != dest && !pickups.contains(&i))
            .map(|i| x(i, dest, k))
            .collect();
        out.push_str(&format!(" arrive_{k}: "));
        push_expr(&mut out, &terms);
        out.push_str(" = 1\n");
    }

    // Time consistency along used arcs, big-M tightened per arc.
    for k in 0..m {
        for i in 0..nv {
            for j in 0..nv {
                if i == j {
                    continue;
                }
                let vi = inst.vertex(i);
                let vj = inst.vertex(j);
                let travel = inst.travel_time(i, j);
                let big_m = (latest_start(i) + vi.service + travel - vj.earliest).max(0.0);
                out.push_str(&format!(
                    " time_{i}_{j}_{k}: {} - {} + {} {} <= {}\n",
                    t(i, k),
                    t(j, k),
                    fmt(big_m),
                    x(i, j, k),
                    fmt(big_m - vi.service - travel)
                ));
            }
        }
    }

    // Ride-time window per request and vehicle.
    for r in &inst.requests {
        let direct = inst.travel_time(r.pickup, r.delivery);
        let service = inst.vertex(r.pickup).service;
        for k in 0..m {
            out.push_str(&format!(
                " ride_lo_{}_{}: {} - {} >= {}\n",
                r.id,
                k,
                t(r.delivery, k),
                t(r.pickup, k),
                fmt(direct + service)
            ));
            out.push_str(&format!(
                " ride_hi_{}_{}: {} - {} <= {}\n",
                r.id,
                k,
                t(r.delivery, k),
                t(r.pickup, k),
                fmt(inst.max_ride_time + service)
            ));
        }
    }

    // Load propagation along used arcs; M is the vehicle capacity.
    for k in 0..m {
        let cap = inst.vehicle(k).capacity as f64;
        for i in 0..nv {
            for j in 0..nv {
                if i == j {
                    continue;
                }
                let qj = inst.vertex(j).load_delta as f64;
                out.push_str(&format!(
                    " load_{i}_{j}_{k}: {} - {} + {} {} <= {}\n",
                    q(i, k),
                    q(j, k),
                    fmt(cap),
                    x(i, j, k),
                    fmt(cap - qj)
                ));
            }
        }
    }

    // Lateness slack: L_k >= T at destination minus its latest.
    for k in 0..m {
        let v = inst.vehicle(k);
        out.push_str(&format!(
            " late_{k}: {} - {} <= {}\n",
            t(v.destination, k),
            l(k),
            fmt(inst.vertex(v.destination).latest)
        ));
    }

    // Route duration.
    if options.include_duration {
        for k in 0..m {
            let v = inst.vehicle(k);
            out.push_str(&format!(
                " duration_{k}: {} - {} <= {}\n",
                t(v.destination, k),
                t(v.origin, k),
                fmt(inst.max_route_duration)
            ));
        }
    }

    // Bounds: time windows, loads, slack positivity, no self-loops.
    out.push_str("Bounds\n");
    for k in 0..m {
        let v = inst.vehicle(k);
        for i in 0..nv {
            let vx = inst.vertex(i);
            let hi = if i == v.destination { vx.latest + v.dest_tolerance } else { vx.latest };
            out.push_str(&format!(" {} <= {} <= {}\n", fmt(vx.earliest), t(i, k), fmt(hi)));
        }
        let cap = v.capacity as f64;
        for i in 0..nv {
            let qi = inst.vertex(i).load_delta as f64;
            if i == v.origin || i == v.destination {
                out.push_str(&format!(" {} = 0\n", q(i, k)));
            } else {
                out.push_str(&format!(
                    " {} <= {} <= {}\n",
                    fmt(qi.max(0.0)),
                    q(i, k),
                    fmt(cap.min(cap + qi))
                ));
            }
        }
        out.push_str(&format!(" 0 <= {}\n", l(k)));
        for i in 0..nv {
            out.push_str(&format!(" {} = 0\n", x(i, i, k)));
        }
    }

    // Binary declarations.
    out.push_str("Binaries\n");
    for k in 0..m {
        for i in 0..nv {
            let mut line = String::from(" ");
            for j in 0..nv {
                if j > 0 {
                    line.push(' ');
                }
                line.push_str(&x(i, j, k));
            }
            out.push_str(&line);
            out.push('\n');
        }
    }
    for r in &inst.requests {
        let mut line = String::from(" ");
        for k in 0..m {
            if k > 0 {
                line.push(' ');
            }
            line.push_str(&y(r.pickup, k));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("End\n");
    out
}
