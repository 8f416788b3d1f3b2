//! Deterministic synthetic data: hand-sized fixtures, random instances for
//! stress tests and a fake trip corpus for exercising the generator without
//! real taxi data.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::io::generate::TripRecord;
use crate::model::{Instance, Request, Vehicle, Vertex};

fn vertex(id: usize, x: f64, y: f64, e: f64, l: f64, s: f64, q: i32) -> Vertex {
    Vertex { id, x, y, earliest: e, latest: l, service: s, load_delta: q }
}

/// One vehicle, two requests laid out on a line. Travel times equal
/// distances (time_factor 1), so costs are easy to trace by hand.
///
/// Layout: origin (0,0) -> p0 (1,0) -> d0 (2,0) -> p1 (3,0) -> d1 (4,0)
/// -> destination (6,0).
pub fn two_request_line() -> Instance {
    let mut inst = n_request_line(2);
    inst.name = "two_request_line".into();
    inst
}

/// One vehicle and n requests on a line: pickup i sits at (2i+1, 0), its
/// delivery at (2i+2, 0), the vehicle runs (0,0) -> (2n+2, 0). Windows are
/// wide open so structural constraints dominate.
pub fn n_request_line(n: usize) -> Instance {
    let mut vertices = vec![vertex(0, 0.0, 0.0, 0.0, 240.0, 0.0, 0)];
    for i in 0..n {
        vertices.push(vertex(1 + i, (2 * i + 1) as f64, 0.0, 0.0, 240.0, 0.0, 1));
    }
    for i in 0..n {
        vertices.push(vertex(1 + n + i, (2 * i + 2) as f64, 0.0, 0.0, 240.0, 0.0, -1));
    }
    let dest = 1 + 2 * n;
    vertices.push(vertex(dest, (2 * n + 2) as f64, 0.0, 0.0, 240.0, 0.0, 0));
    Instance {
        name: format!("line_{n}"),
        vertices,
        requests: (0..n)
            .map(|i| Request { id: i, pickup: 1 + i, delivery: 1 + n + i, demand: 1 })
            .collect(),
        vehicles: vec![Vehicle {
            id: 0,
            origin: 0,
            destination: dest,
            capacity: 3,
            dest_tolerance: 5.0,
        }],
        max_route_duration: 240.0,
        max_ride_time: 60.0,
        time_factor: 1.0,
        served_fraction_min: 0.8,
    }
}

/// Random instance with n requests and m vehicles on an 8x8 mile board.
///
/// Windows are wide enough that serving every request is almost always
/// possible, which keeps tiny instances comparable against the exhaustive
/// solver. Deterministic for a given seed.
pub fn random_instance(n: usize, m: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let time_factor = 2.0;
    let service = 0.5;
    let mut vertices = Vec::with_capacity(2 * (n + m));
    let point = |rng: &mut ChaCha8Rng| -> (f64, f64) {
        (rng.random_range(0.0..8.0), rng.random_range(0.0..8.0))
    };

    // Vehicle origins first, then pickups, deliveries, destinations: this
    // keeps delivery = pickup + n.
    let mut origins = Vec::new();
    for _ in 0..m {
        let (x, y) = point(&mut rng);
        origins.push((x, y));
    }
    let mut pickup_data = Vec::new();
    for _ in 0..n {
        let p = point(&mut rng);
        let d = point(&mut rng);
        let center = rng.random_range(500.0..560.0);
        pickup_data.push((p, d, center));
    }

    for (k, (x, y)) in origins.iter().enumerate() {
        vertices.push(vertex(k, *x, *y, 490.0, 610.0, 0.0, 0));
    }
    for (i, ((px, py), _, center)) in pickup_data.iter().enumerate() {
        let id = m + i;
        vertices.push(vertex(id, *px, *py, center - 30.0, center + 30.0, service, 1));
    }
    for (i, (p, (dx, dy), center)) in pickup_data.iter().enumerate() {
        let id = m + n + i;
        let direct =
            ((p.0 - dx).powi(2) + (p.1 - dy).powi(2)).sqrt() * time_factor;
        let dc = center + direct + service + 5.0;
        vertices.push(vertex(id, *dx, *dy, dc - 30.0, dc + 30.0, service, -1));
    }
    let mut vehicles = Vec::new();
    for k in 0..m {
        let id = m + 2 * n + k;
        let (x, y) = point(&mut rng);
        let e = rng.random_range(550.0..595.0);
        vertices.push(vertex(id, x, y, e, e + 15.0, 0.0, 0));
        vehicles.push(Vehicle {
            id: k,
            origin: k,
            destination: id,
            capacity: 3,
            dest_tolerance: 5.0,
        });
    }
    let requests = (0..n)
        .map(|i| Request { id: i, pickup: m + i, delivery: m + n + i, demand: 1 })
        .collect();

    Instance {
        name: format!("rand_n{n}_m{m}_s{seed}"),
        vertices,
        requests,
        vehicles,
        max_route_duration: 240.0,
        max_ride_time: 30.0,
        time_factor,
        served_fraction_min: 0.8,
    }
}

/// Synthetic trip records inside the 08h10-10h10 horizon, standing in for
/// the real taxi corpus: a dense urban core where most pickups fall in a
/// rush band narrow enough for one vehicle's route span, and hops between
/// zones are a few minutes. Zone ids run 1..=40 over a 4x4 mile core.
pub fn random_trips(count: usize, seed: u64) -> Vec<TripRecord> {
    let zones = zone_centroids();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trips = Vec::with_capacity(count);
    for _ in 0..count {
        let pu = rng.random_range(0..zones.len());
        let mut po = rng.random_range(0..zones.len());
        if po == pu {
            po = (po + 1) % zones.len();
        }
        let (pu_id, pux, puy) = zones[pu];
        let (do_id, dox, doy) = zones[po];
        let dist = ((pux - dox).powi(2) + (puy - doy).powi(2)).sqrt();
        // Trips move slower than the planning speed, so the direct travel
        // time always fits inside the recorded duration.
        let duration = (dist * rng.random_range(2.2..3.0)).clamp(2.0, 28.0);
        let pickup = rng.random_range(500.0..(575.0 - duration).max(501.0));
        trips.push(TripRecord {
            pickup_location_id: pu_id,
            dropoff_location_id: do_id,
            pickup_minutes: pickup,
            dropoff_minutes: pickup + duration,
            trip_distance: dist,
            pickup_xy: (pux, puy),
            dropoff_xy: (dox, doy),
        });
    }
    trips
}

/// Fixed fake zone table: (zone id, x, y) with coordinates in miles.
pub fn zone_centroids() -> Vec<(u32, f64, f64)> {
    let mut zones = Vec::new();
    let mut state = 0x9e3779b97f4a7c15u64;
    for id in 1..=40u32 {
        // Cheap deterministic scatter, no rng dependency.
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let x = ((state >> 16) % 250) as f64 / 100.0;
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let y = ((state >> 16) % 250) as f64 / 100.0;
        zones.push((id, x, y));
    }
    zones
}

/// The trip corpus rendered as the two CSV files the generator consumes:
/// (trips, zone centroids).
pub fn random_trips_csv(count: usize, seed: u64) -> (String, String) {
    let trips = random_trips(count, seed);
    let mut t = String::from(
        "PULocationID,DOLocationID,tpep_pickup_datetime,tpep_dropoff_datetime,trip_distance\n",
    );
    for trip in &trips {
        t.push_str(&format!(
            "{},{},{},{},{:.3}\n",
            trip.pickup_location_id,
            trip.dropoff_location_id,
            minutes_to_datetime(trip.pickup_minutes),
            minutes_to_datetime(trip.dropoff_minutes),
            trip.trip_distance,
        ));
    }
    let mut z = String::from("LocationID,x,y\n");
    for (id, x, y) in zone_centroids() {
        z.push_str(&format!("{id},{x:.4},{y:.4}\n"));
    }
    (t, z)
}

fn minutes_to_datetime(minutes: f64) -> String {
    let total_seconds = (minutes * 60.0).round() as u64;
    let h = total_seconds / 3600;
    let m = (total_seconds % 3600) / 60;
    let s = total_seconds % 60;
    format!("2021-01-15 {h:02}:{m:02}:{s:02}")
}
