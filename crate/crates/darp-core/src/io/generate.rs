//! Benchmark instance generation from taxi trip records.
//!
//! Trips become requests: the recorded pickup/dropoff times center the time
//! windows, zone centroids give the coordinates. Driver origins are drawn
//! from pickup zones, driver destinations from dropoff zones, with the
//! destination window landing near the end of the two-hour horizon.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::IoError;
use crate::model::{Instance, Request, Vehicle, Vertex};

/// A taxi trip joined with zone-centroid coordinates. Times are minutes
/// from midnight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripRecord {
    pub pickup_location_id: u32,
    pub dropoff_location_id: u32,
    pub pickup_minutes: f64,
    pub dropoff_minutes: f64,
    pub trip_distance: f64,
    pub pickup_xy: (f64, f64),
    pub dropoff_xy: (f64, f64),
}

/// How the fleet size derives from the request count n/9.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FleetRule {
    Floor,
    Ceil,
}

impl FleetRule {
    pub fn fleet_size(self, n: usize) -> usize {
        let raw = n as f64 / 9.0;
        let m = match self {
            FleetRule::Floor => raw.floor() as usize,
            FleetRule::Ceil => raw.ceil() as usize,
        };
        m.max(1)
    }
}

/// Generation recipe: client window width (5 = type a, 10 = type b), fleet
/// rule, and the fixed horizon and driver-window parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Scenario {
    pub tw_width: f64,
    pub fleet_rule: FleetRule,
    pub horizon: (f64, f64),
    pub driver_dest_earliest_range: (f64, f64),
    pub driver_dest_width: f64,
    pub dest_tolerance: f64,
    pub time_factor: f64,
    pub max_route_duration: f64,
    pub max_ride_time: f64,
    pub service_time: f64,
    pub capacity: i32,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            tw_width: 5.0,
            fleet_rule: FleetRule::Floor,
            horizon: (490.0, 610.0),
            driver_dest_earliest_range: (550.0, 595.0),
            driver_dest_width: 15.0,
            dest_tolerance: 5.0,
            time_factor: 2.0,
            max_route_duration: 90.0,
            max_ride_time: 30.0,
            service_time: 0.5,
            capacity: 3,
        }
    }
}

impl Scenario {
    /// Narrow five-minute client windows.
    pub fn type_a(fleet_rule: FleetRule) -> Scenario {
        Scenario { tw_width: 5.0, fleet_rule, ..Scenario::default() }
    }

    /// Medium ten-minute client windows.
    pub fn type_b(fleet_rule: FleetRule) -> Scenario {
        Scenario { tw_width: 10.0, fleet_rule, ..Scenario::default() }
    }

    pub fn type_tag(&self) -> &'static str {
        if self.tw_width <= 5.0 {
            "a"
        } else {
            "b"
        }
    }
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("only {available} usable trips in the horizon, {needed} needed")]
    InsufficientTrips { available: usize, needed: usize },
}

/// Parses the trip CSV (by header name) and joins zone centroids; records
/// with unknown zones or inverted timestamps are dropped.
pub fn parse_trips(trips_csv: &str, zones_csv: &str) -> Result<Vec<TripRecord>, IoError> {
    let mut zones: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    let mut zr = csv::Reader::from_reader(zones_csv.as_bytes());
    let zh = zr.headers()?.clone();
    let zcol = |name: &str| -> Result<usize, IoError> {
        zh.iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IoError::Other(format!("zone csv misses column {name}")))
    };
    let (zid, zx, zy) = (zcol("LocationID")?, zcol("x")?, zcol("y")?);
    for row in zr.records() {
        let row = row?;
        let id: u32 = row[zid]
            .trim()
            .parse()
            .map_err(|_| IoError::Other(format!("bad zone id {:?}", &row[zid])))?;
        let x: f64 = row[zx].trim().parse().unwrap_or(f64::NAN);
        let y: f64 = row[zy].trim().parse().unwrap_or(f64::NAN);
        if x.is_finite() && y.is_finite() {
            zones.insert(id, (x, y));
        }
    }

    let mut tr = csv::Reader::from_reader(trips_csv.as_bytes());
    let th = tr.headers()?.clone();
    let tcol = |name: &str| -> Result<usize, IoError> {
        th.iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IoError::Other(format!("trip csv misses column {name}")))
    };
    let pu = tcol("PULocationID")?;
    let du = tcol("DOLocationID")?;
    let pt = tcol("tpep_pickup_datetime")?;
    let dt = tcol("tpep_dropoff_datetime")?;
    let dist = tcol("trip_distance")?;

    let mut trips = Vec::new();
    for row in tr.records() {
        let row = row?;
        let (Ok(pu_id), Ok(do_id)) =
            (row[pu].trim().parse::<u32>(), row[du].trim().parse::<u32>())
        else {
            continue;
        };
        let (Some(p_min), Some(d_min)) =
            (datetime_minutes(row[pt].trim()), datetime_minutes(row[dt].trim()))
        else {
            continue;
        };
        let Ok(distance) = row[dist].trim().parse::<f64>() else {
            continue;
        };
        if p_min > d_min {
            continue;
        }
        let (Some(&pxy), Some(&dxy)) = (zones.get(&pu_id), zones.get(&do_id)) else {
            continue;
        };
        trips.push(TripRecord {
            pickup_location_id: pu_id,
            dropoff_location_id: do_id,
            pickup_minutes: p_min,
            dropoff_minutes: d_min,
            trip_distance: distance,
            pickup_xy: pxy,
            dropoff_xy: dxy,
        });
    }
    Ok(trips)
}

/// Minutes from midnight of a "YYYY-MM-DD HH:MM:SS" timestamp.
fn datetime_minutes(text: &str) -> Option<f64> {
    let time = text.split_whitespace().nth(1)?;
    let mut parts = time.split(':');
    let h: f64 = parts.next()?.parse().ok()?;
    let m: f64 = parts.next()?.parse().ok()?;
    let s: f64 = parts.next().unwrap_or("0").parse().ok()?;
    Some(h * 60.0 + m + s / 60.0)
}

/// Trips inside the horizon that a schedule could actually serve: the ride
/// must fit the maximum ride time and the windows implied by the scenario.
fn usable_trips(trips: &[TripRecord], scenario: &Scenario) -> Vec<TripRecord> {
    let (lo, hi) = scenario.horizon;
    trips
        .iter()
        .filter(|t| {
            let duration = t.dropoff_minutes - t.pickup_minutes;
            let direct = euclid(t.pickup_xy, t.dropoff_xy) * scenario.time_factor;
            t.pickup_minutes >= lo
                && t.dropoff_minutes <= hi
                && duration <= scenario.max_ride_time
                && direct <= scenario.max_ride_time
                && direct + scenario.service_time <= duration + scenario.tw_width
        })
        .cloned()
        .collect()
}

fn euclid(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Generates one instance per requested size. Deterministic for a given
/// seed: each size draws from its own seeded stream.
pub fn generate_instances(
    trips: &[TripRecord],
    sizes: &[usize],
    scenario: &Scenario,
    seed: u64,
) -> Result<Vec<Instance>, GenerateError> {
    let pool = usable_trips(trips, scenario);
    let mut out = Vec::with_capacity(sizes.len());
    for &n in sizes {
        if pool.len() < n {
            return Err(GenerateError::InsufficientTrips { available: pool.len(), needed: n });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e3779b97f4a7c15));
        out.push(build_instance(&pool, n, scenario, &mut rng));
    }
    Ok(out)
}

fn build_instance(
    pool: &[TripRecord],
    n: usize,
    scenario: &Scenario,
    rng: &mut ChaCha8Rng,
) -> Instance {
    let m = scenario.fleet_rule.fleet_size(n);
    let mut indices: Vec<usize> = (0..pool.len()).collect();
    indices.shuffle(rng);
    let chosen: Vec<&TripRecord> = indices[..n].iter().map(|&i| &pool[i]).collect();

    let half = scenario.tw_width / 2.0;
    let mut vertices = Vec::with_capacity(2 * (n + m));

    // Canonical layout: origins, pickups, deliveries, destinations.
    let mut origin_xy = Vec::with_capacity(m);
    for _ in 0..m {
        origin_xy.push(pool[rng.random_range(0..pool.len())].pickup_xy);
    }
    let mut dest_draws = Vec::with_capacity(m);
    for _ in 0..m {
        let xy = pool[rng.random_range(0..pool.len())].dropoff_xy;
        let e = rng.random_range(
            scenario.driver_dest_earliest_range.0..scenario.driver_dest_earliest_range.1,
        );
        dest_draws.push((xy, e));
    }

    for (k, &(x, y)) in origin_xy.iter().enumerate() {
        vertices.push(Vertex {
            id: k,
            x,
            y,
            earliest: scenario.horizon.0,
            latest: scenario.horizon.1,
            service: 0.0,
            load_delta: 0,
        });
    }
    for (i, trip) in chosen.iter().enumerate() {
        vertices.push(Vertex {
            id: m + i,
            x: trip.pickup_xy.0,
            y: trip.pickup_xy.1,
            earliest: trip.pickup_minutes - half,
            latest: trip.pickup_minutes + half,
            service: scenario.service_time,
            load_delta: 1,
        });
    }
    for (i, trip) in chosen.iter().enumerate() {
        vertices.push(Vertex {
            id: m + n + i,
            x: trip.dropoff_xy.0,
            y: trip.dropoff_xy.1,
            earliest: trip.dropoff_minutes - half,
            latest: trip.dropoff_minutes + half,
            service: scenario.service_time,
            load_delta: -1,
        });
    }
    let mut vehicles = Vec::with_capacity(m);
    for (k, &((x, y), e)) in dest_draws.iter().enumerate() {
        let id = m + 2 * n + k;
        vertices.push(Vertex {
            id,
            x,
            y,
            earliest: e,
            latest: e + scenario.driver_dest_width,
            service: 0.0,
            load_delta: 0,
        });
        vehicles.push(Vehicle {
            id: k,
            origin: k,
            destination: id,
            capacity: scenario.capacity,
            dest_tolerance: scenario.dest_tolerance,
        });
    }

    Instance {
        name: format!("inst_{}{}_{}", scenario.type_tag(), n, m),
        vertices,
        requests: (0..n)
            .map(|i| Request { id: i, pickup: m + i, delivery: m + n + i, demand: 1 })
            .collect(),
        vehicles,
        max_route_duration: scenario.max_route_duration,
        max_ride_time: scenario.max_ride_time,
        time_factor: scenario.time_factor,
        served_fraction_min: 0.8,
    }
}

/// The published benchmark sizes.
pub const SUITE_SIZES: [usize; 7] = [10, 15, 20, 30, 50, 100, 200];

/// Generates the full 28-instance suite: every size under the four
/// scenarios (a/b windows x floor/ceil fleets).
pub fn generate_suite(trips: &[TripRecord], seed: u64) -> Result<Vec<Instance>, GenerateError> {
    let mut out = Vec::with_capacity(28);
    for scenario in [
        Scenario::type_a(FleetRule::Floor),
        Scenario::type_a(FleetRule::Ceil),
        Scenario::type_b(FleetRule::Floor),
        Scenario::type_b(FleetRule::Ceil),
    ] {
        out.extend(generate_instances(trips, &SUITE_SIZES, &scenario, seed)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_instance;
    use crate::synthetic;

    #[test]
    fn fleet_rule_matches_published_pairs() {
        let pairs: Vec<(usize, usize, usize)> = SUITE_SIZES
            .iter()
            .map(|&n| (n, FleetRule::Floor.fleet_size(n), FleetRule::Ceil.fleet_size(n)))
            .collect();
        assert_eq!(
            pairs,
            vec![
                (10, 1, 2),
                (15, 1, 2),
                (20, 2, 3),
                (30, 3, 4),
                (50, 5, 6),
                (100, 11, 12),
                (200, 22, 23),
            ]
        );
    }

    #[test]
    fn generated_instances_validate() {
        let trips = synthetic::random_trips(300, 3);
        let insts =
            generate_instances(&trips, &[10, 30], &Scenario::type_b(FleetRule::Ceil), 11).unwrap();
        for inst in &insts {
            assert!(validate_instance(inst).is_valid(), "{}", inst.name);
        }
        assert_eq!(insts[0].name, "inst_b10_2");
        assert_eq!(insts[1].name, "inst_b30_4");
    }

    #[test]
    fn generation_is_deterministic() {
        let trips = synthetic::random_trips(260, 5);
        let a = generate_instances(&trips, &[20], &Scenario::type_a(FleetRule::Floor), 42).unwrap();
        let b = generate_instances(&trips, &[20], &Scenario::type_a(FleetRule::Floor), 42).unwrap();
        assert_eq!(a, b);
        let c = generate_instances(&trips, &[20], &Scenario::type_a(FleetRule::Floor), 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn insufficient_trips_is_an_error() {
        let trips = synthetic::random_trips(5, 1);
        let err = generate_instances(&trips, &[10], &Scenario::default(), 0).unwrap_err();
        assert!(matches!(err, GenerateError::InsufficientTrips { .. }));
    }

    #[test]
    fn csv_parsing_drops_bad_records() {
        let (trips_csv, zones_csv) = synthetic::random_trips_csv(50, 9);
        let mut with_junk = trips_csv.clone();
        with_junk.push_str("999,1,2021-01-15 09:00:00,2021-01-15 09:10:00,1.0\n"); // unknown zone
        with_junk.push_str("1,2,2021-01-15 09:30:00,2021-01-15 09:10:00,1.0\n"); // inverted times
        let parsed = parse_trips(&with_junk, &zones_csv).unwrap();
        assert_eq!(parsed.len(), 50);
        let round = parse_trips(&trips_csv, &zones_csv).unwrap();
        assert_eq!(round.len(), 50);
    }
}
