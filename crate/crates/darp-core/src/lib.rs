//! Solver toolkit for the dial-a-ride problem with driver preferences:
//! multi-vehicle pickup-and-delivery routing under time windows, ride-time
//! limits and a per-driver destination window with a lateness penalty.
//!
//! The crate provides the full metaheuristic (clustered construction,
//! learning local search, path relinking, destroy/repair perturbation and
//! an annealing acceptance rule), an exhaustive solver for tiny instances,
//! an LP-format model exporter, a benchmark instance generator and KPI
//! reporting.

pub mod construct;
pub mod engine;
pub mod exact;
pub mod io;
pub mod neighborhoods;
pub mod lns;
pub mod model;
pub mod relink;
pub mod schedule;
pub mod synthetic;
