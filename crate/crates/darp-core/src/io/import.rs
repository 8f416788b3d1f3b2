//! Best-effort importer for externally published instance files.
//!
//! Accepts our native JSON directly. For whitespace-table files it expects
//! the layout `m n T_r Q T_M` on the first line followed by one
//! `id x y service load earliest latest` row per vertex, with per-vehicle
//! origins first and per-vehicle destinations last. Anything that cannot be
//! mapped faithfully is reported as an error instead of being guessed.

use thiserror::Error;

use super::parse_instance;
use crate::model::{validate_instance, Instance, Request, Vehicle, Vertex};

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("unrecognized format: {0}")]
    Unrecognized(String),
    #[error("table header: {0}")]
    Header(String),
    #[error("vertex row {row}: {detail}")]
    Row { row: usize, detail: String },
    #[error("imported instance fails validation: {0}")]
    Invalid(String),
}

/// Attempts to read an instance from foreign text.
pub fn import_instance(text: &str, name: &str) -> Result<Instance, ImportError> {
    if text.trim_start().starts_with('{') {
        return parse_instance(text)
            .map_err(|e| ImportError::Unrecognized(format!("json candidate failed: {e}")));
    }
    import_table(text, name)
}

fn import_table(text: &str, name: &str) -> Result<Instance, ImportError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| ImportError::Header("empty file".into()))?;
    let head: Vec<f64> = header
        .split_whitespace()
        .map(|t| t.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| ImportError::Header(format!("non-numeric header: {e}")))?;
    if head.len() != 5 {
        return Err(ImportError::Header(format!(
            "expected 5 fields (m n T_r Q T_M), found {}",
            head.len()
        )));
    }
    let m = head[0] as usize;
    let n = head[1] as usize;
    let (t_r, capacity, t_m) = (head[2], head[3] as i32, head[4]);
    if m == 0 || n == 0 {
        return Err(ImportError::Header("zero vehicles or requests".into()));
    }

    let expected = 2 * (n + m);
    let mut vertices = Vec::with_capacity(expected);
    for (row_idx, line) in lines.enumerate() {
        let cols: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| ImportError::Row { row: row_idx + 2, detail: e.to_string() })?;
        if cols.len() != 7 {
            return Err(ImportError::Row {
                row: row_idx + 2,
                detail: format!("expected 7 columns, found {}", cols.len()),
            });
        }
        vertices.push(Vertex {
            id: vertices.len(),
            x: cols[1],
            y: cols[2],
            service: cols[3],
            load_delta: cols[4] as i32,
            earliest: cols[5],
            latest: cols[6],
        });
    }
    if vertices.len() != expected {
        return Err(ImportError::Unrecognized(format!(
            "found {} vertex rows, expected 2(n+m) = {expected}",
            vertices.len()
        )));
    }

    let requests = (0..n)
        .map(|i| Request { id: i, pickup: m + i, delivery: m + n + i, demand: vertices[m + i].load_delta })
        .collect();
    let vehicles = (0..m)
        .map(|k| Vehicle {
            id: k,
            origin: k,
            destination: m + 2 * n + k,
            capacity,
            dest_tolerance: 5.0,
        })
        .collect();

    let inst = Instance {
        name: name.to_string(),
        vertices,
        requests,
        vehicles,
        max_route_duration: t_r,
        max_ride_time: t_m,
        time_factor: 1.0,
        served_fraction_min: 0.8,
    };
    let report = validate_instance(&inst);
    if !report.is_valid() {
        return Err(ImportError::Invalid(report.violations.join("; ")));
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::write_instance;
    use crate::synthetic;

    #[test]
    fn native_json_imports() {
        let inst = synthetic::two_request_line();
        let imported = import_instance(&write_instance(&inst), "x").unwrap();
        assert_eq!(imported, inst);
    }

    #[test]
    fn well_formed_table_imports() {
        let text = "\
1 2 240 3 60
0 0 0 0 0 0 240
1 1 0 0 1 0 240
2 3 0 0 1 0 240
3 2 0 0 -1 0 240
4 4 0 0 -1 0 240
5 6 0 0 0 0 240
";
        let inst = import_instance(text, "table").unwrap();
        assert_eq!(inst.num_requests(), 2);
        assert_eq!(inst.num_vehicles(), 1);
        assert_eq!(inst.requests[0].pickup, 1);
        assert_eq!(inst.requests[0].delivery, 3);
    }

    #[test]
    fn malformed_table_is_reported_not_guessed() {
        let err = import_instance("1 2 240 3\n0 0 0 0 0 0 240\n", "bad").unwrap_err();
        assert!(matches!(err, ImportError::Header(_)), "{err}");
        let err = import_instance("1 1 240 3 60\n0 0 0 0 0 0 240\n", "short").unwrap_err();
        assert!(matches!(err, ImportError::Unrecognized(_)), "{err}");
    }
}
