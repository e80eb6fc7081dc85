//! Chart files: TOML documents describing coordinates, truncation bounds and
//! a connection.
//!
//! ```toml
//! [truncation]
//! Q = 4   # symmetric weight, operator order and filtration weight
//! P = 2   # form degree of sampled sections
//! B = 3   # base degree of sampled coefficients
//!
//! [flags]
//! torsion_free = true
//!
//! [[coordinates]]
//! name = "x1"
//! degree = 0
//!
//! [[coordinates]]
//! name = "x2"
//! degree = 0
//!
//! # ∇_{∂_i} ∂_j = Σ_k Γ^k_{ij} ∂_k, indices 1-based
//! [[christoffel]]
//! i = 1
//! j = 1
//! k = 2
//! poly = "x2"
//! ```
//!
//! Repeated Christoffel entries add up. When `torsion_free` is omitted it is
//! inferred from the table; when given it must agree with it.

use std::path::Path;

use graded_pbw::geometry::Connection;
use graded_pbw::{Chart, Coordinate, Truncation};
use serde::Deserialize;

use crate::error::CliError;
use crate::parse::parse_poly;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartFile {
    truncation: TruncationSection,
    #[serde(default)]
    flags: Flags,
    coordinates: Vec<CoordinateEntry>,
    #[serde(default)]
    christoffel: Vec<ChristoffelEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TruncationSection {
    #[serde(rename = "Q")]
    q: u32,
    #[serde(rename = "P")]
    p: u32,
    #[serde(rename = "B")]
    b: u32,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Flags {
    torsion_free: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoordinateEntry {
    name: String,
    degree: i32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChristoffelEntry {
    i: usize,
    j: usize,
    k: usize,
    poly: String,
}

/// Reads a chart file. `max_weight` overrides the file's `Q`.
pub fn load(path: &Path, max_weight: Option<u32>) -> Result<Connection, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_chart(&text, max_weight)
}

/// Parses the text of a chart file.
pub fn parse_chart(text: &str, max_weight: Option<u32>) -> Result<Connection, CliError> {
    let file: ChartFile = toml::from_str(text).map_err(|e| CliError::Chart(e.to_string()))?;
    let t = &file.truncation;
    let coords = file
        .coordinates
        .iter()
        .map(|c| Coordinate::new(c.name.clone(), c.degree))
        .collect();
    let chart = Chart::new(coords, Truncation::new(max_weight.unwrap_or(t.q), t.p, t.b))?;
    let n = chart.dim();
    let mut entries = Vec::with_capacity(file.christoffel.len());
    for (pos, e) in file.christoffel.iter().enumerate() {
        let index = |v: usize| {
            if (1..=n).contains(&v) {
                Ok(v - 1)
            } else {
                Err(CliError::Chart(format!(
                    "christoffel entry {}: index {v} outside 1..={n}",
                    pos + 1
                )))
            }
        };
        let poly = parse_poly(&chart, &e.poly).map_err(|err| {
            CliError::Chart(format!("christoffel entry {}: {err}", pos + 1))
        })?;
        entries.push((index(e.i)?, index(e.j)?, index(e.k)?, poly));
    }
    let declared = file.flags.torsion_free;
    let connection = Connection::new(&chart, entries.clone(), declared.unwrap_or(false))?;
    let symmetric = connection.has_symmetric_christoffels();
    match declared {
        Some(false) if symmetric => Err(CliError::Chart(
            "flags.torsion_free = false but the connection has no torsion".into(),
        )),
        None if symmetric => Ok(Connection::new(&chart, entries, true)?),
        _ => Ok(connection),
    }
}
