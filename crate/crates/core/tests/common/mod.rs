//! Test charts shared by the integration suites.
#![allow(dead_code)]

use std::sync::Arc;

use graded_pbw::geometry::Connection;
use graded_pbw::{Chart, Coordinate, GradedPoly, Truncation};

pub fn chart(coords: &[(&str, i32)], q: u32) -> Arc<Chart> {
    Chart::new(
        coords.iter().map(|(n, d)| Coordinate::new(*n, *d)).collect(),
        Truncation::new(q, 2, 3),
    )
    .unwrap()
}

/// `(i, j, k, Γ^k_{ij})` entries with 0-based indices.
pub type Entries = Vec<(usize, usize, usize, GradedPoly)>;

pub fn connection(chart: &Arc<Chart>, entries: Entries) -> Connection {
    Connection::new(chart, entries, true).unwrap()
}

/// One even coordinate with `Γ = 0`.
pub fn flat_line(q: u32) -> Connection {
    Connection::flat(&chart(&[("x", 0)], q))
}

/// One even coordinate with `Γ¹₁₁ = x`.
pub fn e1(q: u32) -> Connection {
    let c = chart(&[("x", 0)], q);
    let x = GradedPoly::x(&c, 0);
    connection(&c, vec![(0, 0, 0, x)])
}

/// Two even coordinates with `Γ²₁₁ = x₂`.
pub fn c2(q: u32) -> Connection {
    let c = chart(&[("x1", 0), ("x2", 0)], q);
    let x2 = GradedPoly::x(&c, 1);
    connection(&c, vec![(0, 0, 1, x2)])
}

/// An even and an odd coordinate with a torsion-free connection.
pub fn mixed(q: u32) -> Connection {
    let c = chart(&[("x", 0), ("t", 1)], q);
    let x = GradedPoly::x(&c, 0);
    let t = GradedPoly::x(&c, 1);
    connection(
        &c,
        vec![
            (0, 0, 0, x.clone()),
            (0, 1, 1, x.clone()),
            (1, 0, 1, x.clone()),
            (0, 0, 1, &x * &t),
        ],
    )
}

/// One even and two odd coordinates.
pub fn two_odd(q: u32) -> Connection {
    let c = chart(&[("x", 0), ("a", 1), ("b", 1)], q);
    let x = GradedPoly::x(&c, 0);
    let a = GradedPoly::x(&c, 1);
    let b = GradedPoly::x(&c, 2);
    connection(
        &c,
        vec![
            (0, 0, 0, x.pow(2)),
            (0, 1, 1, x.clone()),
            (1, 0, 1, x.clone()),
            (0, 2, 1, x.clone()),
            (2, 0, 1, x.clone()),
            (0, 1, 2, GradedPoly::one(&c)),
            (1, 0, 2, GradedPoly::one(&c)),
            (0, 0, 1, &x * &b),
            (0, 0, 2, a),
        ],
    )
}

/// Degrees 0, 1, 2.
pub fn graded3(q: u32) -> Connection {
    let c = chart(&[("x", 0), ("t", 1), ("z", 2)], q);
    let x = GradedPoly::x(&c, 0);
    let t = GradedPoly::x(&c, 1);
    let z = GradedPoly::x(&c, 2);
    let one = GradedPoly::one(&c);
    connection(
        &c,
        vec![
            (0, 0, 0, x.clone()),
            (0, 1, 1, one.clone()),
            (1, 0, 1, one),
            (0, 2, 2, x.clone()),
            (2, 0, 2, x.clone()),
            (0, 0, 2, z),
            (0, 1, 2, t.clone()),
            (1, 0, 2, t.clone()),
            (0, 0, 1, &x * &t),
        ],
    )
}

/// Two even coordinates with a torsionful connection.
pub fn torsionful(q: u32) -> Connection {
    let c = chart(&[("x1", 0), ("x2", 0)], q);
    Connection::new(&c, vec![(0, 1, 0, GradedPoly::one(&c))], false).unwrap()
}

/// All torsion-free test connections with their names.
pub fn torsion_free_charts(q: u32) -> Vec<(&'static str, Connection)> {
    vec![
        ("flat", flat_line(q)),
        ("e1", e1(q)),
        ("c2", c2(q)),
        ("mixed", mixed(q)),
        ("two_odd", two_odd(q)),
        ("graded3", graded3(q)),
    ]
}
