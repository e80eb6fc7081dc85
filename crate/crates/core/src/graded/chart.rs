use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest number of coordinates a chart may carry.
pub const MAX_COORDINATES: usize = 8;
/// Base, fiber and form generators for every coordinate.
pub const MAX_GENERATORS: usize = 3 * MAX_COORDINATES;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coordinate {
    pub name: String,
    pub degree: i32,
}

impl Coordinate {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Self {
            name: name.into(),
            degree,
        }
    }
}

/// Truncation bounds of a chart.
///
/// `max_sym_weight` bounds symmetric weight, operator order and the total
/// filtration weight `p + q` of form-valued fiber polynomials.
/// `max_form_degree` and `max_base_degree` bound the inputs that samplers
/// and verifiers produce; exact operations never cut base degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Truncation {
    pub max_sym_weight: u32,
    pub max_form_degree: u32,
    pub max_base_degree: u32,
}

impl Truncation {
    pub fn new(max_sym_weight: u32, max_form_degree: u32, max_base_degree: u32) -> Self {
        Self {
            max_sym_weight,
            max_form_degree,
            max_base_degree,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorKind {
    /// Coordinate function `x_i`.
    Base,
    /// Fiberwise linear function `y_i` on the tangent bundle.
    Fiber,
    /// One-form `dx_i`.
    Form,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub index: usize,
}

impl Generator {
    pub fn base(index: usize) -> Self {
        Self {
            kind: GeneratorKind::Base,
            index,
        }
    }

    pub fn fiber(index: usize) -> Self {
        Self {
            kind: GeneratorKind::Fiber,
            index,
        }
    }

    pub fn form(index: usize) -> Self {
        Self {
            kind: GeneratorKind::Form,
            index,
        }
    }
}

/// A single polynomial coordinate chart: an ordered list of graded
/// coordinates together with truncation bounds.
///
/// Generator slots are laid out as all base generators, then all fiber
/// generators, then all form generators, each block in coordinate order.
/// That layout is the canonical factor order of every monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    coordinates: Vec<Coordinate>,
    truncation: Truncation,
}

impl Chart {
    pub fn new(coordinates: Vec<Coordinate>, truncation: Truncation) -> Result<Arc<Self>> {
        if coordinates.is_empty() {
            return Err(Error::InvalidChart("a chart needs at least one coordinate".into()));
        }
        if coordinates.len() > MAX_COORDINATES {
            return Err(Error::InvalidChart(format!(
                "at most {MAX_COORDINATES} coordinates are supported, got {}",
                coordinates.len()
            )));
        }
        for (i, c) in coordinates.iter().enumerate() {
            if !is_identifier(&c.name) {
                return Err(Error::InvalidChart(format!(
                    "coordinate name {:?} is not an identifier",
                    c.name
                )));
            }
            if coordinates[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::InvalidChart(format!(
                    "duplicate coordinate name {:?}",
                    c.name
                )));
            }
        }
        if truncation.max_sym_weight < 1 {
            return Err(Error::InvalidChart("max_sym_weight must be at least 1".into()));
        }
        if truncation.max_form_degree < 2 {
            return Err(Error::InvalidChart("max_form_degree must be at least 2".into()));
        }
        if truncation.max_base_degree < 1 {
            return Err(Error::InvalidChart("max_base_degree must be at least 1".into()));
        }
        Ok(Arc::new(Self {
            coordinates,
            truncation,
        }))
    }

    /// Same coordinates with a different symmetric-weight bound.
    pub fn with_max_sym_weight(&self, max_sym_weight: u32) -> Result<Arc<Self>> {
        let mut truncation = self.truncation;
        truncation.max_sym_weight = max_sym_weight;
        Self::new(self.coordinates.clone(), truncation)
    }

    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[Coordinate] {
        &self.coordinates
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn max_sym_weight(&self) -> u32 {
        self.truncation.max_sym_weight
    }

    /// Degree `|x_i|` of coordinate `i`.
    pub fn degree(&self, i: usize) -> i32 {
        self.coordinates[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.degree(i).rem_euclid(2) == 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coordinates.iter().position(|c| c.name == name)
    }

    pub fn num_generators(&self) -> usize {
        3 * self.dim()
    }

    pub fn slot(&self, g: Generator) -> usize {
        debug_assert!(g.index < self.dim());
        let n = self.dim();
        match g.kind {
            GeneratorKind::Base => g.index,
            GeneratorKind::Fiber => n + g.index,
            GeneratorKind::Form => 2 * n + g.index,
        }
    }

    pub fn generator_at(&self, slot: usize) -> Generator {
        let n = self.dim();
        match slot / n {
            0 => Generator::base(slot),
            1 => Generator::fiber(slot - n),
            _ => Generator::form(slot - 2 * n),
        }
    }

    /// `|x_i|` for base and fiber generators, `1 + |x_i|` for `dx_i`.
    pub fn generator_degree(&self, g: Generator) -> i32 {
        match g.kind {
            GeneratorKind::Base | GeneratorKind::Fiber => self.degree(g.index),
            GeneratorKind::Form => 1 + self.degree(g.index),
        }
    }

    pub fn slot_degree(&self, slot: usize) -> i32 {
        self.generator_degree(self.generator_at(slot))
    }

    pub fn slot_is_odd(&self, slot: usize) -> bool {
        self.slot_degree(slot).rem_euclid(2) == 1
    }

    /// Printed name of a generator: `x`, `y[x]`, `dx[x]`.
    pub fn generator_name(&self, g: Generator) -> String {
        let name = &self.coordinates[g.index].name;
        match g.kind {
            GeneratorKind::Base => name.clone(),
            GeneratorKind::Fiber => format!("y[{name}]"),
            GeneratorKind::Form => format!("dx[{name}]"),
        }
    }
}

/// Charts are compatible when they carry the same coordinates; truncation
/// bounds may differ.
pub(crate) fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
    Arc::ptr_eq(a, b) || a.coordinates == b.coordinates
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
