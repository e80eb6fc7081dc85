//! Seeded random inputs for property checks.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::enveloping::{words, SymTensor};
use crate::geometry::VectorField;
use crate::graded::{ratio, Chart, Generator, GradedPoly, Monomial, MultiIndex, Rational};
use crate::pbw::fiber_monomial;

/// Random generator bound to a chart.
pub struct Sampler {
    chart: Arc<Chart>,
    rng: SmallRng,
}

impl Sampler {
    pub fn new(chart: &Arc<Chart>, seed: u64) -> Self {
        Self {
            chart: chart.clone(),
            rng: SmallRng::seed_from_u64(seed),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn rng(&mut self) -> &mut SmallRng {
        &mut self.rng
    }

    /// A nonzero coefficient from a small fixed set.
    pub fn coefficient(&mut self) -> Rational {
        const CHOICES: [(i64, i64); 8] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (1, 2), (-1, 3), (5, 4)];
        let (p, q) = CHOICES[self.rng.gen_range(0..CHOICES.len())];
        ratio(p, q)
    }

    /// Distributes `total` exponent units over `slots`, keeping odd slots at
    /// most 1. Returns `None` if the draw needs an odd slot twice.
    fn spread(&mut self, slots: &[usize], total: u32) -> Option<Monomial> {
        let mut m = Monomial::ONE;
        for _ in 0..total {
            let s = slots[self.rng.gen_range(0..slots.len())];
            let e = m.exp(s) + 1;
            if e > 1 && self.chart.slot_is_odd(s) {
                return None;
            }
            m = m.with_exp(s, e);
        }
        Some(m)
    }

    fn slots(&self, kind: fn(usize) -> Generator) -> Vec<usize> {
        (0..self.chart.dim()).map(|i| self.chart.slot(kind(i))).collect()
    }

    /// A base monomial of total exponent at most `max_degree`.
    pub fn base_monomial(&mut self, max_degree: u32) -> Monomial {
        let slots = self.slots(Generator::base);
        loop {
            let total = self.rng.gen_range(0..=max_degree);
            if let Some(m) = self.spread(&slots, total) {
                return m;
            }
        }
    }

    /// A function with up to `terms` terms, not necessarily homogeneous.
    pub fn function(&mut self, terms: usize, max_degree: u32) -> GradedPoly {
        let mut f = GradedPoly::zero(&self.chart);
        for _ in 0..terms.max(1) {
            let m = self.base_monomial(max_degree);
            let c = self.coefficient();
            f += &GradedPoly::term(&self.chart, m, c);
        }
        f
    }

    /// A homogeneous function: monomials sharing the degree of the first
    /// one drawn.
    pub fn homogeneous_function(&mut self, terms: usize, max_degree: u32) -> GradedPoly {
        let first = self.base_monomial(max_degree);
        let d = first.degree(&self.chart);
        let c = self.coefficient();
        let mut f = GradedPoly::term(&self.chart, first, c);
        for _ in 1..terms {
            let m = self.base_monomial(max_degree);
            if m.degree(&self.chart) == d {
                let c = self.coefficient();
                f += &GradedPoly::term(&self.chart, m, c);
            }
        }
        f
    }

    /// A homogeneous vector field `f ∂_i` with `f` a scaled base monomial.
    pub fn field(&mut self, max_degree: u32) -> VectorField {
        let i = self.rng.gen_range(0..self.chart.dim());
        let m = self.base_monomial(max_degree);
        let c = self.coefficient();
        VectorField::term(&GradedPoly::term(&self.chart, m, c), i)
    }

    /// A coordinate field `∂_i`.
    pub fn coordinate_field(&mut self) -> VectorField {
        let i = self.rng.gen_range(0..self.chart.dim());
        VectorField::coordinate(&self.chart, i)
    }

    /// A basis word of weight exactly `w`, if one exists.
    pub fn word(&mut self, w: u32) -> Option<MultiIndex> {
        let all = words::basis_words(&self.chart, w);
        if all.is_empty() {
            None
        } else {
            Some(all[self.rng.gen_range(0..all.len())])
        }
    }

    /// A symmetric tensor of weight at most `max_weight` with up to `terms`
    /// terms and function coefficients.
    pub fn sym_tensor(&mut self, max_weight: u32, terms: usize, max_degree: u32) -> SymTensor {
        let mut s = SymTensor::zero(&self.chart);
        for _ in 0..terms.max(1) {
            let w = self.rng.gen_range(0..=max_weight);
            if let Some(k) = self.word(w) {
                let f = self.function(2, max_degree);
                s = &s + &SymTensor::term(&self.chart, k, f);
            }
        }
        s
    }

    /// A section of form degree `p` with filtration weight `p + q` at most
    /// `max_weight` and up to `terms` terms.
    pub fn section(&mut self, p: u32, max_weight: u32, terms: usize, max_degree: u32) -> GradedPoly {
        let forms = self.slots(Generator::form);
        let fibers = self.slots(Generator::fiber);
        let mut out = GradedPoly::zero(&self.chart);
        if p > max_weight {
            return out;
        }
        let mut drawn = 0;
        let mut attempts = 0;
        while drawn < terms.max(1) && attempts < 64 * terms.max(1) {
            attempts += 1;
            let q = self.rng.gen_range(0..=max_weight - p);
            let (Some(a), Some(b)) = (self.spread(&forms, p), self.spread(&fibers, q)) else {
                continue;
            };
            let base = self.base_monomial(max_degree);
            let Some((s1, ab)) = a.mul(&b, &self.chart) else {
                continue;
            };
            let Some((s2, m)) = base.mul(&ab, &self.chart) else {
                continue;
            };
            let mut c = self.coefficient();
            if (s1 * s2).is_minus() {
                c = -c;
            }
            out += &GradedPoly::term(&self.chart, m, c);
            drawn += 1;
        }
        out
    }

    /// A triple `(f·⃖∂^K, X, σ)` for the pairing identity, with `K` of weight
    /// at most `max_weight` and `σ` containing `y^{K + e_i}` for a letter
    /// `∂_i` of `X`, so the pairing is not trivially zero. `None` when the
    /// draw repeats an odd letter.
    pub fn pairing_triple(&mut self, max_weight: u32) -> Option<(SymTensor, VectorField, GradedPoly)> {
        let w = self.rng.gen_range(0..=max_weight);
        let k = self.word(w)?;
        let chart = self.chart.clone();
        let (m, c) = (self.base_monomial(2), self.coefficient());
        let tensor = SymTensor::term(&chart, k, GradedPoly::term(&chart, m, c));
        let x = self.field(1);
        let i = (0..chart.dim()).find(|&i| !x.component(i).is_zero())?;
        let target = k.add_unit(i);
        if words::has_odd_repeat(&chart, &target) {
            return None;
        }
        let (m, c) = (self.base_monomial(1), self.coefficient());
        let matching = GradedPoly::term(&chart, m, c);
        let sigma = &self.section(0, w + 1, 3, 2) + &(&matching * &fiber_monomial(&chart, &target));
        Some((tensor, x, sigma))
    }
}
