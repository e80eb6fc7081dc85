//! Composition and evaluation of normal-ordered differential operators,
//! symbols and the symmetrization map.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use super::combination::{DiffOp, SymTensor};
use super::words;
use crate::error::{Error, Result};
use crate::geometry::VectorField;
use crate::graded::{koszul_sign, same_chart, GradedPoly, MultiIndex, Rational};

impl DiffOp {
    pub fn identity(chart: &alloc::sync::Arc<crate::graded::Chart>) -> Self {
        Self::scalar(&GradedPoly::one(chart))
    }

    /// Operator order, or `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.weight()
    }

    /// `∂_i ∘ self`, normal ordered by `∂_i ∘ f = ∂_i(f) + (-1)^{|x_i||f|} f ∘ ∂_i`.
    pub fn left_letter(&self, i: usize) -> DiffOp {
        let chart = self.chart().clone();
        let di = chart.degree(i) as i64;
        let mut out = DiffOp::zero(&chart);
        for (k, f) in self.terms() {
            out.add_term(*k, f.partial(crate::graded::Generator::base(i)));
            if let Some((sign, word)) = words::insert_left(&chart, i, k) {
                let twisted = f.koszul_twist(di);
                out.add_term(word, if sign.is_minus() { -twisted } else { twisted });
            }
        }
        out
    }

    /// `∂^{⃖K} ∘ self`, applying `∂_1` first and `∂_n` last.
    fn left_word(&self, k: &MultiIndex) -> DiffOp {
        let mut acc = self.clone();
        for i in 0..k.len() {
            for _ in 0..k.get(i) {
                acc = acc.left_letter(i);
            }
        }
        acc
    }

    /// `self ∘ other` in normal order.
    ///
    /// Fails with [`Error::TruncationOverflow`] when the result has order
    /// above `max_order`.
    pub fn compose(&self, other: &DiffOp, max_order: u32) -> Result<DiffOp> {
        if !same_chart(self.chart(), other.chart()) {
            return Err(Error::ChartMismatch);
        }
        let chart = self.chart().clone();
        let mut out = DiffOp::zero(&chart);
        // Group the right factor by word so each coefficient is moved once.
        for (k, f) in self.terms() {
            for (l, g) in other.terms() {
                let moved = DiffOp::scalar(g).left_word(k);
                for (m, h) in moved.terms() {
                    if let Some((sign, word)) = words::concat(&chart, m, l) {
                        let c = f * h;
                        out.add_term(word, if sign.is_minus() { -c } else { c });
                    }
                }
            }
        }
        if let Some(order) = out.order() {
            if order > max_order {
                return Err(Error::TruncationOverflow {
                    requested: order,
                    limit: max_order,
                });
            }
        }
        Ok(out)
    }

    /// `D(g)`.
    pub fn apply(&self, g: &GradedPoly) -> Result<GradedPoly> {
        if !same_chart(self.chart(), g.chart()) {
            return Err(Error::ChartMismatch);
        }
        let mut out = GradedPoly::zero(self.chart());
        for (k, f) in self.terms() {
            let mut h = g.clone();
            for i in 0..k.len() {
                for _ in 0..k.get(i) {
                    h = h.partial_left(i)?;
                }
            }
            if !h.is_zero() {
                out += &(f * &h);
            }
        }
        Ok(out)
    }

    /// Order of the operator in the filtration of `U(T_M)`.
    pub fn filtration_order(&self) -> Option<u32> {
        self.order()
    }

    /// Principal symbol: the top-order part read as a symmetric tensor.
    pub fn gr_leading(&self) -> SymTensor {
        match self.order() {
            Some(k) => self.weight_component(k).reinterpret(),
            None => SymTensor::zero(self.chart()),
        }
    }
}

impl SymTensor {
    /// The symmetric product `X_1 ⊙ ⋯ ⊙ X_m` of vector fields, with
    /// coefficients collected on the left.
    pub fn from_fields(fields: &[VectorField]) -> Result<SymTensor> {
        let chart = match fields.first() {
            Some(x) => x.chart().clone(),
            None => {
                return Err(Error::InvalidArgument(
                    "the empty product needs a chart; use SymTensor::scalar".into(),
                ))
            }
        };
        // (coefficient, letters so far, degree of the letters so far)
        let mut partial: Vec<(GradedPoly, Vec<usize>, i64)> =
            alloc::vec![(GradedPoly::one(&chart), Vec::new(), 0)];
        for x in fields {
            if !same_chart(&chart, x.chart()) {
                return Err(Error::ChartMismatch);
            }
            let mut next = Vec::new();
            for (c, letters, deg) in &partial {
                for (_, i, f) in x.homogeneous_terms() {
                    let moved = &f.koszul_twist(*deg);
                    let mut l = letters.clone();
                    l.push(i);
                    next.push((c * moved, l, deg + words::letter_degree(&chart, i)));
                }
            }
            partial = next;
        }
        let mut out = SymTensor::zero(&chart);
        for (c, letters, _) in partial {
            if let Some((sign, k)) = words::canonicalize(&chart, &letters) {
                out.add_term(k, if sign.is_minus() { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Graded symmetric product `self ⊙ other`.
    pub fn sym_mul(&self, other: &SymTensor) -> Result<SymTensor> {
        if !same_chart(self.chart(), other.chart()) {
            return Err(Error::ChartMismatch);
        }
        let chart = self.chart().clone();
        let mut out = SymTensor::zero(&chart);
        for (k, f) in self.terms() {
            let wk = words::word_degree(&chart, k);
            for (l, g) in other.terms() {
                if let Some((sign, word)) = words::concat(&chart, k, l) {
                    let c = f * &g.koszul_twist(wk);
                    out.add_term(word, if sign.is_minus() { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// The symmetrization map on the left-module basis:
    /// `f · ⃖∂^I ↦ f · ∂^{⃖I}`.
    ///
    /// Coordinate derivations graded-commute, so the symmetrization of a
    /// basis word is the normal-ordered monomial itself; the map is
    /// extended by left multiplication with coefficients.
    pub fn sym_map(&self) -> DiffOp {
        self.reinterpret()
    }
}

/// Rinehart symmetrization of a list of vector fields:
/// `1/m! Σ_σ ε X_{σ(1)} ∘ ⋯ ∘ X_{σ(m)}`, expanded multilinearly over
/// homogeneous pieces.
pub fn sym_fields(fields: &[VectorField]) -> Result<DiffOp> {
    let chart = match fields.first() {
        Some(x) => x.chart().clone(),
        None => {
            return Err(Error::InvalidArgument(
                "symmetrization of an empty list needs a chart".into(),
            ))
        }
    };
    let m = fields.len();
    let pieces: Vec<Vec<(i64, VectorField)>> = fields
        .iter()
        .map(|x| x.homogeneous_components().into_iter().collect())
        .collect();
    let perms = permutations(m);
    let mut out = DiffOp::zero(&chart);
    let mut choice = alloc::vec![0usize; m];
    loop {
        if pieces.iter().all(|p| !p.is_empty()) {
            let degrees: Vec<i64> = (0..m).map(|a| pieces[a][choice[a]].0).collect();
            for perm in &perms {
                let sign = koszul_sign(perm, &degrees)?;
                let mut acc = DiffOp::identity(&chart);
                for &a in perm {
                    let d = pieces[a][choice[a]].1.to_diffop();
                    acc = acc.compose(&d, m as u32)?;
                }
                out = if sign.is_minus() { &out - &acc } else { &out + &acc };
            }
        }
        // next choice of homogeneous pieces
        let mut a = 0;
        loop {
            if a == m {
                let mut fact = BigInt::one();
                for k in 2..=m {
                    fact *= BigInt::from(k);
                }
                return Ok(out.scale(&Rational::new(BigInt::one(), fact)));
            }
            choice[a] += 1;
            if choice[a] < pieces[a].len() {
                break;
            }
            choice[a] = 0;
            a += 1;
        }
    }
}

/// All permutations of `0..m` in one-line notation.
pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut alloc::vec![false; m], &mut out);
    out
}
