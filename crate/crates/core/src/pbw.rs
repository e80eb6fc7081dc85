//! The formal exponential map `pbw: Γ(S T_M) → U(T_M)` of a connection, its
//! inverse, the flat connection `∇^⚡` and the correction forms `Θ` and `Ξ`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use crate::enveloping::{basis_pairing, words, DiffOp, SymTensor};
use crate::error::{Error, Result};
use crate::fedosov::FiberVectorField;
use crate::geometry::{Connection, VectorField};
use crate::graded::{same_chart, Chart, GradedPoly, Monomial, MultiIndex, Rational, Sign};

/// A connection together with `pbw` of every basis word up to a weight
/// bound.
///
/// The table is filled bottom-up when the context is built and never
/// changes afterwards, so a context can be shared freely between threads.
#[derive(Clone)]
pub struct PbwContext {
    connection: Connection,
    max_weight: u32,
    table: BTreeMap<MultiIndex, DiffOp>,
}

impl PbwContext {
    /// Context whose weight bound is the chart's `max_sym_weight`.
    pub fn new(connection: &Connection) -> Result<Self> {
        Self::with_max_weight(connection, connection.chart().max_sym_weight())
    }

    pub fn with_max_weight(connection: &Connection, max_weight: u32) -> Result<Self> {
        let chart = connection.chart().clone();
        let mut ctx = Self {
            connection: connection.clone(),
            max_weight,
            table: BTreeMap::new(),
        };
        for k in words::basis_words_upto(&chart, max_weight) {
            let value = ctx.compute_word(&k)?;
            ctx.table.insert(k, value);
        }
        Ok(ctx)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.connection.chart()
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    /// One step of the defining recursion, reading lower weights from the
    /// table:
    /// `pbw(X_0 ⊙ ⋯ ⊙ X_n) = 1/(n+1) Σ_k ε_k (X_k · pbw(X^{k}) - pbw(∇_{X_k} X^{k}))`.
    fn compute_word(&self, k: &MultiIndex) -> Result<DiffOp> {
        let chart = self.chart();
        let w = k.weight();
        if w <= 1 {
            return Ok(DiffOp::word(chart, *k));
        }
        let letters = k.descending_letters();
        let mut acc = DiffOp::zero(chart);
        let mut prefix = 0i64;
        for &l in &letters {
            let dl = words::letter_degree(chart, l);
            let eps = Sign::koszul(dl, prefix);
            prefix += dl;
            let rest = k.sub_unit(l).expect("letter present");
            let lower = &self.table[&rest];
            let mut term = lower.left_letter(l);
            let nabla = self.connection.nabla_coordinate_word(l, &rest);
            term = &term - &self.map_table(&nabla);
            acc = if eps.is_minus() { &acc - &term } else { &acc + &term };
        }
        Ok(acc.scale(&Rational::new(BigInt::from(1), BigInt::from(w))))
    }

    fn map_table(&self, s: &SymTensor) -> DiffOp {
        let mut out = DiffOp::zero(self.chart());
        for (k, f) in s.terms() {
            for (m, g) in self.table[k].terms() {
                out.add_term(*m, f * g);
            }
        }
        out
    }

    fn check_weight(&self, requested: Option<u32>) -> Result<()> {
        match requested {
            Some(w) if w > self.max_weight => Err(Error::TruncationOverflow {
                requested: w,
                limit: self.max_weight,
            }),
            _ => Ok(()),
        }
    }

    fn check_chart(&self, chart: &Arc<Chart>) -> Result<()> {
        if same_chart(self.chart(), chart) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// `pbw` of a basis word.
    pub fn pbw_word(&self, k: &MultiIndex) -> Result<&DiffOp> {
        self.check_weight(Some(k.weight()))?;
        self.table.get(k).ok_or_else(|| {
            Error::InvalidArgument(alloc::format!("{k} repeats an odd letter"))
        })
    }

    /// `pbw(S)`, extended from basis words by left linearity over functions.
    pub fn pbw_map(&self, s: &SymTensor) -> Result<DiffOp> {
        self.check_chart(s.chart())?;
        self.check_weight(s.weight())?;
        Ok(self.map_table(s))
    }

    /// `pbw⁻¹(D)` by peeling off principal symbols from the top order down.
    pub fn pbw_inv(&self, d: &DiffOp) -> Result<SymTensor> {
        self.check_chart(d.chart())?;
        self.check_weight(d.order())?;
        let mut rest = d.clone();
        let mut out = SymTensor::zero(self.chart());
        while let Some(order) = rest.order() {
            let top = rest.gr_leading();
            rest = &rest - &self.map_table(&top);
            if rest.order().is_some_and(|o| o >= order) {
                return Err(Error::Internal("symbol peeling did not lower the order".into()));
            }
            out = &out + &top;
        }
        Ok(out)
    }

    /// `∇^⚡_X S = pbw⁻¹(X · pbw(S))`.
    pub fn lightning_nabla(&self, x: &VectorField, s: &SymTensor) -> Result<SymTensor> {
        self.check_chart(x.chart())?;
        let d = self.pbw_map(s)?;
        let xd = x.to_diffop().compose(&d, self.max_weight)?;
        self.pbw_inv(&xd)
    }

    /// `i_X Θ(S) = ∇^⚡_X S - X ⊙ S - ∇_X S`.
    pub fn theta_form(&self, x: &VectorField, s: &SymTensor) -> Result<SymTensor> {
        if !self.connection.is_torsion_free() {
            return Err(Error::RequiresTorsionFree);
        }
        let light = self.lightning_nabla(x, s)?;
        let prod = x.to_sym().sym_mul(s)?;
        let nab = self.connection.nabla_sym(x, s)?;
        Ok(&(&light - &prod) - &nab)
    }

    /// `Ξ` as a one-form valued in fiberwise vector fields, up to fiber
    /// weight `max_fiber_weight`.
    ///
    /// Component `k` is `Ξ(y_k) = Σ_i dx_i · i_{∂_i}Ξ(y_k)`, where the fiber
    /// polynomial `i_{∂_i}Ξ(y_k)` is expanded in the dual basis `y^I` by
    /// `⟨⃖∂^I, i_{∂_i}Ξ(y_k)⟩ = (-1)^{|∂_i||⃖∂^I|} ⟨i_{∂_i}Θ(⃖∂^I), y_k⟩`.
    /// Needs a context of weight at least `max_fiber_weight + 1`.
    pub fn xi_form(&self, max_fiber_weight: u32) -> Result<FiberVectorField> {
        if !self.connection.is_torsion_free() {
            return Err(Error::RequiresTorsionFree);
        }
        self.check_weight(Some(max_fiber_weight + 1))?;
        let chart = self.chart().clone();
        let n = chart.dim();
        let mut components: Vec<GradedPoly> = (0..n).map(|_| GradedPoly::zero(&chart)).collect();
        for i in 0..n {
            let di = chart.degree(i) as i64;
            let field = VectorField::coordinate(&chart, i);
            // i_{∂_i}Ξ(y_k) for every k
            let mut contracted: Vec<GradedPoly> = (0..n).map(|_| GradedPoly::zero(&chart)).collect();
            for w in 2..=max_fiber_weight {
                for word in words::basis_words(&chart, w) {
                    let theta = self.theta_form(&field, &SymTensor::word(&chart, word))?;
                    let wdeg = words::word_degree(&chart, &word);
                    let b = basis_pairing(&chart, &word, &word);
                    for (k, slot) in contracted.iter_mut().enumerate() {
                        let t = theta.coefficient(&MultiIndex::unit(n, k));
                        // ⟨⃖∂^I, σ⟩ = (-1)^{|⃖∂^I||s_I|} s_I b(I) for σ = Σ s_J y^J
                        for (d, part) in t.homogeneous_components() {
                            let sign = Sign::koszul(di, wdeg) * Sign::koszul(wdeg, d);
                            let mut coeff = part.scale(&(Rational::from_integer(1.into()) / &b));
                            if sign.is_minus() {
                                coeff = -coeff;
                            }
                            *slot += &(&coeff * &fiber_monomial(&chart, &word));
                        }
                    }
                }
            }
            for (k, c) in contracted.into_iter().enumerate() {
                if !c.is_zero() {
                    components[k] += &(&GradedPoly::dx(&chart, i) * &c);
                }
            }
        }
        FiberVectorField::new(&chart, components)
    }
}

/// `y^I` in canonical order.
pub fn fiber_monomial(chart: &Arc<Chart>, i: &MultiIndex) -> GradedPoly {
    let n = chart.dim();
    let mut m = Monomial::ONE;
    for k in 0..n {
        m = m.with_exp(n + k, i.get(k));
    }
    if words::has_odd_repeat(chart, i) {
        return GradedPoly::zero(chart);
    }
    GradedPoly::term(chart, m, Rational::from_integer(1.into()))
}

/// Reorders `X_0, …, X_n` into `rest ++ [X_j, X_k]` and returns the Koszul
/// sign of that move for the given degrees.
pub fn pair_to_end_sign(degrees: &[i64], j: usize, k: usize) -> Sign {
    let mut perm: Vec<usize> = (0..degrees.len()).filter(|&a| a != j && a != k).collect();
    perm.push(j);
    perm.push(k);
    crate::graded::koszul_sign(&perm, degrees).expect("valid permutation")
}

/// Right side of the two-term expansion of `pbw(X_0 ⊙ ⋯ ⊙ X_n)`:
/// `X_0⋯X_n - Σ_{j<k} ε X^{j,k} · ∇_{X_j}X_k`, for homogeneous fields.
pub fn two_term_pbw(connection: &Connection, fields: &[VectorField], max_order: u32) -> Result<DiffOp> {
    let chart = connection.chart();
    let degrees = homogeneous_degrees(fields)?;
    let mut out = DiffOp::identity(chart);
    for x in fields {
        out = out.compose(&x.to_diffop(), max_order)?;
    }
    for j in 0..fields.len() {
        for k in j + 1..fields.len() {
            let mut term = DiffOp::identity(chart);
            for (a, x) in fields.iter().enumerate() {
                if a != j && a != k {
                    term = term.compose(&x.to_diffop(), max_order)?;
                }
            }
            let nab = connection.cov_deriv(&fields[j], &fields[k])?;
            term = term.compose(&nab.to_diffop(), max_order)?;
            out = if pair_to_end_sign(&degrees, j, k).is_minus() {
                &out + &term
            } else {
                &out - &term
            };
        }
    }
    Ok(out)
}

/// Right side of the two-term expansion of `pbw⁻¹(X_0 ⋯ X_n)`:
/// `X_0 ⊙ ⋯ ⊙ X_n + Σ_{j<k} ε X^{j,k} ⊙ ∇_{X_j}X_k`.
pub fn two_term_pbw_inv(connection: &Connection, fields: &[VectorField]) -> Result<SymTensor> {
    let degrees = homogeneous_degrees(fields)?;
    let mut out = SymTensor::from_fields(fields)?;
    for j in 0..fields.len() {
        for k in j + 1..fields.len() {
            let mut list: Vec<VectorField> = fields
                .iter()
                .enumerate()
                .filter(|(a, _)| *a != j && *a != k)
                .map(|(_, x)| x.clone())
                .collect();
            list.push(connection.cov_deriv(&fields[j], &fields[k])?);
            let term = SymTensor::from_fields(&list)?;
            out = if pair_to_end_sign(&degrees, j, k).is_minus() {
                &out - &term
            } else {
                &out + &term
            };
        }
    }
    Ok(out)
}

fn homogeneous_degrees(fields: &[VectorField]) -> Result<Vec<i64>> {
    fields
        .iter()
        .map(|x| match x.degree_of() {
            crate::graded::Degree::Homogeneous(d) => Ok(d),
            crate::graded::Degree::Zero => Ok(0),
            crate::graded::Degree::Mixed => Err(Error::NotHomogeneous),
        })
        .collect()
}

/// Whether `a - b` has order at most `bound` (always true for `bound < 0`
/// only when `a = b`).
pub fn congruent_mod_order(a: &DiffOp, b: &DiffOp, bound: i64) -> bool {
    match (a - b).order() {
        None => true,
        Some(o) => (o as i64) <= bound,
    }
}

/// Whether `a - b` has symmetric weight at most `bound`.
pub fn congruent_mod_weight(a: &SymTensor, b: &SymTensor, bound: i64) -> bool {
    match (a - b).weight() {
        None => true,
        Some(o) => (o as i64) <= bound,
    }
}
