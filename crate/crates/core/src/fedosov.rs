//! Form-valued fiber polynomials and the Fedosov resolution.
//!
//! A form section is a [`GradedPoly`] in base, fiber and form generators.
//! Its filtration weight is `p + q`, the form degree plus the fiber weight.
//! `δ` and `δ⁻¹` preserve this weight and `d^∇`, `A` raise it, so every
//! identity below holds exactly in the quotient by weight `> N`; results are
//! truncated there.
//!
//! Induced connection on fiber polynomials: `∇_{∂_i} y_k = Σ_j c_{ikj} y_j`
//! with `c_{ikj} = -(-1)^{|x_j|(|x_k|+1)} Γ^k_{ij}`. This sign follows from
//! requiring `⟨∇_X S, σ⟩ + (-1)^{|X||S|} ⟨S, ∇_X σ⟩ = X⟨S, σ⟩`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use crate::enveloping::{basis_pairing, words, SymTensor};
use crate::error::{Error, Result};
use crate::geometry::Connection;
use crate::graded::{same_chart, Chart, Generator, GradedPoly, Monomial, MultiIndex, Rational, Sign};
use crate::pbw::{fiber_monomial, PbwContext};

/// Filtration weight `p + q` of a monomial.
pub fn filtration_weight(chart: &Chart, m: &Monomial) -> u32 {
    let n = chart.dim();
    m.form_degree(n) + m.fiber_weight(n)
}

/// Terms of weight `p + q ≤ max_weight`.
pub fn truncate_weight(omega: &GradedPoly, max_weight: u32) -> GradedPoly {
    let chart = omega.chart().clone();
    omega.filter(|m| filtration_weight(&chart, m) <= max_weight)
}

/// Smallest filtration weight among the terms.
pub fn min_weight(omega: &GradedPoly) -> Option<u32> {
    omega
        .terms()
        .map(|(m, _)| filtration_weight(omega.chart(), m))
        .min()
}

/// `δ = Σ_i dx_i ∂/∂y_i`, of degree `+1`, mapping `(p, q)` to `(p+1, q-1)`.
pub fn delta(omega: &GradedPoly) -> GradedPoly {
    let chart = omega.chart().clone();
    let mut out = GradedPoly::zero(&chart);
    for i in 0..chart.dim() {
        let d = omega.partial(Generator::fiber(i));
        if !d.is_zero() {
            out += &(&GradedPoly::dx(&chart, i) * &d);
        }
    }
    out
}

/// `δ⁻¹ = 1/(p+q) Σ_i y_i ∂/∂(dx_i)` on each `(p, q)` component, zero on
/// `(0, 0)`. `∂/∂(dx_i)` is the contraction `i_{∂_i}`.
pub fn delta_inv(omega: &GradedPoly) -> GradedPoly {
    let chart = omega.chart().clone();
    let mut out = GradedPoly::zero(&chart);
    for (m, c) in omega.terms() {
        let w = filtration_weight(&chart, m);
        if w == 0 || m.form_degree(chart.dim()) == 0 {
            continue;
        }
        let t = GradedPoly::term(&chart, *m, c / Rational::from_integer(BigInt::from(w)));
        for i in 0..chart.dim() {
            let d = t.partial(Generator::form(i));
            if !d.is_zero() {
                out += &(&GradedPoly::y(&chart, i) * &d);
            }
        }
    }
    out
}

/// `σ`: the `(0, 0)` component, a function.
pub fn sigma(omega: &GradedPoly) -> GradedPoly {
    let chart = omega.chart().clone();
    omega.filter(|m| filtration_weight(&chart, m) == 0)
}

/// `i`: a function as a section of weight 0.
pub fn iota(f: &GradedPoly) -> Result<GradedPoly> {
    if !f.is_base_only() {
        return Err(Error::InvalidArgument(format!(
            "{f} is not a function on the base"
        )));
    }
    Ok(f.clone())
}

/// A one-form valued in fiberwise vector fields, `Σ_k a_k ∂/∂y_k`, stored
/// through the images `a_k` of the fiber generators `y_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiberVectorField {
    chart: Arc<Chart>,
    components: Vec<GradedPoly>,
}

/// One coefficient `A^i_{J,k}` of `A = Σ A^i_{J,k} dx_i ⊗ y^J ∂/∂y_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ARecord {
    /// 0-based form index.
    pub i: usize,
    pub j: MultiIndex,
    /// 0-based target index.
    pub k: usize,
    pub coeff: GradedPoly,
}

impl fmt::Display for ARecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A i={} J={} k={} coeff={}", self.i + 1, self.j, self.k + 1, self.coeff)
    }
}

impl FiberVectorField {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        Self {
            chart: chart.clone(),
            components: (0..chart.dim()).map(|_| GradedPoly::zero(chart)).collect(),
        }
    }

    pub fn new(chart: &Arc<Chart>, components: Vec<GradedPoly>) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::InvalidArgument(format!(
                "expected {} components, got {}",
                chart.dim(),
                components.len()
            )));
        }
        if components.iter().any(|c| !same_chart(chart, c.chart())) {
            return Err(Error::ChartMismatch);
        }
        Ok(Self {
            chart: chart.clone(),
            components,
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    /// `a_k`, the image of `y_k`.
    pub fn component(&self, k: usize) -> &GradedPoly {
        &self.components[k]
    }

    pub fn components(&self) -> &[GradedPoly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GradedPoly::is_zero)
    }

    pub fn neg(&self) -> Self {
        Self {
            chart: self.chart.clone(),
            components: self.components.iter().map(|c| -c).collect(),
        }
    }

    /// Keeps terms of weight `p + q ≤ max_weight` in every component.
    pub fn truncate(&self, max_weight: u32) -> Self {
        Self {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .map(|c| truncate_weight(c, max_weight))
                .collect(),
        }
    }

    /// The derivation `ω ↦ Σ_k a_k · ∂ω/∂y_k`.
    pub fn apply(&self, omega: &GradedPoly) -> Result<GradedPoly> {
        if !same_chart(&self.chart, omega.chart()) {
            return Err(Error::ChartMismatch);
        }
        let mut out = GradedPoly::zero(&self.chart);
        for (k, a) in self.components.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let d = omega.partial(Generator::fiber(k));
            if !d.is_zero() {
                out += &(a * &d);
            }
        }
        Ok(out)
    }

    /// `δ⁻¹` applied componentwise.
    pub fn delta_inv(&self) -> Self {
        Self {
            chart: self.chart.clone(),
            components: self.components.iter().map(delta_inv).collect(),
        }
    }

    /// Coefficients `A^i_{J,k}` ordered by `i`, then `J`, then `k`.
    ///
    /// A canonical term `c · b · y^J · dx_i` (with `b` a base monomial)
    /// contributes `(-1)^{|y^J||dx_i|} c b` to `A^i_{J,k}`.
    pub fn records(&self) -> Result<Vec<ARecord>> {
        let chart = &self.chart;
        let n = chart.dim();
        let mut map: alloc::collections::BTreeMap<(usize, MultiIndex, usize), GradedPoly> =
            alloc::collections::BTreeMap::new();
        for (k, a) in self.components.iter().enumerate() {
            for (m, c) in a.terms() {
                let forms: Vec<(usize, u32)> = (0..n)
                    .map(|i| (i, m.exp(2 * n + i)))
                    .filter(|(_, e)| *e > 0)
                    .collect();
                let [(i, 1)] = forms[..] else {
                    return Err(Error::InvalidArgument(format!(
                        "component {} is not a one-form",
                        k + 1
                    )));
                };
                let mut j = MultiIndex::zero(n);
                for l in 0..n {
                    j.set(l, m.exp(n + l));
                }
                let base = m.restrict(0, n);
                let jdeg = words::word_degree(chart, &j);
                let odd = Sign::koszul(-jdeg, 1 + chart.degree(i) as i64).is_minus();
                let coeff = GradedPoly::term(chart, base, if odd { -c.clone() } else { c.clone() });
                *map.entry((i, j, k)).or_insert_with(|| GradedPoly::zero(chart)) += &coeff;
            }
        }
        Ok(map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j, k), coeff)| ARecord { i, j, k, coeff })
            .collect())
    }
}

impl fmt::Display for FiberVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.components.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let name = self.chart.generator_name(Generator::fiber(k));
            write!(f, "({a})*d/d{name}")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiberVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiberVectorField({self})")
    }
}

/// The covariant differential `d^∇ = Σ_i dx_i (∂/∂x_i + Σ_k c_{ik} ∂/∂y_k)`
/// of the connection induced on fiber polynomials.
#[derive(Clone)]
pub struct CovariantDifferential {
    connection: Connection,
    /// `c_{ik} = ∇_{∂_i} y_k`, indexed `i * n + k`.
    dual: Vec<GradedPoly>,
}

impl CovariantDifferential {
    pub fn new(connection: &Connection) -> Self {
        let chart = connection.chart().clone();
        let n = chart.dim();
        let mut dual = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                let mut c = GradedPoly::zero(&chart);
                for j in 0..n {
                    let g = connection.gamma(i, j, k);
                    if g.is_zero() {
                        continue;
                    }
                    let plus = Sign::koszul(chart.degree(j) as i64, chart.degree(k) as i64 + 1).is_minus();
                    let t = g * &GradedPoly::y(&chart, j);
                    c += &(if plus { t } else { -t });
                }
                dual.push(c);
            }
        }
        Self {
            connection: connection.clone(),
            dual,
        }
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    /// `∇_{∂_i} y_k`.
    pub fn dual_coefficient(&self, i: usize, k: usize) -> &GradedPoly {
        &self.dual[i * self.connection.chart().dim() + k]
    }

    /// `∇_{∂_i}` acting on a section as a derivation of degree `-|x_i|`.
    pub fn nabla_coordinate(&self, i: usize, omega: &GradedPoly) -> GradedPoly {
        let n = self.connection.chart().dim();
        let mut out = omega.partial(Generator::base(i));
        for k in 0..n {
            let c = self.dual_coefficient(i, k);
            if c.is_zero() {
                continue;
            }
            let d = omega.partial(Generator::fiber(k));
            if !d.is_zero() {
                out += &(c * &d);
            }
        }
        out
    }

    /// `d^∇ ω`.
    pub fn apply(&self, omega: &GradedPoly) -> GradedPoly {
        let chart = self.connection.chart().clone();
        let mut out = GradedPoly::zero(&chart);
        for i in 0..chart.dim() {
            let v = self.nabla_coordinate(i, omega);
            if !v.is_zero() {
                out += &(&GradedPoly::dx(&chart, i) * &v);
            }
        }
        out
    }
}

/// The Fedosov data of a torsion-free connection: the element `A` with
/// `δ⁻¹A = 0` making `D = -δ + d^∇ + A` square to zero, computed modulo
/// filtration weight `> max_weight`.
#[derive(Clone)]
pub struct FedosovData {
    dnabla: CovariantDifferential,
    a: FiberVectorField,
    max_weight: u32,
}

impl FedosovData {
    /// Fedosov data up to the chart's `max_sym_weight`.
    pub fn new(connection: &Connection) -> Result<Self> {
        Self::with_max_weight(connection, connection.chart().max_sym_weight())
    }

    /// Solves `a_m = δ⁻¹((d^∇ + A)(d^∇ y_m + a_m))` by iteration.
    ///
    /// With `r_m = D y_m + dx_m`, flatness `D² y_m = 0` reads
    /// `δ r_m = (d^∇ + A) r_m`; combined with `δ⁻¹ a_m = 0`, torsion-freeness
    /// and the homotopy formula this is the fixed-point equation above. Each
    /// pass fixes at least one more filtration weight. Components keep terms
    /// of weight up to `max_weight + 1`, which is all `D` needs on sections of
    /// weight at most `max_weight`.
    pub fn with_max_weight(connection: &Connection, max_weight: u32) -> Result<Self> {
        if !connection.is_torsion_free() {
            return Err(Error::RequiresTorsionFree);
        }
        let chart = connection.chart().clone();
        let n = chart.dim();
        let dnabla = CovariantDifferential::new(connection);
        let limit = max_weight + 1;
        let base: Vec<GradedPoly> = (0..n)
            .map(|m| dnabla.apply(&GradedPoly::y(&chart, m)))
            .collect();
        let mut a = FiberVectorField::zero(&chart);
        for _ in 0..=limit + 1 {
            let mut next = Vec::with_capacity(n);
            for (m, bm) in base.iter().enumerate() {
                let r = bm + a.component(m);
                let dr = truncate_weight(&(&dnabla.apply(&r) + &a.apply(&r)?), limit);
                next.push(delta_inv(&dr));
            }
            let next = FiberVectorField::new(&chart, next)?;
            if next == a {
                return Ok(Self {
                    dnabla,
                    a,
                    max_weight,
                });
            }
            a = next;
        }
        Err(Error::Internal(
            "Fedosov iteration did not stabilize within the weight bound".into(),
        ))
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.dnabla.connection.chart()
    }

    pub fn connection(&self) -> &Connection {
        &self.dnabla.connection
    }

    pub fn dnabla(&self) -> &CovariantDifferential {
        &self.dnabla
    }

    pub fn a(&self) -> &FiberVectorField {
        &self.a
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    fn check(&self, omega: &GradedPoly) -> Result<()> {
        if same_chart(self.chart(), omega.chart()) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// The perturbation `∂ = d^∇ + A`, truncated.
    pub fn perturbation(&self, omega: &GradedPoly) -> Result<GradedPoly> {
        self.check(omega)?;
        let v = &self.dnabla.apply(omega) + &self.a.apply(omega)?;
        Ok(truncate_weight(&v, self.max_weight))
    }

    /// `D ω = -δω + d^∇ω + Aω`, truncated.
    pub fn d_apply(&self, omega: &GradedPoly) -> Result<GradedPoly> {
        Ok(&self.perturbation(omega)? - &truncate_weight(&delta(omega), self.max_weight))
    }

    /// `Σ_n (δ⁻¹ ∂)^n ω`, stopping once a term vanishes.
    fn series(&self, start: GradedPoly) -> Result<GradedPoly> {
        let mut term = truncate_weight(&start, self.max_weight);
        let mut acc = term.clone();
        for _ in 0..=self.max_weight + 1 {
            term = delta_inv(&self.perturbation(&term)?);
            if term.is_zero() {
                return Ok(acc);
            }
            acc += &term;
        }
        Err(Error::Internal("perturbation series did not terminate".into()))
    }

    /// `τ(f) = Σ_n (δ⁻¹(d^∇ + A))^n i(f)`.
    pub fn tau_series(&self, f: &GradedPoly) -> Result<GradedPoly> {
        self.check(f)?;
        self.series(iota(f)?)
    }

    /// `h(ω) = Σ_n (δ⁻¹(d^∇ + A))^n δ⁻¹ ω`.
    pub fn homotopy_h(&self, omega: &GradedPoly) -> Result<GradedPoly> {
        self.check(omega)?;
        self.series(delta_inv(omega))
    }

    /// `D²` on the generators `x_i`, `y_i`, `dx_i`; all zero when `D` is
    /// flat up to the truncation weight.
    pub fn d_squared_residual(&self) -> Result<Vec<(String, GradedPoly)>> {
        let chart = self.chart().clone();
        let mut out = Vec::new();
        for i in 0..chart.dim() {
            for g in [Generator::base(i), Generator::fiber(i), Generator::form(i)] {
                let p = GradedPoly::generator(&chart, g);
                let r = self.d_apply(&self.d_apply(&p)?)?;
                out.push((chart.generator_name(g), r));
            }
        }
        Ok(out)
    }

    /// A-records, see [`FiberVectorField::records`].
    pub fn records(&self) -> Result<Vec<ARecord>> {
        self.a.records()
    }
}

/// `τ(f) = Σ_{|I| ≤ N} s_I y^I` with `s_I` fixed by the dual basis of the
/// pairing: `⟨⃖∂^I, τ(f)⟩ = pbw(⃖∂^I)(f)`. For even coordinates this is
/// `Σ_I (1/I!) y^I · pbw(⃖∂^I)(f)`.
pub fn tau_pbw(ctx: &PbwContext, f: &GradedPoly, max_weight: u32) -> Result<GradedPoly> {
    let chart = ctx.chart().clone();
    if !same_chart(&chart, f.chart()) {
        return Err(Error::ChartMismatch);
    }
    iota(f)?;
    let mut out = GradedPoly::zero(&chart);
    for word in words::basis_words_upto(&chart, max_weight) {
        let value = ctx.pbw_map(&SymTensor::word(&chart, word))?.apply(f)?;
        if value.is_zero() {
            continue;
        }
        let wdeg = words::word_degree(&chart, &word);
        let b = basis_pairing(&chart, &word, &word);
        let y = fiber_monomial(&chart, &word);
        for (d, part) in value.homogeneous_components() {
            let mut s = part.scale(&(Rational::from_integer(1.into()) / &b));
            if Sign::koszul(wdeg, d).is_minus() {
                s = -s;
            }
            out += &(&s * &y);
        }
    }
    Ok(out)
}

/// `(d^∇)²` written through the curvature of the connection:
/// `½ Σ_{i,j} (-1)^{|x_i|(1+|x_j|)} dx_i dx_j K_{ij}(ω)`, where `K_{ij}` is
/// the derivation dual to `[∇_{∂_i}, ∇_{∂_j}] = (-1)^{|x_j|+1} R(∂_i, ∂_j)`.
///
/// The dual of an endomorphism `L` of degree `ℓ` acts on fiber generators by
/// `L^∨(y_k) = Σ_l e_{kl} y_l` with
/// `e_{kl} = -(-1)^{ℓ|x_l| + |x_l||e_{kl}|} L^k_l`.
pub fn curvature_action(connection: &Connection, omega: &GradedPoly) -> Result<GradedPoly> {
    use crate::geometry::VectorField;
    let chart = connection.chart().clone();
    let n = chart.dim();
    let deg = |i: usize| chart.degree(i) as i64;
    let mut out = GradedPoly::zero(&chart);
    for i in 0..n {
        for j in 0..n {
            let (di, dj) = (VectorField::coordinate(&chart, i), VectorField::coordinate(&chart, j));
            let ell = -deg(i) - deg(j);
            let mut images: Vec<GradedPoly> = (0..n).map(|_| GradedPoly::zero(&chart)).collect();
            for l in 0..n {
                let r = connection.curvature(&di, &dj, &VectorField::coordinate(&chart, l))?;
                for k in 0..n {
                    let mut lkl = r.component(k).clone();
                    if (deg(j) + 1).rem_euclid(2) == 1 {
                        lkl = -lkl;
                    }
                    for (e_deg, part) in lkl.homogeneous_components() {
                        let plus = (ell * deg(l) + deg(l) * e_deg).rem_euclid(2) == 1;
                        let e = if plus { part } else { -part };
                        images[k] += &(&e * &GradedPoly::y(&chart, l));
                    }
                }
            }
            let k_ij = FiberVectorField::new(&chart, images)?;
            let v = k_ij.apply(omega)?;
            if v.is_zero() {
                continue;
            }
            let mut t = &(&GradedPoly::dx(&chart, i) * &GradedPoly::dx(&chart, j)) * &v;
            if Sign::koszul(deg(i), 1 + deg(j)).is_minus() {
                t = -t;
            }
            out += &t;
        }
    }
    Ok(out.scale(&Rational::new(1.into(), 2.into())))
}

/// Whether every term of `omega` has weight `p + q ≥ w`.
pub fn has_min_weight(omega: &GradedPoly, w: u32) -> bool {
    min_weight(omega).is_none_or(|m| m >= w)
}
