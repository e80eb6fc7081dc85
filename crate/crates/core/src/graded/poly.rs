use alloc::collections::btree_map::{self, BTreeMap};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::chart::{same_chart, Chart, Generator};
use super::monomial::Monomial;
use super::{print, signed, Rational};
use crate::error::{Error, Result};

/// Total degree of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    /// The zero polynomial has no degree.
    Zero,
    Homogeneous(i64),
    /// Terms of different degrees.
    Mixed,
}

/// An exact graded-commutative polynomial in the base, fiber and form
/// generators of a chart.
///
/// Terms are kept in canonical monomial form with nonzero coefficients, so
/// structural equality is mathematical equality.
#[derive(Clone)]
pub struct GradedPoly {
    chart: Arc<Chart>,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPoly {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        Self {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Arc<Chart>) -> Self {
        Self::constant(chart, Rational::one())
    }

    pub fn constant(chart: &Arc<Chart>, c: Rational) -> Self {
        Self::term(chart, Monomial::ONE, c)
    }

    pub fn term(chart: &Arc<Chart>, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(chart);
        p.add_term(m, c);
        p
    }

    pub fn generator(chart: &Arc<Chart>, g: Generator) -> Self {
        Self::term(chart, Monomial::generator(chart, g), Rational::one())
    }

    /// The base coordinate `x_i`.
    pub fn x(chart: &Arc<Chart>, i: usize) -> Self {
        Self::generator(chart, Generator::base(i))
    }

    /// The fiber coordinate `y_i`.
    pub fn y(chart: &Arc<Chart>, i: usize) -> Self {
        Self::generator(chart, Generator::fiber(i))
    }

    /// The one-form `dx_i`.
    pub fn dx(chart: &Arc<Chart>, i: usize) -> Self {
        Self::generator(chart, Generator::form(i))
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> btree_map::Iter<'_, Monomial, Rational> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Adds `c · m` for an already canonical monomial `m`.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_chart(&self, other: &Self) -> Result<()> {
        if same_chart(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_chart(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_chart(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_chart(other)?;
        let mut out = Self::zero(&self.chart);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = ma.mul(mb, &self.chart) {
                    out.add_term(m, signed(sign, ca * cb));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.chart);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, a)| (*m, a * c)).collect();
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.chart);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Left partial derivative with respect to the generator in `slot`.
    pub fn partial_slot(&self, slot: usize) -> Self {
        let mut out = Self::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m.exp(slot);
            if e == 0 {
                continue;
            }
            let odd = self.chart.slot_is_odd(slot) && m.prefix_is_odd(slot, &self.chart);
            let c = c * Rational::from_integer(e.into());
            out.add_term(m.with_exp(slot, e - 1), if odd { -c } else { c });
        }
        out
    }

    pub fn partial(&self, g: Generator) -> Self {
        self.partial_slot(self.chart.slot(g))
    }

    /// `∂/∂x_i`, the left derivative in the base coordinate `i`.
    pub fn partial_left(&self, i: usize) -> Result<Self> {
        if i >= self.chart.dim() {
            return Err(Error::InvalidArgument(alloc::format!(
                "coordinate index {i} out of range for a chart of dimension {}",
                self.chart.dim()
            )));
        }
        Ok(self.partial(Generator::base(i)))
    }

    pub fn degree_of(&self) -> Degree {
        let mut degrees = self.terms.keys().map(|m| m.degree(&self.chart));
        let Some(first) = degrees.next() else {
            return Degree::Zero;
        };
        if degrees.all(|d| d == first) {
            Degree::Homogeneous(first)
        } else {
            Degree::Mixed
        }
    }

    /// Degree of a homogeneous polynomial; zero counts as degree 0.
    pub fn homogeneous_degree(&self) -> Result<i64> {
        match self.degree_of() {
            Degree::Zero => Ok(0),
            Degree::Homogeneous(d) => Ok(d),
            Degree::Mixed => Err(Error::NotHomogeneous),
        }
    }

    /// Unique decomposition into nonzero homogeneous components by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<i64, GradedPoly> {
        let mut out: BTreeMap<i64, GradedPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree(&self.chart))
                .or_insert_with(|| Self::zero(&self.chart))
                .add_term(*m, c.clone());
        }
        out
    }

    /// `Σ (-1)^{degree·|t|} t` over the terms `t`: the sign picked up when
    /// an element of the given degree moves past this polynomial.
    pub fn koszul_twist(&self, degree: i64) -> Self {
        if degree.rem_euclid(2) == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        for (m, c) in out.terms.iter_mut() {
            if m.degree(&self.chart).rem_euclid(2) == 1 {
                *c = -c.clone();
            }
        }
        out
    }

    /// Terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        Self {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Largest total fiber exponent among the terms.
    pub fn max_fiber_weight(&self) -> u32 {
        let n = self.chart.dim();
        self.terms.keys().map(|m| m.fiber_weight(n)).max().unwrap_or(0)
    }

    /// Whether only base generators occur.
    pub fn is_base_only(&self) -> bool {
        let n = self.chart.dim();
        self.terms
            .keys()
            .all(|m| m.fiber_weight(n) == 0 && m.form_degree(n) == 0)
    }

    /// Same terms viewed on another chart with an identical generator
    /// layout, such as one differing only in truncation bounds.
    pub fn rechart(&self, chart: &Arc<Chart>) -> Result<Self> {
        if !same_chart(chart, &self.chart) {
            return Err(Error::ChartMismatch);
        }
        Ok(Self {
            chart: chart.clone(),
            terms: self.terms.clone(),
        })
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms.into_iter().collect()
    }
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPoly({self})")
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_plain(f, self)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&GradedPoly> for &GradedPoly {
            type Output = GradedPoly;

            /// Panics on a chart mismatch; use the `checked_` form to recover.
            fn $method(self, rhs: &GradedPoly) -> GradedPoly {
                self.$checked(rhs).expect("polynomials on different charts")
            }
        }

        impl $trait<GradedPoly> for GradedPoly {
            type Output = GradedPoly;

            fn $method(self, rhs: GradedPoly) -> GradedPoly {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&GradedPoly> for GradedPoly {
            type Output = GradedPoly;

            fn $method(self, rhs: &GradedPoly) -> GradedPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl AddAssign<&GradedPoly> for GradedPoly {
    fn add_assign(&mut self, rhs: &GradedPoly) {
        assert!(same_chart(&self.chart, &rhs.chart), "polynomials on different charts");
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&GradedPoly> for GradedPoly {
    fn sub_assign(&mut self, rhs: &GradedPoly) {
        assert!(same_chart(&self.chart, &rhs.chart), "polynomials on different charts");
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;

    fn neg(self) -> GradedPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;

    fn neg(self) -> GradedPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{ratio, rational, Coordinate, Truncation};
    use alloc::string::ToString;

    fn chart(degrees: &[(&str, i32)]) -> Arc<Chart> {
        Chart::new(
            degrees.iter().map(|(n, d)| Coordinate::new(*n, *d)).collect(),
            Truncation::new(3, 2, 4),
        )
        .unwrap()
    }

    #[test]
    fn odd_square_cancels_in_difference_of_squares() {
        let c = chart(&[("x", 0), ("t", 1)]);
        let (x, t) = (GradedPoly::x(&c, 0), GradedPoly::x(&c, 1));
        assert_eq!(&(&x + &t) * &(&x - &t), x.pow(2));
    }

    #[test]
    fn odd_generators_anticommute() {
        let c = chart(&[("a", 1), ("b", 1)]);
        let (a, b) = (GradedPoly::x(&c, 0), GradedPoly::x(&c, 1));
        let ab = &a * &b;
        assert_eq!(&b * &a, -&ab);
        assert!((&ab * &ab).is_zero());
        assert_eq!(ab.to_string(), "a*b");
        assert_eq!((&b * &a).to_string(), "-a*b");
    }

    #[test]
    fn left_partial_signs() {
        let c = chart(&[("x", 0), ("a", 1), ("b", 1)]);
        let (x, a, b) = (GradedPoly::x(&c, 0), GradedPoly::x(&c, 1), GradedPoly::x(&c, 2));
        assert_eq!(x.pow(2).partial_left(0).unwrap(), x.scale(&rational(2)));
        let ab = &a * &b;
        assert_eq!(ab.partial_left(1).unwrap(), b);
        assert_eq!(ab.partial_left(2).unwrap(), -&a);
        assert!(ab.partial_left(3).is_err());
    }

    #[test]
    fn degrees() {
        let c = chart(&[("x", 0), ("a", 1), ("b", 1)]);
        assert_eq!(GradedPoly::x(&c, 0).degree_of(), Degree::Homogeneous(0));
        assert_eq!(GradedPoly::dx(&c, 0).degree_of(), Degree::Homogeneous(1));
        let m = &(&GradedPoly::x(&c, 1) * &GradedPoly::x(&c, 2)) * &GradedPoly::y(&c, 1);
        assert_eq!(m.degree_of(), Degree::Homogeneous(3));
        assert_eq!(GradedPoly::zero(&c).degree_of(), Degree::Zero);
        let mixed = GradedPoly::x(&c, 0) + GradedPoly::x(&c, 1);
        assert_eq!(mixed.degree_of(), Degree::Mixed);
        assert_eq!(mixed.homogeneous_components().len(), 2);
    }

    #[test]
    fn chart_mismatch_is_an_error() {
        let c1 = chart(&[("x", 0)]);
        let c2 = chart(&[("z", 0)]);
        let r = GradedPoly::x(&c1, 0).checked_mul(&GradedPoly::x(&c2, 0));
        assert_eq!(r, Err(Error::ChartMismatch));
    }

    #[test]
    fn printing() {
        let c = chart(&[("x", 0), ("t", 1)]);
        let x = GradedPoly::x(&c, 0);
        let p = x.pow(2).scale(&ratio(-1, 2)) + GradedPoly::one(&c)
            - &(&x * &GradedPoly::y(&c, 1)).scale(&rational(3))
            + GradedPoly::dx(&c, 0);
        assert_eq!(p.to_string(), "1 - 1/2*x^2 - 3*x*y[t] + dx[x]");
        assert_eq!(GradedPoly::zero(&c).to_string(), "0");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn mixed_chart() -> Arc<Chart> {
            chart(&[("x", 0), ("a", 1), ("z", 2), ("b", -1)])
        }

        fn monomial() -> impl Strategy<Value = Monomial> {
            proptest::collection::vec(0u32..3, 12).prop_map(|exps| {
                let c = mixed_chart();
                let mut m = Monomial::ONE;
                for (s, e) in exps.into_iter().enumerate() {
                    let e = if c.slot_is_odd(s) { e % 2 } else { e };
                    m = m.with_exp(s, e);
                }
                m
            })
        }

        fn poly() -> impl Strategy<Value = GradedPoly> {
            proptest::collection::vec((monomial(), -3i64..4), 0..5).prop_map(|terms| {
                let c = mixed_chart();
                let mut p = GradedPoly::zero(&c);
                for (m, k) in terms {
                    p.add_term(m, rational(k));
                }
                p
            })
        }

        /// Multiplies generator by generator, left to right, as an oracle
        /// for the canonical product of monomials.
        fn expand(m: &Monomial) -> GradedPoly {
            let c = mixed_chart();
            let mut acc = GradedPoly::one(&c);
            for (s, e) in m.support() {
                for _ in 0..e {
                    acc = &acc * &GradedPoly::term(&c, Monomial::slot(s), Rational::one());
                }
            }
            acc
        }

        proptest! {
            #[test]
            fn graded_commutativity(a in monomial(), b in monomial()) {
                let c = mixed_chart();
                let (pa, pb) = (GradedPoly::term(&c, a, rational(2)), GradedPoly::term(&c, b, rational(-3)));
                let da = a.degree(&c);
                let db = b.degree(&c);
                let lhs = &pa * &pb;
                let rhs = &pb * &pa;
                if (da * db).rem_euclid(2) == 1 {
                    prop_assert_eq!(lhs, -rhs);
                } else {
                    prop_assert_eq!(lhs, rhs);
                }
            }

            #[test]
            fn associativity(a in poly(), b in poly(), d in poly()) {
                prop_assert_eq!(&(&a * &b) * &d, &a * &(&b * &d));
            }

            #[test]
            fn canonical_form_is_idempotent(m in monomial()) {
                let p = expand(&m);
                prop_assert_eq!(p.len(), 1);
                prop_assert_eq!(expand(p.terms().next().unwrap().0), p.clone());
            }

            #[test]
            fn mixed_partials_graded_commute(f in poly(), i in 0usize..12, j in 0usize..12) {
                let c = mixed_chart();
                let lhs = f.partial_slot(j).partial_slot(i);
                let rhs = f.partial_slot(i).partial_slot(j);
                let sign = (c.slot_degree(i) as i64 * c.slot_degree(j) as i64).rem_euclid(2) == 1;
                prop_assert_eq!(lhs, if sign { -rhs } else { rhs });
            }

            #[test]
            fn partial_is_a_graded_derivation(f in poly(), g in poly(), s in 0usize..12) {
                let c = mixed_chart();
                let comps = f.homogeneous_components();
                let mut rhs = f.partial_slot(s) * &g;
                for (d, fd) in comps {
                    let term = &fd * &g.partial_slot(s);
                    if (d * c.slot_degree(s) as i64).rem_euclid(2) == 1 {
                        rhs -= &term;
                    } else {
                        rhs += &term;
                    }
                }
                prop_assert_eq!((&f * &g).partial_slot(s), rhs);
            }
        }
    }

    #[test]
    fn rechart_requires_same_coordinates() {
        let c = chart(&[("x", 0)]);
        let c2 = c.with_max_sym_weight(5).unwrap();
        let x = GradedPoly::x(&c, 0);
        assert_eq!(x.rechart(&c2).unwrap().chart().max_sym_weight(), 5);
        assert!(x.rechart(&chart(&[("y", 0)])).is_err());
    }
}
