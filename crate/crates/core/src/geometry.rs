//! Vector fields, connections given by Christoffel tables, torsion,
//! curvature and the extension of a connection to symmetric tensors.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_traits::One;

use crate::enveloping::{words, DiffOp, SymTensor};
use crate::error::{Error, Result};
use crate::graded::{same_chart, Chart, Degree, GradedPoly, MultiIndex, Rational, Sign};

/// A vector field `Σ f^i ∂_{x_i}` with polynomial components.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: Arc<Chart>,
    components: Vec<GradedPoly>,
}

impl VectorField {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        Self {
            chart: chart.clone(),
            components: (0..chart.dim()).map(|_| GradedPoly::zero(chart)).collect(),
        }
    }

    /// `∂_{x_i}`.
    pub fn coordinate(chart: &Arc<Chart>, i: usize) -> Self {
        let mut out = Self::zero(chart);
        out.components[i] = GradedPoly::one(chart);
        out
    }

    /// `f · ∂_{x_i}`.
    pub fn term(f: &GradedPoly, i: usize) -> Self {
        let mut out = Self::zero(f.chart());
        out.components[i] = f.clone();
        out
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

    pub fn component(&self, i: usize) -> &GradedPoly {
        &self.components[i]
    }

    pub fn components(&self) -> &[GradedPoly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GradedPoly::is_zero)
    }

    fn check_chart(&self, other: &Arc<Chart>) -> Result<()> {
        if same_chart(&self.chart, other) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// `f · X`.
    pub fn mul_left(&self, f: &GradedPoly) -> Result<Self> {
        self.check_chart(f.chart())?;
        Ok(Self {
            chart: self.chart.clone(),
            components: self.components.iter().map(|c| f * c).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            chart: self.chart.clone(),
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_chart(&other.chart)?;
        Ok(Self {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Pieces `(degree, i, f)` with `f` homogeneous, so that
    /// `X = Σ f ∂_i` and `|f ∂_i| = degree`.
    pub fn homogeneous_terms(&self) -> Vec<(i64, usize, GradedPoly)> {
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            for (d, part) in c.homogeneous_components() {
                out.push((d - self.chart.degree(i) as i64, i, part));
            }
        }
        out
    }

    /// Decomposition into homogeneous vector fields keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<i64, VectorField> {
        let mut out: BTreeMap<i64, VectorField> = BTreeMap::new();
        for (d, i, f) in self.homogeneous_terms() {
            let entry = out.entry(d).or_insert_with(|| Self::zero(&self.chart));
            entry.components[i] += &f;
        }
        out
    }

    pub fn degree_of(&self) -> Degree {
        let comps = self.homogeneous_components();
        match comps.len() {
            0 => Degree::Zero,
            1 => Degree::Homogeneous(*comps.keys().next().expect("one degree")),
            _ => Degree::Mixed,
        }
    }

    /// `X(f) = Σ X^i ∂_i f`.
    pub fn apply(&self, f: &GradedPoly) -> Result<GradedPoly> {
        self.check_chart(f.chart())?;
        let mut out = GradedPoly::zero(&self.chart);
        for (i, c) in self.components.iter().enumerate() {
            if !c.is_zero() {
                out += &(c * &f.partial_left(i)?);
            }
        }
        Ok(out)
    }

    /// `[X, Y] = X∘Y - (-1)^{|X||Y|} Y∘X`, extended bilinearly.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        self.check_chart(&other.chart)?;
        let mut out = Self::zero(&self.chart);
        for (p, x) in self.homogeneous_components() {
            for (q, y) in other.homogeneous_components() {
                let sign = Sign::koszul(p, q);
                for k in 0..self.chart.dim() {
                    let a = x.apply(&y.components[k])?;
                    let b = y.apply(&x.components[k])?;
                    out.components[k] += &a;
                    if sign.is_minus() {
                        out.components[k] += &b;
                    } else {
                        out.components[k] -= &b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The first-order operator `Σ X^i ∂_i`.
    pub fn to_diffop(&self) -> DiffOp {
        let mut out = DiffOp::zero(&self.chart);
        for (i, c) in self.components.iter().enumerate() {
            out.add_term(MultiIndex::unit(self.chart.dim(), i), c.clone());
        }
        out
    }

    /// The weight-one tensor `Σ X^i ∂_i`.
    pub fn to_sym(&self) -> SymTensor {
        self.to_diffop().reinterpret()
    }

    /// Weight-one part of a symmetric tensor as a vector field.
    pub fn from_sym(s: &SymTensor) -> Self {
        let n = s.chart().dim();
        let mut out = Self::zero(s.chart());
        for i in 0..n {
            out.components[i] = s.coefficient(&MultiIndex::unit(n, i));
        }
        out
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_diffop())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}

impl Add for &VectorField {
    type Output = VectorField;

    fn add(self, rhs: &VectorField) -> VectorField {
        self.checked_add(rhs).expect("vector fields on different charts")
    }
}

impl Sub for &VectorField {
    type Output = VectorField;

    fn sub(self, rhs: &VectorField) -> VectorField {
        self + &(-rhs)
    }
}

impl Neg for &VectorField {
    type Output = VectorField;

    fn neg(self) -> VectorField {
        self.scale(&-Rational::one())
    }
}

/// An affine connection on the tangent bundle of a chart, given by its
/// Christoffel symbols `∇_{∂_i} ∂_j = Σ_k Γ^k_{ij} ∂_k`.
///
/// Indices are 0-based in the API.
#[derive(Clone, PartialEq, Eq)]
pub struct Connection {
    chart: Arc<Chart>,
    gamma: Vec<GradedPoly>,
    torsion_free: bool,
}

impl Connection {
    /// The connection with all Christoffel symbols zero.
    pub fn flat(chart: &Arc<Chart>) -> Self {
        let n = chart.dim();
        Self {
            chart: chart.clone(),
            gamma: (0..n * n * n).map(|_| GradedPoly::zero(chart)).collect(),
            torsion_free: true,
        }
    }

    /// Builds a connection from entries `(i, j, k, Γ^k_{ij})`; repeated
    /// entries add up.
    ///
    /// Each symbol must be a base polynomial, homogeneous of degree
    /// `|x_k| - |x_i| - |x_j|`. When `torsion_free` is set the table must
    /// satisfy `Γ^k_{ij} = (-1)^{|x_i||x_j|} Γ^k_{ji}`.
    pub fn new(
        chart: &Arc<Chart>,
        entries: impl IntoIterator<Item = (usize, usize, usize, GradedPoly)>,
        torsion_free: bool,
    ) -> Result<Self> {
        let n = chart.dim();
        let mut out = Self::flat(chart);
        out.torsion_free = false;
        for (i, j, k, g) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::InvalidConnection(format!(
                    "Christoffel index ({i}, {j}, {k}) out of range"
                )));
            }
            if !same_chart(chart, g.chart()) {
                return Err(Error::ChartMismatch);
            }
            out.gamma[(i * n + j) * n + k] += &g;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let g = out.gamma(i, j, k);
                    if !g.is_base_only() {
                        return Err(Error::InvalidConnection(format!(
                            "Γ^{k}_{{{i}{j}}} must only involve base coordinates"
                        )));
                    }
                    let want = (chart.degree(k) - chart.degree(i) - chart.degree(j)) as i64;
                    match g.degree_of() {
                        Degree::Zero => {}
                        Degree::Homogeneous(d) if d == want => {}
                        _ => {
                            return Err(Error::InvalidConnection(format!(
                                "Γ^{}_{{{}{}}} = {g} must be homogeneous of degree {want}",
                                k + 1,
                                i + 1,
                                j + 1
                            )))
                        }
                    }
                }
            }
        }
        if torsion_free {
            if !out.has_symmetric_christoffels() {
                return Err(Error::InvalidConnection(
                    "flagged torsion-free but Γ^k_ij ≠ (-1)^{|x_i||x_j|} Γ^k_ji".into(),
                ));
            }
            out.torsion_free = true;
        }
        Ok(out)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    /// `Γ^k_{ij}`.
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &GradedPoly {
        let n = self.chart.dim();
        &self.gamma[(i * n + j) * n + k]
    }

    /// Whether the connection was declared torsion-free (and validated).
    pub fn is_torsion_free(&self) -> bool {
        self.torsion_free
    }

    /// Graded symmetry of the lower indices, equivalent to vanishing
    /// torsion in coordinates.
    pub fn has_symmetric_christoffels(&self) -> bool {
        let n = self.chart.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let lhs = self.gamma(i, j, k);
                    let rhs = self.gamma(j, i, k);
                    if self.chart.is_odd(i) && self.chart.is_odd(j) {
                        *lhs == -rhs
                    } else {
                        lhs == rhs
                    }
                })
            })
        })
    }

    /// Nonzero entries `(i, j, k, Γ^k_{ij})`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &GradedPoly)> + '_ {
        let n = self.chart.dim();
        (0..n * n * n).filter_map(move |t| {
            let g = &self.gamma[t];
            (!g.is_zero()).then_some((t / (n * n), (t / n) % n, t % n, g))
        })
    }

    fn check(&self, x: &VectorField) -> Result<()> {
        if same_chart(&self.chart, x.chart()) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// `∇_X Y`.
    pub fn cov_deriv(&self, x: &VectorField, y: &VectorField) -> Result<VectorField> {
        self.check(x)?;
        self.check(y)?;
        let n = self.chart.dim();
        let mut out = VectorField::zero(&self.chart);
        for (_, i, a) in x.homogeneous_terms() {
            let di = self.chart.degree(i) as i64;
            for j in 0..n {
                let b = y.component(j);
                if b.is_zero() {
                    continue;
                }
                out.components[j] += &(&a * &b.partial_left(i)?);
                let twisted = &a * &b.koszul_twist(di);
                for k in 0..n {
                    let g = self.gamma(i, j, k);
                    if !g.is_zero() {
                        out.components[k] += &(&twisted * g);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `T(X, Y) = ∇_X Y - (-1)^{|X||Y|} ∇_Y X - [X, Y]`.
    pub fn torsion(&self, x: &VectorField, y: &VectorField) -> Result<VectorField> {
        self.check(x)?;
        self.check(y)?;
        let mut out = VectorField::zero(&self.chart);
        for (p, xp) in x.homogeneous_components() {
            for (q, yq) in y.homogeneous_components() {
                let mut t = &self.cov_deriv(&xp, &yq)? - &xp.lie_bracket(&yq)?;
                let back = self.cov_deriv(&yq, &xp)?;
                t = if Sign::koszul(p, q).is_minus() {
                    &t + &back
                } else {
                    &t - &back
                };
                out = &out + &t;
            }
        }
        Ok(out)
    }

    /// `R(X, Y)Z = (-1)^{|Y|-1} (∇_X∇_Y - (-1)^{|X||Y|} ∇_Y∇_X - ∇_{[X,Y]}) Z`.
    pub fn curvature(
        &self,
        x: &VectorField,
        y: &VectorField,
        z: &VectorField,
    ) -> Result<VectorField> {
        self.check(x)?;
        self.check(y)?;
        self.check(z)?;
        let mut out = VectorField::zero(&self.chart);
        for (p, xp) in x.homogeneous_components() {
            for (q, yq) in y.homogeneous_components() {
                let xy = self.cov_deriv(&xp, &self.cov_deriv(&yq, z)?)?;
                let yx = self.cov_deriv(&yq, &self.cov_deriv(&xp, z)?)?;
                let br = self.cov_deriv(&xp.lie_bracket(&yq)?, z)?;
                let mut r = &xy - &br;
                r = if Sign::koszul(p, q).is_minus() {
                    &r + &yx
                } else {
                    &r - &yx
                };
                if (q - 1).rem_euclid(2) == 1 {
                    r = -&r;
                }
                out = &out + &r;
            }
        }
        Ok(out)
    }

    /// `∇_{∂_i}` applied to the basis word `w(K)`.
    pub fn nabla_coordinate_word(&self, i: usize, k: &MultiIndex) -> SymTensor {
        let chart = &self.chart;
        let di = chart.degree(i) as i64;
        let letters = k.descending_letters();
        let mut out = SymTensor::zero(chart);
        let mut prefix = 0i64;
        for (pos, &l) in letters.iter().enumerate() {
            let pass = Sign::koszul(di, prefix);
            for target in 0..chart.dim() {
                let g = self.gamma(i, l, target);
                if g.is_zero() {
                    continue;
                }
                let gdeg = (chart.degree(target) - chart.degree(i) - chart.degree(l)) as i64;
                let mut new_letters = letters.clone();
                new_letters[pos] = target;
                if let Some((sign, word)) = words::canonicalize(chart, &new_letters) {
                    let total = pass * Sign::koszul(gdeg, prefix) * sign;
                    let c = if total.is_minus() { -g } else { g.clone() };
                    out.add_term(word, c);
                }
            }
            prefix += words::letter_degree(chart, l);
        }
        out
    }

    /// `∇_X S` on symmetric tensors, extending `∇` as a derivation of `⊙`.
    pub fn nabla_sym(&self, x: &VectorField, s: &SymTensor) -> Result<SymTensor> {
        self.check(x)?;
        if !same_chart(&self.chart, s.chart()) {
            return Err(Error::ChartMismatch);
        }
        let mut out = SymTensor::zero(&self.chart);
        for (p, i, a) in x.homogeneous_terms() {
            for (k, f) in s.terms() {
                let df = &a * &f.partial_left(i)?;
                out.add_term(*k, df);
                let nw = self.nabla_coordinate_word(i, k);
                if nw.is_zero() {
                    continue;
                }
                let coeff = &f.koszul_twist(p) * &a;
                out = &out + &nw.mul_left(&coeff)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for (i, j, k, g) in self.entries() {
            list.entry(&format_args!("Γ^{}_{}{} = {g}", k + 1, i + 1, j + 1));
        }
        list.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{rational, Coordinate, Truncation};
    use alloc::string::ToString;
    use alloc::vec;

    fn chart(coords: &[(&str, i32)]) -> Arc<Chart> {
        Chart::new(
            coords.iter().map(|(n, d)| Coordinate::new(*n, *d)).collect(),
            Truncation::new(3, 2, 3),
        )
        .unwrap()
    }

    #[test]
    fn apply_examples() {
        let c = chart(&[("x", 0), ("t", 1), ("u", 1)]);
        let x = GradedPoly::x(&c, 0);
        let (t, u) = (GradedPoly::x(&c, 1), GradedPoly::x(&c, 2));
        let xd = VectorField::term(&x, 0);
        assert_eq!(xd.apply(&x.pow(2)).unwrap(), x.pow(2).scale(&rational(2)));
        let dt = VectorField::coordinate(&c, 1);
        assert_eq!(dt.apply(&(&x * &t)).unwrap(), x);
        assert_eq!(dt.apply(&(&t * &u)).unwrap(), u);
    }

    #[test]
    fn bracket_examples() {
        let c = chart(&[("x", 0), ("t", 1)]);
        let x = GradedPoly::x(&c, 0);
        let d = VectorField::coordinate(&c, 0);
        let xd = VectorField::term(&x, 0);
        assert_eq!(d.lie_bracket(&xd).unwrap(), d);
        let x2d = VectorField::term(&x.pow(2), 0);
        assert_eq!(xd.lie_bracket(&x2d).unwrap(), x2d);
        let dt = VectorField::coordinate(&c, 1);
        assert!(dt.lie_bracket(&dt).unwrap().is_zero());
    }

    #[test]
    fn covariant_derivative_examples() {
        let c = chart(&[("x", 0)]);
        let x = GradedPoly::x(&c, 0);
        let e1 = Connection::new(&c, vec![(0, 0, 0, x.clone())], true).unwrap();
        let d = VectorField::coordinate(&c, 0);
        assert_eq!(e1.cov_deriv(&d, &d).unwrap(), VectorField::term(&x, 0));
        let xd = VectorField::term(&x, 0);
        assert_eq!(e1.cov_deriv(&xd, &d).unwrap(), VectorField::term(&x.pow(2), 0));
        let flat = Connection::flat(&c);
        let g = x.pow(3);
        assert_eq!(
            flat.cov_deriv(&d, &VectorField::term(&g, 0)).unwrap(),
            VectorField::term(&g.partial_left(0).unwrap(), 0)
        );
    }

    #[test]
    fn torsion_of_asymmetric_symbols() {
        let c = chart(&[("x1", 0), ("x2", 0)]);
        let one = GradedPoly::one(&c);
        let conn = Connection::new(&c, vec![(0, 1, 0, one.clone())], false).unwrap();
        let (d1, d2) = (VectorField::coordinate(&c, 0), VectorField::coordinate(&c, 1));
        assert_eq!(conn.torsion(&d1, &d2).unwrap(), d1);
        assert!(Connection::new(&c, vec![(0, 1, 0, one)], true).is_err());
    }

    #[test]
    fn curvature_example() {
        let c = chart(&[("x1", 0), ("x2", 0)]);
        let conn = Connection::new(&c, vec![(0, 0, 1, GradedPoly::x(&c, 1))], true).unwrap();
        let (d1, d2) = (VectorField::coordinate(&c, 0), VectorField::coordinate(&c, 1));
        assert_eq!(conn.curvature(&d1, &d2, &d1).unwrap(), d2);
        assert!(conn.curvature(&d1, &d1, &d2).unwrap().is_zero());
    }

    #[test]
    fn christoffel_degree_is_validated() {
        let c = chart(&[("x", 0), ("t", 1)]);
        // Γ^x_{xx} must have degree 0; t has degree 1
        let bad = Connection::new(&c, vec![(0, 0, 0, GradedPoly::x(&c, 1))], false);
        assert!(matches!(bad, Err(Error::InvalidConnection(_))));
        let fiber = Connection::new(&c, vec![(0, 0, 0, GradedPoly::y(&c, 0))], false);
        assert!(fiber.is_err());
    }

    #[test]
    fn nabla_on_symmetric_words() {
        let c = chart(&[("x", 0)]);
        let x = GradedPoly::x(&c, 0);
        let e1 = Connection::new(&c, vec![(0, 0, 0, x.clone())], true).unwrap();
        let d = VectorField::coordinate(&c, 0);
        let ss = SymTensor::word(&c, MultiIndex::from_slice(&[2]));
        let got = e1.nabla_sym(&d, &ss).unwrap();
        assert_eq!(got, ss.mul_left(&x.scale(&rational(2))).unwrap());
        assert_eq!(got.to_string(), "2*x*s[x]^2");
        let flat = Connection::flat(&c);
        assert_eq!(flat.nabla_sym(&d, &ss.mul_left(&x).unwrap()).unwrap(), ss);
        let f = SymTensor::scalar(&x.pow(2));
        assert_eq!(
            e1.nabla_sym(&d, &f).unwrap(),
            SymTensor::scalar(&x.scale(&rational(2)))
        );
    }
}
