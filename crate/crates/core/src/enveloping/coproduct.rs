//! Tensor squares over the function algebra and the comultiplications of
//! `Γ(S T_M)` and `U(T_M)`.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::marker::PhantomData;

use num_bigint::BigInt;

use super::combination::{WordKind, WordSum};
use super::words;
use crate::error::{Error, Result};
use crate::geometry::VectorField;
use crate::graded::print::TermWriter;
use crate::graded::{same_chart, Chart, GradedPoly, MultiIndex, Rational};

/// A finite sum `Σ f · (w(K) ⊗ w(L))` in `A ⊗_{C^∞} A`, with every
/// coefficient pushed into the left factor.
#[derive(Clone)]
pub struct TensorSquare<K: WordKind> {
    chart: Arc<Chart>,
    terms: BTreeMap<(MultiIndex, MultiIndex), GradedPoly>,
    kind: PhantomData<K>,
}

impl<K: WordKind> TensorSquare<K> {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        Self {
            chart: chart.clone(),
            terms: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> btree_map::Iter<'_, (MultiIndex, MultiIndex), GradedPoly> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, left: MultiIndex, right: MultiIndex, coeff: GradedPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &Self) {
        for ((l, r), c) in &other.terms {
            self.add_term(*l, *r, c.clone());
        }
    }

    /// `a ⊗ b`, normalized by `u ⊗ (h v) = (-1)^{|u||h|} (h u) ⊗ v`.
    pub fn from_pair(a: &WordSum<K>, b: &WordSum<K>) -> Result<Self> {
        if !same_chart(a.chart(), b.chart()) {
            return Err(Error::ChartMismatch);
        }
        let mut out = Self::zero(a.chart());
        for (du, m, g) in a.homogeneous_terms() {
            for (n, h) in b.terms() {
                out.add_term(m, *n, &h.koszul_twist(du) * &g);
            }
        }
        Ok(out)
    }

    /// `f · T`.
    pub fn mul_left(&self, f: &GradedPoly) -> Self {
        let mut out = Self::zero(&self.chart);
        for ((l, r), c) in &self.terms {
            out.add_term(*l, *r, f * c);
        }
        out
    }

    /// `(F ⊗ G)(T)` for left-linear maps `F`, `G` given on basis words:
    /// `f · w(K) ⊗ w(L) ↦ f · F(w(K)) ⊗ G(w(L))`.
    pub fn map_words<L: WordKind>(
        &self,
        mut left: impl FnMut(&MultiIndex) -> Result<WordSum<L>>,
        mut right: impl FnMut(&MultiIndex) -> Result<WordSum<L>>,
    ) -> Result<TensorSquare<L>> {
        let mut out = TensorSquare::<L>::zero(&self.chart);
        for ((l, r), c) in &self.terms {
            let pair = TensorSquare::from_pair(&left(l)?, &right(r)?)?;
            for ((a, b), d) in pair.terms {
                out.add_term(a, b, c * &d);
            }
        }
        Ok(out)
    }

    /// `(L ⊗ 1)(T)` for a map `L` acting on the left factor.
    pub fn apply_left(
        &self,
        mut map: impl FnMut(&WordSum<K>) -> Result<WordSum<K>>,
    ) -> Result<Self> {
        let mut out = Self::zero(&self.chart);
        for ((l, r), c) in &self.terms {
            let u = map(&WordSum::term(&self.chart, *l, c.clone()))?;
            out.add(&Self::from_pair(&u, &WordSum::word(&self.chart, *r))?);
        }
        Ok(out)
    }

    /// `(1 ⊗ L)(T)` for a map `L` of degree `degree` acting on the right
    /// factor: `(1 ⊗ L)(u ⊗ v) = (-1)^{|L||u|} u ⊗ L(v)`.
    pub fn apply_right(
        &self,
        degree: i64,
        mut map: impl FnMut(&WordSum<K>) -> Result<WordSum<K>>,
    ) -> Result<Self> {
        let mut out = Self::zero(&self.chart);
        for ((l, r), c) in &self.terms {
            let v = map(&WordSum::word(&self.chart, *r))?;
            let wl = words::word_degree(&self.chart, l);
            for (d, part) in c.homogeneous_components() {
                let u = WordSum::term(&self.chart, *l, part);
                let t = Self::from_pair(&u, &v)?;
                if (degree * (d + wl)).rem_euclid(2) == 1 {
                    out.add(&t.mul_left(&-GradedPoly::one(&self.chart)));
                } else {
                    out.add(&t);
                }
            }
        }
        Ok(out)
    }
}

impl TensorSquare<super::Env> {
    /// Left multiplication by `Δ(X) = X ⊗ 1 + 1 ⊗ X` for a vector field `X`:
    /// `X·u ⊗ v + (-1)^{|X||u|} u ⊗ X·v`.
    pub fn left_mul_delta(&self, x: &VectorField, max_order: u32) -> Result<Self> {
        if !same_chart(&self.chart, x.chart()) {
            return Err(Error::ChartMismatch);
        }
        let mut out = Self::zero(&self.chart);
        for (p, xp) in x.homogeneous_components() {
            let xd = xp.to_diffop();
            let left = self.apply_left(|u| xd.compose(u, max_order))?;
            let right = self.apply_right(p, |v| xd.compose(v, max_order))?;
            out.add(&left);
            out.add(&right);
        }
        Ok(out)
    }
}

impl<K: WordKind> PartialEq for TensorSquare<K> {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl<K: WordKind> Eq for TensorSquare<K> {}

impl<K: WordKind> fmt::Display for TensorSquare<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut w = TermWriter::new(f);
        for ((l, r), c) in &self.terms {
            let word = |k: &MultiIndex| {
                if k.weight() == 0 {
                    alloc::string::String::from("1")
                } else {
                    WordSum::<K>::word_string(&self.chart, k)
                }
            };
            w.group(c, &alloc::format!("{} (x) {}", word(l), word(r)))?;
        }
        w.finish()
    }
}

impl<K: WordKind> fmt::Debug for TensorSquare<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `Δ(w(K)) = Σ_{M ≤ K} (Π binom(k_i, m_i)) ε w(M) ⊗ w(K - M)` where `ε` is
/// the sign of `w(M) ⊙ w(K - M) = ε w(K)`.
pub fn comult_word(chart: &Chart, k: &MultiIndex) -> Vec<(MultiIndex, MultiIndex, Rational)> {
    let mut out = Vec::new();
    for m in k.sub_indices() {
        let rest = k.checked_sub(&m).expect("sub-index");
        let mut c = BigInt::from(1);
        for i in 0..k.len() {
            c *= binomial(k.get(i), m.get(i));
        }
        if words::concat_sign(chart, &m, &rest).is_minus() {
            c = -c;
        }
        out.push((m, rest, Rational::from_integer(c)));
    }
    out
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Comultiplication, left-linear over functions: `Δ(f · w) = f · Δ(w)`.
/// The same shuffle formula serves `Γ(S T_M)` and `U(T_M)`.
pub fn comult<K: WordKind>(s: &WordSum<K>) -> TensorSquare<K> {
    let chart = s.chart();
    let mut out = TensorSquare::zero(chart);
    for (k, f) in s.terms() {
        for (m, rest, c) in comult_word(chart, k) {
            out.add_term(m, rest, f.scale(&c));
        }
    }
    out
}

/// Comultiplication of `Γ(S T_M)`.
pub fn comult_sym(s: &super::SymTensor) -> TensorSquare<super::Sym> {
    comult(s)
}

/// Comultiplication of `U(T_M)`.
pub fn comult_env(d: &super::DiffOp) -> TensorSquare<super::Env> {
    comult(d)
}

/// Counit applied to the right factor: `(1 ⊗ ε)(T)`, keeping only terms
/// whose right word is empty.
pub fn counit_right<K: WordKind>(t: &TensorSquare<K>) -> WordSum<K> {
    let mut out = WordSum::zero(t.chart());
    for ((l, r), c) in t.terms() {
        if r.weight() == 0 {
            out.add_term(*l, c.clone());
        }
    }
    out
}
