use alloc::collections::btree_map::{self, BTreeMap};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::marker::PhantomData;
use core::ops::{Add, Neg, Sub};

use num_traits::One;

use super::words;
use crate::error::{Error, Result};
use crate::graded::print::TermWriter;
use crate::graded::{same_chart, Chart, Degree, GradedPoly, MultiIndex, Rational};

/// Distinguishes symmetric tensors from differential operators, which share
/// the representation `Σ f_K · word(K)` with coefficients on the left.
pub trait WordKind: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    /// Prefix of a letter in printed words: `s[x]` or `d[x]`.
    const LETTER: &'static str;
}

/// Marker for elements of `Γ(S T_M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sym;

/// Marker for normal-ordered differential operators, `U(T_M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Env;

impl WordKind for Sym {
    const LETTER: &'static str = "s";
}

impl WordKind for Env {
    const LETTER: &'static str = "d";
}

/// A finite sum `Σ_K f_K · w(K)` of basis words with polynomial
/// coefficients on the left.
///
/// For [`SymTensor`] the word is the reversed symmetric word
/// `∂_n^{k_n} ⊙ ⋯ ⊙ ∂_1^{k_1}`; for [`DiffOp`] it is the composition
/// `∂_n^{k_n} ∘ ⋯ ∘ ∂_1^{k_1}`, so `∂_1` acts first.
#[derive(Clone)]
pub struct WordSum<K: WordKind> {
    chart: Arc<Chart>,
    terms: BTreeMap<MultiIndex, GradedPoly>,
    kind: PhantomData<K>,
}

pub type SymTensor = WordSum<Sym>;
pub type DiffOp = WordSum<Env>;

impl<K: WordKind> WordSum<K> {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        Self {
            chart: chart.clone(),
            terms: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    /// The basis word `w(k)` with coefficient 1. Zero if an odd letter
    /// repeats.
    pub fn word(chart: &Arc<Chart>, k: MultiIndex) -> Self {
        Self::term(chart, k, GradedPoly::one(chart))
    }

    /// The word in the given letters (0-based coordinate indices, read left
    /// to right), brought to canonical order.
    pub fn letters(chart: &Arc<Chart>, letters: &[usize]) -> Self {
        match words::canonicalize(chart, letters) {
            Some((sign, k)) => {
                let c = if sign.is_minus() {
                    -GradedPoly::one(chart)
                } else {
                    GradedPoly::one(chart)
                };
                Self::term(chart, k, c)
            }
            None => Self::zero(chart),
        }
    }

    /// A single letter `∂_i`.
    pub fn coordinate(chart: &Arc<Chart>, i: usize) -> Self {
        Self::word(chart, MultiIndex::unit(chart.dim(), i))
    }

    /// A weight-0 element.
    pub fn scalar(f: &GradedPoly) -> Self {
        Self::term(f.chart(), MultiIndex::zero(f.chart().dim()), f.clone())
    }

    pub fn term(chart: &Arc<Chart>, k: MultiIndex, coeff: GradedPoly) -> Self {
        let mut out = Self::zero(chart);
        out.add_term(k, coeff);
        out
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> btree_map::Iter<'_, MultiIndex, GradedPoly> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, k: &MultiIndex) -> GradedPoly {
        self.terms
            .get(k)
            .cloned()
            .unwrap_or_else(|| GradedPoly::zero(&self.chart))
    }

    /// Adds `coeff · w(k)`; words with a repeated odd letter are zero.
    pub fn add_term(&mut self, k: MultiIndex, coeff: GradedPoly) {
        assert!(same_chart(&self.chart, coeff.chart()), "coefficient on a different chart");
        if coeff.is_zero() || words::has_odd_repeat(&self.chart, &k) {
            return;
        }
        match self.terms.entry(k) {
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
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_chart(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, -c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, f) in &self.terms {
            out.add_term(*k, f.scale(c));
        }
        out
    }

    /// Left multiplication by a function, `f · S`.
    pub fn mul_left(&self, f: &GradedPoly) -> Result<Self> {
        if !same_chart(&self.chart, f.chart()) {
            return Err(Error::ChartMismatch);
        }
        let mut out = Self::zero(&self.chart);
        for (k, g) in &self.terms {
            out.add_term(*k, f * g);
        }
        Ok(out)
    }

    /// Largest word weight, or `None` for zero. For operators this is the
    /// order.
    pub fn weight(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::weight).max()
    }

    /// Only the words of weight `w`.
    pub fn weight_component(&self, w: u32) -> Self {
        self.filter(|k| k.weight() == w)
    }

    /// Only the words of weight at most `w`.
    pub fn truncate(&self, w: u32) -> Self {
        self.filter(|k| k.weight() <= w)
    }

    fn filter(&self, keep: impl Fn(&MultiIndex) -> bool) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, c) in &self.terms {
            if keep(k) {
                out.add_term(*k, c.clone());
            }
        }
        out
    }

    pub fn degree_of(&self) -> Degree {
        let mut degree = None;
        for (k, c) in &self.terms {
            let wd = words::word_degree(&self.chart, k);
            match c.degree_of() {
                Degree::Zero => {}
                Degree::Mixed => return Degree::Mixed,
                Degree::Homogeneous(d) => match degree {
                    None => degree = Some(d + wd),
                    Some(e) if e == d + wd => {}
                    Some(_) => return Degree::Mixed,
                },
            }
        }
        degree.map_or(Degree::Zero, Degree::Homogeneous)
    }

    /// Decomposition into homogeneous pieces `(degree, f·w(k))` with `f`
    /// homogeneous.
    pub fn homogeneous_terms(&self) -> Vec<(i64, MultiIndex, GradedPoly)> {
        let mut out = Vec::new();
        for (k, c) in &self.terms {
            let wd = words::word_degree(&self.chart, k);
            for (d, part) in c.homogeneous_components() {
                out.push((d + wd, *k, part));
            }
        }
        out
    }

    /// Same element with the other word interpretation: the symbol map
    /// between operators and symmetric tensors on basis words.
    pub fn reinterpret<L: WordKind>(&self) -> WordSum<L> {
        WordSum {
            chart: self.chart.clone(),
            terms: self.terms.clone(),
            kind: PhantomData,
        }
    }

    /// Printed form of a basis word such as `d[y]*d[x]^2`.
    pub fn word_string(chart: &Chart, k: &MultiIndex) -> String {
        let mut out = String::new();
        for i in (0..k.len()).rev() {
            let e = k.get(i);
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            let _ = write!(out, "{}[{}]", K::LETTER, chart.coordinates()[i].name);
            if e > 1 {
                let _ = write!(out, "^{e}");
            }
        }
        out
    }
}

impl<K: WordKind> PartialEq for WordSum<K> {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl<K: WordKind> Eq for WordSum<K> {}

impl<K: WordKind> fmt::Display for WordSum<K> {
    /// Highest weight first; within a weight, words in descending order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut w = TermWriter::new(f);
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.weight().cmp(&a.weight()).then(b.cmp(a)));
        for k in keys {
            w.group(&self.terms[k], &Self::word_string(&self.chart, k))?;
        }
        w.finish()
    }
}

impl<K: WordKind> fmt::Debug for WordSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<K: WordKind> Add for &WordSum<K> {
    type Output = WordSum<K>;

    fn add(self, rhs: Self) -> WordSum<K> {
        self.checked_add(rhs).expect("elements on different charts")
    }
}

impl<K: WordKind> Sub for &WordSum<K> {
    type Output = WordSum<K>;

    fn sub(self, rhs: Self) -> WordSum<K> {
        self.checked_sub(rhs).expect("elements on different charts")
    }
}

impl<K: WordKind> Add for WordSum<K> {
    type Output = WordSum<K>;

    fn add(self, rhs: Self) -> WordSum<K> {
        &self + &rhs
    }
}

impl<K: WordKind> Sub for WordSum<K> {
    type Output = WordSum<K>;

    fn sub(self, rhs: Self) -> WordSum<K> {
        &self - &rhs
    }
}

impl<K: WordKind> Neg for &WordSum<K> {
    type Output = WordSum<K>;

    fn neg(self) -> WordSum<K> {
        self.scale(&-Rational::one())
    }
}

impl<K: WordKind> Neg for WordSum<K> {
    type Output = WordSum<K>;

    fn neg(self) -> WordSum<K> {
        -&self
    }
}
