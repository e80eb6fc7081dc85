//! Duality pairing between symmetric tensors and fiber polynomials.

use alloc::vec::Vec;

use num_traits::Zero;

use super::combination::SymTensor;
use super::words;
use crate::error::{Error, Result};
use crate::graded::{koszul_sign, Chart, GradedPoly, Monomial, MultiIndex, Rational, Sign};

/// Sign of one perfect matching in `⟨⃖∂^I, y^I⟩`.
///
/// The letters `X_1, …, X_p` of the reversed word are paired with the
/// factors `α_1, …, α_p` of `y^I` (in canonical ascending order); the sign
/// is the Koszul sign of `X_1, …, X_p, α_1, …, α_p ↦ X_1, α_{σ(1)}, …`.
/// Matchings only differ by exchanging equal even letters, so they all
/// share this sign.
pub fn matching_sign(chart: &Chart, i: &MultiIndex) -> Sign {
    let xs = i.descending_letters();
    let alphas: Vec<usize> = xs.iter().rev().copied().collect();
    let p = xs.len();
    let mut used = alloc::vec![false; p];
    let mut perm = Vec::with_capacity(2 * p);
    let mut degrees: Vec<i64> = xs.iter().map(|&l| words::letter_degree(chart, l)).collect();
    degrees.extend(alphas.iter().map(|&l| chart.degree(l) as i64));
    for (a, &x) in xs.iter().enumerate() {
        let b = (0..p)
            .find(|&b| !used[b] && alphas[b] == x)
            .expect("fiber factor for every letter");
        used[b] = true;
        perm.push(a);
        perm.push(p + b);
    }
    koszul_sign(&perm, &degrees).expect("valid permutation")
}

/// `⟨⃖∂^I, y^J⟩`: zero unless `I = J`, and `±I!` otherwise.
pub fn basis_pairing(chart: &Chart, i: &MultiIndex, j: &MultiIndex) -> Rational {
    if i != j || words::has_odd_repeat(chart, i) {
        return Rational::zero();
    }
    let v = Rational::from_integer(i.factorial());
    if matching_sign(chart, i).is_minus() {
        -v
    } else {
        v
    }
}

/// Splits a base-and-fiber monomial into its base part and fiber exponents.
pub(crate) fn split_fiber(chart: &Chart, m: &Monomial) -> (Monomial, MultiIndex) {
    let n = chart.dim();
    let mut j = MultiIndex::zero(n);
    for i in 0..n {
        j.set(i, m.exp(n + i));
    }
    (m.restrict(0, n), j)
}

/// The pairing `⟨S, σ⟩` of a symmetric tensor with a fiber polynomial,
/// bilinear over functions: `⟨f S, g σ⟩ = (-1)^{|S||g|} f g ⟨S, σ⟩`.
pub fn pairing(s: &SymTensor, sigma: &GradedPoly) -> Result<GradedPoly> {
    let chart = s.chart();
    if !crate::graded::same_chart(chart, sigma.chart()) {
        return Err(Error::ChartMismatch);
    }
    let n = chart.dim();
    let mut out = GradedPoly::zero(chart);
    for (m, c) in sigma.terms() {
        if m.form_degree(n) != 0 {
            return Err(Error::InvalidArgument(
                "the pairing takes a fiber polynomial without form generators".into(),
            ));
        }
        let (base, j) = split_fiber(chart, m);
        let g = GradedPoly::term(chart, base, c.clone());
        let gdeg = base.degree(chart);
        for (i, f) in s.terms() {
            let v = basis_pairing(chart, i, &j);
            if v.is_zero() {
                continue;
            }
            let twisted = if (gdeg * words::word_degree(chart, i)).rem_euclid(2) == 1 {
                -&g
            } else {
                g.clone()
            };
            out += &(f * &twisted).scale(&v);
        }
    }
    Ok(out)
}
