//! Sign bookkeeping for graded-symmetric words in coordinate derivations.
//!
//! A multi-index `K` stands for the word `∂_n^{k_n} ⋯ ∂_1^{k_1}` (highest
//! index first). Coordinate derivations graded-commute both under `⊙` and
//! under composition, so the same rules serve symmetric tensors and
//! constant-coefficient operators.

use crate::graded::{Chart, MultiIndex, Sign};

/// `|∂_i| = -|x_i|`.
pub fn letter_degree(chart: &Chart, i: usize) -> i64 {
    -(chart.degree(i) as i64)
}

/// Total degree of the word `K`.
pub fn word_degree(chart: &Chart, k: &MultiIndex) -> i64 {
    k.iter()
        .enumerate()
        .map(|(i, e)| e as i64 * letter_degree(chart, i))
        .sum()
}

/// Whether `K` has an odd letter more than once.
pub fn has_odd_repeat(chart: &Chart, k: &MultiIndex) -> bool {
    k.iter().enumerate().any(|(i, e)| e > 1 && chart.is_odd(i))
}

/// `∂_i · ⃖∂^L` rewritten as `sign · ⃖∂^{L + e_i}`, or `None` if it vanishes.
pub fn insert_left(chart: &Chart, i: usize, l: &MultiIndex) -> Option<(Sign, MultiIndex)> {
    if chart.is_odd(i) && l.get(i) > 0 {
        return None;
    }
    let mut odd = false;
    if chart.is_odd(i) {
        for j in i + 1..l.len() {
            odd ^= chart.is_odd(j) && l.get(j) % 2 == 1;
        }
    }
    Some((Sign::parity(odd), l.add_unit(i)))
}

/// `⃖∂^K · ⃖∂^L` rewritten as `sign · ⃖∂^{K + L}`, or `None` if it vanishes.
pub fn concat(chart: &Chart, k: &MultiIndex, l: &MultiIndex) -> Option<(Sign, MultiIndex)> {
    let sum = k.sum(l);
    if has_odd_repeat(chart, &sum) {
        return None;
    }
    Some((concat_sign(chart, k, l), sum))
}

/// `(-1)^{Σ_{a<b} K_a L_b |∂_a||∂_b|}`: letters of `L` moving left past the
/// lower letters of `K`.
pub fn concat_sign(chart: &Chart, k: &MultiIndex, l: &MultiIndex) -> Sign {
    let mut odd = false;
    for b in 0..l.len() {
        if !(chart.is_odd(b) && l.get(b) % 2 == 1) {
            continue;
        }
        for a in 0..b {
            odd ^= chart.is_odd(a) && k.get(a) % 2 == 1;
        }
    }
    Sign::parity(odd)
}

/// Canonical form of an arbitrary sequence of letters (coordinate indices),
/// reordered to descending index with Koszul signs.
pub fn canonicalize(chart: &Chart, letters: &[usize]) -> Option<(Sign, MultiIndex)> {
    let mut k = MultiIndex::zero(chart.dim());
    let mut odd = false;
    for (a, &i) in letters.iter().enumerate() {
        if chart.is_odd(i) {
            if k.get(i) > 0 {
                return None;
            }
            for &j in &letters[..a] {
                // an earlier lower letter must end up to the right of `i`
                odd ^= j < i && chart.is_odd(j);
            }
        }
        k = k.add_unit(i);
    }
    Some((Sign::parity(odd), k))
}

/// Words of weight exactly `w` over `n` letters, without odd repeats.
pub fn basis_words(chart: &Chart, w: u32) -> alloc::vec::Vec<MultiIndex> {
    fn rec(
        chart: &Chart,
        i: usize,
        left: u32,
        cur: &mut MultiIndex,
        out: &mut alloc::vec::Vec<MultiIndex>,
    ) {
        if i == chart.dim() {
            if left == 0 {
                out.push(*cur);
            }
            return;
        }
        let max = if chart.is_odd(i) { left.min(1) } else { left };
        for e in 0..=max {
            cur.set(i, e);
            rec(chart, i + 1, left - e, cur, out);
        }
        cur.set(i, 0);
    }
    let mut out = alloc::vec::Vec::new();
    rec(chart, 0, w, &mut MultiIndex::zero(chart.dim()), &mut out);
    out
}

/// Words of weight at most `w`, by increasing weight.
pub fn basis_words_upto(chart: &Chart, w: u32) -> alloc::vec::Vec<MultiIndex> {
    (0..=w).flat_map(|k| basis_words(chart, k)).collect()
}
