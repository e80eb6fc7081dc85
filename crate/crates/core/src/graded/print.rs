//! Canonical text output shared by every printable type.
//!
//! Plain polynomials print as `±c*g^e*...` terms joined by ` + ` / ` - `,
//! with a unit coefficient omitted. Grouped values (operators, symmetric
//! tensors, form sections) print one group per basis word:
//!
//! * constant coefficient: `word` or `c*word`;
//! * single non-constant term: `c*mono*word` with the coefficient explicit;
//! * several terms: `(poly)*word`;
//! * empty word: the coefficient's terms inline.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt::{self, Write};

use num_traits::{One, Signed};

use super::chart::Chart;
use super::monomial::Monomial;
use super::poly::GradedPoly;
use super::Rational;

/// Display order of monomials: form degree, fiber weight, base degree, then
/// exponents with earlier generators first.
pub(crate) fn display_key(m: &Monomial, chart: &Chart) -> (u32, u32, u32, Reverse<Monomial>) {
    let n = chart.dim();
    (m.form_degree(n), m.fiber_weight(n), m.base_degree(n), Reverse(*m))
}

pub(crate) fn sorted_terms(p: &GradedPoly) -> Vec<(&Monomial, &Rational)> {
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by_key(|(m, _)| display_key(m, p.chart()));
    terms
}

pub(crate) fn monomial_string(m: &Monomial, chart: &Chart) -> String {
    let mut out = String::new();
    for (s, e) in m.support() {
        if !out.is_empty() {
            out.push('*');
        }
        out.push_str(&chart.generator_name(chart.generator_at(s)));
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
    out
}

/// Writes signed terms with separators.
pub(crate) struct TermWriter<'a, 'b> {
    f: &'a mut fmt::Formatter<'b>,
    first: bool,
}

impl<'a, 'b> TermWriter<'a, 'b> {
    pub(crate) fn new(f: &'a mut fmt::Formatter<'b>) -> Self {
        Self { f, first: true }
    }

    pub(crate) fn term(&mut self, negative: bool, body: &str) -> fmt::Result {
        match (self.first, negative) {
            (true, false) => {}
            (true, true) => self.f.write_str("-")?,
            (false, false) => self.f.write_str(" + ")?,
            (false, true) => self.f.write_str(" - ")?,
        }
        self.first = false;
        self.f.write_str(body)
    }

    /// `c * factors`, dropping a unit coefficient unless `explicit`.
    pub(crate) fn scaled(&mut self, c: &Rational, factors: &[&str], explicit: bool) -> fmt::Result {
        let mut body = String::new();
        let abs = c.abs();
        if explicit || !abs.is_one() || factors.iter().all(|s| s.is_empty()) {
            let _ = write!(body, "{abs}");
        }
        for s in factors.iter().filter(|s| !s.is_empty()) {
            if !body.is_empty() {
                body.push('*');
            }
            body.push_str(s);
        }
        self.term(c.is_negative(), &body)
    }

    pub(crate) fn poly(&mut self, p: &GradedPoly) -> fmt::Result {
        for (m, c) in sorted_terms(p) {
            self.scaled(c, &[&monomial_string(m, p.chart())], false)?;
        }
        Ok(())
    }

    /// One group `coeff * word`.
    pub(crate) fn group(&mut self, coeff: &GradedPoly, word: &str) -> fmt::Result {
        if coeff.is_zero() {
            return Ok(());
        }
        if word.is_empty() {
            return self.poly(coeff);
        }
        if coeff.is_constant() {
            return self.scaled(&coeff.constant_term(), &[word], false);
        }
        if coeff.len() == 1 {
            let (m, c) = coeff.terms().next().expect("one term");
            return self.scaled(c, &[&monomial_string(m, coeff.chart()), word], true);
        }
        let body = alloc::format!("({coeff})*{word}");
        self.term(false, &body)
    }

    pub(crate) fn finish(self) -> fmt::Result {
        if self.first {
            self.f.write_str("0")
        } else {
            Ok(())
        }
    }
}

pub(crate) fn write_plain(f: &mut fmt::Formatter<'_>, p: &GradedPoly) -> fmt::Result {
    let mut w = TermWriter::new(f);
    w.poly(p)?;
    w.finish()
}
