//! Parser for the expression grammar shared by the command line and chart
//! files.
//!
//! ```text
//! expr   := [sign] term (sign term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' integer]
//! atom   := integer ['/' integer] | name ['[' name ']'] | '(' expr ')'
//! ```
//!
//! Names resolve against the chart: a coordinate `x` is the base function,
//! `y[x]` and `dx[x]` are the fiber and form generators, `s[x]` a letter of a
//! symmetric tensor and `d[x]` a letter of a differential operator. On a
//! one-coordinate chart `y` and `dx` may drop the bracket. Products are taken
//! left to right in the target algebra, so for operators they are
//! compositions. Whitespace is insignificant.

use std::fmt;
use std::sync::Arc;

use graded_pbw::enveloping::{DiffOp, SymTensor};
use graded_pbw::graded::Rational;
use graded_pbw::{Chart, Generator, GradedPoly};

/// A syntax or name error at a 1-based column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] graded_pbw::Error),
}

/// Which kind of word letter a target accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterKind {
    Sym,
    Env,
}

/// A target of parsing: a ring built from base polynomials and, possibly,
/// word letters.
pub trait Algebra: Sized + Clone {
    /// Letters this target accepts, `None` for plain polynomials.
    const LETTERS: Option<LetterKind>;

    fn from_poly(p: GradedPoly) -> Self;
    fn letter(chart: &Arc<Chart>, i: usize) -> Self;
    fn mul(&self, other: &Self) -> graded_pbw::Result<Self>;
    fn add(&self, other: &Self) -> graded_pbw::Result<Self>;
    fn neg(&self) -> Self;
}

impl Algebra for GradedPoly {
    const LETTERS: Option<LetterKind> = None;

    fn from_poly(p: GradedPoly) -> Self {
        p
    }

    fn letter(chart: &Arc<Chart>, _: usize) -> Self {
        GradedPoly::zero(chart)
    }

    fn mul(&self, other: &Self) -> graded_pbw::Result<Self> {
        self.checked_mul(other)
    }

    fn add(&self, other: &Self) -> graded_pbw::Result<Self> {
        self.checked_add(other)
    }

    fn neg(&self) -> Self {
        -self
    }
}

impl Algebra for SymTensor {
    const LETTERS: Option<LetterKind> = Some(LetterKind::Sym);

    fn from_poly(p: GradedPoly) -> Self {
        SymTensor::scalar(&p)
    }

    fn letter(chart: &Arc<Chart>, i: usize) -> Self {
        SymTensor::coordinate(chart, i)
    }

    fn mul(&self, other: &Self) -> graded_pbw::Result<Self> {
        self.sym_mul(other)
    }

    fn add(&self, other: &Self) -> graded_pbw::Result<Self> {
        self.checked_add(other)
    }

    fn neg(&self) -> Self {
        -self
    }
}

impl Algebra for DiffOp {
    const LETTERS: Option<LetterKind> = Some(LetterKind::Env);

    fn from_poly(p: GradedPoly) -> Self {
        DiffOp::scalar(&p)
    }

    fn letter(chart: &Arc<Chart>, i: usize) -> Self {
        DiffOp::coordinate(chart, i)
    }

    fn mul(&self, other: &Self) -> graded_pbw::Result<Self> {
        self.compose(other, self.chart().max_sym_weight())
    }

    fn add(&self, other: &Self) -> graded_pbw::Result<Self> {
        self.checked_add(other)
    }

    fn neg(&self) -> Self {
        -self
    }
}

/// Parses a polynomial in base, fiber and form generators.
pub fn parse_poly(chart: &Arc<Chart>, src: &str) -> Result<GradedPoly, ExprError> {
    parse(chart, src)
}

/// Parses a symmetric tensor such as `s[x]^2 + 1*x*s[x]`.
pub fn parse_sym(chart: &Arc<Chart>, src: &str) -> Result<SymTensor, ExprError> {
    parse(chart, src)
}

/// Parses a differential operator such as `d[x]^2 - 1*x*d[x]`.
pub fn parse_op(chart: &Arc<Chart>, src: &str) -> Result<DiffOp, ExprError> {
    parse(chart, src)
}

/// Parses `src` into any target algebra.
pub fn parse<A: Algebra>(chart: &Arc<Chart>, src: &str) -> Result<A, ExprError> {
    let mut p = Parser {
        chart,
        src: src.as_bytes(),
        pos: 0,
    };
    let value: A = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected {:?}", p.src[p.pos] as char)).into());
    }
    Ok(value)
}

enum Atom {
    Number(Rational),
    Generator(Generator),
    Letter(usize),
}

struct Parser<'a> {
    chart: &'a Arc<Chart>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            column: pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<A: Algebra>(&mut self) -> Result<A, ExprError> {
        let mut negative = false;
        if self.eat(b'-') {
            negative = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term::<A>()?;
        if negative {
            acc = acc.neg();
        }
        loop {
            let negative = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let t = self.term::<A>()?;
            acc = acc.add(&if negative { t.neg() } else { t })?;
        }
    }

    fn term<A: Algebra>(&mut self) -> Result<A, ExprError> {
        let mut acc = self.factor::<A>()?;
        while self.eat(b'*') {
            let f = self.factor::<A>()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor<A: Algebra>(&mut self) -> Result<A, ExprError> {
        let base: A = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr::<A>()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'").into());
                }
                inner
            }
            Some(_) => match self.atom::<A>()? {
                Atom::Number(c) => A::from_poly(GradedPoly::constant(self.chart, c)),
                Atom::Generator(g) => A::from_poly(GradedPoly::generator(self.chart, g)),
                Atom::Letter(i) => A::letter(self.chart, i),
            },
            None => return Err(self.error("unexpected end of input").into()),
        };
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        let e: u32 = digits
            .parse()
            .map_err(|_| self.error_at(start, "expected a non-negative exponent"))?;
        let mut acc = A::from_poly(GradedPoly::one(self.chart));
        for _ in 0..e {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn name(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {}
            _ => return None,
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom<A: Algebra>(&mut self) -> Result<Atom, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.src[start].is_ascii_digit() {
            let mut text = self.digits();
            if self.eat(b'/') {
                self.skip_ws();
                let den = self.digits();
                if den.is_empty() {
                    return Err(self.error("expected a denominator"));
                }
                text = format!("{text}/{den}");
            }
            return text
                .parse::<Rational>()
                .map(Atom::Number)
                .map_err(|_| self.error_at(start, format!("invalid number {text:?}")));
        }
        let Some(head) = self.name() else {
            return Err(self.error(format!("unexpected {:?}", self.src[start] as char)));
        };
        if self.eat(b'[') {
            let inner_start = self.pos;
            let inner = self
                .name()
                .ok_or_else(|| self.error("expected a coordinate name"))?;
            if !self.eat(b']') {
                return Err(self.error("expected ']'"));
            }
            let i = self.chart.index_of(&inner).ok_or_else(|| {
                self.error_at(inner_start, format!("unknown coordinate {inner:?}"))
            })?;
            return self.bracketed::<A>(start, &head, i);
        }
        if let Some(i) = self.chart.index_of(&head) {
            return Ok(Atom::Generator(Generator::base(i)));
        }
        if self.chart.dim() == 1 {
            match head.as_str() {
                "y" => return self.only_poly::<A>(start, Generator::fiber(0)),
                "dx" => return self.only_poly::<A>(start, Generator::form(0)),
                _ => {}
            }
        }
        Err(self.error_at(start, format!("unknown generator {head:?}")))
    }

    fn bracketed<A: Algebra>(&self, start: usize, head: &str, i: usize) -> Result<Atom, ParseError> {
        let kind = match head {
            "y" => return self.only_poly::<A>(start, Generator::fiber(i)),
            "dx" => return self.only_poly::<A>(start, Generator::form(i)),
            "s" => LetterKind::Sym,
            "d" => LetterKind::Env,
            _ => return Err(self.error_at(start, format!("unknown prefix {head:?}"))),
        };
        if A::LETTERS == Some(kind) {
            Ok(Atom::Letter(i))
        } else {
            let expected = match A::LETTERS {
                None => "a polynomial",
                Some(LetterKind::Sym) => "s[..] letters",
                Some(LetterKind::Env) => "d[..] letters",
            };
            Err(self.error_at(start, format!("{head}[..] is not allowed here, expected {expected}")))
        }
    }

    /// Fiber and form generators only appear in plain polynomials; word
    /// coefficients are functions of the base coordinates.
    fn only_poly<A: Algebra>(&self, start: usize, g: Generator) -> Result<Atom, ParseError> {
        if A::LETTERS.is_none() {
            Ok(Atom::Generator(g))
        } else {
            Err(self.error_at(
                start,
                format!(
                    "{} is not a base coordinate; coefficients must be functions",
                    self.chart.generator_name(g)
                ),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use graded_pbw::graded::{ratio, rational};
    use graded_pbw::{Coordinate, Truncation};

    fn chart(coords: &[(&str, i32)]) -> Arc<Chart> {
        Chart::new(
            coords.iter().map(|(n, d)| Coordinate::new(*n, *d)).collect(),
            Truncation::new(4, 2, 3),
        )
        .unwrap()
    }

    #[test]
    fn numbers_and_signs() {
        let c = chart(&[("x", 0)]);
        let p = parse_poly(&c, " - 3/6 + 2*x^2").unwrap();
        let x = GradedPoly::x(&c, 0);
        assert_eq!(p, &x.pow(2).scale(&rational(2)) - &GradedPoly::constant(&c, ratio(1, 2)));
    }

    #[test]
    fn odd_generators_anticommute() {
        let c = chart(&[("a", 1), ("b", 1)]);
        let ab = parse_poly(&c, "a*b").unwrap();
        let ba = parse_poly(&c, "b*a").unwrap();
        assert_eq!(ab, -ba);
        assert!(parse_poly(&c, "a^2").unwrap().is_zero());
    }

    #[test]
    fn bare_fiber_name_on_a_line() {
        let c = chart(&[("x", 0)]);
        assert_eq!(parse_poly(&c, "y").unwrap(), GradedPoly::y(&c, 0));
        assert_eq!(parse_poly(&c, "dx").unwrap(), GradedPoly::dx(&c, 0));
        let c2 = chart(&[("x", 0), ("z", 0)]);
        assert!(parse_poly(&c2, "y").is_err());
    }

    #[test]
    fn operator_products_compose() {
        let c = chart(&[("x", 0)]);
        let lhs = parse_op(&c, "d[x]*x").unwrap();
        let rhs = parse_op(&c, "x*d[x] + 1").unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn letters_must_match_the_target() {
        let c = chart(&[("x", 0)]);
        let e = parse_op(&c, "s[x]").unwrap_err();
        assert!(matches!(e, ExprError::Parse(ParseError { column: 1, .. })));
        assert!(parse_poly(&c, "d[x]").is_err());
        assert!(parse_sym(&c, "y[x]*s[x]").is_err());
    }

    #[test]
    fn error_columns() {
        let c = chart(&[("x", 0)]);
        let err = |s: &str| match parse_poly(&c, s).unwrap_err() {
            ExprError::Parse(p) => p.column,
            other => panic!("{other}"),
        };
        assert_eq!(err("x + q"), 5);
        assert_eq!(err("x +"), 4);
        assert_eq!(err("(x"), 3);
        assert_eq!(err("x^-1"), 3);
        assert_eq!(err("1/0"), 1);
        assert_eq!(err("x x"), 3);
    }

    #[test]
    fn composition_overflow() {
        let c = chart(&[("x", 0)]);
        let e = parse_op(&c, "d[x]^5").unwrap_err();
        assert!(matches!(e, ExprError::Algebra(graded_pbw::Error::TruncationOverflow { .. })));
    }
}
