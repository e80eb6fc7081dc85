//! Graded-commutative polynomial arithmetic over exact rationals.
//!
//! Sign convention: all partial derivatives are left derivatives. For a
//! generator `g` in slot `s` and a canonical monomial `m = a · g^e · b`
//! (with `a` the factors in earlier slots),
//! `∂_g m = (-1)^{|g||a|} e · a · g^{e-1} · b`, which makes `∂_g` a graded
//! derivation of degree `-|g|`.

mod chart;
mod monomial;
mod multiindex;
mod poly;
pub(crate) mod print;
mod sign;

pub use chart::{
    Chart, Coordinate, Generator, GeneratorKind, Truncation, MAX_COORDINATES, MAX_GENERATORS,
};
pub(crate) use chart::same_chart;
pub use monomial::Monomial;
pub use multiindex::MultiIndex;
pub use poly::{Degree, GradedPoly};
pub use sign::{koszul_sign, Sign};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;

/// `n` as a rational.
pub fn rational(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `p / q` as a rational. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub(crate) fn signed(sign: Sign, c: Rational) -> Rational {
    if sign.is_minus() {
        -c
    } else {
        c
    }
}
