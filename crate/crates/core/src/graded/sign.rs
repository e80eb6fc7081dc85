use core::ops::{Mul, MulAssign, Neg};

use alloc::format;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^k` for the parity of `k`.
    pub fn parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// `(-1)^(a*b)`.
    pub fn koszul(a: i64, b: i64) -> Self {
        Self::parity(a.rem_euclid(2) == 1 && b.rem_euclid(2) == 1)
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::parity(self != rhs)
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// Koszul sign `ε(σ; X_1, …, X_n)` of a permutation of homogeneous elements,
/// defined by `X_σ(1) ⊙ ⋯ ⊙ X_σ(n) = ε X_1 ⊙ ⋯ ⊙ X_n` in the graded
/// symmetric algebra.
///
/// `permutation` is in 0-based one-line notation (`permutation[a] = σ(a)`)
/// and `degrees[i]` is the degree of `X_i`.
pub fn koszul_sign(permutation: &[usize], degrees: &[i64]) -> Result<Sign> {
    let n = permutation.len();
    if degrees.len() != n {
        return Err(Error::InvalidArgument(format!(
            "permutation of length {n} with {} degrees",
            degrees.len()
        )));
    }
    let mut seen = alloc::vec![false; n];
    for &p in permutation {
        if p >= n || seen[p] {
            return Err(Error::InvalidArgument(format!(
                "{permutation:?} is not a permutation"
            )));
        }
        seen[p] = true;
    }
    let mut sign = Sign::Plus;
    for a in 0..n {
        for b in a + 1..n {
            let (i, j) = (permutation[a], permutation[b]);
            if i > j {
                sign *= Sign::koszul(degrees[i], degrees[j]);
            }
        }
    }
    Ok(sign)
}
