use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::chart::MAX_COORDINATES;

/// A multi-index `I = (i_1, …, i_n)` of nonnegative integers.
///
/// Positions are 0-based in the API (`get(0)` is `i_1`). The truncation
/// helpers take the 1-based cut position `k` of the usual notation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    entries: [u8; MAX_COORDINATES],
    len: u8,
}

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_COORDINATES, "multi-index longer than {MAX_COORDINATES}");
        Self {
            entries: [0; MAX_COORDINATES],
            len: n as u8,
        }
    }

    pub fn from_slice(values: &[u32]) -> Self {
        let mut m = Self::zero(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.entries[i] = u8::try_from(v).expect("multi-index entry too large");
        }
        m
    }

    /// `e_k` with `k` 0-based.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[k] = 1;
        m
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries[i] as u32
    }

    pub fn set(&mut self, i: usize, value: u32) {
        self.entries[i] = u8::try_from(value).expect("multi-index entry too large");
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.entries[..self.len()]
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.as_slice().iter().map(|&e| e as u32)
    }

    /// `|I|`.
    pub fn weight(&self) -> u32 {
        self.iter().sum()
    }

    /// `I!`.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for e in self.iter() {
            for k in 2..=e {
                acc *= BigInt::from(k);
            }
        }
        acc
    }

    /// `≤k` truncation `(i_1, …, i_k, 0, …, 0)`.
    pub fn upto(&self, k: usize) -> Self {
        let mut m = *self;
        for i in k.min(self.len())..self.len() {
            m.entries[i] = 0;
        }
        m
    }

    /// `<k` truncation `(i_1, …, i_{k-1}, 0, …, 0)`.
    pub fn below(&self, k: usize) -> Self {
        self.upto(k.saturating_sub(1))
    }

    /// `>k` truncation `(0, …, 0, i_{k+1}, …, i_n)`.
    pub fn above(&self, k: usize) -> Self {
        let mut m = *self;
        for i in 0..k.min(self.len()) {
            m.entries[i] = 0;
        }
        m
    }

    pub fn add_unit(&self, k: usize) -> Self {
        let mut m = *self;
        m.entries[k] += 1;
        m
    }

    pub fn sub_unit(&self, k: usize) -> Option<Self> {
        let mut m = *self;
        m.entries[k] = m.entries[k].checked_sub(1)?;
        Some(m)
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut m = *self;
        for i in 0..self.len() {
            m.entries[i] = self.entries[i].checked_sub(other.entries[i])?;
        }
        Some(m)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..self.len() {
            m.entries[i] += other.entries[i];
        }
        m
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.iter().zip(other.iter()).all(|(a, b)| a <= b)
    }

    /// All multi-indices `J ≤ self` componentwise.
    pub fn sub_indices(&self) -> alloc::vec::Vec<MultiIndex> {
        let mut out = alloc::vec![MultiIndex::zero(self.len())];
        for i in 0..self.len() {
            let mut next = alloc::vec::Vec::new();
            for m in &out {
                for e in 0..=self.get(i) {
                    let mut j = *m;
                    j.set(i, e);
                    next.push(j);
                }
            }
            out = next;
        }
        out
    }

    /// Expands `I` into the coordinate indices of the reversed word
    /// `∂_n^{i_n} ⊙ ⋯ ⊙ ∂_1^{i_1}`, highest index first.
    pub fn descending_letters(&self) -> alloc::vec::Vec<usize> {
        let mut out = alloc::vec::Vec::with_capacity(self.weight() as usize);
        for i in (0..self.len()).rev() {
            for _ in 0..self.get(i) {
                out.push(i);
            }
        }
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
