use core::fmt;

use super::chart::{Chart, Generator, MAX_GENERATORS};
use super::sign::Sign;

/// Exponent vector over the generator slots of a chart, read in canonical
/// factor order (base, fiber, form).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: [u8; MAX_GENERATORS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_GENERATORS],
    };

    pub fn slot(slot: usize) -> Self {
        let mut m = Self::ONE;
        m.exps[slot] = 1;
        m
    }

    pub fn generator(chart: &Chart, g: Generator) -> Self {
        Self::slot(chart.slot(g))
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn exp(&self, slot: usize) -> u32 {
        self.exps[slot] as u32
    }

    pub fn with_exp(mut self, slot: usize, e: u32) -> Self {
        self.exps[slot] = u8::try_from(e).expect("exponent overflow");
        self
    }

    /// Slots with a nonzero exponent, in canonical order.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(s, &e)| (s, e as u32))
    }

    pub fn degree(&self, chart: &Chart) -> i64 {
        self.support()
            .map(|(s, e)| chart.slot_degree(s) as i64 * e as i64)
            .sum()
    }

    fn block_sum(&self, start: usize, len: usize) -> u32 {
        self.exps[start..start + len].iter().map(|&e| e as u32).sum()
    }

    /// Total exponent of the base generators.
    pub fn base_degree(&self, n: usize) -> u32 {
        self.block_sum(0, n)
    }

    /// Total exponent `q` of the fiber generators.
    pub fn fiber_weight(&self, n: usize) -> u32 {
        self.block_sum(n, n)
    }

    /// Total exponent `p` of the form generators.
    pub fn form_degree(&self, n: usize) -> u32 {
        self.block_sum(2 * n, n)
    }

    /// Only the slots in `start..end`.
    pub fn restrict(&self, start: usize, end: usize) -> Self {
        let mut m = Self::ONE;
        m.exps[start..end].copy_from_slice(&self.exps[start..end]);
        m
    }

    /// Canonical form of the product `self · other`, or `None` when an odd
    /// generator would repeat.
    pub fn mul(&self, other: &Monomial, chart: &Chart) -> Option<(Sign, Monomial)> {
        let mut out = *self;
        let mut odd_after = 0u32;
        let mut sign_odd = false;
        // Walk slots from the end; `odd_after` counts odd factors of `self`
        // sitting at later slots, which every odd factor of `other` must cross.
        for s in (0..chart.num_generators()).rev() {
            let (a, b) = (self.exps[s], other.exps[s]);
            let odd = chart.slot_is_odd(s);
            if odd {
                if b > 0 {
                    if a > 0 {
                        return None;
                    }
                    sign_odd ^= odd_after % 2 == 1;
                }
                if a > 0 {
                    odd_after += 1;
                }
            }
            out.exps[s] = a.checked_add(b).expect("exponent overflow");
        }
        Some((Sign::parity(sign_odd), out))
    }

    /// Parity of the degree of the factors strictly before `slot`.
    pub fn prefix_is_odd(&self, slot: usize, chart: &Chart) -> bool {
        self.exps[..slot]
            .iter()
            .enumerate()
            .filter(|(s, &e)| e % 2 == 1 && chart.slot_is_odd(*s))
            .count()
            % 2
            == 1
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.support()).finish()
    }
}
