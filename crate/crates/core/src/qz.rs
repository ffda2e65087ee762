//! Exact rationals modulo 1, the value domain for one-dimensional
//! characters.
//!
//! A value `q` with `0 <= q < 1` stands for the root of unity
//! `exp(2*pi*i*q)`; multiplying roots of unity becomes exact addition
//! in Q/Z.

use core::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// An element of Q/Z, stored as the reduced representative in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct QZ(Ratio<i64>);

impl QZ {
    /// Build `num/den` reduced modulo 1. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        QZ(Ratio::new(num, den)).normalized()
    }

    pub fn zero() -> Self {
        QZ(Ratio::zero())
    }

    fn normalized(self) -> Self {
        let r = self.0;
        let f = r - r.floor();
        debug_assert!(!f.is_negative() && f < Ratio::new(1, 1));
        QZ(f)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(self, other: Self) -> Self {
        QZ(self.0 + other.0).normalized()
    }

    pub fn neg(self) -> Self {
        QZ(-self.0).normalized()
    }

    /// `k`-fold sum of `self`, for any integer `k` (negative allowed).
    pub fn scale(self, k: i64) -> Self {
        QZ(self.0 * Ratio::new(k, 1)).normalized()
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }
}

impl fmt::Display for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_lands_in_unit_interval() {
        assert_eq!(QZ::new(3, 2), QZ::new(1, 2));
        assert_eq!(QZ::new(-1, 3), QZ::new(2, 3));
        assert_eq!(QZ::new(6, 3), QZ::zero());
        assert_eq!(QZ::new(-7, 2), QZ::new(1, 2));
    }

    #[test]
    fn addition_wraps() {
        let a = QZ::new(2, 3);
        let b = QZ::new(2, 3);
        assert_eq!(a.add(b), QZ::new(1, 3));
        assert_eq!(a.add(a.neg()), QZ::zero());
    }

    #[test]
    fn scaling_matches_repeated_addition() {
        let a = QZ::new(1, 6);
        let mut acc = QZ::zero();
        for _ in 0..5 {
            acc = acc.add(a);
        }
        assert_eq!(a.scale(5), acc);
        assert_eq!(a.scale(-1), a.neg());
        assert_eq!(a.scale(6), QZ::zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(alloc::format!("{}", QZ::zero()), "0");
        assert_eq!(alloc::format!("{}", QZ::new(1, 2)), "1/2");
    }
}
