//! Exact scalar fields.
//!
//! Everything above this module is written against [`Field`], a small
//! extension of the `num-traits` algebra traits that adds inversion and
//! complex conjugation. Two instances ship: [`Rat`] (arbitrary precision
//! rationals, conjugation is the identity) and [`CycNum`] (elements of a
//! cyclotomic field `Q(zeta_N)`).

mod cyclotomic;
mod rat;

use std::fmt;

use num_traits::{One, Zero};

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CycNum};
pub use rat::{parse_rat, rat_to_string, Rat};

/// A commutative field with an involutive automorphism `conj`.
///
/// The `*_ref` methods exist so that generic code can combine borrowed
/// values without cloning big rationals on every operation.
pub trait Field:
    Clone + PartialEq + fmt::Debug + fmt::Display + Zero + One + Send + Sync + 'static
{
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    fn from_rat(r: Rat) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(n.into()))
    }

    fn div_ref(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul_ref(&r))
    }

    /// The rational value of `self` when it lies in `Q`.
    fn to_rat(&self) -> Option<Rat>;

    /// Canonical rational coordinates of `self` viewed in `Q(zeta_order)`.
    /// Used as a hash key; `order` must be a multiple of the field order.
    fn coords(&self, order: u32) -> Vec<Rat>;
}

impl Field for Rat {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_rat(r: Rat) -> Self {
        r
    }

    fn to_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }

    fn coords(&self, _order: u32) -> Vec<Rat> {
        vec![self.clone()]
    }
}
