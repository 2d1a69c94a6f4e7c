//! The small ring interface shared by integer, field and polynomial entries.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::scalar::Scalar;

pub trait RingElem: Clone + Send + Sync {
    fn is_zero(&self) -> bool;
    /// The zero of the same ring (same field, for field-carrying types).
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }
}

impl RingElem for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_i64_like(&self, v: i64) -> Self {
        BigInt::from(v)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}

impl RingElem for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        Scalar::neg_ref(self)
    }
    fn from_i64_like(&self, v: i64) -> Self {
        self.field().from_i64(v)
    }
}

impl RingElem for Poly {
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Poly::zero(self.field())
    }
    fn one_like(&self) -> Self {
        Poly::one(self.field())
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Poly::from_i64(self.field(), v)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        self.add_assign(other);
    }
}
