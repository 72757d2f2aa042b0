// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::format::{FloatFormat, FloatTriple};
use crate::error::Result;

/// Unbounded rational value with a distinguished negative zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactValue {
    pub value: BigRational,
    pub negative_zero: bool,
}

impl ExactValue {
    pub fn zero() -> Self {
        ExactValue {
            value: BigRational::zero(),
            negative_zero: false,
        }
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        ExactValue {
            value: BigRational::new(BigInt::from(numer), BigInt::from(denom)),
            negative_zero: false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() || (self.value.is_zero() && self.negative_zero)
    }
}

impl Add for &ExactValue {
    type Output = ExactValue;

    fn add(self, rhs: &ExactValue) -> ExactValue {
        let value = &self.value + &rhs.value;
        // -0 + -0 is the only sum that keeps a negative zero.
        let negative_zero = value.is_zero() && self.is_negative() && rhs.is_negative();
        ExactValue {
            value,
            negative_zero,
        }
    }
}

impl Neg for ExactValue {
    type Output = ExactValue;

    fn neg(self) -> ExactValue {
        let negative_zero = self.value.is_zero() && !self.negative_zero;
        ExactValue {
            value: -self.value,
            negative_zero,
        }
    }
}

/// `2^k` as an exact rational for any integer `k`.
pub(crate) fn pow2(k: i64) -> BigRational {
    let mag = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// Exact value `(-1)^s * 2^(e - bias) * (1 + m / 2^man_bits)` of a normalized operand.
pub fn value_of(f: FloatTriple, fmt: FloatFormat) -> Result<ExactValue> {
    f.require_normalized(fmt)?;
    let significand = BigRational::from_integer(BigInt::from(f.significand(fmt)));
    let scale = pow2(i64::from(f.exp) - fmt.bias() - i64::from(fmt.man_bits()));
    let magnitude = significand * scale;
    Ok(ExactValue {
        value: if f.sign { -magnitude } else { magnitude },
        negative_zero: false,
    })
}
