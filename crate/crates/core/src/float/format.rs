// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Widest exponent field accepted. Keeps every word and extended significand in a `u64`.
pub const MAX_EXP_BITS: u32 = 11;
pub const MAX_MAN_BITS: u32 = 52;

/// Binary floating-point layout `[sign | exponent | mantissa]` with an IEEE-style bias.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(u32, u32)", into = "(u32, u32)")]
pub struct FloatFormat {
    exp_bits: u32,
    man_bits: u32,
}

impl FloatFormat {
    /// Desk-scale minifloat used for exhaustive work.
    pub const DESK: FloatFormat = FloatFormat {
        exp_bits: 4,
        man_bits: 3,
    };
    pub const HALF: FloatFormat = FloatFormat {
        exp_bits: 5,
        man_bits: 10,
    };
    pub const SINGLE: FloatFormat = FloatFormat {
        exp_bits: 8,
        man_bits: 23,
    };

    pub fn new(exp_bits: u32, man_bits: u32) -> Result<Self> {
        if !(2..=MAX_EXP_BITS).contains(&exp_bits) {
            return Err(Error::Format(format!(
                "exponent width {exp_bits} outside supported range 2..={MAX_EXP_BITS}"
            )));
        }
        if !(1..=MAX_MAN_BITS).contains(&man_bits) {
            return Err(Error::Format(format!(
                "mantissa width {man_bits} outside supported range 1..={MAX_MAN_BITS}"
            )));
        }
        Ok(FloatFormat { exp_bits, man_bits })
    }

    pub fn exp_bits(self) -> u32 {
        self.exp_bits
    }

    pub fn man_bits(self) -> u32 {
        self.man_bits
    }

    pub fn bias(self) -> i64 {
        (1i64 << (self.exp_bits - 1)) - 1
    }

    pub fn width(self) -> u32 {
        1 + self.exp_bits + self.man_bits
    }

    /// Largest biased exponent of a finite normalized value (all-ones is reserved).
    pub fn max_exp(self) -> u32 {
        (1u32 << self.exp_bits) - 2
    }

    pub fn exp_mask(self) -> u32 {
        (1u32 << self.exp_bits) - 1
    }

    pub fn man_mask(self) -> u64 {
        (1u64 << self.man_bits) - 1
    }

    pub fn word_mask(self) -> u64 {
        u64::MAX >> (64 - self.width())
    }

    pub fn is_normal_exp(self, e: u32) -> bool {
        (1..=self.max_exp()).contains(&e)
    }

    /// Number of normalized finite encodings (both signs).
    pub fn normalized_count(self) -> u64 {
        (2 * u64::from(self.max_exp())) << self.man_bits
    }

    /// The `index`-th normalized operand in ascending packed-word order.
    pub fn nth_normalized(self, index: u64) -> FloatTriple {
        debug_assert!(index < self.normalized_count());
        let per_sign = u64::from(self.max_exp()) << self.man_bits;
        let sign = index >= per_sign;
        let rest = index % per_sign;
        FloatTriple {
            sign,
            exp: 1 + (rest >> self.man_bits) as u32,
            man: rest & self.man_mask(),
        }
    }

    /// Largest finite magnitude, used for saturation.
    pub fn max_finite(self, sign: bool) -> FloatTriple {
        FloatTriple {
            sign,
            exp: self.max_exp(),
            man: self.man_mask(),
        }
    }
}

impl fmt::Display for FloatFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.exp_bits, self.man_bits)
    }
}

impl TryFrom<(u32, u32)> for FloatFormat {
    type Error = Error;

    fn try_from((e, m): (u32, u32)) -> Result<Self> {
        FloatFormat::new(e, m)
    }
}

impl From<FloatFormat> for (u32, u32) {
    fn from(fmt: FloatFormat) -> Self {
        (fmt.exp_bits, fmt.man_bits)
    }
}

/// Sign, biased exponent and stored mantissa of one operand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FloatTriple {
    pub sign: bool,
    pub exp: u32,
    pub man: u64,
}

impl FloatTriple {
    pub const fn new(sign: bool, exp: u32, man: u64) -> Self {
        FloatTriple { sign, exp, man }
    }

    pub fn positive_zero() -> Self {
        FloatTriple::default()
    }

    pub fn negate(self) -> Self {
        FloatTriple {
            sign: !self.sign,
            ..self
        }
    }

    pub fn fits(self, fmt: FloatFormat) -> bool {
        self.exp <= fmt.exp_mask() && self.man <= fmt.man_mask()
    }

    pub fn is_normalized(self, fmt: FloatFormat) -> bool {
        self.fits(fmt) && fmt.is_normal_exp(self.exp)
    }

    /// Significand with the implicit leading one.
    pub fn significand(self, fmt: FloatFormat) -> u64 {
        (1u64 << fmt.man_bits()) | self.man
    }

    pub(crate) fn require_normalized(self, fmt: FloatFormat) -> Result<()> {
        if !self.fits(fmt) {
            return Err(Error::Format(format!(
                "operand {self:?} does not fit format {fmt}"
            )));
        }
        if !fmt.is_normal_exp(self.exp) {
            return Err(Error::Domain(format!(
                "operand exponent {} is not a normalized exponent of format {fmt}",
                self.exp
            )));
        }
        Ok(())
    }
}

/// Packs `f` as `[s | e | m]`, most significant bit first.
pub fn pack(f: FloatTriple, fmt: FloatFormat) -> Result<u64> {
    if !f.fits(fmt) {
        return Err(Error::Format(format!(
            "fields of {f:?} exceed format {fmt}"
        )));
    }
    let sign = u64::from(f.sign) << (fmt.exp_bits() + fmt.man_bits());
    Ok(sign | (u64::from(f.exp) << fmt.man_bits()) | f.man)
}

pub fn unpack(word: u64, fmt: FloatFormat) -> Result<FloatTriple> {
    if word & !fmt.word_mask() != 0 {
        return Err(Error::Format(format!(
            "word {word:#x} wider than {} bits",
            fmt.width()
        )));
    }
    Ok(FloatTriple {
        sign: (word >> (fmt.exp_bits() + fmt.man_bits())) & 1 == 1,
        exp: ((word >> fmt.man_bits()) as u32) & fmt.exp_mask(),
        man: word & fmt.man_mask(),
    })
}
