// SPDX-License-Identifier: Apache-2.0

//! Stage-boundary signal bundles shared by the reference and implementation adders.
//!
//! Extended significands place the hidden one at bit `man_bits + 3` followed by the
//! stored mantissa and three low-order bits: guard, round and sticky.

use serde::{Deserialize, Serialize};

use crate::float::{FloatFormat, FloatTriple};

/// Number of guard/round/sticky bits below the significand.
pub const GRS_BITS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Alignment,
    AddRound,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Alignment => "alignment",
            Stage::AddRound => "add-round",
        }
    }
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Width of `bigman`, `smallman` and `algman`.
pub fn ext_width(fmt: FloatFormat) -> u32 {
    fmt.man_bits() + 1 + GRS_BITS
}

/// Width of the raw sum `addman` (one carry bit above the extended significand).
pub fn sum_width(fmt: FloatFormat) -> u32 {
    ext_width(fmt) + 1
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AddFlags {
    pub overflow: bool,
    pub underflow: bool,
    pub exact_zero: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlignmentSignals {
    pub expdiff: u32,
    pub bigman: u64,
    pub smallman: u64,
    /// Aligned small significand; its lowest bit carries `sticky`.
    pub algman: u64,
    pub sticky: bool,
    pub big_is_f1: bool,
    pub eff_sub: bool,
    /// The shift distance pushed the whole small significand below the round bit.
    pub collapse: bool,
}

/// Operand information the add-round stage needs besides the aligned significands.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AddRoundContext {
    pub s1: bool,
    pub s2: bool,
    pub exp_big: u32,
}

impl AddRoundContext {
    pub fn from_operands(f1: FloatTriple, f2: FloatTriple, big_is_f1: bool) -> Self {
        AddRoundContext {
            s1: f1.sign,
            s2: f2.sign,
            exp_big: if big_is_f1 { f1.exp } else { f2.exp },
        }
    }

    pub fn big_sign(&self, big_is_f1: bool) -> bool {
        if big_is_f1 {
            self.s1
        } else {
            self.s2
        }
    }
}

/// Normalization classes: left-shift distance bucketed as 0, 1, or 2 and more.
/// A carry-out (right shift) falls in class 0 and is flagged by `carry_out`.
pub const NORM_CLASS_NONE: u8 = 0;
pub const NORM_CLASS_ONE: u8 = 1;
pub const NORM_CLASS_MANY: u8 = 2;

pub fn norm_class(norm_shift: i32) -> u8 {
    match norm_shift {
        i32::MIN..=0 => NORM_CLASS_NONE,
        1 => NORM_CLASS_ONE,
        _ => NORM_CLASS_MANY,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AddRoundSignals {
    pub addman: u64,
    /// Normalization shift, positive to the left; -1 on carry-out.
    pub norm_shift: i32,
    pub carry_out: bool,
    pub norm_class: u8,
    pub round_inc: bool,
    pub result: FloatTriple,
    pub flags: AddFlags,
}
