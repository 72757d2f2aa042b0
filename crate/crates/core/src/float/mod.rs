// SPDX-License-Identifier: Apache-2.0

//! Bit-level floating-point encoding and the golden reference adder.

mod exact;
mod format;
mod reference;
mod round;

pub use exact::{value_of, ExactValue};
pub(crate) use exact::pow2;
pub use format::{pack, unpack, FloatFormat, FloatTriple, MAX_EXP_BITS, MAX_MAN_BITS};
pub use reference::{ref_add, ref_add_traced, ReferenceAdd};
#[cfg(test)]
pub(crate) use reference::ref_alignment;
pub use round::round_rne;
pub use crate::stages::AddFlags;
