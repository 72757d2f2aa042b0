// SPDX-License-Identifier: Apache-2.0

//! Golden reference adder.
//!
//! Written for clarity rather than hardware economy: magnitudes are compared as
//! packed `(exponent, mantissa)` keys, effective subtraction is a plain unsigned
//! difference, and normalization walks from the bit length of the raw sum.

use super::format::{FloatFormat, FloatTriple};
use super::round::round_rne;
use crate::error::Result;
use crate::stages::{
    ext_width, norm_class, AddFlags, AddRoundContext, AddRoundSignals, AlignmentSignals, GRS_BITS,
};

/// Result of a traced reference addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceAdd {
    pub alignment: AlignmentSignals,
    pub add_round: AddRoundSignals,
}

impl ReferenceAdd {
    pub fn result(&self) -> FloatTriple {
        self.add_round.result
    }

    pub fn flags(&self) -> AddFlags {
        self.add_round.flags
    }
}

/// Adds two normalized operands with round-to-nearest-even.
///
/// Overflow saturates to the largest finite value, results below the smallest
/// normal exponent flush to a zero carrying the larger operand's sign, and exact
/// cancellation yields `+0`.
pub fn ref_add(f1: FloatTriple, f2: FloatTriple, fmt: FloatFormat) -> Result<(FloatTriple, AddFlags)> {
    let traced = ref_add_traced(f1, f2, fmt)?;
    Ok((traced.result(), traced.flags()))
}

pub fn ref_add_traced(f1: FloatTriple, f2: FloatTriple, fmt: FloatFormat) -> Result<ReferenceAdd> {
    f1.require_normalized(fmt)?;
    f2.require_normalized(fmt)?;
    let alignment = ref_alignment(f1, f2, fmt);
    let ctx = AddRoundContext::from_operands(f1, f2, alignment.big_is_f1);
    let add_round = ref_add_round(&alignment, &ctx, fmt);
    Ok(ReferenceAdd {
        alignment,
        add_round,
    })
}

pub(crate) fn ref_alignment(f1: FloatTriple, f2: FloatTriple, fmt: FloatFormat) -> AlignmentSignals {
    let key = |f: FloatTriple| (u64::from(f.exp) << fmt.man_bits()) | f.man;
    let big_is_f1 = key(f1) >= key(f2);
    let (big, small) = if big_is_f1 { (f1, f2) } else { (f2, f1) };

    let expdiff = f1.exp.abs_diff(f2.exp);
    let big_sig = big.significand(fmt);
    let small_sig = small.significand(fmt);

    // Guard and round positions appended below the small significand.
    let extended = u128::from(small_sig) << (GRS_BITS - 1);
    let collapse = expdiff >= fmt.man_bits() + GRS_BITS;
    let (aligned, sticky) = if collapse {
        (0u128, small_sig != 0)
    } else {
        let lost = extended & ((1u128 << expdiff) - 1);
        (extended >> expdiff, lost != 0)
    };

    AlignmentSignals {
        expdiff,
        bigman: big_sig << GRS_BITS,
        smallman: small_sig << GRS_BITS,
        algman: ((aligned as u64) << 1) | u64::from(sticky),
        sticky,
        big_is_f1,
        eff_sub: f1.sign != f2.sign,
        collapse,
    }
}

pub(crate) fn ref_add_round(
    a: &AlignmentSignals,
    ctx: &AddRoundContext,
    fmt: FloatFormat,
) -> AddRoundSignals {
    let sign = ctx.big_sign(a.big_is_f1);
    let addman = if a.eff_sub {
        a.bigman.wrapping_sub(a.algman)
    } else {
        a.bigman + a.algman
    };
    if addman == 0 {
        return AddRoundSignals {
            flags: AddFlags {
                exact_zero: true,
                ..AddFlags::default()
            },
            ..AddRoundSignals::default()
        };
    }

    let hidden_pos = (ext_width(fmt) - 1) as i32;
    let lead_pos = (63 - addman.leading_zeros()) as i32;
    let norm_shift = hidden_pos - lead_pos;
    let normalized = if norm_shift < 0 {
        // Only a one-bit carry is possible; fold the dropped bit into sticky.
        (addman >> 1) | (addman & 1)
    } else {
        addman << norm_shift
    };

    let sig = normalized >> GRS_BITS;
    let guard = (normalized >> 2) & 1 == 1;
    let round = (normalized >> 1) & 1 == 1;
    let sticky = normalized & 1 == 1;
    let (rounded, carry) = round_rne(sig, guard, round, sticky, fmt.man_bits());
    let round_inc = guard && (round || sticky || sig & 1 == 1);

    let exponent = i64::from(ctx.exp_big) - i64::from(norm_shift) + i64::from(carry);
    let mut flags = AddFlags::default();
    let result = if exponent < 1 {
        flags.underflow = true;
        FloatTriple::new(sign, 0, 0)
    } else if exponent > i64::from(fmt.max_exp()) {
        flags.overflow = true;
        fmt.max_finite(sign)
    } else {
        FloatTriple::new(sign, exponent as u32, rounded & fmt.man_mask())
    };

    AddRoundSignals {
        addman,
        norm_shift,
        carry_out: norm_shift < 0,
        norm_class: norm_class(norm_shift),
        round_inc,
        result,
        flags,
    }
}
