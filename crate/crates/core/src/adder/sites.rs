// SPDX-License-Identifier: Apache-2.0

//! Fault sites of the implementation adder. Each function is the fault-free
//! logic of one site plus the rewrite of the faults that target it; a site
//! consults only its own fault kinds.

use crate::fault::{FaultConfig, FaultKind};
use crate::stages::GRS_BITS;

pub fn select_big(e1: u32, e2: u32, m1: u64, m2: u64, faults: &FaultConfig) -> bool {
    let exp_gt = e1 > e2;
    let exp_eq = e1 == e2;
    let man_ge = faults.is_enabled(FaultKind::EqualExponentSelectionBug) || m1 >= m2;
    let f1_big = exp_gt || (exp_eq && man_ge);
    f1_big ^ faults.is_enabled(FaultKind::FaultyOperandSelection)
}

pub fn extend_small(significand: u64, faults: &FaultConfig) -> u64 {
    let pad = if faults.is_enabled(FaultKind::OperandExtensionMisalignment) {
        GRS_BITS - 1
    } else {
        GRS_BITS
    };
    significand << pad
}

/// Right shifter with a sticky window. The window covers every bit that lands
/// at or below the sticky position; the result's lowest bit is the sticky bit.
pub fn align(smallman: u64, shift: u32, ext_width: u32, faults: &FaultConfig) -> (u64, bool) {
    let shift = shift.min(ext_width);
    let offset = if faults.is_enabled(FaultKind::StickyBitDistortion) {
        faults.param(FaultKind::StickyBitDistortion)
    } else {
        0
    };
    let window = (i64::from(shift) + 1 + offset).clamp(0, 64) as u32;
    let mask = ((1u128 << window) - 1) as u64;
    let sticky = smallman & mask != 0;
    (((smallman >> shift) & !1) | u64::from(sticky), sticky)
}

/// Steers the operands onto the adder ports; the second port is inverted on subtraction.
pub fn route(bigman: u64, algman: u64, eff_sub: bool, faults: &FaultConfig) -> (u64, u64) {
    if eff_sub && faults.is_enabled(FaultKind::InversionSwapInSubtraction) {
        (algman, bigman)
    } else {
        (bigman, algman)
    }
}

pub fn carry_in(eff_sub: bool, faults: &FaultConfig) -> u64 {
    u64::from(eff_sub ^ faults.is_enabled(FaultKind::CarryInManipulation))
}

/// Left-shift distance for a sum with `leading_zeros` (≥ 1) zeros above its leading one.
pub fn left_shift_amount(leading_zeros: u32, faults: &FaultConfig) -> u32 {
    let offset = if faults.is_enabled(FaultKind::NormalizationShiftError) {
        faults.param(FaultKind::NormalizationShiftError)
    } else {
        0
    };
    (i64::from(leading_zeros) - 1 + offset).clamp(0, 63) as u32
}

/// Renormalizes a sum that carried out of the significand.
pub fn carry_renormalize(addman: u64, faults: &FaultConfig) -> u64 {
    let offset = if faults.is_enabled(FaultKind::ShiftDistortion) {
        faults.param(FaultKind::ShiftDistortion)
    } else {
        0
    };
    let shift = (1 + offset).clamp(0, 63) as u32;
    let lost = addman & ((1u64 << shift) - 1);
    (addman >> shift) | u64::from(lost != 0)
}

pub fn round_increment(lsb: bool, guard: bool, round: bool, sticky: bool, faults: &FaultConfig) -> bool {
    let tie_break = lsb ^ faults.is_enabled(FaultKind::RoundingRuleViolation);
    guard && (round || sticky || tie_break)
}
