// SPDX-License-Identifier: Apache-2.0

/// Round-to-nearest-even of a normalized `man_bits + 1`-bit significand.
///
/// Returns the rounded significand and whether the increment carried out of
/// the significand. On carry the result is renormalized (shifted right by one),
/// so it always fits in `man_bits + 1` bits and the caller bumps the exponent.
pub fn round_rne(sig: u64, guard: bool, round: bool, sticky: bool, man_bits: u32) -> (u64, bool) {
    let lsb = sig & 1 == 1;
    let increment = guard && (round || sticky || lsb);
    if !increment {
        return (sig, false);
    }
    let bumped = sig + 1;
    if bumped >> (man_bits + 1) != 0 {
        (bumped >> 1, true)
    } else {
        (bumped, false)
    }
}
