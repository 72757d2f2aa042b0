// SPDX-License-Identifier: Apache-2.0

//! Seeded operand sampling shared by the oracle self-check and random checking.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::float::{FloatFormat, FloatTriple};
use crate::stages::GRS_BITS;

/// Samples are generated in fixed-size chunks, each from its own stream, so the
/// sample at a given index never depends on how work is split across threads.
pub const SAMPLE_CHUNK: u64 = 4096;

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

pub fn sample_operand<R: Rng>(rng: &mut R, fmt: FloatFormat) -> FloatTriple {
    fmt.nth_normalized(rng.random_range(0..fmt.normalized_count()))
}

/// Draws an ordered pair of normalized operands.
///
/// Half of the pairs keep the second exponent within alignment reach of the
/// first, so carries, cancellation and rounding ties are exercised at wide
/// formats where uniform exponents would almost always collapse the smaller operand.
pub fn sample_pair<R: Rng>(rng: &mut R, fmt: FloatFormat) -> (FloatTriple, FloatTriple) {
    let f1 = sample_operand(rng, fmt);
    let f2 = if rng.random::<bool>() {
        sample_operand(rng, fmt)
    } else {
        let reach = i64::from(fmt.man_bits() + GRS_BITS);
        let offset = rng.random_range(-reach..=reach);
        let exp = (i64::from(f1.exp) + offset).clamp(1, i64::from(fmt.max_exp())) as u32;
        FloatTriple::new(rng.random::<bool>(), exp, rng.random_range(0..=fmt.man_mask()))
    };
    (f1, f2)
}
