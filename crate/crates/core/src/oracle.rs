// SPDX-License-Identifier: Apache-2.0

//! Exact-rational addition oracle and the reference self-check built on it.
//!
//! The oracle shares no arithmetic with the reference adder: it sums exact
//! rational values, locates the binade of the sum, and rounds the scaled
//! quotient to nearest-even before applying the saturation and flush policy.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::float::{pow2, ref_add, unpack, value_of, AddFlags, FloatFormat, FloatTriple};
use crate::sampling::{chunk_rng, sample_pair, SAMPLE_CHUNK};

/// Largest format width checked over every ordered word pair.
pub const EXHAUSTIVE_WORD_BITS: u32 = 13;

pub fn oracle_add(f1: FloatTriple, f2: FloatTriple, fmt: FloatFormat) -> Result<(FloatTriple, AddFlags)> {
    let sum = &value_of(f1, fmt)? + &value_of(f2, fmt)?;
    if sum.is_zero() {
        let flags = AddFlags {
            exact_zero: true,
            ..AddFlags::default()
        };
        return Ok((FloatTriple::positive_zero(), flags));
    }
    let negative = sum.value.is_negative();
    let magnitude = sum.value.abs();

    // floor(log2(magnitude))
    let numer_bits = magnitude.numer().bits() as i64;
    let denom_bits = magnitude.denom().bits() as i64;
    let mut binade = numer_bits - denom_bits;
    if magnitude < pow2(binade) {
        binade -= 1;
    }

    let man_bits = i64::from(fmt.man_bits());
    let scaled = &magnitude * pow2(man_bits - binade);
    let mut quotient = scaled.floor().to_integer();
    let remainder = scaled - BigRational::from_integer(quotient.clone());
    let half = pow2(-1);
    if remainder > half || (remainder == half && quotient.is_odd()) {
        quotient += BigInt::one();
    }
    if quotient == BigInt::one() << (man_bits + 1) {
        quotient >>= 1;
        binade += 1;
    }

    let biased = binade + fmt.bias();
    let mut flags = AddFlags::default();
    let result = if biased > i64::from(fmt.max_exp()) {
        flags.overflow = true;
        fmt.max_finite(negative)
    } else if biased < 1 {
        flags.underflow = true;
        FloatTriple::new(negative, 0, 0)
    } else {
        let stored = quotient - (BigInt::one() << man_bits);
        let man = stored
            .to_u64()
            .ok_or_else(|| Error::Internal("oracle mantissa out of range".into()))?;
        FloatTriple::new(negative, biased as u32, man)
    };
    Ok((result, flags))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OracleMode {
    /// Every ordered pair of format words; non-normalized pairs must be rejected.
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub f1: u64,
    pub f2: u64,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub format: FloatFormat,
    pub mode: OracleMode,
    pub checked_pairs: u64,
    pub normalized_pairs: u64,
    pub rejected_pairs: u64,
    pub mismatches: u64,
    pub first_mismatches: Vec<Mismatch>,
    pub elapsed_seconds: f64,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

const MISMATCH_CAP: usize = 8;

#[derive(Default)]
struct Tally {
    checked: u64,
    normalized: u64,
    rejected: u64,
    mismatches: u64,
    first: Vec<(u64, u64, Mismatch)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.normalized += other.normalized;
        self.rejected += other.rejected;
        self.mismatches += other.mismatches;
        self.first.extend(other.first);
        self.first.sort_by_key(|(i, j, _)| (*i, *j));
        self.first.truncate(MISMATCH_CAP);
        self
    }
}

fn describe(r: &Result<(FloatTriple, AddFlags)>, fmt: FloatFormat) -> String {
    match r {
        Ok((t, flags)) => format!(
            "{:#x} {:?}",
            crate::float::pack(*t, fmt).unwrap_or(u64::MAX),
            flags
        ),
        Err(e) => format!("error: {e}"),
    }
}

fn compare_pair<F>(adder: &F, fmt: FloatFormat, w1: u64, w2: u64, order: (u64, u64), tally: &mut Tally) -> Result<()>
where
    F: Fn(FloatTriple, FloatTriple, FloatFormat) -> Result<(FloatTriple, AddFlags)>,
{
    let f1 = unpack(w1, fmt)?;
    let f2 = unpack(w2, fmt)?;
    tally.checked += 1;
    let expected = oracle_add(f1, f2, fmt);
    let actual = adder(f1, f2, fmt);
    let agree = match (&expected, &actual) {
        (Ok(e), Ok(a)) => e == a,
        (Err(Error::Domain(_)), Err(Error::Domain(_))) => true,
        _ => false,
    };
    if expected.is_ok() {
        tally.normalized += 1;
    } else {
        tally.rejected += 1;
    }
    if !agree {
        tally.mismatches += 1;
        if tally.first.len() < MISMATCH_CAP {
            tally.first.push((
                order.0,
                order.1,
                Mismatch {
                    f1: w1,
                    f2: w2,
                    expected: describe(&expected, fmt),
                    actual: describe(&actual, fmt),
                },
            ));
        }
    }
    Ok(())
}

/// Compares `adder` against [`oracle_add`] exhaustively or on seeded samples.
pub fn oracle_check<F>(fmt: FloatFormat, mode: OracleMode, adder: F) -> Result<OracleSummary>
where
    F: Fn(FloatTriple, FloatTriple, FloatFormat) -> Result<(FloatTriple, AddFlags)> + Sync,
{
    let start = Instant::now();
    let tally = match mode {
        OracleMode::Exhaustive => {
            if fmt.width() > EXHAUSTIVE_WORD_BITS {
                return Err(Error::Config(format!(
                    "format {fmt} is {} bits wide; exhaustive oracle checking supports at most {EXHAUSTIVE_WORD_BITS}, use sampling",
                    fmt.width()
                )));
            }
            let words = 1u64 << fmt.width();
            (0..words)
                .into_par_iter()
                .map(|w1| {
                    let mut tally = Tally::default();
                    for w2 in 0..words {
                        compare_pair(&adder, fmt, w1, w2, (w1, w2), &mut tally)?;
                    }
                    Ok(tally)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?
        }
        OracleMode::Sampled { samples, seed } => {
            let chunks = samples.div_ceil(SAMPLE_CHUNK);
            (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let mut rng = chunk_rng(seed, chunk);
                    let mut tally = Tally::default();
                    let lo = chunk * SAMPLE_CHUNK;
                    let hi = (lo + SAMPLE_CHUNK).min(samples);
                    for index in lo..hi {
                        let (f1, f2) = sample_pair(&mut rng, fmt);
                        let w1 = crate::float::pack(f1, fmt)?;
                        let w2 = crate::float::pack(f2, fmt)?;
                        compare_pair(&adder, fmt, w1, w2, (index, 0), &mut tally)?;
                    }
                    Ok(tally)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?
        }
    };
    Ok(OracleSummary {
        format: fmt,
        mode,
        checked_pairs: tally.checked,
        normalized_pairs: tally.normalized,
        rejected_pairs: tally.rejected,
        mismatches: tally.mismatches,
        first_mismatches: tally.first.into_iter().map(|(_, _, m)| m).collect(),
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Self-check of the reference adder.
pub fn check_reference(fmt: FloatFormat, mode: OracleMode) -> Result<OracleSummary> {
    oracle_check(fmt, mode, ref_add)
}
