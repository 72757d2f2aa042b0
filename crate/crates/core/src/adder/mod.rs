// SPDX-License-Identifier: Apache-2.0

//! The implementation adder under verification.
//!
//! Hardware-flavoured and deliberately unlike the reference: the exponent
//! difference comes from a two's-complement subtractor, subtraction inverts the
//! second adder port with a carry-in, normalization uses a leading-zero count,
//! and rounding selects between the significand and a precomputed increment.
//! Every catalogued fault hooks into one of the [`sites`].

pub mod sites;

use crate::error::{Error, Result};
use crate::fault::FaultConfig;
use crate::float::{ref_add_traced, FloatFormat, FloatTriple};
use crate::signals::{ModelTrace, SignalTrace};
use crate::stages::{
    ext_width, norm_class, sum_width, AddFlags, AddRoundContext, AddRoundSignals, AlignmentSignals,
    GRS_BITS,
};

pub fn eval_alignment(
    f1: FloatTriple,
    f2: FloatTriple,
    fmt: FloatFormat,
    faults: &FaultConfig,
) -> Result<AlignmentSignals> {
    f1.require_normalized(fmt)?;
    f2.require_normalized(fmt)?;

    let big_is_f1 = sites::select_big(f1.exp, f2.exp, f1.man, f2.man, faults);

    // |e1 - e2| from an (exp_bits + 1)-bit subtractor and conditional negate.
    let width = fmt.exp_bits() + 1;
    let mask = (1u32 << width) - 1;
    let diff = f1.exp.wrapping_add((!f2.exp).wrapping_add(1)) & mask;
    let negative = diff >> fmt.exp_bits() & 1 == 1;
    let expdiff = if negative {
        (!diff).wrapping_add(1) & mask
    } else {
        diff
    };

    let (big, small) = if big_is_f1 { (f1, f2) } else { (f2, f1) };
    let ext = ext_width(fmt);
    let bigman = big.significand(fmt) << GRS_BITS;
    let smallman = sites::extend_small(small.significand(fmt), faults);
    let (algman, sticky) = sites::align(smallman, expdiff, ext, faults);
    let eff_sub = f1.sign ^ f2.sign;
    let (bigman, algman) = sites::route(bigman, algman, eff_sub, faults);

    Ok(AlignmentSignals {
        expdiff,
        bigman,
        smallman,
        algman,
        sticky,
        big_is_f1,
        eff_sub,
        collapse: expdiff >= ext - 1,
    })
}

fn check_width(name: &str, value: u64, width: u32) -> Result<()> {
    if value >> width != 0 {
        return Err(Error::Format(format!(
            "{name} = {value:#x} exceeds its {width}-bit width"
        )));
    }
    Ok(())
}

/// Add, normalize and round. Accepts externally constructed alignment signals;
/// only their widths are validated.
pub fn eval_addround(
    a: &AlignmentSignals,
    ctx: &AddRoundContext,
    fmt: FloatFormat,
    faults: &FaultConfig,
) -> Result<AddRoundSignals> {
    let ext = ext_width(fmt);
    check_width("bigman", a.bigman, ext)?;
    check_width("algman", a.algman, ext)?;
    check_width("smallman", a.smallman, ext)?;
    check_width("expdiff", a.expdiff.into(), fmt.exp_bits())?;
    check_width("exp_big", ctx.exp_big.into(), fmt.exp_bits())?;

    let width = sum_width(fmt);
    let sum_mask = (1u64 << width) - 1;
    let ext_mask = (1u64 << ext) - 1;
    let sign = ctx.big_sign(a.big_is_f1);

    let port_b = if a.eff_sub { !a.algman & sum_mask } else { a.algman };
    let addman = (a.bigman + port_b + sites::carry_in(a.eff_sub, faults)) & sum_mask;
    if addman == 0 {
        return Ok(AddRoundSignals {
            flags: AddFlags {
                exact_zero: true,
                ..AddFlags::default()
            },
            ..AddRoundSignals::default()
        });
    }

    let leading_zeros = addman.leading_zeros() - (64 - width);
    let (normalized, norm_shift) = if leading_zeros == 0 {
        (sites::carry_renormalize(addman, faults), -1)
    } else {
        let shift = sites::left_shift_amount(leading_zeros, faults);
        ((addman << shift), leading_zeros as i32 - 1)
    };
    let normalized = normalized & ext_mask;

    let sig = normalized >> GRS_BITS;
    let guard = normalized >> 2 & 1 == 1;
    let round = normalized >> 1 & 1 == 1;
    let sticky = normalized & 1 == 1;
    let round_inc = sites::round_increment(sig & 1 == 1, guard, round, sticky, faults);

    let incremented = sig + 1;
    let carry = round_inc && incremented >> (fmt.man_bits() + 1) != 0;
    let rounded = match (round_inc, carry) {
        (false, _) => sig,
        (true, false) => incremented,
        (true, true) => incremented >> 1,
    };

    let exponent = i64::from(ctx.exp_big) - i64::from(norm_shift) + i64::from(carry);
    let mut flags = AddFlags::default();
    let result = if exponent > i64::from(fmt.max_exp()) {
        flags.overflow = true;
        fmt.max_finite(sign)
    } else if exponent < 1 {
        flags.underflow = true;
        FloatTriple::new(sign, 0, 0)
    } else {
        FloatTriple::new(sign, exponent as u32, rounded & fmt.man_mask())
    };

    Ok(AddRoundSignals {
        addman,
        norm_shift,
        carry_out: norm_shift < 0,
        norm_class: norm_class(norm_shift),
        round_inc,
        result,
        flags,
    })
}

/// Both stages of the implementation, as a single-namespace model trace.
pub fn eval_model(
    f1: FloatTriple,
    f2: FloatTriple,
    fmt: FloatFormat,
    faults: &FaultConfig,
) -> Result<ModelTrace> {
    let a = eval_alignment(f1, f2, fmt, faults)?;
    let ctx = AddRoundContext::from_operands(f1, f2, a.big_is_f1);
    let r = eval_addround(&a, &ctx, fmt, faults)?;
    Ok(ModelTrace::from_stages(f1, f2, fmt, &a, &r))
}

/// Reference model trace; never fault-injected.
pub fn spec_model(f1: FloatTriple, f2: FloatTriple, fmt: FloatFormat) -> Result<ModelTrace> {
    let traced = ref_add_traced(f1, f2, fmt)?;
    Ok(ModelTrace::from_stages(
        f1,
        f2,
        fmt,
        &traced.alignment,
        &traced.add_round,
    ))
}

/// Implementation trace published under the `impl.` namespace.
pub fn eval(f1: FloatTriple, f2: FloatTriple, fmt: FloatFormat, faults: &FaultConfig) -> Result<SignalTrace> {
    Ok(SignalTrace::new(fmt, Some(eval_model(f1, f2, fmt, faults)?), None))
}

/// Reference trace published under the `spec.` namespace.
pub fn eval_spec(f1: FloatTriple, f2: FloatTriple, fmt: FloatFormat) -> Result<SignalTrace> {
    Ok(SignalTrace::new(fmt, None, Some(spec_model(f1, f2, fmt)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault::FaultKind;
    use crate::float::{ref_add, ref_alignment};
    use crate::signals::{Namespace, Signal};

    const FMT: FloatFormat = FloatFormat::DESK;

    fn t(sign: bool, exp: u32, man: u64) -> FloatTriple {
        FloatTriple::new(sign, exp, man)
    }

    fn all_pairs(fmt: FloatFormat) -> impl Iterator<Item = (FloatTriple, FloatTriple)> {
        let n = fmt.normalized_count();
        (0..n * n).map(move |i| (fmt.nth_normalized(i / n), fmt.nth_normalized(i % n)))
    }

    #[test]
    fn expdiff_literal() {
        let a = eval_alignment(t(false, 0b0111, 0), t(false, 0b0101, 0), FMT, &FaultConfig::none()).unwrap();
        assert_eq!(a.expdiff, 2);
        let a = eval_alignment(t(false, 0b0101, 0), t(false, 0b0111, 0), FMT, &FaultConfig::none()).unwrap();
        assert_eq!(a.expdiff, 2);
    }

    #[test]
    fn equal_exponent_mantissa_compare() {
        let f1 = t(false, 0b0111, 0b000);
        let f2 = t(false, 0b0111, 0b100);
        let a = eval_alignment(f1, f2, FMT, &FaultConfig::none()).unwrap();
        assert!(!a.big_is_f1);
        assert_eq!(a.bigman, 0b1100_000);
        assert_eq!(a.smallman, 0b1000_000);
        assert_eq!(a, ref_alignment(f1, f2, FMT));
    }

    #[test]
    fn sticky_collapse() {
        let f1 = t(false, 8, 0);
        let f2 = t(false, 1, 0b001);
        let a = eval_alignment(f1, f2, FMT, &FaultConfig::none()).unwrap();
        assert_eq!(a.expdiff, 7);
        assert!(a.sticky && a.collapse);
        assert_eq!(a.algman >> 1, 0, "aligned significand bits collapse to zero");
        assert_eq!(a, ref_alignment(f1, f2, FMT));
    }

    #[test]
    fn one_plus_one_renormalizes() {
        let f = t(false, 7, 0);
        let a = eval_alignment(f, f, FMT, &FaultConfig::none()).unwrap();
        let ctx = AddRoundContext::from_operands(f, f, a.big_is_f1);
        let r = eval_addround(&a, &ctx, FMT, &FaultConfig::none()).unwrap();
        assert_eq!(r.addman, 0b10000_000);
        assert_eq!(r.norm_shift, -1);
        assert_eq!(r.result, t(false, 8, 0));
    }

    #[test]
    fn cancellation_path_shifts_left() {
        // 1.000 * 2^0 - 1.111 * 2^-1: bigman = 1.000, algman = 0.111|1
        let f1 = t(false, 7, 0);
        let f2 = t(true, 6, 0b111);
        let a = eval_alignment(f1, f2, FMT, &FaultConfig::none()).unwrap();
        assert!(a.eff_sub);
        assert_eq!(a.algman, 0b0111_100);
        let ctx = AddRoundContext::from_operands(f1, f2, a.big_is_f1);
        let r = eval_addround(&a, &ctx, FMT, &FaultConfig::none()).unwrap();
        assert!(r.norm_shift > 0);
        assert_eq!((r.result, r.flags), ref_add(f1, f2, FMT).unwrap());
    }

    #[test]
    fn carry_in_fault_disturbs_sum() {
        let f = t(false, 7, 0);
        let faults = FaultConfig::single(FaultKind::CarryInManipulation);
        let a = eval_alignment(f, f, FMT, &faults).unwrap();
        let ctx = AddRoundContext::from_operands(f, f, a.big_is_f1);
        let r = eval_addround(&a, &ctx, FMT, &faults).unwrap();
        assert_eq!(r.addman, 0b10000_001);
        let theorem_cex = all_pairs(FMT).find(|&(x, y)| {
            eval_model(x, y, FMT, &faults).unwrap().result() != ref_add(x, y, FMT).unwrap().0
        });
        assert!(theorem_cex.is_some());
    }

    #[test]
    fn fault_free_matches_reference_everywhere() {
        let none = FaultConfig::none();
        for (f1, f2) in all_pairs(FMT) {
            let imp = eval(f1, f2, FMT, &none).unwrap();
            let spec = eval_spec(f1, f2, FMT).unwrap();
            let (r, _) = ref_add(f1, f2, FMT).unwrap();
            assert_eq!(imp.impl_trace.unwrap().result(), r, "{f1:?} + {f2:?}");
            // Every shared signal agrees, including the stage internals.
            for &s in Signal::ALL {
                assert_eq!(
                    imp.get(Namespace::Impl, s),
                    spec.get(Namespace::Spec, s),
                    "{s} for {f1:?} + {f2:?}"
                );
            }
            assert_eq!(spec.get(Namespace::Spec, Signal::Expdiff).unwrap().value, u64::from(f1.exp.abs_diff(f2.exp)));
        }
    }

    #[test]
    fn sticky_distortion_reaches_the_result() {
        let faults = FaultConfig::single(FaultKind::StickyBitDistortion);
        let witness = all_pairs(FMT).find(|&(x, y)| {
            x.exp.abs_diff(y.exp) > 3
                && eval_model(x, y, FMT, &faults).unwrap().result().man != ref_add(x, y, FMT).unwrap().0.man
        });
        assert!(witness.is_some());
    }

    #[test]
    fn trace_shape() {
        let trace = eval(t(false, 7, 1), t(true, 5, 3), FMT, &FaultConfig::none()).unwrap();
        let names: Vec<String> = trace.iter().map(|(n, _)| n).collect();
        assert_eq!(names.len(), Signal::ALL.len());
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len());
        assert!(names.iter().all(|n| n.starts_with("impl.")));
        for &s in Signal::ALL {
            assert!(trace.lookup(&format!("impl.{}", s.name())).is_some());
        }
    }

    #[test]
    fn deterministic() {
        let faults = FaultConfig::single(FaultKind::ShiftDistortion);
        for (f1, f2) in all_pairs(FMT).step_by(97) {
            assert_eq!(eval(f1, f2, FMT, &faults).unwrap(), eval(f1, f2, FMT, &faults).unwrap());
        }
    }

    #[test]
    fn alignment_faults_leave_add_round_untouched() {
        let none = FaultConfig::none();
        for (f1, f2) in all_pairs(FMT).step_by(13) {
            let a = eval_alignment(f1, f2, FMT, &none).unwrap();
            let ctx = AddRoundContext::from_operands(f1, f2, a.big_is_f1);
            let clean = eval_addround(&a, &ctx, FMT, &none).unwrap();
            for kind in FaultKind::ALL.into_iter().filter(|k| k.stage() == crate::stages::Stage::Alignment) {
                let faulty = eval_addround(&a, &ctx, FMT, &FaultConfig::single(kind)).unwrap();
                assert_eq!(clean, faulty, "{kind}");
            }
        }
    }

    #[test]
    fn free_mode_width_validation() {
        let a = AlignmentSignals {
            bigman: 1 << 7,
            ..AlignmentSignals::default()
        };
        let ctx = AddRoundContext::default();
        assert!(matches!(
            eval_addround(&a, &ctx, FMT, &FaultConfig::none()),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn rejects_non_normalized() {
        assert!(matches!(
            eval(t(false, 15, 0), t(false, 7, 0), FMT, &FaultConfig::none()),
            Err(Error::Domain(_))
        ));
    }
}
