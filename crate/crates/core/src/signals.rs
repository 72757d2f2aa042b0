// SPDX-License-Identifier: Apache-2.0

//! The published signal dictionary and per-evaluation signal traces.
//!
//! Both adders publish the same dictionary, one copy per namespace (`impl.*`
//! and `spec.*`). Property texts refer to signals by these names, so the list
//! and its widths are versioned.

use std::fmt;

use crate::float::{FloatFormat, FloatTriple};
use crate::stages::{ext_width, sum_width, AddRoundSignals, AlignmentSignals, Stage};

pub const DICTIONARY_VERSION: u32 = 1;

/// Width of the two's-complement `norm_shift` signal.
pub const NORM_SHIFT_BITS: u32 = 8;

macro_rules! signals {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Signal {
            $($variant),*
        }

        impl Signal {
            pub const ALL: &'static [Signal] = &[$(Signal::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Signal::$variant => $name),*
                }
            }

            pub fn from_name(name: &str) -> Option<Signal> {
                match name {
                    $($name => Some(Signal::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

signals! {
    S1 => "s1",
    E1 => "e1",
    M1 => "m1",
    S2 => "s2",
    E2 => "e2",
    M2 => "m2",
    Expdiff => "expdiff",
    Bigman => "bigman",
    Smallman => "smallman",
    Algman => "algman",
    Sticky => "sticky",
    Addman => "addman",
    NormShift => "norm_shift",
    S => "s",
    E => "e",
    M => "m",
    Overflow => "overflow",
    Underflow => "underflow",
    BigIsF1 => "big_is_f1",
    EffSub => "eff_sub",
    Collapse => "collapse",
    CarryOut => "carry_out",
    NormClass => "norm_class",
    RoundInc => "round_inc",
    ExactZero => "exact_zero",
}

pub const SIGNAL_COUNT: usize = Signal::ALL.len();

/// Where a signal is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignalClass {
    Input,
    Stage(Stage),
}

impl Signal {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn width(self, fmt: FloatFormat) -> u32 {
        use Signal::*;
        match self {
            S1 | S2 | S | Sticky | Overflow | Underflow | BigIsF1 | EffSub | Collapse | CarryOut
            | RoundInc | ExactZero => 1,
            E1 | E2 | E | Expdiff => fmt.exp_bits(),
            M1 | M2 | M => fmt.man_bits(),
            Bigman | Smallman | Algman => ext_width(fmt),
            Addman => sum_width(fmt),
            NormShift => NORM_SHIFT_BITS,
            NormClass => 2,
        }
    }

    pub fn class(self) -> SignalClass {
        use Signal::*;
        match self {
            S1 | E1 | M1 | S2 | E2 | M2 => SignalClass::Input,
            Expdiff | Bigman | Smallman | Algman | Sticky | BigIsF1 | EffSub | Collapse => {
                SignalClass::Stage(Stage::Alignment)
            }
            Addman | NormShift | S | E | M | Overflow | Underflow | CarryOut | NormClass
            | RoundInc | ExactZero => SignalClass::Stage(Stage::AddRound),
        }
    }

    pub fn is_primary_input(self) -> bool {
        self.class() == SignalClass::Input
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Namespace {
    Impl,
    Spec,
}

impl Namespace {
    pub fn as_str(self) -> &'static str {
        match self {
            Namespace::Impl => "impl",
            Namespace::Spec => "spec",
        }
    }

    pub fn from_name(name: &str) -> Option<Namespace> {
        match name {
            "impl" => Some(Namespace::Impl),
            "spec" => Some(Namespace::Spec),
            _ => None,
        }
    }
}

impl fmt::Display for Namespace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value together with its declared width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    pub value: u64,
    pub width: u32,
}

impl BitVec {
    pub fn new(value: u64, width: u32) -> Self {
        debug_assert!(width == 64 || value >> width == 0);
        BitVec { value, width }
    }

    /// Zero-padded hex with `ceil(width / 4)` digits.
    pub fn to_hex(self) -> String {
        let digits = self.width.div_ceil(4).max(1) as usize;
        format!("{:0digits$x}", self.value)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}'h{}", self.width, self.to_hex())
    }
}

/// All dictionary values of one model for one evaluation, indexed by [`Signal::index`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelTrace {
    values: [u64; SIGNAL_COUNT],
}

impl ModelTrace {
    pub fn from_stages(
        f1: FloatTriple,
        f2: FloatTriple,
        fmt: FloatFormat,
        a: &AlignmentSignals,
        r: &AddRoundSignals,
    ) -> Self {
        use Signal::*;
        let mut values = [0u64; SIGNAL_COUNT];
        let mut put = |s: Signal, v: u64| {
            let width = s.width(fmt);
            let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            values[s.index()] = v & mask;
        };
        put(S1, f1.sign.into());
        put(E1, f1.exp.into());
        put(M1, f1.man);
        put(S2, f2.sign.into());
        put(E2, f2.exp.into());
        put(M2, f2.man);
        put(Expdiff, a.expdiff.into());
        put(Bigman, a.bigman);
        put(Smallman, a.smallman);
        put(Algman, a.algman);
        put(Sticky, a.sticky.into());
        put(BigIsF1, a.big_is_f1.into());
        put(EffSub, a.eff_sub.into());
        put(Collapse, a.collapse.into());
        put(Addman, r.addman);
        put(NormShift, r.norm_shift as i64 as u64);
        put(S, r.result.sign.into());
        put(E, r.result.exp.into());
        put(M, r.result.man);
        put(Overflow, r.flags.overflow.into());
        put(Underflow, r.flags.underflow.into());
        put(CarryOut, r.carry_out.into());
        put(NormClass, r.norm_class.into());
        put(RoundInc, r.round_inc.into());
        put(ExactZero, r.flags.exact_zero.into());
        ModelTrace { values }
    }

    #[inline]
    pub fn raw(&self, s: Signal) -> u64 {
        self.values[s.index()]
    }

    pub fn result(&self) -> FloatTriple {
        FloatTriple::new(
            self.raw(Signal::S) == 1,
            self.raw(Signal::E) as u32,
            self.raw(Signal::M),
        )
    }

    pub fn inputs(&self) -> (FloatTriple, FloatTriple) {
        use Signal::*;
        (
            FloatTriple::new(self.raw(S1) == 1, self.raw(E1) as u32, self.raw(M1)),
            FloatTriple::new(self.raw(S2) == 1, self.raw(E2) as u32, self.raw(M2)),
        )
    }

    /// Signed normalization shift.
    pub fn norm_shift(&self) -> i32 {
        self.raw(Signal::NormShift) as u8 as i8 as i32
    }
}

/// Valuation of every published signal of one evaluation, per present namespace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignalTrace {
    pub fmt: FloatFormat,
    pub impl_trace: Option<ModelTrace>,
    pub spec_trace: Option<ModelTrace>,
}

impl SignalTrace {
    pub fn new(fmt: FloatFormat, impl_trace: Option<ModelTrace>, spec_trace: Option<ModelTrace>) -> Self {
        SignalTrace {
            fmt,
            impl_trace,
            spec_trace,
        }
    }

    pub fn model(&self, ns: Namespace) -> Option<&ModelTrace> {
        match ns {
            Namespace::Impl => self.impl_trace.as_ref(),
            Namespace::Spec => self.spec_trace.as_ref(),
        }
    }

    pub fn get(&self, ns: Namespace, s: Signal) -> Option<BitVec> {
        self.model(ns)
            .map(|m| BitVec::new(m.raw(s), s.width(self.fmt)))
    }

    /// Looks up a qualified name such as `impl.algman`.
    pub fn lookup(&self, qualified: &str) -> Option<BitVec> {
        let (ns, name) = qualified.split_once('.')?;
        self.get(Namespace::from_name(ns)?, Signal::from_name(name)?)
    }

    /// Every present `(qualified name, value)` pair, impl namespace first, dictionary order.
    pub fn iter(&self) -> impl Iterator<Item = (String, BitVec)> + '_ {
        [Namespace::Impl, Namespace::Spec]
            .into_iter()
            .filter(|ns| self.model(*ns).is_some())
            .flat_map(move |ns| {
                Signal::ALL.iter().map(move |&s| {
                    (
                        format!("{}.{}", ns.as_str(), s.name()),
                        self.get(ns, s).expect("namespace present"),
                    )
                })
            })
    }

    /// Merges two single-namespace traces of the same format.
    pub fn merge(self, other: SignalTrace) -> SignalTrace {
        SignalTrace {
            fmt: self.fmt,
            impl_trace: self.impl_trace.or(other.impl_trace),
            spec_trace: self.spec_trace.or(other.spec_trace),
        }
    }
}
