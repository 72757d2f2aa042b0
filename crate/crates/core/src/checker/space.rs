// SPDX-License-Identifier: Apache-2.0

//! Stimulus spaces and their deterministic enumeration order.

use rand::Rng;

use crate::float::{FloatFormat, FloatTriple};
use crate::property::{Elaborated, Expr, Atom, Role};
use crate::sampling::sample_pair;
use crate::signals::{Namespace, Signal};

/// Primary input fields in enumeration order.
pub const FIELDS: [Signal; 6] = [Signal::S1, Signal::E1, Signal::M1, Signal::S2, Signal::E2, Signal::M2];

/// Primary inputs of both models for one evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Stimulus {
    pub spec: (FloatTriple, FloatTriple),
    pub imp: (FloatTriple, FloatTriple),
}

impl Stimulus {
    pub fn lockstep(f1: FloatTriple, f2: FloatTriple) -> Self {
        Stimulus {
            spec: (f1, f2),
            imp: (f1, f2),
        }
    }

    pub fn fields(&self, ns: Namespace) -> [u64; 6] {
        let (a, b) = match ns {
            Namespace::Impl => self.imp,
            Namespace::Spec => self.spec,
        };
        [a.sign.into(), a.exp.into(), a.man, b.sign.into(), b.exp.into(), b.man]
    }

    pub fn with_field(mut self, ns: Namespace, field: usize, value: u64) -> Self {
        let pair = match ns {
            Namespace::Impl => &mut self.imp,
            Namespace::Spec => &mut self.spec,
        };
        let t = if field < 3 { &mut pair.0 } else { &mut pair.1 };
        match field % 3 {
            0 => t.sign = value == 1,
            1 => t.exp = value as u32,
            _ => t.man = value,
        }
        self
    }
}

fn field_radix(fmt: FloatFormat, field: usize) -> u64 {
    match field % 3 {
        0 => 2,
        1 => u64::from(fmt.max_exp()),
        _ => 1 << fmt.man_bits(),
    }
}

fn field_min(field: usize) -> u64 {
    if field % 3 == 1 {
        1
    } else {
        0
    }
}

/// Primary inputs forced equal across the models by unconditional assumes.
///
/// An assume qualifies when its antecedent is the constant `1`; each consequent
/// conjunct of the form `impl.x == spec.x` over a primary input ties `x`.
pub fn tied_fields(elab: &Elaborated) -> [bool; 6] {
    let mut tied = [false; 6];
    for (_, d) in elab.of_role(Role::Assume) {
        let p = &d.property.property;
        if !p.antecedent.is_constant_true() {
            continue;
        }
        for c in p.consequent.conjuncts() {
            let Expr::Eq(Atom::Signal(a), Atom::Signal(b)) = c else {
                continue;
            };
            if a.signal == b.signal && a.ns != b.ns {
                if let Some(i) = FIELDS.iter().position(|f| *f == a.signal) {
                    tied[i] = true;
                }
            }
        }
    }
    tied
}

/// Enumerable stimulus space: every ordered normalized spec pair, and for each,
/// every combination of the implementation's untied fields.
#[derive(Clone, Debug)]
pub struct Space {
    pub fmt: FloatFormat,
    pub tied: [bool; 6],
    operands: u64,
    impl_count: u64,
}

impl Space {
    pub fn new(fmt: FloatFormat, tied: [bool; 6]) -> Self {
        let impl_count = (0..6)
            .filter(|&i| !tied[i])
            .map(|i| field_radix(fmt, i))
            .fold(1u64, |acc, r| acc.saturating_mul(r));
        Space {
            fmt,
            tied,
            operands: fmt.normalized_count(),
            impl_count,
        }
    }

    pub fn lockstep(fmt: FloatFormat) -> Self {
        Space::new(fmt, [true; 6])
    }

    pub fn is_lockstep(&self) -> bool {
        self.tied.iter().all(|t| *t)
    }

    pub fn pair_count(&self) -> u64 {
        self.operands * self.operands
    }

    /// Total stimuli; saturates for spaces far beyond any enumeration ceiling.
    pub fn size(&self) -> u64 {
        self.pair_count().saturating_mul(self.impl_count)
    }

    pub fn pair(&self, index: u64) -> (FloatTriple, FloatTriple) {
        (
            self.fmt.nth_normalized(index / self.operands),
            self.fmt.nth_normalized(index % self.operands),
        )
    }

    pub fn pair_index(&self, pair: (FloatTriple, FloatTriple)) -> u64 {
        operand_index(self.fmt, pair.0) * self.operands + operand_index(self.fmt, pair.1)
    }

    /// The `index`-th stimulus: spec inputs major, then untied implementation
    /// fields in `FIELDS` order, each ascending.
    pub fn stimulus(&self, index: u64) -> Stimulus {
        let spec = self.pair(index / self.impl_count);
        let mut s = Stimulus { spec, imp: spec };
        let mut rest = index % self.impl_count;
        for field in (0..6).rev().filter(|&i| !self.tied[i]) {
            let radix = field_radix(self.fmt, field);
            s = s.with_field(Namespace::Impl, field, field_min(field) + rest % radix);
            rest /= radix;
        }
        s
    }

    /// Draws a stimulus. In free spaces, half the draws start the implementation
    /// from the spec inputs so that equality antecedents are exercised.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Stimulus {
        let (f1, f2) = sample_pair(rng, self.fmt);
        let mut s = Stimulus::lockstep(f1, f2);
        if self.is_lockstep() || rng.random::<bool>() {
            return s;
        }
        for field in (0..6).filter(|&i| !self.tied[i]) {
            let v = field_min(field) + rng.random_range(0..field_radix(self.fmt, field));
            s = s.with_field(Namespace::Impl, field, v);
        }
        s
    }

    /// Whether the stimulus respects the ties and is normalized on both sides.
    pub fn contains(&self, s: &Stimulus) -> bool {
        let (i, p) = (s.fields(Namespace::Impl), s.fields(Namespace::Spec));
        (0..6).all(|f| !self.tied[f] || i[f] == p[f])
            && [s.imp.0, s.imp.1, s.spec.0, s.spec.1]
                .iter()
                .all(|t| t.is_normalized(self.fmt))
    }
}

pub fn operand_index(fmt: FloatFormat, t: FloatTriple) -> u64 {
    let per_sign = u64::from(fmt.max_exp()) << fmt.man_bits();
    u64::from(t.sign) * per_sign + (u64::from(t.exp - 1) << fmt.man_bits()) + t.man
}
