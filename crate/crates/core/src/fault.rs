// SPDX-License-Identifier: Apache-2.0

//! Catalogued datapath faults for the implementation adder.
//!
//! Every fault is a deterministic rewrite of exactly one fault site. The site
//! functions live in [`crate::adder::sites`]; this module names the faults, maps
//! them to sites and stages, and exposes [`mutate`] for driving one site directly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::adder::sites;
use crate::error::{Error, Result};
use crate::stages::Stage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FaultKind {
    /// A1
    StickyBitDistortion,
    /// A2
    OperandExtensionMisalignment,
    /// A3
    FaultyOperandSelection,
    /// A4
    InversionSwapInSubtraction,
    /// R1
    CarryInManipulation,
    /// R2
    NormalizationShiftError,
    /// R3
    ShiftDistortion,
    /// R4
    RoundingRuleViolation,
    /// B1
    EqualExponentSelectionBug,
}

/// The hardware location a fault rewrites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Site {
    OperandSelect,
    SmallExtension,
    StickyWindow,
    OperandRouting,
    CarryIn,
    LeadingOne,
    CarryShift,
    RoundIncrement,
}

impl Site {
    pub fn stage(self) -> Stage {
        match self {
            Site::OperandSelect | Site::SmallExtension | Site::StickyWindow | Site::OperandRouting => {
                Stage::Alignment
            }
            Site::CarryIn | Site::LeadingOne | Site::CarryShift | Site::RoundIncrement => Stage::AddRound,
        }
    }
}

impl FaultKind {
    pub const ALL: [FaultKind; 9] = [
        FaultKind::StickyBitDistortion,
        FaultKind::OperandExtensionMisalignment,
        FaultKind::FaultyOperandSelection,
        FaultKind::InversionSwapInSubtraction,
        FaultKind::CarryInManipulation,
        FaultKind::NormalizationShiftError,
        FaultKind::ShiftDistortion,
        FaultKind::RoundingRuleViolation,
        FaultKind::EqualExponentSelectionBug,
    ];

    /// Stable command-line identifier.
    pub fn id(self) -> &'static str {
        match self {
            FaultKind::StickyBitDistortion => "sticky-distort",
            FaultKind::OperandExtensionMisalignment => "ext-misalign",
            FaultKind::FaultyOperandSelection => "op-select",
            FaultKind::InversionSwapInSubtraction => "inv-swap",
            FaultKind::CarryInManipulation => "carry-manip",
            FaultKind::NormalizationShiftError => "norm-shift",
            FaultKind::ShiftDistortion => "shift-distort",
            FaultKind::RoundingRuleViolation => "round-rule",
            FaultKind::EqualExponentSelectionBug => "eq-exp-bug",
        }
    }

    /// Short catalog code (A1..A4, R1..R4, B1).
    pub fn code(self) -> &'static str {
        match self {
            FaultKind::StickyBitDistortion => "A1",
            FaultKind::OperandExtensionMisalignment => "A2",
            FaultKind::FaultyOperandSelection => "A3",
            FaultKind::InversionSwapInSubtraction => "A4",
            FaultKind::CarryInManipulation => "R1",
            FaultKind::NormalizationShiftError => "R2",
            FaultKind::ShiftDistortion => "R3",
            FaultKind::RoundingRuleViolation => "R4",
            FaultKind::EqualExponentSelectionBug => "B1",
        }
    }

    pub fn site(self) -> Site {
        match self {
            FaultKind::StickyBitDistortion => Site::StickyWindow,
            FaultKind::OperandExtensionMisalignment => Site::SmallExtension,
            FaultKind::FaultyOperandSelection | FaultKind::EqualExponentSelectionBug => {
                Site::OperandSelect
            }
            FaultKind::InversionSwapInSubtraction => Site::OperandRouting,
            FaultKind::CarryInManipulation => Site::CarryIn,
            FaultKind::NormalizationShiftError => Site::LeadingOne,
            FaultKind::ShiftDistortion => Site::CarryShift,
            FaultKind::RoundingRuleViolation => Site::RoundIncrement,
        }
    }

    pub fn stage(self) -> Stage {
        self.site().stage()
    }

    pub fn description(self) -> &'static str {
        match self {
            FaultKind::StickyBitDistortion => {
                "sticky OR window widened by the offset parameter, absorbing aligned bits"
            }
            FaultKind::OperandExtensionMisalignment => {
                "small significand extended with one zero pad bit missing"
            }
            FaultKind::FaultyOperandSelection => "larger-operand comparison reversed",
            FaultKind::InversionSwapInSubtraction => {
                "on effective subtraction the larger operand is routed to the inverting adder input"
            }
            FaultKind::CarryInManipulation => {
                "adder carry-in flipped: extra carry on addition, missing carry on subtraction"
            }
            FaultKind::NormalizationShiftError => {
                "leading-one count off by the offset parameter on the left-shift path, exponent uses the true count"
            }
            FaultKind::ShiftDistortion => {
                "carry-out renormalization shifts the sum right by one plus the offset parameter"
            }
            FaultKind::RoundingRuleViolation => "tie-breaking test of round-to-nearest-even inverted",
            FaultKind::EqualExponentSelectionBug => {
                "mantissa comparison skipped when exponents are equal, first operand always taken as larger"
            }
        }
    }

    /// Default offset parameter, for kinds that take one.
    pub fn default_param(self) -> Option<i64> {
        match self {
            FaultKind::StickyBitDistortion
            | FaultKind::NormalizationShiftError
            | FaultKind::ShiftDistortion => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for FaultKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FaultKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FaultKind::ALL
            .into_iter()
            .find(|k| k.id() == s || k.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let known: Vec<_> = FaultKind::ALL.iter().map(|k| k.id()).collect();
                Error::Config(format!("unknown fault `{s}`; known faults: {}", known.join(", ")))
            })
    }
}

/// A set of enabled faults with their parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FaultConfig {
    enabled: BTreeMap<FaultKind, i64>,
}

impl FaultConfig {
    pub fn none() -> Self {
        FaultConfig::default()
    }

    pub fn single(kind: FaultKind) -> Self {
        let mut cfg = FaultConfig::default();
        cfg.enable(kind);
        cfg
    }

    pub fn enable(&mut self, kind: FaultKind) -> &mut Self {
        self.enabled.insert(kind, kind.default_param().unwrap_or(0));
        self
    }

    pub fn enable_with(&mut self, kind: FaultKind, param: i64) -> Result<&mut Self> {
        if kind.default_param().is_none() {
            return Err(Error::Config(format!("fault `{kind}` takes no parameter")));
        }
        self.enabled.insert(kind, param);
        Ok(self)
    }

    /// Parses `ID` or `ID=OFFSET`.
    pub fn enable_spec(&mut self, spec: &str) -> Result<&mut Self> {
        match spec.split_once('=') {
            Some((id, param)) => {
                let kind: FaultKind = id.trim().parse()?;
                let param: i64 = param.trim().parse().map_err(|_| {
                    Error::Config(format!("fault parameter `{param}` is not an integer"))
                })?;
                self.enable_with(kind, param)
            }
            None => {
                let kind: FaultKind = spec.trim().parse()?;
                Ok(self.enable(kind))
            }
        }
    }

    pub fn is_enabled(&self, kind: FaultKind) -> bool {
        self.enabled.contains_key(&kind)
    }

    pub fn param(&self, kind: FaultKind) -> i64 {
        self.enabled.get(&kind).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.enabled.is_empty()
    }

    pub fn kinds(&self) -> impl Iterator<Item = FaultKind> + '_ {
        self.enabled.keys().copied()
    }

    /// `id` or `id=param` for every enabled fault, in catalog order.
    pub fn labels(&self) -> Vec<String> {
        self.enabled
            .iter()
            .map(|(k, p)| match k.default_param() {
                Some(d) if d != *p => format!("{}={p}", k.id()),
                _ => k.id().to_string(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub kind: FaultKind,
    pub id: &'static str,
    pub code: &'static str,
    pub stage: Stage,
    pub site: Site,
    pub description: &'static str,
    pub default_param: Option<i64>,
}

pub fn list_faults() -> Vec<CatalogEntry> {
    FaultKind::ALL
        .into_iter()
        .map(|kind| CatalogEntry {
            kind,
            id: kind.id(),
            code: kind.code(),
            stage: kind.stage(),
            site: kind.site(),
            description: kind.description(),
            default_param: kind.default_param(),
        })
        .collect()
}

/// Inputs of one fault site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteInput {
    OperandSelect { e1: u32, e2: u32, m1: u64, m2: u64 },
    SmallExtension { significand: u64 },
    StickyWindow { smallman: u64, shift: u32, ext_width: u32 },
    OperandRouting { bigman: u64, algman: u64, eff_sub: bool },
    CarryIn { eff_sub: bool },
    LeadingOne { leading_zeros: u32 },
    CarryShift { addman: u64 },
    RoundIncrement { lsb: bool, guard: bool, round: bool, sticky: bool },
}

/// Outputs of one fault site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteOutput {
    BigIsF1(bool),
    Smallman(u64),
    Aligned { algman: u64, sticky: bool },
    Routed { bigman: u64, algman: u64 },
    CarryIn(u64),
    MantissaShift(u32),
    Normalized(u64),
    Increment(bool),
}

impl SiteInput {
    pub fn site(&self) -> Site {
        match self {
            SiteInput::OperandSelect { .. } => Site::OperandSelect,
            SiteInput::SmallExtension { .. } => Site::SmallExtension,
            SiteInput::StickyWindow { .. } => Site::StickyWindow,
            SiteInput::OperandRouting { .. } => Site::OperandRouting,
            SiteInput::CarryIn { .. } => Site::CarryIn,
            SiteInput::LeadingOne { .. } => Site::LeadingOne,
            SiteInput::CarryShift { .. } => Site::CarryShift,
            SiteInput::RoundIncrement { .. } => Site::RoundIncrement,
        }
    }
}

/// Evaluates a site under an arbitrary fault configuration.
pub fn eval_site(input: SiteInput, faults: &FaultConfig) -> SiteOutput {
    match input {
        SiteInput::OperandSelect { e1, e2, m1, m2 } => {
            SiteOutput::BigIsF1(sites::select_big(e1, e2, m1, m2, faults))
        }
        SiteInput::SmallExtension { significand } => {
            SiteOutput::Smallman(sites::extend_small(significand, faults))
        }
        SiteInput::StickyWindow {
            smallman,
            shift,
            ext_width,
        } => {
            let (algman, sticky) = sites::align(smallman, shift, ext_width, faults);
            SiteOutput::Aligned { algman, sticky }
        }
        SiteInput::OperandRouting {
            bigman,
            algman,
            eff_sub,
        } => {
            let (bigman, algman) = sites::route(bigman, algman, eff_sub, faults);
            SiteOutput::Routed { bigman, algman }
        }
        SiteInput::CarryIn { eff_sub } => SiteOutput::CarryIn(sites::carry_in(eff_sub, faults)),
        SiteInput::LeadingOne { leading_zeros } => {
            SiteOutput::MantissaShift(sites::left_shift_amount(leading_zeros, faults))
        }
        SiteInput::CarryShift { addman } => {
            SiteOutput::Normalized(sites::carry_renormalize(addman, faults))
        }
        SiteInput::RoundIncrement {
            lsb,
            guard,
            round,
            sticky,
        } => SiteOutput::Increment(sites::round_increment(lsb, guard, round, sticky, faults)),
    }
}

/// Applies `kind` (default parameter) to the site it targets.
pub fn mutate(kind: FaultKind, input: SiteInput) -> Result<SiteOutput> {
    if input.site() != kind.site() {
        return Err(Error::Internal(format!(
            "fault `{kind}` targets site {:?} ({} stage) but was given {:?} inputs",
            kind.site(),
            kind.stage(),
            input.site()
        )));
    }
    Ok(eval_site(input, &FaultConfig::single(kind)))
}
