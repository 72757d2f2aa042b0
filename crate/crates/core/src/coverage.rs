// SPDX-License-Identifier: Apache-2.0

//! Structural cover items over the implementation and the three coverage ratios.
//!
//! An item is *covered* when its watch holds on an admitted stimulus and
//! *checked* when an assertion observes one of its watch signals, directly or
//! through [`influences`]. Formal coverage counts items that are both.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::checker::{CheckMode, CheckOptions, Checker, ReportConfig};
use crate::error::Result;
use crate::fault::FaultConfig;
use crate::float::FloatFormat;
use crate::property::{compile_expr, parse_expr, Elaborated, Expr, Namespaces, Role};
use crate::signals::Signal;
use crate::stages::Stage;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverItem {
    pub id: &'static str,
    pub description: &'static str,
    pub stage: Stage,
    /// Predicate in the property expression grammar.
    pub watch: &'static str,
}

impl CoverItem {
    pub fn expr(&self) -> Expr {
        parse_expr(self.watch).expect("catalog watches parse")
    }

    pub fn signals(&self) -> BTreeSet<Signal> {
        self.expr().support()
    }
}

const CATALOG: [(&str, &str, Stage, &str); 23] = {
    use Stage::{AddRound as R, Alignment as A};
    [
        ("big-select-f1", "first operand selected as larger", A, "impl.big_is_f1 == 1"),
        ("big-select-f2", "second operand selected as larger", A, "impl.big_is_f1 == 0"),
        ("eq-exp-f1-big", "equal exponents, mantissa compare picks the first operand", A, "impl.expdiff == 0 && impl.big_is_f1 == 1"),
        ("eq-exp-f2-big", "equal exponents, mantissa compare picks the second operand", A, "impl.expdiff == 0 && impl.big_is_f1 == 0"),
        ("eff-add", "effective addition", A, "impl.eff_sub == 0"),
        ("eff-sub", "effective subtraction", A, "impl.eff_sub == 1"),
        ("sticky-set", "sticky bit set", A, "impl.sticky == 1"),
        ("sticky-clear", "sticky bit clear", A, "impl.sticky == 0"),
        ("collapse", "aligned operand collapses into sticky", A, "impl.collapse == 1"),
        ("no-collapse", "aligned operand keeps significant bits", A, "impl.collapse == 0"),
        ("carry-out", "sum carries out of the significand", R, "impl.carry_out == 1"),
        ("no-carry-out", "sum does not carry out", R, "impl.carry_out == 0"),
        ("norm-shift-0", "no left normalization shift", R, "impl.norm_class == 0"),
        ("norm-shift-1", "left normalization by one", R, "impl.norm_class == 1"),
        ("norm-shift-ge2", "left normalization by two or more", R, "impl.norm_class == 2"),
        ("round-increment-taken", "rounding increments the significand", R, "impl.round_inc == 1"),
        ("round-increment-not-taken", "rounding truncates", R, "impl.round_inc == 0"),
        ("overflow", "result saturates", R, "impl.overflow == 1"),
        ("no-overflow", "result within range above", R, "impl.overflow == 0"),
        ("underflow", "result flushed to zero", R, "impl.underflow == 1"),
        ("no-underflow", "result within range below", R, "impl.underflow == 0"),
        ("exact-zero", "exact cancellation", R, "impl.exact_zero == 1"),
        ("nonzero", "no exact cancellation", R, "impl.exact_zero == 0"),
    ]
};

/// The fixed catalog: one item per outcome of every two-way datapath decision.
/// Identical for every format.
pub fn catalog(_fmt: FloatFormat) -> Vec<CoverItem> {
    CATALOG
        .iter()
        .map(|&(id, description, stage, watch)| CoverItem {
            id,
            description,
            stage,
            watch,
        })
        .collect()
}

/// Stage signals a property naming `s` is taken to observe. One lookup per
/// named signal, no transitive closure.
pub fn influences(s: Signal) -> &'static [Signal] {
    use Signal::*;
    const RESULT: &[Signal] = &[
        Expdiff, Bigman, Algman, Sticky, Collapse, BigIsF1, EffSub, Addman, NormShift, NormClass,
        CarryOut, RoundInc, Overflow, Underflow, ExactZero,
    ];
    match s {
        S => &[BigIsF1, EffSub, ExactZero, Underflow],
        E | M => RESULT,
        Addman => &[Bigman, Algman, EffSub, BigIsF1, Expdiff, Sticky, Collapse],
        Algman => &[Smallman, Expdiff, Sticky, Collapse, BigIsF1, EffSub],
        Bigman => &[BigIsF1, EffSub],
        Smallman => &[BigIsF1],
        NormShift => &[Addman, NormClass, CarryOut],
        _ => &[],
    }
}

/// Signals observed by the assertions of `elab`, expanded through [`influences`].
pub fn checked_signals(elab: &Elaborated) -> BTreeSet<Signal> {
    let mut out = BTreeSet::new();
    for (_, d) in elab.of_role(Role::Assert) {
        for s in d.property.support() {
            out.insert(s);
            out.extend(influences(s));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemStatus {
    Covered,
    /// Never hit on a complete enumeration.
    Unreachable,
    /// Never hit while sampling; reachability undecided.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemResult {
    pub id: &'static str,
    pub stage: Stage,
    pub status: ItemStatus,
    pub checked: bool,
    pub hits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Ratios {
    pub formal_pct: f64,
    pub stimuli_pct: f64,
    pub checker_pct: f64,
}

fn pct(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        100.0 * n as f64 / d as f64
    }
}

/// The three ratios over `total - dead` items.
pub fn ratios(total: usize, dead: usize, covered: usize, checked: usize, covered_and_checked: usize) -> Ratios {
    let live = total.saturating_sub(dead);
    Ratios {
        formal_pct: pct(covered_and_checked, live),
        stimuli_pct: pct(covered, live),
        checker_pct: pct(checked, live),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverageReport {
    pub config: ReportConfig,
    pub total: usize,
    pub covered: usize,
    pub unreachable: usize,
    pub unknown: usize,
    pub checked: usize,
    pub formal_pct: f64,
    pub stimuli_pct: f64,
    pub checker_pct: f64,
    pub items: Vec<ItemResult>,
    pub elapsed_seconds: f64,
}

impl CoverageReport {
    pub fn item(&self, id: &str) -> Option<&ItemResult> {
        self.items.iter().find(|i| i.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("coverage report serializes")
    }
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} items: {} covered, {} unreachable, {} unknown, {} checked",
            self.total, self.covered, self.unreachable, self.unknown, self.checked
        )?;
        writeln!(
            f,
            "formal {:.2}%  stimuli {:.2}%  checker {:.2}%",
            self.formal_pct, self.stimuli_pct, self.checker_pct
        )?;
        for i in &self.items {
            writeln!(
                f,
                "  {:<26} {:<10} {:<11} {:<9} hits={}",
                i.id,
                i.stage.as_str(),
                match i.status {
                    ItemStatus::Covered => "covered",
                    ItemStatus::Unreachable => "unreachable",
                    ItemStatus::Unknown => "unknown",
                },
                if i.checked { "checked" } else { "-" },
                i.hits
            )?;
        }
        writeln!(f, "elapsed {:.3} s", self.elapsed_seconds)
    }
}

/// Enumerates like [`crate::checker::check`] and evaluates every catalog watch
/// on the admitted stimuli.
pub fn measure(elab: &Elaborated, faults: &FaultConfig, opts: &CheckOptions) -> Result<CoverageReport> {
    let started = Instant::now();
    let items = catalog(elab.fmt);
    let watches = items
        .iter()
        .map(|i| compile_expr(&i.expr(), elab.fmt, Namespaces::ImplOnly, i.id))
        .collect::<Result<Vec<_>>>()?;
    let mut checker = Checker::new(elab, faults, opts)?;
    let run = checker.run(&watches)?;
    let complete = opts.mode == CheckMode::Exhaustive;
    let observed = checked_signals(elab);

    let results: Vec<ItemResult> = items
        .iter()
        .zip(&run.watch_hits)
        .map(|(item, &hits)| ItemResult {
            id: item.id,
            stage: item.stage,
            status: match (hits > 0, complete) {
                (true, _) => ItemStatus::Covered,
                (false, true) => ItemStatus::Unreachable,
                (false, false) => ItemStatus::Unknown,
            },
            checked: item.signals().iter().any(|s| observed.contains(s)),
            hits,
        })
        .collect();
    let count = |f: &dyn Fn(&ItemResult) -> bool| results.iter().filter(|i| f(i)).count();
    let covered = count(&|i| i.status == ItemStatus::Covered);
    let checked = count(&|i| i.checked);
    let both = count(&|i| i.checked && i.status == ItemStatus::Covered);
    let r = ratios(results.len(), 0, covered, checked, both);
    Ok(CoverageReport {
        config: ReportConfig::new(elab.fmt, faults, opts, elab.namespaces == Namespaces::ImplOnly),
        total: results.len(),
        covered,
        unreachable: count(&|i| i.status == ItemStatus::Unreachable),
        unknown: count(&|i| i.status == ItemStatus::Unknown),
        checked,
        formal_pct: r.formal_pct,
        stimuli_pct: r.stimuli_pct,
        checker_pct: r.checker_pct,
        items: results,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adder::eval;
    use crate::float::FloatTriple;
    use crate::property::{corpus, elaborate, eval_expr, parse, PropertyFile};

    const FMT: FloatFormat = FloatFormat::DESK;

    fn elab_of(names: &[&str], ns: Namespaces) -> Elaborated {
        let mut f = PropertyFile::default();
        for n in names {
            f.extend(parse(corpus(n).unwrap()).unwrap());
        }
        elaborate(&f, FMT, ns).unwrap()
    }

    #[test]
    fn catalog_is_static_and_parses() {
        let c = catalog(FMT);
        assert_eq!(c.len(), 23);
        assert_eq!(c, catalog(FloatFormat::SINGLE));
        let ids: BTreeSet<_> = c.iter().map(|i| i.id).collect();
        assert_eq!(ids.len(), c.len());
        for i in &c {
            assert!(!i.signals().is_empty());
            assert!(i.signals().iter().all(|s| s.class() == crate::signals::SignalClass::Stage(i.stage)), "{}", i.id);
        }
        assert_eq!(c.iter().filter(|i| i.stage == Stage::Alignment).count(), 10);
    }

    #[test]
    fn round_increment_watch_fires_on_carrying_round() {
        // 1.111b + 1.000b * 2^-4 = 1.1111b: guard set, LSB odd, increment carries out.
        let t = eval(FloatTriple::new(false, 7, 7), FloatTriple::new(false, 3, 0), FMT, &FaultConfig::none()).unwrap();
        let item = catalog(FMT).into_iter().find(|i| i.id == "round-increment-taken").unwrap();
        assert!(eval_expr(&item.expr(), &t).unwrap());
        assert_eq!(t.impl_trace.unwrap().result(), FloatTriple::new(false, 8, 0));
    }

    #[test]
    fn synthetic_ratios() {
        let r = ratios(98, 0, 92, 98, 92);
        assert!((r.stimuli_pct - 93.88).abs() < 0.01);
        assert!((r.formal_pct - 93.88).abs() < 0.01);
        assert_eq!(r.checker_pct, 100.0);
        assert_eq!(ratios(10, 2, 8, 0, 0).stimuli_pct, 100.0);
        assert_eq!(ratios(0, 0, 0, 0, 0).formal_pct, 0.0);
    }

    #[test]
    fn exhaustive_partitions_catalog() {
        let e = elab_of(&["theorem-split3"], Namespaces::Both);
        let r = measure(&e, &FaultConfig::none(), &CheckOptions::exhaustive()).unwrap();
        assert_eq!(r.covered + r.unreachable, r.total);
        assert_eq!(r.unknown, 0);
        assert_eq!(r.covered, 23);
        assert_eq!(r.checked, 23);
        assert!((r.stimuli_pct - 100.0 * r.covered as f64 / r.total as f64).abs() < 1e-9);
    }

    #[test]
    fn lemma1_checks_alignment_items_only() {
        let e = elab_of(&["handwritten-lemma1"], Namespaces::Both);
        let r = measure(&e, &FaultConfig::none(), &CheckOptions::exhaustive()).unwrap();
        assert!(r.items.iter().all(|i| i.checked == (i.stage == Stage::Alignment)));
        assert!((r.formal_pct - 100.0 * 10.0 / 23.0).abs() < 1e-9);
    }

    #[test]
    fn assumes_only_shrink_coverage() {
        let base = elab_of(&["theorem-split3"], Namespaces::Both);
        let text = format!(
            "{}\nproperty add_only; 1 |-> impl.eff_sub == 0; endproperty\nassume property(add_only);",
            corpus("theorem-split3").unwrap()
        );
        let constrained = elaborate(&parse(&text).unwrap(), FMT, Namespaces::Both).unwrap();
        let a = measure(&base, &FaultConfig::none(), &CheckOptions::exhaustive()).unwrap();
        let b = measure(&constrained, &FaultConfig::none(), &CheckOptions::exhaustive()).unwrap();
        assert!(b.covered < a.covered);
        assert_eq!(b.item("eff-sub").unwrap().status, ItemStatus::Unreachable);
        assert_eq!(b.item("exact-zero").unwrap().status, ItemStatus::Unreachable);
    }

    #[test]
    fn no_asserts_no_checked_items() {
        let e = elaborate(&parse("").unwrap(), FMT, Namespaces::ImplOnly).unwrap();
        let r = measure(&e, &FaultConfig::none(), &CheckOptions::exhaustive()).unwrap();
        assert_eq!((r.checked, r.formal_pct), (0, 0.0));
        assert_eq!(r.covered, 23);
    }

    #[test]
    fn random_mode_reports_unknown() {
        let e = elab_of(&["theorem-split3"], Namespaces::Both);
        let r = measure(&e, &FaultConfig::none(), &CheckOptions::random(50, 1)).unwrap();
        assert_eq!(r.unreachable, 0);
        assert_eq!(r.covered + r.unknown, r.total);
    }
}
