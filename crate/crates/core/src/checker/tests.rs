// SPDX-License-Identifier: Apache-2.0

use super::*;
use crate::fault::FaultKind;
use crate::float::ref_add;
use crate::property::{corpus, elaborate, eval_property, parse, PropertyFile};

const FMT: FloatFormat = FloatFormat::DESK;

fn load(names: &[&str]) -> PropertyFile {
    let mut f = PropertyFile::default();
    for n in names {
        f.extend(parse(corpus(n).unwrap()).unwrap());
    }
    f
}

fn elab(text: &str) -> Elaborated {
    elaborate(&parse(text).unwrap(), FMT, Namespaces::Both).unwrap()
}

fn elab_corpus(names: &[&str]) -> Elaborated {
    elaborate(&load(names), FMT, Namespaces::Both).unwrap()
}

fn refails(report: &VerificationReport, file: &PropertyFile, c: &Counterexample) -> bool {
    let d = file.directives.iter().find(|d| d.name() == c.property).unwrap();
    let p = file.property(&d.target).unwrap();
    eval_property(p, &c.trace).unwrap() == Outcome::Fail && report.verdict(&c.property).is_some()
}

#[test]
fn theorem_proven_fault_free() {
    let e = elab_corpus(&["theorem-split3"]);
    let r = check(&e, &FaultConfig::none(), &CheckOptions::exhaustive()).unwrap();
    assert_eq!(r.count(Status::Proven), 3);
    assert!(r.cex.is_empty() && r.complete);
    assert_eq!(r.stimuli.admitted, 224 * 224);
    for d in &r.directives {
        assert_eq!((d.pass, d.fail, d.vacuous), (224 * 224, 0, 0));
    }
    assert_eq!(r.localization.stage, None);
}

#[test]
fn theorem_matches_reference_scan() {
    // Independent re-scan: a fault fails the theorem iff some pair disagrees with ref_add.
    for kind in [FaultKind::CarryInManipulation, FaultKind::RoundingRuleViolation] {
        let faults = FaultConfig::single(kind);
        let e = elab_corpus(&["theorem-split3"]);
        let r = check(&e, &faults, &CheckOptions::exhaustive()).unwrap();
        let space = Space::lockstep(FMT);
        let mismatches = (0..space.size())
            .filter(|&i| {
                let (a, b) = space.pair(i);
                eval_model(a, b, FMT, &faults).unwrap().result() != ref_add(a, b, FMT).unwrap().0
            })
            .count();
        assert!(mismatches > 0);
        assert!(r.any_failed());
        let first = r.cex.iter().map(|c| c.index.unwrap()).min().unwrap();
        let expected = (0..space.size())
            .find(|&i| {
                let (a, b) = space.pair(i);
                eval_model(a, b, FMT, &faults).unwrap().result() != ref_add(a, b, FMT).unwrap().0
            })
            .unwrap();
        assert_eq!(first, expected);
    }
}

#[test]
fn carry_manip_counterexamples_refail() {
    let file = load(&["theorem-split3"]);
    let e = elaborate(&file, FMT, Namespaces::Both).unwrap();
    let r = check(&e, &FaultConfig::single(FaultKind::CarryInManipulation), &CheckOptions::exhaustive()).unwrap();
    assert!(r.any_failed());
    assert!(!r.cex.is_empty());
    for c in r.cex.iter().chain(&r.minimal_cex) {
        assert!(refails(&r, &file, c), "{}", c.property);
    }
    // first-k per assertion, in enumeration order
    for d in r.asserts().filter(|d| d.status == Status::Failed) {
        let idx: Vec<_> = r.cex.iter().filter(|c| c.property == d.name).map(|c| c.index.unwrap()).collect();
        assert_eq!(idx.len(), DEFAULT_MAX_CEX.min(d.fail as usize));
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn lemma1_proven_fault_free() {
    let e = elab_corpus(&["handwritten-lemma1"]);
    let r = check(&e, &FaultConfig::none(), &CheckOptions::exhaustive()).unwrap();
    assert_eq!(r.verdict("ap_mantissa_align_equivalence").unwrap().status, Status::Proven);
}

#[test]
fn lemma2_free_mode_proven() {
    let e = elab_corpus(&["handwritten-lemma2"]);
    let r = check(&e, &FaultConfig::none(), &CheckOptions::exhaustive().free()).unwrap();
    let v = r.verdict("ap_add_round_equivalence").unwrap();
    assert_eq!(v.status, Status::Proven, "{r}");
    assert_eq!(r.stimuli.admitted, 224 * 224 * 256);
    assert_eq!(r.verdict("cp_exp_inputs_are_equal").unwrap().status, Status::Assumed);
}

#[test]
fn lemma2_without_operand_order_fails_in_free_mode() {
    // Equal exponents, opposite signs: interchanging the mantissas between the
    // models keeps bigman and algman equal but flips the result sign.
    let text = "
        property add_round_equivalence;
          (impl.s1 == spec.s1) && (impl.s2 == spec.s2) &&
          (impl.algman == spec.algman) && (impl.bigman == spec.bigman)
          |-> (impl.s == spec.s) && (impl.e == spec.e) && (impl.m == spec.m);
        endproperty
        property exp_inputs_are_equal;
          1 |-> (impl.e1 == spec.e1) && (impl.e2 == spec.e2);
        endproperty
        assert property(add_round_equivalence);
        assume property(exp_inputs_are_equal);";
    let r = check(&elab(text), &FaultConfig::none(), &CheckOptions::exhaustive().free()).unwrap();
    assert!(r.any_failed());
    let c = &r.minimal_cex[0];
    assert_eq!(c.stimulus.imp.0.exp, c.stimulus.imp.1.exp);
    assert_ne!(c.stimulus.imp.0.sign, c.stimulus.imp.1.sign);
}

#[test]
fn free_mode_needs_assumes_and_fits_ceiling() {
    let e = elab_corpus(&["theorem-split3"]);
    let err = check(&e, &FaultConfig::none(), &CheckOptions::exhaustive().free()).unwrap_err();
    assert!(matches!(err, Error::Config(ref m) if m.contains("assume")));
    let opts = CheckOptions {
        allow_unconstrained: true,
        ..CheckOptions::exhaustive().free()
    };
    let err = check(&e, &FaultConfig::none(), &opts).unwrap_err();
    assert!(matches!(err, Error::Config(ref m) if m.contains("ceiling")));
}

#[test]
fn exhaustive_ceiling_at_half_precision() {
    let f = load(&["theorem-split3"]);
    let e = elaborate(&f, FloatFormat::HALF, Namespaces::Both).unwrap();
    assert!(matches!(
        check(&e, &FaultConfig::none(), &CheckOptions::exhaustive()),
        Err(Error::Config(_))
    ));
    let r = check(&e, &FaultConfig::none(), &CheckOptions::random(20_000, 3)).unwrap();
    assert_eq!(r.count(Status::Passed), 3);
    assert!(!r.complete);
}

fn strip_elapsed(json: &str) -> String {
    json.lines().filter(|l| !l.contains("elapsed_seconds")).collect::<Vec<_>>().join("\n")
}

#[test]
fn worker_count_does_not_change_reports() {
    let e = elab_corpus(&["handwritten-lemma1", "theorem-split3"]);
    let faults = FaultConfig::single(FaultKind::StickyBitDistortion);
    let runs: Vec<_> = [1, 4, 8]
        .iter()
        .map(|&n| strip_elapsed(&check(&e, &faults, &CheckOptions::exhaustive().workers(n)).unwrap().to_json()))
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn random_mode_is_seeded() {
    let e = elab_corpus(&["theorem-split3"]);
    let faults = FaultConfig::single(FaultKind::RoundingRuleViolation);
    let run = |seed, workers| {
        strip_elapsed(&check(&e, &faults, &CheckOptions::random(10_000, seed).workers(workers)).unwrap().to_json())
    };
    assert_eq!(run(9, 1), run(9, 4));
    assert_ne!(run(9, 2), run(10, 2));
}

#[test]
fn shrink_op_select_lands_near_equal_exponents() {
    let file = load(&["theorem-split3"]);
    let e = elaborate(&file, FMT, Namespaces::Both).unwrap();
    let mut checker = Checker::new(&e, &FaultConfig::single(FaultKind::FaultyOperandSelection), &CheckOptions::exhaustive()).unwrap();
    let r = checker.check().unwrap();
    assert!(!r.minimal_cex.is_empty());
    for c in &r.minimal_cex {
        let (a, b) = c.stimulus.imp;
        assert!(a.exp.abs_diff(b.exp) <= 1, "{a:?} {b:?}");
        assert!(refails(&r, &file, c));
        // fixed point
        let i = e.directives.iter().position(|d| d.name() == c.property).unwrap();
        assert_eq!(checker.shrink(i, c).unwrap(), *c);
    }
}

#[test]
fn localization() {
    let e = elab_corpus(&["handwritten-lemma1", "handwritten-lemma2", "theorem-split3"]);
    let stage = |kind| {
        check(&e, &FaultConfig::single(kind), &CheckOptions::exhaustive())
            .unwrap()
            .localization
            .stage
    };
    assert_eq!(stage(FaultKind::StickyBitDistortion), Some(Stage::Alignment));
    assert_eq!(stage(FaultKind::RoundingRuleViolation), Some(Stage::AddRound));
    let clean = check(&e, &FaultConfig::none(), &CheckOptions::exhaustive()).unwrap();
    assert!(clean.localization.assertions.is_empty());
}

#[test]
fn contradicting_assume_makes_assert_vacuous() {
    let text = "
        property neg; impl.s1 == 1 |-> impl.s == spec.s; endproperty
        property pos; 1 |-> impl.s1 == 0; endproperty
        assert property(neg);
        assume property(pos);";
    let r = check(&elab(text), &FaultConfig::single(FaultKind::RoundingRuleViolation), &CheckOptions::exhaustive()).unwrap();
    let v = r.verdict("neg").unwrap();
    assert_eq!((v.status, v.pass, v.fail), (Status::Vacuous, 0, 0));
    assert_eq!(r.stimuli.admitted, 224 * 112);
}

#[test]
fn more_assumes_never_break_a_proof() {
    let base = "property t; (impl.e1 == spec.e1) && (impl.m1 == spec.m1) && (impl.s1 == spec.s1)
        && (impl.e2 == spec.e2) && (impl.m2 == spec.m2) && (impl.s2 == spec.s2) |-> impl.m == spec.m; endproperty
        assert property(t);";
    let more = format!("{base} property a; 1 |-> impl.eff_sub == 0; endproperty assume property(a);");
    let faults = FaultConfig::single(FaultKind::InversionSwapInSubtraction);
    let r1 = check(&elab(base), &faults, &CheckOptions::exhaustive()).unwrap();
    let r2 = check(&elab(&more), &faults, &CheckOptions::exhaustive()).unwrap();
    assert_eq!(r1.verdict("t").unwrap().status, Status::Failed);
    // inv-swap only acts on effective subtraction
    assert_eq!(r2.verdict("t").unwrap().status, Status::Proven);
    assert!(r2.stimuli.admitted < r1.stimuli.admitted);
}

#[test]
fn cover_directives() {
    let text = "
        property big; impl.overflow == 1 |-> 1; endproperty
        property never; impl.overflow == 1 && impl.underflow == 1 |-> 1; endproperty
        cover property(big);
        cover property(never);";
    let r = check(&elab(text), &FaultConfig::none(), &CheckOptions::exhaustive()).unwrap();
    assert_eq!(r.verdict("big").unwrap().status, Status::Covered);
    assert_eq!(r.verdict("never").unwrap().status, Status::Uncovered);
    assert!(!r.all_passed() && !r.any_failed());
}

#[test]
fn standalone_checks_impl_only() {
    let text = "property p; impl.eff_sub == 0 |-> impl.underflow == 0; endproperty assert property(p);";
    let e = elaborate(&parse(text).unwrap(), FMT, Namespaces::ImplOnly).unwrap();
    let r = check(&e, &FaultConfig::none(), &CheckOptions::exhaustive()).unwrap();
    assert_eq!(r.verdict("p").unwrap().status, Status::Proven);
    assert!(r.config.standalone);
    assert!(check(&e, &FaultConfig::none(), &CheckOptions::exhaustive().free()).is_err());
}

#[test]
fn json_shape() {
    let e = elab_corpus(&["theorem-split3"]);
    let r = check(&e, &FaultConfig::single(FaultKind::RoundingRuleViolation), &CheckOptions::exhaustive()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    for key in ["config", "directives", "cex", "elapsed_seconds"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let d = &v["directives"][0];
    for key in ["name", "role", "status", "pass", "fail", "vacuous"] {
        assert!(d.get(key).is_some(), "{key}");
    }
    let c = &v["cex"][0];
    assert_eq!(c["stage"], "add-round");
    // 7-bit bigman pads to two hex digits, 3-bit m to one
    assert_eq!(c["signals"]["impl.bigman"].as_str().unwrap().len(), 2);
    assert_eq!(c["signals"]["spec.m"].as_str().unwrap().len(), 1);
    assert_eq!(c["signals"]["spec.s"].as_str().unwrap().len(), 1);
}
