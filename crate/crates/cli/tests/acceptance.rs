// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fpeq::campaign::{combined_corpora, fault_matrix, CampaignOptions};
use fpeq::checker::{check, CheckOptions, Counterexample, Status, VerificationReport};
use fpeq::coverage::{measure, ratios, CoverageReport, ItemStatus};
use fpeq::fault::{FaultConfig, FaultKind};
use fpeq::float::FloatFormat;
use fpeq::oracle::{check_reference, OracleMode};
use fpeq::property::{
    corpus, elaborate, eval_property, parse, Atom, Directive, Expr, Namespaces, Outcome, Property, PropertyFile, Role,
    SignalRef, CORPUS_NAMES,
};
use fpeq::signals::{Namespace, Signal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_DESK_LIMIT: Duration = Duration::from_secs(10);
const ORACLE_SINGLE_LIMIT: Duration = Duration::from_secs(60);
const ORACLE_SINGLE_SAMPLES: u64 = 1_000_000;
const MATRIX_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_TEXTS: usize = 1000;
const SYNTHETIC_PCT: f64 = 93.88;
const PCT_TOLERANCE: f64 = 0.01;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn load(names: &[&str]) -> PropertyFile {
    let mut f = PropertyFile::default();
    for n in names {
        f.extend(parse(corpus(n).unwrap()).unwrap());
    }
    f
}

fn run(file: &PropertyFile, faults: &FaultConfig, opts: &CheckOptions) -> Result<VerificationReport, String> {
    let elab = elaborate(file, FloatFormat::DESK, Namespaces::Both).map_err(err)?;
    check(&elab, faults, opts).map_err(err)
}

fn oracle_desk() -> Verdict {
    let started = Instant::now();
    let s = check_reference(FloatFormat::DESK, OracleMode::Exhaustive).map_err(err)?;
    let t = started.elapsed();
    ensure(s.mismatches == 0, format!("{} mismatches", s.mismatches))?;
    ensure(s.checked_pairs == 65_536, format!("{} pairs", s.checked_pairs))?;
    ensure(s.normalized_pairs == 50_176, format!("{} normalized", s.normalized_pairs))?;
    ensure(t < ORACLE_DESK_LIMIT, format!("took {t:?}"))?;
    Ok(format!("65536 pairs, 50176 normalized, 0 mismatches, {:.2}s", t.as_secs_f64()))
}

fn oracle_single() -> Verdict {
    let started = Instant::now();
    let mode = OracleMode::Sampled {
        samples: ORACLE_SINGLE_SAMPLES,
        seed: 1,
    };
    let s = check_reference(FloatFormat::SINGLE, mode).map_err(err)?;
    let t = started.elapsed();
    ensure(s.mismatches == 0, format!("{} mismatches", s.mismatches))?;
    ensure(s.checked_pairs == ORACLE_SINGLE_SAMPLES, format!("{} pairs", s.checked_pairs))?;
    ensure(t < ORACLE_SINGLE_LIMIT, format!("took {t:?}"))?;
    Ok(format!("{} sampled pairs, 0 mismatches, {:.2}s", s.checked_pairs, t.as_secs_f64()))
}

fn theorem() -> Verdict {
    let r = run(&load(&["theorem-split3"]), &FaultConfig::none(), &CheckOptions::exhaustive())?;
    let (p, f, v) = (r.count(Status::Proven), r.count(Status::Failed), r.count(Status::Vacuous));
    ensure((p, f, v) == (3, 0, 0) && r.complete, format!("proven {p} failed {f} vacuous {v}"))?;
    Ok("3/3 proven, 0 failed, 0 vacuous".into())
}

fn lemmas() -> Verdict {
    let l1 = run(&load(&["handwritten-lemma1"]), &FaultConfig::none(), &CheckOptions::exhaustive())?;
    ensure(l1.count(Status::Proven) == 1 && l1.asserts().count() == 1, "lemma1 not proven in lockstep")?;
    let l2 = run(&load(&["handwritten-lemma2"]), &FaultConfig::none(), &CheckOptions::exhaustive().free())?;
    ensure(l2.count(Status::Proven) == 1 && l2.asserts().count() == 1, "lemma2 not proven in free drive")?;
    Ok(format!("lemma1 lockstep proven, lemma2 free drive proven over {} stimuli", l2.stimuli.admitted))
}

fn matrix() -> Verdict {
    let started = Instant::now();
    let m = fault_matrix(&CampaignOptions::default()).map_err(err)?;
    let t = started.elapsed();
    let inconsistent: Vec<_> = m.rows.iter().filter(|r| !r.consistent()).map(|r| r.fault.clone()).collect();
    ensure(m.faults() == 9 && m.detected() == 9, format!("{}/{} detected", m.detected(), m.faults()))?;
    ensure(inconsistent.is_empty(), format!("inconsistent rows: {inconsistent:?}"))?;
    ensure(t < MATRIX_LIMIT, format!("took {t:?}"))?;
    Ok(format!("9/9 detected and localized, {:.2}s", t.as_secs_f64()))
}

fn refails(file: &PropertyFile, c: &Counterexample) -> Result<(), String> {
    let d = file
        .directives
        .iter()
        .find(|d| d.name() == c.property)
        .ok_or_else(|| format!("unknown directive {}", c.property))?;
    let p = file.property(&d.target).ok_or("unknown target")?;
    match eval_property(p, &c.trace).map_err(err)? {
        Outcome::Fail => Ok(()),
        o => Err(format!("{} evaluates {o:?} on its counterexample", c.property)),
    }
}

fn counterexamples_refail() -> Verdict {
    let file = combined_corpora();
    let reparsed = parse(&file.to_string()).map_err(err)?;
    let (mut full, mut shrunk) = (0, 0);
    for kind in FaultKind::ALL {
        let r = run(&file, &FaultConfig::single(kind), &CheckOptions::exhaustive())?;
        ensure(!r.cex.is_empty(), format!("{} produced no counterexample", kind.id()))?;
        for c in &r.cex {
            refails(&reparsed, c)?;
            full += 1;
        }
        for c in &r.minimal_cex {
            refails(&reparsed, c)?;
            shrunk += 1;
        }
    }
    Ok(format!("{full} counterexamples and {shrunk} shrunk ones re-fail"))
}

struct TextGen {
    rng: ChaCha8Rng,
}

impl TextGen {
    fn gap(&mut self) -> String {
        let mut s = String::new();
        for _ in 0..self.rng.random_range(1..3) {
            match self.rng.random_range(0..6) {
                0 => s.push_str(" // note && |-> ;\n"),
                1 => s.push('\n'),
                2 => s.push('\t'),
                _ => s.push(' '),
            }
        }
        s
    }

    fn atom(&mut self) -> (Atom, String) {
        if self.rng.random_bool(0.7) {
            let signal = Signal::ALL[self.rng.random_range(0..Signal::ALL.len())];
            let ns = if self.rng.random_bool(0.5) { Namespace::Impl } else { Namespace::Spec };
            let prefix = if ns == Namespace::Impl { "impl" } else { "spec" };
            (Atom::Signal(SignalRef { ns, signal }), format!("{prefix}.{}", signal.name()))
        } else {
            let v: u64 = self.rng.random_range(0..1 << 20);
            let text = match self.rng.random_range(0..3) {
                0 => format!("0x{v:x}"),
                1 => format!("0X{v:X}"),
                _ => v.to_string(),
            };
            (Atom::Literal(v), text)
        }
    }

    fn leaf(&mut self) -> (Expr, String) {
        if self.rng.random_bool(0.15) {
            return (Expr::True, "1".into());
        }
        let (a, ta) = self.atom();
        let (b, tb) = self.atom();
        let g = self.gap();
        (Expr::Eq(a, b), format!("{ta}{g}=={g}{tb}"))
    }

    fn expr(&mut self, depth: u32) -> (Expr, String) {
        if depth == 0 || self.rng.random_bool(0.4) {
            return self.leaf();
        }
        if self.rng.random_bool(0.3) {
            let (e, t) = self.expr(depth - 1);
            return (Expr::Paren(Box::new(e)), format!("({t})"));
        }
        let n = self.rng.random_range(2..4);
        let mut parts = Vec::new();
        let mut texts = Vec::new();
        for _ in 0..n {
            let (e, t) = if self.rng.random_bool(0.5) {
                let (e, t) = self.expr(depth - 1);
                (Expr::Paren(Box::new(e)), format!("({t})"))
            } else {
                self.leaf()
            };
            parts.push(e);
            texts.push(t);
        }
        let sep = format!("{}&&{}", self.gap(), self.gap());
        (Expr::And(parts), texts.join(&sep))
    }

    fn file(&mut self) -> (PropertyFile, String) {
        let mut f = PropertyFile::default();
        let mut chunks = Vec::new();
        for i in 0..self.rng.random_range(0..5) {
            let name = format!("prop_{i}");
            let (antecedent, ta) = self.expr(3);
            let (consequent, tc) = self.expr(3);
            chunks.push(format!(
                "property {name};{}{ta}{}|->{}{tc};{}endproperty",
                self.gap(),
                self.gap(),
                self.gap(),
                self.gap()
            ));
            f.properties.push(Property {
                name: name.clone(),
                antecedent,
                consequent,
            });
            if self.rng.random_bool(0.7) {
                let role = [Role::Assert, Role::Assume, Role::Cover][self.rng.random_range(0..3)];
                let label = self.rng.random_bool(0.5).then(|| format!("lbl_{i}"));
                let kw = match role {
                    Role::Assert => "assert",
                    Role::Assume => "assume",
                    Role::Cover => "cover",
                };
                let head = label.as_ref().map_or(String::new(), |l| format!("{l}{}:{}", self.gap(), self.gap()));
                chunks.push(format!("{head}{kw} property{}({name});", self.gap()));
                f.directives.push(Directive {
                    label,
                    role,
                    target: name,
                });
            }
        }
        let mut text = self.gap();
        for c in chunks {
            text += &c;
            text += &self.gap();
        }
        (f, text)
    }
}

fn roundtrip() -> Verdict {
    for name in CORPUS_NAMES {
        let first = parse(corpus(name).map_err(err)?).map_err(err)?;
        ensure(parse(&first.to_string()).map_err(err)? == first, format!("{name} does not round-trip"))?;
    }
    let mut g = TextGen {
        rng: ChaCha8Rng::seed_from_u64(2024),
    };
    for i in 0..RANDOM_TEXTS {
        let (expected, text) = g.file();
        let parsed = parse(&text).map_err(|e| format!("text {i}: {e}\n{text}"))?;
        ensure(parsed == expected, format!("text {i} parses to a different tree\n{text}"))?;
        ensure(parse(&parsed.to_string()).map_err(err)? == parsed, format!("text {i} does not round-trip"))?;
    }
    Ok(format!("{} corpora and {RANDOM_TEXTS} generated texts round-trip", CORPUS_NAMES.len()))
}

fn strip_elapsed(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes)
        .lines()
        .filter(|l| !l.contains("elapsed"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn determinism() -> Verdict {
    let mut outputs = Vec::new();
    for workers in ["1", "4", "8"] {
        for _ in 0..2 {
            let o = Command::new(env!("CARGO_BIN_EXE_fpeq"))
                .args(["verify", "--corpus", "theorem-split3", "--corpus", "handwritten-lemma1"])
                .args(["--fault", "carry-manip", "--json", "--workers", workers])
                .output()
                .map_err(err)?;
            ensure(o.status.code() == Some(1), format!("exit {:?}", o.status.code()))?;
            outputs.push(strip_elapsed(&o.stdout));
        }
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), "outputs differ between runs")?;
    Ok(format!("6 runs byte-identical ({} bytes)", outputs[0].len()))
}

fn coverage_of(text: &str) -> Result<CoverageReport, String> {
    let elab = elaborate(&parse(text).map_err(err)?, FloatFormat::DESK, Namespaces::Both).map_err(err)?;
    measure(&elab, &FaultConfig::none(), &CheckOptions::exhaustive()).map_err(err)
}

fn coverage() -> Verdict {
    let theorem = corpus("theorem-split3").map_err(err)?;
    let base = coverage_of(theorem)?;
    ensure(
        base.covered + base.unreachable + base.unknown == base.total && base.unknown == 0,
        "items do not partition into covered and unreachable",
    )?;
    let lemma2_assume = "property exp_inputs_are_equal; 1 |-> (impl.e1 == spec.e1) && (impl.e2 == spec.e2); endproperty\n\
                         assume property(exp_inputs_are_equal);";
    let add_only = "property add_only; 1 |-> impl.eff_sub == 0; endproperty\nassume property(add_only);";
    let one = coverage_of(&format!("{theorem}\n{lemma2_assume}"))?;
    let two = coverage_of(&format!("{theorem}\n{lemma2_assume}\n{add_only}"))?;
    for (small, big) in [(&one, &base), (&two, &one)] {
        for item in &small.items {
            let wider = big.item(item.id).ok_or("missing item")?;
            ensure(
                item.status != ItemStatus::Covered || wider.status == ItemStatus::Covered,
                format!("{} covered only under more assumes", item.id),
            )?;
        }
        ensure(small.covered <= big.covered, "covered count grew under an assume")?;
    }
    let r = ratios(98, 0, 92, 98, 92);
    ensure(
        (r.stimuli_pct - SYNTHETIC_PCT).abs() <= PCT_TOLERANCE && (r.formal_pct - SYNTHETIC_PCT).abs() <= PCT_TOLERANCE,
        format!("synthetic ratio {:.4}", r.stimuli_pct),
    )?;
    Ok(format!(
        "{}/{} covered, monotone under assumes ({} -> {} -> {}), synthetic {:.2}%",
        base.covered, base.total, base.covered, one.covered, two.covered, r.stimuli_pct
    ))
}

fn vacuity() -> Verdict {
    let text = "property neg; impl.s1 == 1 |-> impl.s == spec.s; endproperty\n\
                property pos; 1 |-> impl.s1 == 0; endproperty\n\
                assert property(neg);\nassume property(pos);";
    let faulty = FaultConfig::single(FaultKind::RoundingRuleViolation);
    let r = run(&parse(text).map_err(err)?, &faulty, &CheckOptions::exhaustive())?;
    let v = r.verdict("neg").ok_or("missing verdict")?;
    ensure(v.status == Status::Vacuous && v.pass == 0 && v.fail == 0, format!("status {:?}", v.status))?;
    ensure(!r.all_passed() && !r.any_failed(), "vacuous assert counted as pass or fail")?;
    Ok("contradicted assert reported vacuous, not proven".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle-exhaustive-4-3", oracle_desk),
        ("oracle-sampled-8-23", oracle_single),
        ("theorem-proven", theorem),
        ("lemmas-proven", lemmas),
        ("fault-matrix", matrix),
        ("counterexamples-refail", counterexamples_refail),
        ("parser-roundtrip", roundtrip),
        ("worker-determinism", determinism),
        ("coverage", coverage),
        ("vacuity-guard", vacuity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
