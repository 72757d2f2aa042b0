// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{CheckMode, CheckOptions, DriveMode, Stimulus};
use crate::fault::FaultConfig;
use crate::float::{FloatFormat, FloatTriple};
use crate::property::Role;
use crate::signals::{Namespace, SignalTrace};
use crate::stages::Stage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Exhaustive, no failure, at least one non-vacuous pass.
    Proven,
    /// Sampled, no failure seen, at least one non-vacuous pass. Not a proof.
    Passed,
    Failed,
    Vacuous,
    Covered,
    Uncovered,
    Assumed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proven => "proven",
            Status::Passed => "passed",
            Status::Failed => "failed",
            Status::Vacuous => "vacuous",
            Status::Covered => "covered",
            Status::Uncovered => "uncovered",
            Status::Assumed => "assumed",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectiveVerdict {
    pub name: String,
    pub role: Role,
    pub property: String,
    pub status: Status,
    pub pass: u64,
    pub fail: u64,
    pub vacuous: u64,
    /// Stage whose signals the consequent observes, if any.
    pub observes: Option<Stage>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StimulusStats {
    /// Size of the enumerable space.
    pub space: u64,
    pub evaluated: u64,
    /// Evaluated stimuli on which no assume failed.
    pub admitted: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FormatEcho {
    pub exp_bits: u32,
    pub man_bits: u32,
}

/// Everything a report depends on. Worker count is deliberately absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportConfig {
    pub format: FormatEcho,
    pub faults: Vec<String>,
    pub mode: &'static str,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub drive: DriveMode,
    pub standalone: bool,
    pub max_cex: usize,
    pub ceiling: u64,
    /// Where the property text came from; filled in by the caller.
    pub properties: Option<String>,
}

impl ReportConfig {
    pub fn new(fmt: FloatFormat, faults: &FaultConfig, opts: &CheckOptions, standalone: bool) -> Self {
        let (mode, samples, seed) = match opts.mode {
            CheckMode::Exhaustive => ("exhaustive", None, None),
            CheckMode::Random { samples, seed } => ("random", Some(samples), Some(seed)),
        };
        ReportConfig {
            format: FormatEcho {
                exp_bits: fmt.exp_bits(),
                man_bits: fmt.man_bits(),
            },
            faults: faults.labels(),
            mode,
            samples,
            seed,
            drive: opts.drive,
            standalone,
            max_cex: opts.max_cex,
            ceiling: opts.ceiling,
            properties: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Name of the failing directive.
    pub property: String,
    /// Enumeration index; absent for shrunk counterexamples.
    pub index: Option<u64>,
    pub stimulus: Stimulus,
    pub trace: SignalTrace,
    pub stage: Option<Stage>,
}

impl Counterexample {
    pub fn stage_name(&self) -> &'static str {
        self.stage.map_or("unattributed", Stage::as_str)
    }

    /// Every present signal as zero-padded hex, keyed by qualified name.
    pub fn signals(&self) -> BTreeMap<String, String> {
        self.trace.iter().map(|(k, v)| (k, v.to_hex())).collect()
    }
}

impl Serialize for Counterexample {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("Counterexample", 4)?;
        st.serialize_field("property", &self.property)?;
        st.serialize_field("stage", self.stage_name())?;
        st.serialize_field("index", &self.index)?;
        st.serialize_field("signals", &self.signals())?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub config: ReportConfig,
    /// True when the whole admitted space was enumerated.
    pub complete: bool,
    pub stimuli: StimulusStats,
    pub directives: Vec<DirectiveVerdict>,
    pub cex: Vec<Counterexample>,
    /// Shrunk form of the first counterexample of each failing assertion.
    pub minimal_cex: Vec<Counterexample>,
    pub localization: Localization,
    pub elapsed_seconds: f64,
}

impl VerificationReport {
    pub fn asserts(&self) -> impl Iterator<Item = &DirectiveVerdict> {
        self.directives.iter().filter(|d| d.role == Role::Assert)
    }

    pub fn verdict(&self, name: &str) -> Option<&DirectiveVerdict> {
        self.directives.iter().find(|d| d.name == name)
    }

    pub fn count(&self, status: Status) -> usize {
        self.asserts().filter(|d| d.status == status).count()
    }

    pub fn any_failed(&self) -> bool {
        self.count(Status::Failed) > 0
    }

    /// At least one assertion and every assertion proven (or, when sampling, passed).
    pub fn all_passed(&self) -> bool {
        self.asserts().next().is_some()
            && self
                .asserts()
                .all(|d| matches!(d.status, Status::Proven | Status::Passed))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn triple(t: FloatTriple, fmt: FloatFormat) -> String {
    format!(
        "({},{:0ew$b},{:0mw$b})",
        u8::from(t.sign),
        t.exp,
        t.man,
        ew = fmt.exp_bits() as usize,
        mw = fmt.man_bits() as usize
    )
}

fn write_cex(f: &mut fmt::Formatter<'_>, c: &Counterexample) -> fmt::Result {
    let fmt_ = c.trace.fmt;
    let at = c.index.map(|i| format!(" #{i}")).unwrap_or_default();
    writeln!(f, "  {} [{}]{at}", c.property, c.stage_name())?;
    for ns in [Namespace::Impl, Namespace::Spec] {
        if let Some(m) = c.trace.model(ns) {
            let (a, b) = m.inputs();
            writeln!(
                f,
                "    {:<4}  f1={} f2={} -> {}",
                ns.as_str(),
                triple(a, fmt_),
                triple(b, fmt_),
                triple(m.result(), fmt_)
            )?;
        }
    }
    if c.trace.impl_trace.is_some() && c.trace.spec_trace.is_some() {
        let diffs: Vec<String> = crate::signals::Signal::ALL
            .iter()
            .filter_map(|&s| {
                let i = c.trace.get(Namespace::Impl, s)?;
                let p = c.trace.get(Namespace::Spec, s)?;
                (i != p).then(|| format!("{s}: impl={} spec={}", i.to_hex(), p.to_hex()))
            })
            .collect();
        if !diffs.is_empty() {
            writeln!(f, "    differs  {}", diffs.join(", "))?;
        }
    }
    Ok(())
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        let faults = if c.faults.is_empty() { "none".to_string() } else { c.faults.join(",") };
        let mode = match (c.samples, c.seed) {
            (Some(n), Some(seed)) => format!("random ({n} samples, seed {seed})"),
            _ => c.mode.to_string(),
        };
        writeln!(
            f,
            "format ({},{})  mode {mode}  drive {}  faults {faults}{}",
            c.format.exp_bits,
            c.format.man_bits,
            match c.drive {
                DriveMode::Lockstep => "lockstep",
                DriveMode::Free => "free",
            },
            if c.standalone { "  standalone" } else { "" }
        )?;
        writeln!(
            f,
            "stimuli: {} evaluated, {} admitted{}",
            self.stimuli.evaluated,
            self.stimuli.admitted,
            if self.complete { " (complete enumeration)" } else { " (sampled, not a proof)" }
        )?;
        for d in &self.directives {
            writeln!(
                f,
                "  {:<9} {:<6} {:<40} pass={} fail={} vacuous={}",
                d.status.as_str().to_uppercase(),
                d.role.as_str(),
                d.name,
                d.pass,
                d.fail,
                d.vacuous
            )?;
        }
        for a in &self.localization.assertions {
            writeln!(f, "  {} localized to {}", a.property, a.stage.map_or("unattributed", Stage::as_str))?;
        }
        if !self.cex.is_empty() {
            writeln!(f, "counterexamples:")?;
            for c in &self.cex {
                write_cex(f, c)?;
            }
            writeln!(f, "shrunk:")?;
            for c in &self.minimal_cex {
                write_cex(f, c)?;
            }
        }
        writeln!(f, "elapsed {:.3} s", self.elapsed_seconds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attribution {
    pub property: String,
    pub stage: Option<Stage>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Localization {
    /// One entry per failing assertion.
    pub assertions: Vec<Attribution>,
    /// Alignment if an alignment-level assertion failed or any counterexample
    /// shows diverged aligned operands; add-round if only result-level
    /// assertions failed with agreeing alignment; otherwise none.
    pub stage: Option<Stage>,
}

pub fn localize(report: &VerificationReport) -> Localization {
    let assertions: Vec<Attribution> = report
        .asserts()
        .filter(|d| d.status == Status::Failed)
        .map(|d| {
            let stage = match d.observes {
                Some(Stage::Alignment) => Some(Stage::Alignment),
                _ => report.cex.iter().find(|c| c.property == d.name).and_then(|c| c.stage),
            };
            Attribution {
                property: d.name.clone(),
                stage,
            }
        })
        .collect();
    let has = |s: Stage| assertions.iter().any(|a| a.stage == Some(s));
    let stage = if has(Stage::Alignment) {
        Some(Stage::Alignment)
    } else if has(Stage::AddRound) {
        Some(Stage::AddRound)
    } else {
        None
    };
    Localization { assertions, stage }
}
