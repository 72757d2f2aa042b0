// SPDX-License-Identifier: Apache-2.0

//! Fault campaigns: every catalogued fault against the lemma and theorem corpora.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::checker::{
    check, CheckMode, CheckOptions, Counterexample, FormatEcho, Space, Status, VerificationReport,
};
use crate::error::Result;
use crate::fault::{FaultConfig, FaultKind};
use crate::float::FloatFormat;
use crate::property::{corpus, elaborate, parse, Namespaces, PropertyFile, CORPUS_NAMES};
use crate::stages::Stage;

pub const LEMMA1_ASSERT: &str = "ap_mantissa_align_equivalence";
pub const LEMMA2_ASSERT: &str = "ap_add_round_equivalence";

/// All built-in corpora in one property file.
pub fn combined_corpora() -> PropertyFile {
    let mut file = PropertyFile::default();
    for name in CORPUS_NAMES {
        file.extend(parse(corpus(name).expect("built-in corpus")).expect("built-in corpus parses"));
    }
    file
}

#[derive(Clone, Debug)]
pub struct CampaignOptions {
    pub fmt: FloatFormat,
    /// Format to retry on when a fault goes undetected.
    pub escalate_to: Option<FloatFormat>,
    /// Sample count for escalated runs too large to enumerate.
    pub escalation_samples: u64,
    pub seed: u64,
    pub check: CheckOptions,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        CampaignOptions {
            fmt: FloatFormat::DESK,
            escalate_to: Some(FloatFormat::HALF),
            escalation_samples: 1_000_000,
            seed: 1,
            check: CheckOptions::exhaustive(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixRow {
    /// Fault id, or `none` for the control row.
    pub fault: String,
    pub code: Option<&'static str>,
    pub expected_stage: Option<Stage>,
    pub format: FormatEcho,
    pub mode: &'static str,
    pub escalated: bool,
    pub detected: bool,
    pub stage: Option<Stage>,
    pub lemma1_failed: bool,
    pub lemma2_failed: bool,
    pub theorem_failed: bool,
    /// Failing stimuli per failed assertion.
    pub failures: BTreeMap<String, u64>,
    /// Counterexamples reported across all assertions.
    pub cex: usize,
    pub first_cex: Option<Counterexample>,
}

impl MatrixRow {
    /// Detected and attributed to the fault's own stage; the control row must stay clean.
    pub fn consistent(&self) -> bool {
        match self.expected_stage {
            None => !self.detected,
            Some(Stage::Alignment) => self.detected && self.lemma1_failed && self.stage == Some(Stage::Alignment),
            Some(Stage::AddRound) => {
                self.detected
                    && !self.lemma1_failed
                    && (self.lemma2_failed || self.theorem_failed)
                    && self.stage == Some(Stage::AddRound)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaultMatrix {
    pub rows: Vec<MatrixRow>,
    pub elapsed_seconds: f64,
}

impl FaultMatrix {
    pub fn detected(&self) -> usize {
        self.rows.iter().filter(|r| r.expected_stage.is_some() && r.detected).count()
    }

    pub fn faults(&self) -> usize {
        self.rows.iter().filter(|r| r.expected_stage.is_some()).count()
    }

    pub fn row(&self, fault: &str) -> Option<&MatrixRow> {
        self.rows.iter().find(|r| r.fault == fault)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serializes")
    }
}

fn failed(report: &VerificationReport, name: &str) -> bool {
    report.verdict(name).is_some_and(|d| d.status == Status::Failed)
}

fn row(kind: Option<FaultKind>, report: &VerificationReport, escalated: bool) -> MatrixRow {
    let theorem_failed = report
        .asserts()
        .filter(|d| d.name != LEMMA1_ASSERT && d.name != LEMMA2_ASSERT)
        .any(|d| d.status == Status::Failed);
    MatrixRow {
        fault: kind.map_or("none", FaultKind::id).to_string(),
        code: kind.map(FaultKind::code),
        expected_stage: kind.map(FaultKind::stage),
        format: report.config.format,
        mode: report.config.mode,
        escalated,
        detected: report.any_failed(),
        stage: report.localization.stage,
        lemma1_failed: failed(report, LEMMA1_ASSERT),
        lemma2_failed: failed(report, LEMMA2_ASSERT),
        theorem_failed,
        failures: report
            .asserts()
            .filter(|d| d.fail > 0)
            .map(|d| (d.name.clone(), d.fail))
            .collect(),
        cex: report.cex.len(),
        first_cex: report.minimal_cex.first().cloned(),
    }
}

fn run_one(file: &PropertyFile, fmt: FloatFormat, faults: &FaultConfig, opts: &CheckOptions) -> Result<VerificationReport> {
    let elab = elaborate(file, fmt, Namespaces::Both)?;
    check(&elab, faults, opts)
}

/// Checks one fault configuration against the combined corpora in lockstep. If
/// nothing fails and an escalation format is set, the run is repeated there,
/// sampled when that format exceeds the enumeration ceiling.
pub fn fault_row(kind: Option<FaultKind>, faults: &FaultConfig, opts: &CampaignOptions) -> Result<MatrixRow> {
    let file = combined_corpora();
    let report = run_one(&file, opts.fmt, faults, &opts.check)?;
    let wide = match opts.escalate_to {
        Some(w) if kind.is_some() && w != opts.fmt && !report.any_failed() => w,
        _ => return Ok(row(kind, &report, false)),
    };
    let check_opts = if Space::lockstep(wide).size() <= opts.check.ceiling {
        opts.check.clone()
    } else {
        CheckOptions {
            mode: CheckMode::Random {
                samples: opts.escalation_samples,
                seed: opts.seed,
            },
            ..opts.check.clone()
        }
    };
    Ok(row(kind, &run_one(&file, wide, faults, &check_opts)?, true))
}

/// The control row followed by every catalogued fault at its default parameter.
pub fn fault_matrix(opts: &CampaignOptions) -> Result<FaultMatrix> {
    let started = Instant::now();
    let mut rows = vec![fault_row(None, &FaultConfig::none(), opts)?];
    for kind in FaultKind::ALL {
        rows.push(fault_row(Some(kind), &FaultConfig::single(kind), opts)?);
    }
    Ok(FaultMatrix {
        rows,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

impl fmt::Display for FaultMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14} {:<4} {:<10} {:<8} {:<10} {:<8} {:>6}  first counterexample",
            "fault", "code", "expected", "detected", "localized", "format", "#cex"
        )?;
        let stage = |s: Option<Stage>| s.map_or("-", Stage::as_str);
        for r in &self.rows {
            let first = r.first_cex.as_ref().map_or("-".to_string(), |c| {
                let (a, b) = c.stimulus.imp;
                format!(
                    "{}: ({},{},{}) + ({},{},{})",
                    c.property,
                    u8::from(a.sign),
                    a.exp,
                    a.man,
                    u8::from(b.sign),
                    b.exp,
                    b.man
                )
            });
            writeln!(
                f,
                "{:<14} {:<4} {:<10} {:<8} {:<10} {:<8} {:>6}  {first}",
                r.fault,
                r.code.unwrap_or("-"),
                stage(r.expected_stage),
                if r.detected { "yes" } else { "no" },
                stage(r.stage),
                format!(
                    "{},{}{}",
                    r.format.exp_bits,
                    r.format.man_bits,
                    if r.escalated { "*" } else { "" }
                ),
                r.cex
            )?;
        }
        writeln!(f, "{}/{} faults detected", self.detected(), self.faults())?;
        if self.rows.iter().any(|r| r.escalated) {
            writeln!(f, "* escalated after going undetected at the base format")?;
        }
        writeln!(f, "elapsed {:.3} s", self.elapsed_seconds)
    }
}
