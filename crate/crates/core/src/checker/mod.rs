// SPDX-License-Identifier: Apache-2.0

//! Equivalence checking by enumeration.
//!
//! Every admitted stimulus is run through both models and every directive is
//! evaluated on the resulting trace. Exhaustive mode is a complete decision
//! procedure for the enumerated format; random mode samples and never proves.

mod report;
mod shrink;
pub mod space;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::adder::{eval_model, spec_model};
use crate::error::{Error, Result};
use crate::fault::FaultConfig;
use crate::float::FloatFormat;
use crate::property::{CompiledExpr, Elaborated, Models, Namespaces, Outcome, Role};
use crate::sampling::{chunk_rng, SAMPLE_CHUNK};
use crate::signals::{ModelTrace, Signal, SignalTrace};
use crate::stages::Stage;

pub use report::{
    localize, Attribution, Counterexample, DirectiveVerdict, FormatEcho, Localization, ReportConfig, Status, StimulusStats,
    VerificationReport,
};
pub use space::{tied_fields, Space, Stimulus, FIELDS};

pub const DEFAULT_CEILING: u64 = 1 << 26;
pub const DEFAULT_MAX_CEX: usize = 4;

/// Model tables are precomputed when there are at most this many operand pairs.
const TABLE_LIMIT: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum CheckMode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DriveMode {
    #[default]
    Lockstep,
    Free,
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub mode: CheckMode,
    pub drive: DriveMode,
    /// Counterexamples kept per failing assertion.
    pub max_cex: usize,
    /// Largest stimulus space exhaustive mode accepts.
    pub ceiling: u64,
    /// Permit free mode without any assume.
    pub allow_unconstrained: bool,
    /// Thread count; `None` uses the global pool. Never affects results.
    pub workers: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            mode: CheckMode::Exhaustive,
            drive: DriveMode::Lockstep,
            max_cex: DEFAULT_MAX_CEX,
            ceiling: DEFAULT_CEILING,
            allow_unconstrained: false,
            workers: None,
        }
    }
}

impl CheckOptions {
    pub fn exhaustive() -> Self {
        CheckOptions::default()
    }

    pub fn random(samples: u64, seed: u64) -> Self {
        CheckOptions {
            mode: CheckMode::Random { samples, seed },
            ..CheckOptions::default()
        }
    }

    pub fn free(mut self) -> Self {
        self.drive = DriveMode::Free;
        self
    }

    pub fn workers(mut self, n: usize) -> Self {
        self.workers = Some(n);
        self
    }
}

/// Per-chunk aggregate; merged in chunk order.
#[derive(Clone, Debug)]
struct Tally {
    evaluated: u64,
    admitted: u64,
    counts: Vec<[u64; 3]>,
    cex: Vec<Vec<(u64, Stimulus)>>,
    watch_hits: Vec<u64>,
}

impl Tally {
    fn new(directives: usize, watches: usize) -> Self {
        Tally {
            evaluated: 0,
            admitted: 0,
            counts: vec![[0; 3]; directives],
            cex: vec![Vec::new(); directives],
            watch_hits: vec![0; watches],
        }
    }

    fn merge(mut self, other: Tally, max_cex: usize) -> Tally {
        self.evaluated += other.evaluated;
        self.admitted += other.admitted;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for k in 0..3 {
                a[k] += b[k];
            }
        }
        for (a, b) in self.cex.iter_mut().zip(other.cex) {
            a.extend(b);
            a.truncate(max_cex);
        }
        for (a, b) in self.watch_hits.iter_mut().zip(&other.watch_hits) {
            *a += b;
        }
        self
    }
}

fn outcome_slot(o: Outcome) -> usize {
    match o {
        Outcome::Pass => 0,
        Outcome::Fail => 1,
        Outcome::Vacuous => 2,
    }
}

/// Raw enumeration result before verdicts are assigned.
#[derive(Clone, Debug)]
pub struct Run {
    pub stats: StimulusStats,
    /// `[pass, fail, vacuous]` per directive.
    pub counts: Vec<[u64; 3]>,
    /// Earliest failing stimuli per directive, by enumeration index.
    pub cex: Vec<Vec<(u64, Stimulus)>>,
    /// Admitted stimuli on which each watch held.
    pub watch_hits: Vec<u64>,
}

struct Tables {
    imp: Vec<ModelTrace>,
    spec: Vec<ModelTrace>,
}

/// A configured check over one elaborated property set.
pub struct Checker<'a> {
    pub elab: &'a Elaborated,
    pub faults: FaultConfig,
    pub opts: CheckOptions,
    pub space: Space,
    tables: Option<Tables>,
}

impl<'a> Checker<'a> {
    pub fn new(elab: &'a Elaborated, faults: &FaultConfig, opts: &CheckOptions) -> Result<Self> {
        let fmt = elab.fmt;
        let assumes = elab.of_role(Role::Assume).count();
        let space = match opts.drive {
            DriveMode::Lockstep => Space::lockstep(fmt),
            DriveMode::Free => {
                if elab.namespaces == Namespaces::ImplOnly {
                    return Err(Error::Config(
                        "free drive needs the reference model; it cannot be combined with standalone checking".into(),
                    ));
                }
                if assumes == 0 && !opts.allow_unconstrained {
                    return Err(Error::Config(
                        "free drive needs at least one assume directive to constrain the models' inputs; \
                         add one or pass --allow-unconstrained"
                            .into(),
                    ));
                }
                Space::new(fmt, tied_fields(elab))
            }
        };
        if opts.mode == CheckMode::Exhaustive && space.size() > opts.ceiling {
            return Err(Error::Config(format!(
                "exhaustive enumeration of {} stimuli at format ({},{}) exceeds the ceiling of {}; \
                 use --mode random or raise --ceiling",
                if space.size() == u64::MAX { ">2^64".to_string() } else { space.size().to_string() },
                fmt.exp_bits(),
                fmt.man_bits(),
                opts.ceiling
            )));
        }
        if opts.max_cex == 0 {
            return Err(Error::Config("the counterexample cap must be at least 1".into()));
        }
        if opts.workers == Some(0) {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        Ok(Checker {
            elab,
            faults: faults.clone(),
            opts: opts.clone(),
            space,
            tables: None,
        })
    }

    pub fn fmt(&self) -> FloatFormat {
        self.elab.fmt
    }

    fn standalone(&self) -> bool {
        self.elab.namespaces == Namespaces::ImplOnly
    }

    fn build_tables(&mut self) {
        if self.tables.is_some()
            || self.opts.mode != CheckMode::Exhaustive
            || self.space.pair_count() > TABLE_LIMIT
        {
            return;
        }
        let (fmt, faults, space) = (self.fmt(), &self.faults, &self.space);
        let imp = (0..space.pair_count())
            .into_par_iter()
            .map(|i| {
                let (a, b) = space.pair(i);
                eval_model(a, b, fmt, faults).expect("enumerated operands are normalized")
            })
            .collect();
        let spec = if self.standalone() {
            Vec::new()
        } else {
            (0..space.pair_count())
                .into_par_iter()
                .map(|i| {
                    let (a, b) = space.pair(i);
                    spec_model(a, b, fmt).expect("enumerated operands are normalized")
                })
                .collect()
        };
        self.tables = Some(Tables { imp, spec });
    }

    /// Implementation and reference models for a stimulus. In standalone mode
    /// the reference is absent and the implementation stands in for it.
    pub fn models(&self, s: &Stimulus) -> Result<(ModelTrace, ModelTrace)> {
        if let Some(t) = &self.tables {
            let imp = t.imp[self.space.pair_index(s.imp) as usize];
            let spec = if self.standalone() {
                imp
            } else {
                t.spec[self.space.pair_index(s.spec) as usize]
            };
            return Ok((imp, spec));
        }
        let imp = eval_model(s.imp.0, s.imp.1, self.fmt(), &self.faults)?;
        let spec = if self.standalone() {
            imp
        } else {
            spec_model(s.spec.0, s.spec.1, self.fmt())?
        };
        Ok((imp, spec))
    }

    pub fn trace(&self, s: &Stimulus) -> Result<SignalTrace> {
        let (imp, spec) = self.models(s)?;
        Ok(SignalTrace::new(
            self.fmt(),
            Some(imp),
            (!self.standalone()).then_some(spec),
        ))
    }

    /// Admitted iff no assume fails.
    pub fn admits(&self, m: Models<'_>) -> bool {
        self.elab
            .of_role(Role::Assume)
            .all(|(_, d)| d.property.eval(m) != Outcome::Fail)
    }

    /// Whether stimulus `s` is admitted and fails directive `directive`.
    pub fn fails(&self, directive: usize, s: &Stimulus) -> bool {
        if !self.space.contains(s) {
            return false;
        }
        let Ok((imp, spec)) = self.models(s) else {
            return false;
        };
        let m = Models { imp: &imp, spec: &spec };
        self.admits(m) && self.elab.directives[directive].property.eval(m) == Outcome::Fail
    }

    /// Stage a failure of `directive` on the given models is attributed to.
    ///
    /// Alignment-level properties localize to alignment. A result-level failure
    /// localizes to alignment when the models already disagree on the aligned
    /// operands, and to add-round otherwise.
    pub fn stage_of(&self, directive: usize, m: Models<'_>) -> Option<Stage> {
        match self.elab.directives[directive].property.observes? {
            Stage::Alignment => Some(Stage::Alignment),
            Stage::AddRound if self.standalone() => Some(Stage::AddRound),
            Stage::AddRound => {
                let diverged = [Signal::Bigman, Signal::Algman]
                    .iter()
                    .any(|&sig| m.imp.raw(sig) != m.spec.raw(sig));
                Some(if diverged { Stage::Alignment } else { Stage::AddRound })
            }
        }
    }

    fn stimulus_count(&self) -> u64 {
        match self.opts.mode {
            CheckMode::Exhaustive => self.space.size(),
            CheckMode::Random { samples, .. } => samples,
        }
    }

    fn eval_chunk(&self, chunk: u64, watches: &[CompiledExpr]) -> Tally {
        let n = self.elab.directives.len();
        let mut tally = Tally::new(n, watches.len());
        let start = chunk * SAMPLE_CHUNK;
        let end = (start + SAMPLE_CHUNK).min(self.stimulus_count());
        let mut rng = match self.opts.mode {
            CheckMode::Random { seed, .. } => Some(chunk_rng(seed, chunk)),
            CheckMode::Exhaustive => None,
        };
        for index in start..end {
            let s = match rng.as_mut() {
                Some(r) => self.space.sample(r),
                None => self.space.stimulus(index),
            };
            let (imp, spec) = self.models(&s).expect("enumerated operands are normalized");
            let m = Models { imp: &imp, spec: &spec };
            tally.evaluated += 1;
            let mut admitted = true;
            for (i, d) in self.elab.of_role(Role::Assume) {
                let o = d.property.eval(m);
                tally.counts[i][outcome_slot(o)] += 1;
                admitted &= o != Outcome::Fail;
            }
            if !admitted {
                continue;
            }
            tally.admitted += 1;
            for (i, d) in self.elab.directives.iter().enumerate() {
                if d.role() == Role::Assume {
                    continue;
                }
                let o = d.property.eval(m);
                tally.counts[i][outcome_slot(o)] += 1;
                if o == Outcome::Fail && d.role() == Role::Assert && tally.cex[i].len() < self.opts.max_cex {
                    tally.cex[i].push((index, s));
                }
            }
            for (w, hits) in watches.iter().zip(tally.watch_hits.iter_mut()) {
                *hits += u64::from(w.eval(m));
            }
        }
        tally
    }

    /// Enumerates the stimulus space, evaluating every directive and watch.
    pub fn run(&mut self, watches: &[CompiledExpr]) -> Result<Run> {
        let pool = match self.opts.workers {
            Some(n) => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?,
            ),
            None => None,
        };
        let mut body = || {
            self.build_tables();
            let this = &*self;
            let chunks = this.stimulus_count().div_ceil(SAMPLE_CHUNK);
            let tallies: Vec<Tally> = (0..chunks)
                .into_par_iter()
                .map(|c| this.eval_chunk(c, watches))
                .collect();
            let empty = Tally::new(this.elab.directives.len(), watches.len());
            tallies
                .into_iter()
                .fold(empty, |acc, t| acc.merge(t, this.opts.max_cex))
        };
        let tally = match &pool {
            Some(p) => p.install(body),
            None => body(),
        };
        Ok(Run {
            stats: StimulusStats {
                space: self.space.size(),
                evaluated: tally.evaluated,
                admitted: tally.admitted,
            },
            counts: tally.counts,
            cex: tally.cex,
            watch_hits: tally.watch_hits,
        })
    }

    pub fn counterexample(&self, directive: usize, index: Option<u64>, s: &Stimulus) -> Result<Counterexample> {
        let (imp, spec) = self.models(s)?;
        let stage = self.stage_of(directive, Models { imp: &imp, spec: &spec });
        Ok(Counterexample {
            property: self.elab.directives[directive].name().to_string(),
            index,
            stimulus: *s,
            trace: self.trace(s)?,
            stage,
        })
    }

    /// Runs the check and assembles the report, shrinking the first
    /// counterexample of every failing assertion.
    pub fn check(&mut self) -> Result<VerificationReport> {
        let started = Instant::now();
        let run = self.run(&[])?;
        let complete = self.opts.mode == CheckMode::Exhaustive;
        let mut directives = Vec::new();
        let mut cex = Vec::new();
        let mut minimal = Vec::new();
        for (i, d) in self.elab.directives.iter().enumerate() {
            let [pass, fail, vacuous] = run.counts[i];
            let status = match d.role() {
                Role::Assume => Status::Assumed,
                Role::Cover if pass > 0 => Status::Covered,
                Role::Cover => Status::Uncovered,
                Role::Assert if fail > 0 => Status::Failed,
                Role::Assert if pass == 0 => Status::Vacuous,
                Role::Assert if complete => Status::Proven,
                Role::Assert => Status::Passed,
            };
            directives.push(DirectiveVerdict {
                name: d.name().to_string(),
                role: d.role(),
                property: d.directive.target.clone(),
                status,
                pass,
                fail,
                vacuous,
                observes: d.property.observes,
            });
            for (k, (index, s)) in run.cex[i].iter().enumerate() {
                let c = self.counterexample(i, Some(*index), s)?;
                if k == 0 {
                    minimal.push(self.shrink(i, &c)?);
                }
                cex.push(c);
            }
        }
        let mut report = VerificationReport {
            config: ReportConfig::new(self.fmt(), &self.faults, &self.opts, self.standalone()),
            complete,
            stimuli: run.stats,
            directives,
            cex,
            minimal_cex: minimal,
            localization: Localization::default(),
            elapsed_seconds: 0.0,
        };
        report.localization = localize(&report);
        report.elapsed_seconds = started.elapsed().as_secs_f64();
        Ok(report)
    }
}

/// Checks every directive of `elab` under `faults`.
pub fn check(elab: &Elaborated, faults: &FaultConfig, opts: &CheckOptions) -> Result<VerificationReport> {
    Checker::new(elab, faults, opts)?.check()
}

#[cfg(test)]
mod tests;
