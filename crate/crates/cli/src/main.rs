// SPDX-License-Identifier: Apache-2.0

//! `fpeq`: command-line frontend.
//!
//! Exit codes: 0 all assertions proven (or nothing to report), 1 a failure or
//! mismatch, 2 no failure but some assertion vacuous or absent, 3 usage,
//! configuration or parse errors.

mod args;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fpeq::campaign::{fault_matrix, CampaignOptions};
use fpeq::checker::{check, CheckMode, CheckOptions, DriveMode, Space};
use fpeq::coverage::measure;
use fpeq::fault::{list_faults, FaultConfig};
use fpeq::float::{ref_add, FloatFormat, FloatTriple};
use fpeq::oracle::{oracle_check, OracleMode, OracleSummary};
use fpeq::property::{corpus, elaborate, parse, Elaborated, Namespaces, PropertyFile, CORPUS_NAMES};
use fpeq::{Error, Result};

use args::{Cli, Command, DriveArg, Global, ModeArg};

const EXIT_FAILED: u8 = 1;
const EXIT_VACUOUS: u8 = 2;
const EXIT_USAGE: u8 = 3;

fn parse_format(text: &str) -> Result<FloatFormat> {
    let bad = || Error::Config(format!("format `{text}` is not of the form E,M (for example 4,3)"));
    let (e, m) = text.split_once(',').ok_or_else(bad)?;
    let e: u32 = e.trim().parse().map_err(|_| bad())?;
    let m: u32 = m.trim().parse().map_err(|_| bad())?;
    FloatFormat::new(e, m)
}

fn format_of(g: &Global) -> Result<FloatFormat> {
    match (&g.format, g.mode) {
        (Some(f), _) => parse_format(f),
        (None, Some(ModeArg::Random)) => Ok(FloatFormat::SINGLE),
        (None, _) => Ok(FloatFormat::DESK),
    }
}

fn faults_of(g: &Global) -> Result<FaultConfig> {
    let mut faults = FaultConfig::none();
    for spec in &g.faults {
        faults.enable_spec(spec)?;
    }
    Ok(faults)
}

/// Property text and a label naming its origin.
fn properties_of(g: &Global) -> Result<(PropertyFile, String)> {
    if let Some(path) = &g.props {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read property file `{}`: {e}", path.display()))
        })?;
        return Ok((parse(&text)?, format!("file:{}", path.display())));
    }
    if g.corpus.is_empty() {
        return Err(Error::Config(format!(
            "no properties given; pass --props PATH or --corpus NAME ({})",
            CORPUS_NAMES.join(", ")
        )));
    }
    let mut file = PropertyFile::default();
    for name in &g.corpus {
        file.extend(parse(corpus(name)?)?);
    }
    // Re-parse so clashes between corpora surface as diagnostics.
    let file = parse(&file.to_string())?;
    Ok((file, format!("corpus:{}", g.corpus.join("+"))))
}

fn check_options(g: &Global, fmt: FloatFormat, elab: Option<&Elaborated>) -> CheckOptions {
    let drive = match g.drive {
        DriveArg::Lockstep => DriveMode::Lockstep,
        DriveArg::Free => DriveMode::Free,
    };
    let mode = match g.mode {
        Some(ModeArg::Exhaustive) => CheckMode::Exhaustive,
        Some(ModeArg::Random) => CheckMode::Random {
            samples: g.samples,
            seed: g.seed,
        },
        None => {
            let space = match (drive, elab) {
                (DriveMode::Free, Some(e)) => Space::new(fmt, fpeq::checker::tied_fields(e)),
                _ => Space::lockstep(fmt),
            };
            if space.size() <= g.ceiling {
                CheckMode::Exhaustive
            } else {
                CheckMode::Random {
                    samples: g.samples,
                    seed: g.seed,
                }
            }
        }
    };
    CheckOptions {
        mode,
        drive,
        max_cex: g.max_cex,
        ceiling: g.ceiling,
        allow_unconstrained: g.allow_unconstrained,
        workers: g.workers,
    }
}

fn namespaces(g: &Global) -> Namespaces {
    if g.standalone {
        Namespaces::ImplOnly
    } else {
        Namespaces::Both
    }
}

fn emit(g: &Global, text: String, json: String) -> Result<()> {
    let mut body = if g.json { json } else { text };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &g.out {
        Some(path) => {
            fs::write(path, &body)
                .map_err(|e| Error::Config(format!("cannot write `{}`: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(body.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(Error::Config(format!("cannot write to standard output: {e}")));
                }
                _ => {}
            }
        }
    }
    Ok(())
}

fn cmd_verify(g: &Global) -> Result<u8> {
    let fmt = format_of(g)?;
    let (file, source) = properties_of(g)?;
    let elab = elaborate(&file, fmt, namespaces(g))?;
    let opts = check_options(g, fmt, Some(&elab));
    let mut report = check(&elab, &faults_of(g)?, &opts)?;
    report.config.properties = Some(source);
    emit(g, report.to_string(), report.to_json())?;
    Ok(if report.any_failed() {
        EXIT_FAILED
    } else if report.all_passed() {
        0
    } else {
        EXIT_VACUOUS
    })
}

fn cmd_coverage(g: &Global) -> Result<u8> {
    let fmt = format_of(g)?;
    let (file, source) = match properties_of(g) {
        Ok(p) => p,
        // Coverage without properties still measures reachability.
        Err(_) if g.props.is_none() && g.corpus.is_empty() => (PropertyFile::default(), "none".to_string()),
        Err(e) => return Err(e),
    };
    let elab = elaborate(&file, fmt, namespaces(g))?;
    let opts = check_options(g, fmt, Some(&elab));
    let mut report = measure(&elab, &faults_of(g)?, &opts)?;
    report.config.properties = Some(source);
    emit(g, report.to_string(), report.to_json())?;
    Ok(0)
}

fn cmd_faults(g: &Global, a: &args::FaultsArgs) -> Result<u8> {
    if !g.faults.is_empty() || g.props.is_some() || !g.corpus.is_empty() {
        return Err(Error::Config(
            "faults runs every catalogued fault against the built-in corpora; \
             use verify for a single fault or custom properties"
                .into(),
        ));
    }
    let fmt = format_of(g)?;
    let opts = CampaignOptions {
        fmt,
        escalate_to: if a.no_escalate { None } else { Some(parse_format(&a.escalate)?) },
        escalation_samples: g.samples,
        seed: g.seed,
        check: check_options(g, fmt, None),
    };
    let matrix = fault_matrix(&opts)?;
    emit(g, matrix.to_string(), matrix.to_json())?;
    Ok(if matrix.rows.iter().all(|r| r.consistent()) { 0 } else { EXIT_FAILED })
}

fn oracle_text(s: &OracleSummary) -> String {
    let mode = match s.mode {
        OracleMode::Exhaustive => "exhaustive".to_string(),
        OracleMode::Sampled { samples, seed } => format!("sampled ({samples} pairs, seed {seed})"),
    };
    let mut out = format!(
        "format {}  mode {mode}\n{} pairs checked, {} normalized, {} rejected as non-normalized\n{} mismatches\n",
        s.format, s.checked_pairs, s.normalized_pairs, s.rejected_pairs, s.mismatches
    );
    for m in &s.first_mismatches {
        out += &format!("  {:#x} + {:#x}: oracle {} / reference {}\n", m.f1, m.f2, m.expected, m.actual);
    }
    out += &format!("elapsed {:.3} s\n", s.elapsed_seconds);
    out
}

fn cmd_oracle(g: &Global, a: &args::OracleArgs) -> Result<u8> {
    let fmt = format_of(g)?;
    let sampled = OracleMode::Sampled {
        samples: g.samples,
        seed: g.seed,
    };
    let mode = match g.mode {
        Some(ModeArg::Exhaustive) => OracleMode::Exhaustive,
        Some(ModeArg::Random) => sampled,
        None if fmt.width() <= fpeq::oracle::EXHAUSTIVE_WORD_BITS => OracleMode::Exhaustive,
        None => sampled,
    };
    let summary = if a.mutate_reference {
        oracle_check(fmt, mode, |f1, f2, fmt| {
            let (r, flags) = ref_add(f1, f2, fmt)?;
            Ok((FloatTriple::new(r.sign, r.exp, r.man ^ 1), flags))
        })?
    } else {
        oracle_check(fmt, mode, ref_add)?
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    emit(g, oracle_text(&summary), json)?;
    Ok(if summary.passed() { 0 } else { EXIT_FAILED })
}

fn cmd_corpus(g: &Global, name: Option<&str>) -> Result<u8> {
    match name {
        Some(n) => {
            let text = corpus(n)?;
            let json = serde_json::json!({ "name": n, "text": text }).to_string();
            emit(g, text.to_string(), json)?;
        }
        None => {
            let json = serde_json::to_string(&CORPUS_NAMES).expect("names serialize");
            emit(g, CORPUS_NAMES.join("\n"), json)?;
        }
    }
    Ok(0)
}

fn cmd_list_faults(g: &Global) -> Result<u8> {
    let catalog = list_faults();
    let mut text = String::new();
    for e in &catalog {
        let param = e.default_param.map_or(String::new(), |p| format!(" (parameter, default {p})"));
        text += &format!("{:<3} {:<14} {:<10} {}{param}\n", e.code, e.id, e.stage.as_str(), e.description);
    }
    let json = serde_json::to_string_pretty(&catalog).expect("catalog serializes");
    emit(g, text, json)?;
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify => cmd_verify(g),
        Command::Faults(a) => cmd_faults(g, a),
        Command::Coverage => cmd_coverage(g),
        Command::Corpus { name } => cmd_corpus(g, name.as_deref()),
        Command::OracleCheck(a) => cmd_oracle(g, a),
        Command::ListFaults => cmd_list_faults(g),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
