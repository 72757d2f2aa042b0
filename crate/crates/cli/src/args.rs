// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "fpeq", version, about = "Equivalence checking for floating-point adder datapaths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: Global,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a property set against the implementation and reference models
    Verify,
    /// Run every catalogued fault against the lemma and theorem corpora
    Faults(FaultsArgs),
    /// Measure cover-item reachability and how much of it the assertions observe
    Coverage,
    /// Print a built-in property corpus, or list them
    Corpus { name: Option<String> },
    /// Compare the reference adder with an exact rational oracle
    OracleCheck(OracleArgs),
    /// Print the fault catalog
    ListFaults,
}

#[derive(Args, Debug)]
pub struct FaultsArgs {
    /// Format to retry on when a fault goes undetected
    #[arg(long, value_name = "E,M", default_value = "5,10")]
    pub escalate: String,

    /// Disable width escalation
    #[arg(long)]
    pub no_escalate: bool,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Test hook: flip the result LSB of the reference adder
    #[arg(long, hide = true)]
    pub mutate_reference: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DriveArg {
    Lockstep,
    Free,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Floating-point format as exponent bits,mantissa bits [default: 4,3, or 8,23 when sampling]
    #[arg(long, global = true, value_name = "E,M")]
    pub format: Option<String>,

    /// Enumeration mode [default: exhaustive when the space fits the ceiling]
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,

    /// Stimuli to draw in random mode
    #[arg(long, global = true, value_name = "N", default_value_t = 1_000_000)]
    pub samples: u64,

    #[arg(long, global = true, value_name = "S", default_value_t = 1)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value = "lockstep")]
    pub drive: DriveArg,

    /// Enable a fault, optionally with a parameter (ID or ID=N); repeatable
    #[arg(long = "fault", global = true, value_name = "ID[=N]")]
    pub faults: Vec<String>,

    /// Property file
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "corpus")]
    pub props: Option<PathBuf>,

    /// Built-in corpus; repeatable to combine
    #[arg(long, global = true, value_name = "NAME")]
    pub corpus: Vec<String>,

    /// Write the artifact here instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Emit JSON
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads; never changes results
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,

    /// Allow free drive without any assume
    #[arg(long, global = true)]
    pub allow_unconstrained: bool,

    /// Check without the reference model; properties may only name impl signals
    #[arg(long, global = true)]
    pub standalone: bool,

    /// Counterexamples kept per failing assertion
    #[arg(long, global = true, value_name = "K", default_value_t = fpeq::checker::DEFAULT_MAX_CEX)]
    pub max_cex: usize,

    /// Largest stimulus space exhaustive mode accepts
    #[arg(long, global = true, value_name = "N", default_value_t = fpeq::checker::DEFAULT_CEILING)]
    pub ceiling: u64,
}
