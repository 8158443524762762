use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ramify",
    version,
    about = "Exact ramification breaks, Herbrand functions and p-group presentations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Herbrand functions of cyclic steps and their compositions.
    #[command(subcommand)]
    Herbrand(HerbrandCmd),
    /// Power-commutator presentations of finite p-groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Ramification filtrations on a finite p-group.
    #[command(subcommand)]
    Filtration(FiltrationCmd),
    /// Break sequences of towers.
    #[command(subcommand)]
    Plan(PlanCmd),
    /// Combining break sequences.
    #[command(subcommand)]
    Merge(MergeCmd),
}

#[derive(Subcommand, Debug)]
pub enum HerbrandCmd {
    /// psi of a cyclic degree-p step with lower break i.
    Step {
        #[arg(long = "break")]
        break_: u64,
        #[arg(long)]
        p: u64,
        /// Evaluate at these points instead of printing the function.
        #[arg(long)]
        eval: Vec<String>,
    },
    /// Composition f_1 o f_2 o ... of the functions in the given files.
    Compose {
        #[arg(long, required = true)]
        file: Vec<PathBuf>,
        #[arg(long)]
        eval: Vec<String>,
    },
    /// Inverse of a function.
    Invert {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        eval: Vec<String>,
    },
    /// Values of a function.
    Eval {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, required = true)]
        at: Vec<String>,
    },
    /// psi and upper breaks of a tower from its relative lower breaks.
    Tower {
        /// Comma-separated lower breaks.
        #[arg(long)]
        breaks: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        eval: Vec<String>,
    },
}

#[derive(Args, Debug)]
pub struct GroupSource {
    /// Presentation JSON.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// heisenberg:P, elementary:P:N, cyclic:P:N or tower:P:D.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Relation table for tower:P:D; default is trivial fill.
    #[arg(long)]
    pub fill: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Consistency of a presentation.
    Check {
        #[command(flatten)]
        source: GroupSource,
        /// Also compare the lower central and lower p-series.
        #[arg(long)]
        series: bool,
    },
    /// Subgroup generated by elements given as exponent vectors.
    Closure {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long = "gen")]
        gens: Vec<String>,
        #[arg(long)]
        normal: bool,
    },
    /// Lower central and lower p-series.
    Series {
        #[command(flatten)]
        source: GroupSource,
    },
    /// Minimal number of generators of the probe subgroup at index k.
    Rank {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Normal closures along a tower of generators.
    Probe {
        #[command(flatten)]
        source: GroupSource,
        /// Comma-separated 1-based tower indices; default all generators.
        #[arg(long)]
        tower: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct FiltrationInput {
    /// Presentation JSON of the group.
    #[arg(long = "group")]
    pub group: Option<PathBuf>,
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub fill: Option<PathBuf>,
    /// i_G assignment JSON.
    #[arg(long)]
    pub file: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum FiltrationCmd {
    /// Whether the assignment defines a filtration by normal subgroups.
    Validate {
        #[command(flatten)]
        input: FiltrationInput,
    },
    /// phi and psi of the filtration with its breaks.
    Herbrand {
        #[command(flatten)]
        input: FiltrationInput,
    },
    /// Upper levels G^u; default grid around the breaks.
    Upper {
        #[command(flatten)]
        input: FiltrationInput,
        #[arg(long)]
        at: Vec<String>,
    },
    /// Filtration induced on G/H.
    Quotient {
        #[command(flatten)]
        input: FiltrationInput,
        /// Generators of H.
        #[arg(long = "gen")]
        gens: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PlanCmd {
    /// Evaluate plans; several files (or a file holding an array) form a sweep.
    Run {
        #[arg(long, required = true)]
        file: Vec<PathBuf>,
        /// Threads for a sweep.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Include the chain trace and closed-form check for apf plans.
        #[arg(long)]
        trace: bool,
    },
    /// Feasibility of a break triple (i, j, s) over ramification index e.
    Feasible {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        i: Option<u64>,
        #[arg(long)]
        j: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        e: Option<u64>,
        /// Scan s = 1..=N instead of checking one s.
        #[arg(long)]
        scan: Option<u64>,
    },
    /// Whether j is an admissible break of a degree-p step over index e.
    Admissible {
        #[arg(long)]
        j: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
        /// Only the bound j <= p e/(p-1).
        #[arg(long)]
        literal: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum MergeCmd {
    /// Index-wise maximum of several sequences (plans or {"upper": [...]}).
    Max {
        #[arg(long, required = true)]
        file: Vec<PathBuf>,
    },
    /// Repair a sequence with an auxiliary family.
    Repair {
        #[arg(long)]
        file: PathBuf,
        /// Family JSON {"values": [...], "bound": {"slope", "intercept"}}.
        #[arg(long, conflicts_with = "half_linear")]
        family: Option<PathBuf>,
        /// Use the family ceil(k/2) e0.
        #[arg(long)]
        half_linear: Option<u64>,
    },
}
