use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use elrepair_core::reasoner::PoolMode;
use elrepair_core::repair::Options;

#[derive(Debug, Parser)]
#[command(name = "elrepair", version, about = "Repair EL TBoxes by weakening and completing wrong axioms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one strategy and report the repair.
    Repair(RepairArgs),
    /// Run one strategy for every processing order of the wrong axioms.
    Permute(PermuteArgs),
    /// Check repair validity and the strategy lattice on a random corpus.
    HasseCheck(HasseArgs),
    /// Compare two ontologies by the correct and wrong axioms they entail.
    Compare(CompareArgs),
    /// Serve validation sessions over HTTP.
    Serve(ServeArgs),
    /// Rewrite a TBox into normal form.
    Normalize(NormalizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    MiniGalen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pool {
    Atomic,
    Scc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Debug, Args)]
pub struct OptionArgs {
    /// Candidate concepts: atomic names, or the pool with conjunctions and existentials.
    #[arg(long, value_enum, default_value = "atomic")]
    pub pool: Pool,
    /// Complete over source and target sets instead of full sup and sub sets.
    #[arg(long, value_enum, default_value = "off")]
    pub equiv_exclude: Switch,
    /// Drop added axioms that follow from the others.
    #[arg(long, value_enum, default_value = "on")]
    pub prune: Switch,
}

impl OptionArgs {
    pub fn options(&self) -> Options {
        Options {
            pool: match self.pool {
                Pool::Atomic => PoolMode::Atomic,
                Pool::Scc => PoolMode::Scc,
            },
            equiv_exclude: self.equiv_exclude.on(),
            prune: self.prune.on(),
        }
    }
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Built-in problem with its oracle.
    #[arg(long, value_enum, conflicts_with_all = ["ontology", "wrong"])]
    pub fixture: Option<Fixture>,
    /// TBox file.
    #[arg(long, requires = "wrong")]
    pub ontology: Option<PathBuf>,
    /// Wrong axioms, one per line, in input order.
    #[arg(long, requires = "ontology")]
    pub wrong: Option<PathBuf>,
    /// Oracle file; defaults to the fixture's oracle.
    #[arg(long)]
    pub oracle: Option<PathBuf>,
    #[command(flatten)]
    pub options: OptionArgs,
    /// C1 to C13, or a composition such as `R-one,AB-one,W-one,U-end_all->R-all,C-one,U-now`.
    #[arg(long)]
    pub strategy: String,
}

#[derive(Debug, Args)]
pub struct RepairArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// `given`, or a 1-based permutation such as `2,1,3`.
    #[arg(long, default_value = "given")]
    pub order: String,
    /// Report file; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// File for the repaired TBox.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PermuteArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Orders to run, each a 1-based permutation; all orders when absent.
    #[arg(long = "order")]
    pub orders: Vec<String>,
    /// Largest number of wrong axioms to permute.
    #[arg(long, default_value_t = 6)]
    pub bound: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Run on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct HasseArgs {
    /// First corpus seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random problems.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Fixture to check alongside the corpus.
    #[arg(long, value_enum)]
    pub fixture: Option<Fixture>,
    #[command(flatten)]
    pub options: OptionArgs,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Oracle file.
    #[arg(long, required_unless_present = "fixture")]
    pub oracle: Option<PathBuf>,
    /// Use this fixture's oracle.
    #[arg(long, value_enum, conflicts_with = "oracle")]
    pub fixture: Option<Fixture>,
    /// Axioms to compare on; all subsumptions between distinct names when absent.
    #[arg(long)]
    pub probe: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Session directory; sessions live in memory when absent.
    #[arg(long)]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    pub input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}
