use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "ipsforge",
    version,
    about = "Construct and check algebraic refutations over finite fields"
)]
pub struct Cli {
    /// field characteristic
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u64,
    /// base field degree; towers are F_{p^k} inside F_{p^2k}. Defaults to 12
    /// for the rank and sparsity oracles, which need generic coefficients, and 1 otherwise
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// number of variables
    #[arg(long, global = true, default_value_t = 4)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// compact single-line JSON regardless of --format
    #[arg(long, global = true)]
    pub canonical: bool,
    /// most variables for 2^n cube enumeration
    #[arg(long, global = true, env = "IPSFORGE_BUDGET_N")]
    pub budget_n: Option<usize>,
    /// largest n for symbolic subset products
    #[arg(long, global = true, default_value_t = 5)]
    pub symbolic_cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded instance
    Gen(InstanceArgs),
    /// Build a certificate and check it
    Refute(RefuteArgs),
    /// Check a certificate file
    Verify(VerifyArgs),
    /// Run a lower-bound oracle
    Oracle(OracleArgs),
    /// Run a named experiment suite
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// sum a_i x_i - b, a_i in F_{p^k}, b in F_{p^2k} outside it
    LinearShifted,
    /// sum a_i x_i - b over F_{p^k} with no cube zero
    LinearBase,
    /// sparse f over F_{p^k} minus b outside it
    SparseShifted,
    /// sum_{i<j} a_ij z_ij x_i x_j - b
    LiftedPairwise,
    /// multilinear symmetric polynomials over F_{p^k} with no common cube zero
    Symmetric,
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// instance JSON file
    #[arg(long, conflicts_with = "family")]
    pub instance: Option<PathBuf>,
    /// axiom text, repeatable; e1, e2, ... name elementary symmetric polynomials for --family symmetric
    #[arg(long = "poly")]
    pub polys: Vec<String>,
    /// number of symmetric axioms
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// monomials in a sparse instance
    #[arg(long, default_value_t = 3)]
    pub sparsity: usize,
    /// largest monomial degree in a sparse instance
    #[arg(long, default_value_t = 2)]
    pub degree: u32,
}

#[derive(Debug, Clone, Args)]
pub struct RefuteArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// auto or a constructor name
    #[arg(long, default_value = "auto")]
    pub constructor: String,
    /// degree ceiling for search-based constructors
    #[arg(long, default_value_t = 6)]
    pub max_degree: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub certificate: PathBuf,
    /// check against this instance rather than the one embedded in the certificate
    #[arg(long)]
    pub instance: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// oracle name, see `oracle list`
    pub name: String,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// lifted instance kind for rank oracles: fixed-order or any-order
    #[arg(long, default_value = "fixed-order")]
    pub instance: String,
    /// variable order for roabp-width as comma-separated 1-based indices
    #[arg(long)]
    pub order: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// suite name, see `experiment list`
    pub suite: String,
}
