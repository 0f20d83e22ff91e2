use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Exact cohomology of finite groups: Schur and Bogomolov multipliers,
/// class-2 family certificates, isomorphism checks and lattice reports.
///
/// A SPEC argument is inline JSON (`{"kind": ...}`), `@path` to a JSON
/// file, `-` for standard input, or a bare fixture name such as `D4`.
#[derive(Debug, Parser)]
#[command(name = "bogomolov", version, propagate_version = true)]
pub struct Cli {
    /// Cache directory; caching is off when neither this nor the
    /// environment variable is set.
    #[arg(long, env = "BOGOMOLOV_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Largest group order handled by the cochain engine.
    #[arg(long, default_value_t = bogomolov::cohomology::DEFAULT_ENGINE_CAP, global = true)]
    pub engine_cap: usize,

    /// Worker threads (0 uses all cores).
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,

    /// Restrict to every bicyclic subgroup instead of maximal class
    /// representatives.
    #[arg(long, global = true)]
    pub no_subgroup_reduction: bool,

    /// Print a bundled JSON schema and exit.
    #[arg(long, value_enum, value_name = "NAME")]
    pub json_schema: Option<SchemaName>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemaName {
    GroupSpec,
    LatticeSpec,
    Report,
    Certificate,
    TateReport,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schur multiplier H²(G, Q/Z).
    H2 { spec: String },
    /// Bogomolov multiplier: classes vanishing on all bicyclic subgroups.
    B0 { spec: String },
    /// Lower-bound certificate for a class-2 family.
    FamilyCertify {
        #[arg(value_enum)]
        name: Family,
        p: u64,
        n: u32,
        /// Cap on commuting-pair enumeration.
        #[arg(long, default_value_t = bogomolov::class2::DEFAULT_PAIR_CAP)]
        pair_cap: u64,
    },
    /// Compare both sides of a structural isomorphism on instances.
    Verify {
        #[arg(value_enum)]
        check: Check,
        /// `product`: pairs of factor specs; `coprime-semidirect` and
        /// `frobenius`: semidirect specs; `sylow-injectivity`: any groups.
        #[arg(required = true)]
        specs: Vec<String>,
        /// Cohomological degree for `coprime-semidirect` (both if omitted).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        degree: Option<u8>,
    },
    /// Integral representations and Tate cohomology.
    Lattice {
        #[arg(value_enum)]
        kind: LatticeKind,
        /// A semidirect group spec, or a lattice spec for `flabby-report`.
        spec: String,
        /// Prime for `sylow-kernel`.
        p: Option<u64>,
    },
    /// Inspect or empty the result cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Saltman,
    #[value(name = "thm54", alias = "four-generator")]
    FourGenerator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    #[value(alias = "thm1.4")]
    Product,
    #[value(alias = "thm2.7")]
    CoprimeSemidirect,
    #[value(alias = "thm2.8")]
    Frobenius,
    #[value(alias = "lemma2.1")]
    SylowInjectivity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LatticeKind {
    SaltmanKernel,
    #[value(alias = "thm19")]
    SylowKernel,
    FlabbyReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Stats,
    Clear,
}
