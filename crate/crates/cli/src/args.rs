use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::range::Axis;

#[derive(Debug, Parser)]
#[command(
    name = "oscfield",
    version,
    about = "Oscillator-field entanglement sweeps and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Early-time S_L(L, t) grid in the half space.
    Early,
    /// Late-time entropies against mirror distance, or against gamma with --gamma-range.
    Late,
    /// Two-oscillator late-time correlators against separation, with log-log slopes.
    Twin,
    /// Run the built-in consistency checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Scale Gamma(0, z) by (1 + FRACTION) inside the checks; the report must go red.
    #[arg(long = "corrupt-gamma0", value_name = "FRACTION", hide = true)]
    pub corrupt_gamma0: Option<f64>,
}

/// Half-space mode-density normalization used by `early`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Weight {
    /// Reduction of the Dirichlet mode sum; consistent with the damping
    Canonical,
    /// Half of the canonical density
    Halved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every verb. Each overrides the same key in `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Shared {
    /// Damping rate gamma
    #[arg(long, global = true)]
    pub gamma: Option<f64>,

    /// Renormalized frequency
    #[arg(long = "omega-r", global = true)]
    pub omega_r: Option<f64>,

    #[arg(long, global = true)]
    pub mass: Option<f64>,

    /// Ultraviolet cutoff
    #[arg(long, global = true)]
    pub cutoff: Option<f64>,

    /// Mirror distance (oscillator separation for `twin`)
    #[arg(long = "L", global = true)]
    pub distance: Option<f64>,

    #[arg(long = "L-range", value_name = "a:b:n[:log]", global = true)]
    pub l_range: Option<Axis>,

    #[arg(long = "t-range", value_name = "a:b:n", global = true)]
    pub t_range: Option<Axis>,

    /// Sweep gamma instead of L (late only)
    #[arg(long = "gamma-range", value_name = "a:b:n[:log]", global = true)]
    pub gamma_range: Option<Axis>,

    /// Relative tolerance of every quadrature
    #[arg(long = "rel-tol", global = true)]
    pub rel_tol: Option<f64>,

    /// Mode-density normalization (early only)
    #[arg(long, value_enum, global = true)]
    pub weight: Option<Weight>,

    #[arg(long, value_name = "PATH", global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// key=value file; keys are the long flag names
    #[arg(long, value_name = "PATH", global = true)]
    pub config: Option<PathBuf>,
}
