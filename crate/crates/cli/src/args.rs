use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Sharp constants and numerical certificates for weighted Hardy-Rellich inequalities on cones.
#[derive(Parser, Debug)]
#[command(name = "hrcone", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (default from HRCONE_FORMAT, else json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// key=value file presetting tolerances, grids, seed and format.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Absolute quadrature tolerance.
    #[arg(long = "tol-abs", global = true)]
    pub tol_abs: Option<f64>,

    /// Relative quadrature tolerance.
    #[arg(long = "tol-rel", global = true)]
    pub tol_rel: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// gamma, gamma_bar and gamma_hat for (N, alpha).
    Gamma(Weight),
    /// Sharp constants over a spherical domain and eigenvalue selection.
    Constants {
        #[command(subcommand)]
        kind: ConstantsKind,
    },
    /// Remainder-term coefficients for cone-like domains.
    Coeffs {
        #[command(subcommand)]
        kind: CoeffsKind,
    },
    /// Tabulated constants.
    Table {
        #[command(subcommand)]
        kind: TableKind,
    },
    /// Dirichlet Laplace-Beltrami spectra.
    Spectrum {
        #[command(subcommand)]
        kind: SpectrumKind,
    },
    /// Transform identities and inequality margins.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Scaling-family sweeps.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Numerical estimates.
    Estimate {
        #[command(subcommand)]
        kind: EstimateKind,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Weight {
    #[arg(long)]
    pub dim: u32,
    /// Weight exponent; decimals and p/q fractions are read exactly.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
}

#[derive(Args, Debug, Clone)]
pub struct Setting {
    #[command(flatten)]
    pub weight: Weight,
    /// sphere | hemisphere | cap:<theta0>
    #[arg(long, default_value = "sphere")]
    pub domain: String,
    /// all | tail:<k> | set:<v1,v2,...> | exclude-principal | only:<v>
    #[arg(long, default_value = "all")]
    pub lambda: String,
}

#[derive(Subcommand, Debug)]
pub enum ConstantsKind {
    HardyRellich(Setting),
    Rellich(Setting),
    Schmincke(Setting),
}

#[derive(Args, Debug, Clone)]
pub struct DirichletGrid {
    #[arg(long = "ell-max")]
    pub ell_max: Option<u32>,
    #[arg(long = "grid-size")]
    pub grid_size: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum CoeffsKind {
    Nd(Setting),
    NdLog(Setting),
    PuncturedBall(Setting),
    Navier(Setting),
    Dirichlet {
        #[command(flatten)]
        setting: Setting,
        #[command(flatten)]
        grid: DirichletGrid,
    },
}

#[derive(Subcommand, Debug)]
pub enum TableKind {
    WeightFree {
        /// Inclusive range lo..hi
        #[arg(long, default_value = "2..10")]
        dims: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpectrumKind {
    Sphere {
        #[arg(long)]
        dim: u32,
        #[arg(long = "j-max", default_value_t = 5)]
        j_max: u32,
        #[arg(long, default_value = "all")]
        lambda: String,
    },
    Hemisphere {
        #[arg(long)]
        dim: u32,
        #[arg(long = "j-max", default_value_t = 5)]
        j_max: u32,
        #[arg(long, default_value = "all")]
        lambda: String,
    },
    Cap {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        theta0: f64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long = "ell-max")]
        ell_max: Option<u32>,
        #[arg(long, default_value = "all")]
        lambda: String,
        /// Finite-difference grid of the oracle check; 0 skips it.
        #[arg(long = "oracle-grid")]
        oracle_grid: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct IdentityArgs {
    #[command(flatten)]
    pub weight: Weight,
    /// Eigenvalue of the angular factor.
    #[arg(long = "mode-lambda", default_value_t = 0.0)]
    pub mode_lambda: f64,
    /// bump:<center>,<radius> | powexp:<power> | spline:<t>:<v>,<t>:<v>,...
    #[arg(long, default_value = "bump:1.5,0.5")]
    pub profile: String,
}

#[derive(Subcommand, Debug)]
pub enum VerifyKind {
    EmdenFowler(IdentityArgs),
    Kelvin(IdentityArgs),
    Inequality {
        #[arg(long)]
        id: String,
        #[command(flatten)]
        setting: Setting,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SweepKind {
    Sharpness {
        #[command(flatten)]
        setting: Setting,
        /// Comma-separated epsilon values, largest first.
        #[arg(long = "eps-grid")]
        eps_grid: Option<String>,
    },
    RFunctional {
        #[arg(long = "eps-grid")]
        eps_grid: Option<String>,
    },
    Hardy1d {
        #[arg(long = "eps-grid")]
        eps_grid: Option<String>,
    },
    Rellich1d {
        #[arg(long = "eps-grid")]
        eps_grid: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum EstimateKind {
    Dirichlet {
        #[command(flatten)]
        weight: Weight,
        #[arg(long)]
        theta0: f64,
        #[command(flatten)]
        grid: DirichletGrid,
    },
}
