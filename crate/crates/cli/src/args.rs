use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "carries",
    version,
    about = "Exact carries chains, riffle shuffles and their type B analogs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Family,

    /// Output format. Defaults to json, or text for `verify`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Lift the size limits on exact computations that are slow but safe.
    #[arg(long = "i-know-this-is-huge", global = true)]
    pub huge: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// The base-b carries chain.
    #[command(subcommand)]
    Carries(CarriesCmd),
    /// Riffle shuffles of S_n and their descent chains.
    #[command(subcommand)]
    Shuffle(ShuffleCmd),
    /// The type B carries chain and signed shuffles.
    #[command(subcommand)]
    Typeb(TypebCmd),
    /// Shape measures, the Cauchy identity and descent-set distances.
    #[command(subcommand)]
    Symfunc(SymfuncCmd),
    /// The Veronese transform of h-vectors.
    #[command(subcommand)]
    Veronese(VeroneseCmd),
    /// The digit representation and the Gaussian limit.
    #[command(subcommand)]
    Gauss(GaussCmd),
    /// Recheck the identities; exit status 2 on any failure.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Nb {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub b: u64,
}

#[derive(Args, Debug, Clone)]
pub struct Nbr {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub b: u64,
    #[arg(long)]
    pub r: u32,
    /// Only this row (starting state).
    #[arg(long)]
    pub i: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct TvArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub b: u64,
    /// Largest number of steps to tabulate.
    #[arg(long, default_value_t = 10)]
    pub r: u32,
    /// Starting state.
    #[arg(long, default_value_t = 0)]
    pub i: usize,
}

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub b: u64,
    /// Number of columns.
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct AddArgs {
    /// Base of the addends (for `typeb add`, the parameter b of base 2b+1).
    #[arg(long, default_value_t = 10)]
    pub base: u64,
    /// File with one addend per line.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Addends given directly.
    pub addends: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum CarriesCmd {
    /// One-step transition matrix.
    Matrix(Nb),
    /// The r-step matrix (or one row of it).
    Rstep(Nbr),
    /// The Eulerian stationary law.
    Stationary {
        #[arg(long)]
        n: u32,
    },
    /// Exact distance to stationarity for r = 0..=R.
    Tv(TvArgs),
    /// Upper and lower bounds on the distance to stationarity.
    Bounds(BoundsArgs),
    /// Simulate the chain with uniform random digits.
    Simulate(SimulateArgs),
    /// Add numbers column by column and report the carries.
    Add(AddArgs),
}

#[derive(Args, Debug, Clone)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub b: u64,
    #[arg(long, default_value_t = 10)]
    pub r: u32,
    #[arg(long, default_value_t = 0)]
    pub i: usize,
    /// Epsilon for the lower-bound radius.
    #[arg(long, default_value = "1/2")]
    pub eps: String,
}

#[derive(Subcommand, Debug)]
pub enum ShuffleCmd {
    /// Probability of an arrangement after an a-shuffle from the identity.
    Prob {
        /// One-line notation, e.g. "3 1 2" or "3,1,2".
        #[arg(long)]
        perm: String,
        #[arg(long, alias = "b")]
        a: u64,
    },
    /// Draw a-shuffles.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, alias = "b")]
        a: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Law of the number of descents after r b-shuffles.
    DescentLaw {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = Route::Closed)]
        route: Route,
    },
    /// Transition matrix of inverse descents, by brute force.
    ReverseChain {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: u64,
    },
    /// Compare both sides of the pair-counting generating function.
    Gessel(GesselArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Table,
    Closed,
    Enumeration,
}

#[derive(Args, Debug, Clone)]
pub struct GesselArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub d: usize,
    /// Degree in both s and t.
    #[arg(long, default_value_t = 6)]
    pub degree: usize,
}

#[derive(Subcommand, Debug)]
pub enum TypebCmd {
    /// One-step (n+1)x(n+1) transition matrix, base 2b+1.
    Matrix(Nb),
    /// The r-step matrix (or one row of it).
    Rstep(Nbr),
    /// The type B Eulerian stationary law.
    Stationary {
        #[arg(long)]
        n: u32,
    },
    /// Exact distance to stationarity for r = 0..=R.
    Tv(TvArgs),
    /// Simulate the chain.
    Simulate(SimulateArgs),
    /// Add numbers in base 2b+1 together with b b ... b.
    Add(AddArgs),
    /// Probability of a signed arrangement after r (2b+1)-shuffles.
    Prob {
        /// Signed one-line notation, e.g. "2 -1 3".
        #[arg(long, allow_hyphen_values = true)]
        perm: String,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Draw signed (2b+1)-shuffles.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Law of the number of descents after r signed shuffles.
    DescentLaw {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        r: u32,
    },
    /// Transition matrix of inverse descents, by brute force.
    ReverseChain {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: u64,
    },
    /// Compare both sides of the signed pair-counting generating function.
    Gessel(GesselArgs),
    /// Rounded uniform sums against the type B Eulerian law.
    Rounding {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum SymfuncCmd {
    /// Both sides of the Cauchy identity at k equal arguments 1/k.
    Cauchy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u64,
    },
    /// Upper bounds on the descent-set distance after r b-shuffles.
    TvBound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        r: u32,
    },
    /// Exact descent-set distance after r b-shuffles.
    TvExact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        r: u32,
    },
    /// RSK shape law after a k-shuffle, with Plancherel measure.
    Shapes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum VeroneseCmd {
    /// The (n+2)x(n+2) matrix C.
    Cmatrix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: u64,
    },
    /// h -> h^<b>, checked against direct sectioning.
    Transform {
        /// Comma-separated coefficients h_0,...,h_{n+1}.
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long)]
        b: u64,
        /// Sectioning depth for the cross-check.
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Distance of h^<b>/(b^n h(1)) from the Eulerian polynomial over n!.
    Limit {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        /// Comma-separated list of b values.
        #[arg(long, default_value = "10,100,1000")]
        bases: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum GaussCmd {
    /// Law of the increment given the residue of the carry.
    Epsilon {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value_t = 0)]
        residue: u64,
    },
    /// Exact moments of the increment per residue and pooled.
    Moments(Nb),
    /// Simulate the AR(1) limit process.
    Ar(SimulateArgs),
    /// Kolmogorov distances between normalised carries and the AR(1) marginals.
    Compare {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        b: u64,
        #[arg(long, default_value_t = 5)]
        horizon: u32,
        /// Simulated runs for an empirical comparison (0 = exact only).
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Grid check of the normal shift bound.
    Stein {
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// `all` or one module name.
    #[arg(default_value = "all")]
    pub target: String,
    #[arg(long, default_value_t = 6)]
    pub max_n: usize,
}
