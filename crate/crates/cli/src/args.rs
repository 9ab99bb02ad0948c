use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fracmv",
    version,
    about = "Fractional integrals, derivatives, mean values and critical points",
    after_help = "Every command prints a header row, data rows and trailing '#' metadata lines. \
                  With --output csv all numbers carry 17 significant digits."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Riemann–Liouville integral I^α_{a+} f(x).
    #[command(after_help = "CSV columns: alpha,x,value,est_error,backend")]
    Fracint(PointArgs),
    /// Riemann–Liouville derivative D^α_{a+} f(x).
    #[command(after_help = "CSV columns: alpha,x,value,est_error,backend,method")]
    Fracderiv(DerivArgs),
    /// Fractional mean value set Λ(α, f, x) and its supremum.
    #[command(after_help = "CSV columns: alpha,x,target_g,xi,residual,is_sup")]
    Meanvalue(MeanArgs),
    /// Mean value from the degree-n Taylor polynomial about a.
    #[command(
        after_help = "CSV columns: s,xi,residual\nCoefficients and the remainder are echoed as metadata."
    )]
    Polyxi(PolyArgs),
    /// Roots of x ↦ D^α_{a+} f(x) on (a, b].
    #[command(after_help = "CSV columns: alpha,root,residual,bracket_lo,bracket_hi")]
    Critpoints(CritArgs),
    /// Largest critical point near an extremum as a function of α.
    #[command(after_help = "CSV columns: alpha,r_alpha,global_largest (empty when absent)")]
    Ralpha(RAlphaArgs),
    /// Observer-frame velocity V = D^α v; defaults to v = sin on [0, π].
    #[command(after_help = "CSV columns: t,velocity")]
    Dilation(DilationArgs),
    /// Convexity versus δ-increasing on sampled window pairs.
    #[command(after_help = "CSV columns: check,outcome,worst_margin,witnesses,samples")]
    Convexity(ConvexityArgs),
    /// Monotonicity of f(x+τ) − f(x) reconstructed from its fractional derivative.
    #[command(after_help = "CSV columns: x,delta_f,reconstructed,error (at most 65 rows)")]
    Mono(MonoArgs),
    /// Periodicity defect |D^α f(t+τ) − D^α f(t)| of a τ-periodic f.
    #[command(after_help = "CSV columns: t,derivative,shifted_derivative,defect")]
    Periodic(PeriodicArgs),
    /// Closed-form and identity checks; exit 3 when any check fails.
    #[command(after_help = "CSV columns: check,status,error,tolerance,floor")]
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Product,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Caputo,
    Direct,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Uniform subintervals of the product-integration rule.
    #[arg(long, default_value_t = 2048)]
    pub grid_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub output: Format,
    /// Accept f(a) ≠ 0 and report Caputo semantics with the boundary term.
    #[arg(long)]
    pub allow_nonzero_base: bool,
    /// Relative tolerance for the adaptive oracle and root residuals.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Operator backend (default depends on the command).
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub f: String,
    /// Order, or an inclusive sweep `start:stop:count`.
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct DerivArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Caputo)]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Args)]
pub struct MeanArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Sign-scan resolution on [a, x].
    #[arg(long, default_value_t = 512)]
    pub scan_n: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PolyArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long)]
    pub delta: f64,
    /// Taylor order.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct CritArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 400)]
    pub scan_n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct RAlphaArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long, default_value = "0.01:0.99:25")]
    pub alpha: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    /// Center of the ball around the extremum.
    #[arg(long, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 400)]
    pub scan_n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct DilationArgs {
    #[arg(long, default_value = "sin(t)")]
    pub f: String,
    #[arg(long, default_value = "0.5")]
    pub alpha: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true)]
    pub b: f64,
    /// Number of time steps on [a, b].
    #[arg(long, default_value_t = 32)]
    pub scan_n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ConvexityArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub alpha: String,
    /// Lower end of the sampled range.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Upper end of the sampled range.
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long)]
    pub delta: f64,
    /// Number of window pairs.
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Measure windows from their own start instead of from zero.
    #[arg(long)]
    pub anchored: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct MonoArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub tau: f64,
    #[arg(long)]
    pub b: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct PeriodicArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub tau: f64,
    /// Start of the probed range.
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    /// End of the probed range.
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = 32)]
    pub scan_n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 2048)]
    pub grid_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub output: Format,
    /// Replaces the tolerance of every check.
    #[arg(long)]
    pub tol: Option<f64>,
}
