//! `hjoints`: one entry point for every verification pipeline.
//!
//! Each subcommand prints a check table on stdout and can write the same
//! report as JSON with `--json`. Exit status is 0 when no check failed, 1 on
//! a failed check and 2 on bad usage or unreadable input.

mod commands;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hjoints::par::{set_default_mode, ExecMode};
use hjoints::report::VerificationReport;

#[derive(Parser, Debug)]
#[command(name = "hjoints", version, about = "Joints bounds, covers, entropy and vanishing-engine checks")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Also write the report as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run data-parallel loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Gf61,
    Rational,
}

#[derive(Args, Debug, Clone)]
pub struct Geo {
    /// Configuration file (`.cfg`).
    #[arg(long)]
    config: PathBuf,
    /// Pattern hypergraph (`.hg`).
    #[arg(long)]
    pattern: PathBuf,
    /// Covering weights (`.w`); the optimal fractional cover when omitted.
    #[arg(long)]
    w: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Fractional cover number with an optimal cover and dual packing.
    RhoStar { pattern: PathBuf },
    /// The joints constant for a pattern and covering weights.
    Constant {
        pattern: PathBuf,
        #[arg(long)]
        w: Option<PathBuf>,
    },
    /// Add `t` apex vertices to every edge.
    Cone {
        pattern: PathBuf,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a generic, projected or axis-parallel configuration.
    BuildConfig {
        #[arg(long, required_unless_present = "axis")]
        host: Option<PathBuf>,
        #[arg(long, required_unless_present = "axis")]
        pattern: Option<PathBuf>,
        /// Project from dimension d+t; 0 builds the generic configuration.
        #[arg(long, default_value_t = 0)]
        t: usize,
        /// Axis-parallel instance file instead of host and pattern.
        #[arg(long, conflicts_with_all = ["host", "pattern"])]
        axis: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FieldArg::Gf61)]
        field: FieldArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the joints of a configuration from its flats.
    Detect {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        #[arg(long, default_value_t = hjoints::witness::DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Multiplicity of every joint by Frank-Wolfe.
    Eta {
        #[command(flatten)]
        geo: Geo,
        #[arg(long, default_value_t = hjoints::eta::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = hjoints::eta::DEFAULT_MAX_ITERS)]
        max_iters: usize,
    },
    /// Shearer's inequality on an explicit law.
    Shearer { instance: PathBuf },
    /// Generalized Hölder on integer tables, optionally with the tensor trend.
    Holder {
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        tensor: usize,
    },
    /// Loomis-Whitney on a point set.
    Lw { instance: PathBuf },
    /// Entropic audit over random joint and tuple laws plus the optimal one.
    GeoShearer {
        #[command(flatten)]
        geo: Geo,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Number of vertex sets whose induced host contains the pattern.
    Mcount {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Cliques among the first `n` colex sets against the real binomial bound.
    Kk {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// Partial-shadow count of a host against the binomial bound.
    ShadowCheck {
        host: PathBuf,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        t: usize,
    },
    /// Search hosts with `n` edges maximizing the pattern count.
    SearchM {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value = "local")]
        mode: String,
        #[arg(long, default_value_t = hjoints::search::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = hjoints::search::DEFAULT_WORK_LIMIT)]
        work_limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One engine pass: ledgers, parameter counting and the LW step.
    Vanishing {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        n: usize,
        /// Comma-separated handicap, zero when omitted.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Run the handicap dynamic and write a key-inequality certificate.
    HandicapRun {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = hjoints::vanishing::handicap::DEFAULT_ROUNDS)]
        rounds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit a key-inequality certificate.
    KeyAudit {
        cert: PathBuf,
        #[arg(long, default_value_t = hjoints::vanishing::handicap::DEFAULT_ADDITIVE_TOL)]
        tolerance: f64,
        #[arg(long, default_value_t = hjoints::vanishing::handicap::DEFAULT_FACTOR)]
        factor: f64,
    },
    /// `|J|` against the simple joints bound.
    VerifySimpleBound {
        #[command(flatten)]
        geo: Geo,
    },
    /// Sum of multiplicities against the joints bound.
    VerifyMultBound {
        #[command(flatten)]
        geo: Geo,
        #[arg(long, default_value_t = hjoints::eta::DEFAULT_TOL)]
        tol: f64,
    },
    /// The full acceptance battery.
    Suite {
        /// Comma-separated criterion ids; all when omitted.
        #[arg(long)]
        criteria: Option<String>,
    },
}

/// A finished command: its report and an optional document for stdout.
pub struct Outcome {
    pub report: VerificationReport,
    pub document: Option<String>,
}

impl From<VerificationReport> for Outcome {
    fn from(report: VerificationReport) -> Self {
        Self { report, document: None }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("HJOINTS_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| anyhow::anyhow!("HJOINTS_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            anyhow::bail!("HJOINTS_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn dispatch(cmd: Cmd, c: &Common) -> anyhow::Result<Outcome> {
    use commands as k;
    match cmd {
        Cmd::RhoStar { pattern } => k::rho_star(&pattern),
        Cmd::Constant { pattern, w } => k::constant(&pattern, w.as_deref()),
        Cmd::Cone { pattern, t, out } => k::cone(&pattern, t, out.as_deref()),
        Cmd::BuildConfig { host, pattern, t, axis, field, out } => {
            k::build_config(host.as_deref(), pattern.as_deref(), t, axis.as_deref(), field, out.as_deref(), c.seed)
        }
        Cmd::Detect { config, pattern, budget, trials } => k::detect(&config, &pattern, budget, trials, c),
        Cmd::Eta { geo, tol, max_iters } => k::eta(&geo, tol, max_iters, c),
        Cmd::Shearer { instance } => k::shearer(&instance),
        Cmd::Holder { instance, tensor } => k::holder(&instance, tensor),
        Cmd::Lw { instance } => k::lw(&instance),
        Cmd::GeoShearer { geo, samples } => k::geo_shearer(&geo, samples, c),
        Cmd::Mcount { host, pattern } => k::mcount(&host, &pattern, c),
        Cmd::Kk { n, d } => k::kk(n, d),
        Cmd::ShadowCheck { host, d, t } => k::shadow_check(&host, d, t, c),
        Cmd::SearchM { pattern, n, vertices, mode, restarts, work_limit, out } => {
            k::search(&pattern, n, vertices, &mode, restarts, work_limit, out.as_deref(), c)
        }
        Cmd::Vanishing { geo, n, alpha } => k::vanishing(&geo, n, alpha.as_deref(), c),
        Cmd::HandicapRun { geo, n, delta, rounds, out } => k::handicap_run(&geo, n, delta, rounds, out.as_deref(), c),
        Cmd::KeyAudit { cert, tolerance, factor } => k::key_audit(&cert, tolerance, factor),
        Cmd::VerifySimpleBound { geo } => k::verify_simple(&geo, c),
        Cmd::VerifyMultBound { geo, tol } => k::verify_mult(&geo, tol, c),
        Cmd::Suite { criteria } => k::suite(criteria.as_deref(), c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if cli.common.sequential {
        set_default_mode(ExecMode::Sequential);
    }
    let start = Instant::now();
    let mut out = match dispatch(cli.cmd, &cli.common) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if out.report.timing.wall_seconds == 0.0 {
        out.report.timing.wall_seconds = start.elapsed().as_secs_f64();
    }
    // a document on stdout pushes the table to stderr so the document stays pipeable
    match &out.document {
        Some(doc) => {
            println!("{doc}");
            eprint!("{}", out.report.render_table());
        }
        None => print!("{}", out.report.render_table()),
    }
    if let Some(path) = &cli.common.json {
        if let Err(e) = std::fs::write(path, out.report.to_json()) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(out.report.exit_code() as u8)
}
