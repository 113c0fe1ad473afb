//! Command-line pipeline: continue the branch, prove it, sample orbits and
//! cross-check them with an ODE integrator.
//!
//! Configuration is layered: built-in defaults, then an optional TOML file,
//! then `CHOREO_*` environment variables, then flags.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use choreo::io::{
    branch_file, inverse_file, inverse_from_file, read_json, state_from_file, write_json, BranchFile, FileError,
    InverseFile,
};
use choreo::model::State;
use choreo::orbit::{export, ode_oracle, sample_many, Frame};
use choreo::prover::{certify, ProofCertificate};
use choreo::series::{Domain, NormParams, Rational};
use choreo::shape::EightOptions;
use choreo::solver::{continue_branch, BranchCandidate, NewtonOptions, SolverError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROOF_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// The only rounding model the interval layer implements: round to
/// nearest with error-free transforms and outward widening.
pub const ROUNDING: &str = "nearest-outward";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Failed(_) => EXIT_PROOF_FAILED,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    /// Exact rational, e.g. `"11/10"`.
    pub nu: String,
    pub r: f64,
    /// Parameter domain; `[0, 1]` proves the whole branch.
    pub domain: [f64; 2],
    pub newton_tol: f64,
    pub min_width: f64,
    pub oracle_rtol: f64,
    pub branch: PathBuf,
    /// Defaults to the branch path with `.inverse.json`.
    pub inverse: Option<PathBuf>,
    pub cert: PathBuf,
    pub out: PathBuf,
    /// Worker threads; 0 uses every core.
    pub threads: usize,
    pub rounding: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 70,
            n: 20,
            nu: "11/10".into(),
            r: 1e-6,
            domain: [0.0, 1.0],
            newton_tol: 1e-12,
            min_width: 1e-4,
            oracle_rtol: 1e-10,
            branch: "branch.json".into(),
            inverse: None,
            cert: "certificate.json".into(),
            out: "orbits".into(),
            threads: 0,
            rounding: ROUNDING.into(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn params(&self) -> Result<NormParams> {
        let nu: Rational = self.nu.parse().map_err(|e| CliError::Input(format!("nu: {e}")))?;
        NormParams::new(nu, self.k, self.n).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn domain(&self) -> Result<Domain> {
        Domain::new(self.domain[0], self.domain[1]).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn inverse_path(&self) -> PathBuf {
        self.inverse.clone().unwrap_or_else(|| {
            let stem = self.branch.file_stem().and_then(|s| s.to_str()).unwrap_or("branch");
            self.branch.with_file_name(format!("{stem}.inverse.json"))
        })
    }

    /// Checks every field that does not depend on input files.
    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.domain()?;
        if self.rounding != ROUNDING {
            return Err(CliError::Input(format!(
                "rounding mode {:?} is not supported (only {ROUNDING:?})",
                self.rounding
            )));
        }
        let positive = [
            ("r", self.r),
            ("newton_tol", self.newton_tol),
            ("min_width", self.min_width),
            ("oracle_rtol", self.oracle_rtol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Input(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "choreo", version, about = "Validated continuation from the Lagrange triangle to the figure eight")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML configuration file.
    #[arg(long, global = true, env = "CHOREO_CONFIG")]
    pub config: Option<PathBuf>,
    /// Fourier truncation order.
    #[arg(long = "K", global = true, env = "CHOREO_K")]
    pub k: Option<usize>,
    /// Chebyshev truncation order.
    #[arg(long = "N", global = true, env = "CHOREO_N")]
    pub n: Option<usize>,
    /// Decay rate as an exact rational, e.g. 11/10.
    #[arg(long, global = true, env = "CHOREO_NU")]
    pub nu: Option<String>,
    /// Radius of the ball around the candidate.
    #[arg(long, global = true, env = "CHOREO_R")]
    pub r: Option<f64>,
    /// Parameter domain as `lo,hi`.
    #[arg(long, global = true, env = "CHOREO_DOMAIN", value_parser = parse_pair)]
    pub domain: Option<[f64; 2]>,
    #[arg(long, global = true, env = "CHOREO_BRANCH")]
    pub branch: Option<PathBuf>,
    #[arg(long, global = true, env = "CHOREO_INVERSE")]
    pub inverse: Option<PathBuf>,
    #[arg(long, global = true, env = "CHOREO_CERT")]
    pub cert: Option<PathBuf>,
    #[arg(long, global = true, env = "CHOREO_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "CHOREO_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, env = "CHOREO_NEWTON_TOL")]
    pub newton_tol: Option<f64>,
    /// Smallest subinterval in the sign certification.
    #[arg(long, global = true, env = "CHOREO_MIN_WIDTH")]
    pub min_width: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continue the branch and write the coefficient files.
    Solve,
    /// Certify the branch in the coefficient files.
    Prove,
    /// Export sampled orbits as CSV files plus a manifest.
    Sample {
        /// Comma-separated parameter values.
        #[arg(long, value_delimiter = ',', conflicts_with = "count")]
        omega: Vec<f64>,
        /// Evenly spaced values over the branch domain instead.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value = "inertial")]
        frame: Frame,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Integrate the three-body equations and compare with the branch.
    Oracle {
        #[arg(long, value_delimiter = ',', default_value = "1,0.75,0.5,0.25,0")]
        omega: Vec<f64>,
        #[arg(long, env = "CHOREO_ORACLE_RTOL")]
        rtol: Option<f64>,
        /// Largest acceptable deviation.
        #[arg(long, default_value_t = 1e-8)]
        max_dev: f64,
    },
}

fn parse_pair(s: &str) -> std::result::Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or("expected `lo,hi`")?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| e.to_string());
    Ok([p(a)?, p(b)?])
}

impl Common {
    /// Defaults, then the config file, then environment and flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Input(format!("config {}: {e}", p.display())))?;
                RunConfig::from_toml(&text)?
            }
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = &self.$f { c.$f = v.clone(); } )* };
        }
        set!(k, n, nu, r, domain, branch, cert, out, threads, newton_tol, min_width);
        if self.inverse.is_some() {
            c.inverse = self.inverse.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let cfg = match cli.common.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global() {
        eprintln!("warning: thread pool already set up: {e}");
    }
    let res = match cli.command {
        Command::Solve => cmd_solve(&cfg).map(|_| EXIT_OK),
        Command::Prove => cmd_prove(&cfg).map(|c| if c.all_ok() { EXIT_OK } else { EXIT_PROOF_FAILED }),
        Command::Sample {
            omega,
            count,
            frame,
            samples,
        } => cmd_sample(&cfg, &omega, count, frame, samples).map(|_| EXIT_OK),
        Command::Oracle { omega, rtol, max_dev } => {
            cmd_oracle(&cfg, &omega, rtol.unwrap_or(cfg.oracle_rtol), max_dev).map(|_| EXIT_OK)
        }
    };
    res.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    })
}

/// Largest magnitude in the top Fourier order and in the top Chebyshev order.
pub fn decay_diagnostics(x: &State<f64>) -> (f64, f64) {
    let l = x.layout();
    let c = x.coeffs();
    let n = x.n();
    let mut top_k: f64 = 0.0;
    let mut top_n: f64 = 0.0;
    for i in 0..l.dim() {
        let row = c.row(i);
        if l.order(i) == l.k() {
            top_k = row.iter().fold(top_k, |m, v| m.max(v.abs()));
        }
        top_n = top_n.max(row[n].abs());
    }
    (top_k, top_n)
}

pub fn solve(cfg: &RunConfig) -> Result<BranchCandidate> {
    let opts = NewtonOptions {
        tol: cfg.newton_tol,
        ..NewtonOptions::default()
    };
    continue_branch(&cfg.params()?, cfg.domain()?, &opts).map_err(|e| match e {
        SolverError::Stalled { last_good, source } => {
            CliError::Failed(format!("continuation stopped; last good Ω = {last_good}: {source}"))
        }
        other => CliError::Failed(other.to_string()),
    })
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<BranchCandidate> {
    let start = Instant::now();
    let b = solve(cfg)?;
    println!("{:>12} {:>14} {:>6}", "omega", "residual", "iters");
    for node in &b.nodes {
        println!("{:>12.9} {:>14.3e} {:>6}", node.omega, node.residual, node.newton_iters);
    }
    let (top_k, top_n) = decay_diagnostics(&b.xbar);
    println!("decay: max |coefficient| at k = K: {top_k:.3e}, at n = N: {top_n:.3e}");
    for (what, v) in [("Fourier", top_k), ("Chebyshev", top_n)] {
        if v > 1e-12 {
            eprintln!("warning: slow {what} decay ({v:.3e} in the last order); consider a larger truncation");
        }
    }
    let bpath = &cfg.branch;
    let ipath = cfg.inverse_path();
    let out = |e: FileError| CliError::Internal(e.to_string());
    write_json(bpath, &branch_file(&b.params, &b.xbar)).map_err(out)?;
    write_json(&ipath, &inverse_file(&b.params, b.xbar.domain(), &b.a_fin)).map_err(out)?;
    println!(
        "wrote {} and {} in {:.1} s",
        bpath.display(),
        ipath.display(),
        start.elapsed().as_secs_f64()
    );
    Ok(b)
}

/// Loads a branch and its inverse, checking that they belong together.
pub fn load(cfg: &RunConfig) -> Result<(NormParams, State<f64>, Vec<choreo::matrix::Mat<f64>>, [String; 2])> {
    let (bf, dx): (BranchFile, String) = read_json(&cfg.branch)?;
    let (p, x) = state_from_file(&bf)?;
    let (inf, da): (InverseFile, String) = read_json(&cfg.inverse_path())?;
    let (q, d, a) = inverse_from_file(&inf)?;
    if (q.k, q.n) != (p.k, p.n) || d != x.domain() {
        return Err(CliError::Input("branch and inverse files disagree on K, N or the domain".into()));
    }
    if a.len() != p.n + 1 {
        return Err(CliError::Input("inverse has the wrong number of Chebyshev orders".into()));
    }
    Ok((p, x, a, [dx, da]))
}

pub fn cmd_prove(cfg: &RunConfig) -> Result<ProofCertificate> {
    let (file_params, x, a, digests) = load(cfg)?;
    // The proof's ν comes from the configuration; K and N from the file.
    let nu = cfg.params()?.nu;
    let params = NormParams::new(nu, file_params.k, file_params.n).map_err(|e| CliError::Input(e.to_string()))?;
    let eight = EightOptions {
        min_width: cfg.min_width,
        ..EightOptions::default()
    };
    let mut cert = certify(&params, &x, &a, cfg.r, &eight);
    cert.digests.insert("branch_file".into(), digests[0].clone());
    cert.digests.insert("inverse_file".into(), digests[1].clone());
    write_json(&cfg.cert, &cert).map_err(|e| CliError::Internal(e.to_string()))?;
    print_summary(&cert);
    Ok(cert)
}

pub fn print_summary(c: &ProofCertificate) {
    println!(
        "K = {}, N = {}, nu = {}, domain = [{}, {}], r = {:e}",
        c.params.k, c.params.n, c.params.nu, c.domain[0], c.domain[1], c.r
    );
    println!("Y     = {:.6e}", c.y);
    println!("Z1    = {:.6e}", c.z1);
    println!("Z2    = {:.6e}", c.z2);
    println!("kappa = {:.6e}", c.kappa);
    if let Some(r) = c.smallest_radius {
        println!("smallest radius = {r:.6e}");
    }
    let flag = |f: Option<bool>| f.map_or("n/a", |b| if b { "ok" } else { "FAILED" });
    println!("contraction: {}", flag(Some(c.contraction_ok)));
    println!("triangle endpoint: {}", flag(c.endpoint_triangle_ok));
    println!("planar endpoint: {}", flag(c.endpoint_planar_ok));
    println!("figure eight: {}", flag(c.eight_shape_ok));
    for f in &c.failures {
        println!("failure: {f}");
    }
    println!("{} in {:.1} s", if c.all_ok() { "PROVED" } else { "NOT PROVED" }, c.seconds);
}

fn check_omegas(omegas: &[f64], d: Domain) -> Result<()> {
    for &om in omegas {
        if !(0.0..=1.0).contains(&om) || !d.contains(om) {
            return Err(CliError::Input(format!("Ω = {om} outside the branch domain [{}, {}]", d.lo, d.hi)));
        }
    }
    Ok(())
}

pub fn cmd_sample(cfg: &RunConfig, omega: &[f64], count: Option<usize>, frame: Frame, n: usize) -> Result<PathBuf> {
    let (bf, _): (BranchFile, String) = read_json(&cfg.branch)?;
    let (_, x) = state_from_file(&bf)?;
    let d = x.domain();
    let omegas: Vec<f64> = match count {
        Some(0) => Vec::new(),
        Some(1) => vec![d.hi],
        Some(m) => (0..m).map(|i| d.hi - (d.hi - d.lo) * i as f64 / (m - 1) as f64).collect(),
        None => omega.to_vec(),
    };
    check_omegas(&omegas, d)?;
    if n < 2 {
        return Err(CliError::Input(format!("need at least 2 samples, got {n}")));
    }
    let trajs = sample_many(&x, &omegas, frame, n).map_err(|e| CliError::Internal(e.to_string()))?;
    let m = export(&cfg.out, frame, &trajs).map_err(|e| CliError::Internal(e.to_string()))?;
    println!("wrote {} orbits; manifest {}", trajs.len(), m.display());
    Ok(m)
}

pub fn cmd_oracle(cfg: &RunConfig, omega: &[f64], rtol: f64, max_dev: f64) -> Result<Vec<f64>> {
    let (bf, _): (BranchFile, String) = read_json(&cfg.branch)?;
    let (_, x) = state_from_file(&bf)?;
    check_omegas(omega, x.domain())?;
    let devs = oracle_deviations(&x, omega, rtol)?;
    let mut worst: f64 = 0.0;
    for (om, d) in omega.iter().zip(&devs) {
        println!("Ω = {om:<8} deviation {d:.3e}");
        worst = worst.max(*d);
    }
    if worst > max_dev {
        return Err(CliError::Failed(format!("oracle deviation {worst:.3e} exceeds {max_dev:.1e}")));
    }
    Ok(devs)
}

pub fn oracle_deviations(x: &State<f64>, omega: &[f64], rtol: f64) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    omega
        .par_iter()
        .map(|&om| ode_oracle(x, om, rtol).map_err(|e| CliError::Failed(e.to_string())))
        .collect()
}
