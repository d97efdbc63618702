//! `locsko`: distances, moduli, time changes and tightness reports for step paths.

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use locsko::metrics::{local_metric, omega_prime, rho, rho_tilde};
use locsko::sim::{continuity_demo, levy_step_path, ode_family, ode_path, straddle_pair};
use locsko::tightness::{aldous_statistic, compactness_report, tightness_statistic, SamplerKind};
use locsko::timechange::{build_regularizing_g, time_change, GFunction, GSpec, Region};
use locsko::{CompactSet, StateSpace, StepPath};

use config::{Config, SimulateConfig, TightStatistic};

#[derive(Parser, Debug)]
#[command(name = "locsko", version, about = "Local Skorokhod metrics for exploding step paths")]
struct Cli {
    /// JSON configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// master seed (overrides the config)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// worker threads for batch computations
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// output file, written atomically (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// ρ̃, ρ and the local metric for every pair of the given paths
    Dist {
        #[arg(required = true, num_args = 2..)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        t: f64,
        /// radius of the centered ball K
        #[arg(long)]
        radius: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// the modulus ω′ along a δ grid
    Omega {
        path: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        radius: f64,
        /// comma separated δ values
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<f64>,
    },
    /// time change a path by a rate function
    Timechange {
        path: PathBuf,
        /// rate function as JSON, or a file containing it
        #[arg(long)]
        g: String,
    },
    /// sup ω′ curves of a path family (config section `compactness`)
    Compactness,
    /// Monte-Carlo tightness report (config section `tight`)
    Tight,
    /// generate a path (config section `simulate`)
    Simulate,
    /// local vs global distances of ODE paths (config section `demo`)
    Demo,
}

/// An internal invariant failed; reported with exit code 3.
#[derive(Debug)]
struct Bug(String);

impl std::fmt::Display for Bug {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "internal error: {}", self.0)
    }
}

impl std::error::Error for Bug {}

fn read_path(p: &Path) -> Result<StepPath> {
    let text = std::fs::read_to_string(p).with_context(|| format!("cannot read path file {}", p.display()))?;
    StepPath::from_json(&text).with_context(|| format!("path file {}", p.display()))
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    let Some(out) = out else {
        std::io::stdout().write_all(content.as_bytes())?;
        return Ok(());
    };
    let dir = match out.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write into {}", dir.display()))?;
    tmp.write_all(content.as_bytes())?;
    tmp.persist(out).with_context(|| format!("cannot write {}", out.display()))?;
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<f64> {
    if v.is_nan() {
        return Err(Bug(format!("{name} is NaN")).into());
    }
    Ok(v)
}

fn ball(dim: usize, radius: f64) -> Result<CompactSet> {
    Ok(CompactSet::ball(vec![0.0; dim], radius)?)
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        bail!("t must be finite and nonnegative, got {t}");
    }
    Ok(())
}

fn cmd_dist(cfg: &Config, paths: &[PathBuf], t: f64, radius: f64, format: Format) -> Result<String> {
    check_t(t)?;
    let xs: Vec<StepPath> = paths.iter().map(|p| read_path(p)).collect::<Result<_>>()?;
    let dim = xs[0].dim();
    if xs.iter().any(|x| x.dim() != dim) {
        bail!("paths have different dimensions");
    }
    let space = StateSpace::new(dim, cfg.metric)?;
    let k = ball(dim, radius)?;
    let mut rows = Vec::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let rt = check_finite("rho_tilde", rho_tilde(&xs[i], &xs[j], t, &k, &space))?;
            let r = check_finite("rho", rho(&xs[i], &xs[j], t, &k, &space))?;
            let lm = local_metric(&xs[i], &xs[j], &cfg.exhaustion, cfg.n_terms, &space);
            rows.push((i, j, rt, r, check_finite("local_metric", lm.lower)?, lm.upper));
        }
    }
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("i,j,rho_tilde,rho,local_metric_lower,local_metric_upper\n");
            for (i, j, rt, r, lo, hi) in rows {
                writeln!(s, "{i},{j},{rt:?},{r:?},{lo:?},{hi:?}")?;
            }
            s
        }
        Format::Json => {
            let v: Vec<serde_json::Value> = rows
                .into_iter()
                .map(|(i, j, rt, r, lo, hi)| {
                    serde_json::json!({
                        "i": i, "j": j, "rho_tilde": rt, "rho": r,
                        "local_metric_lower": lo, "local_metric_upper": hi,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&v)? + "\n"
        }
    })
}

fn cmd_omega(cfg: &Config, path: &Path, t: f64, radius: f64, deltas: &[f64]) -> Result<String> {
    check_t(t)?;
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0)) {
        bail!("the δ grid must be nonempty and positive");
    }
    let x = read_path(path)?;
    let space = StateSpace::new(x.dim(), cfg.metric)?;
    let k = ball(x.dim(), radius)?;
    let mut s = String::from("delta,omega_prime\n");
    for &d in deltas {
        let w = check_finite("omega_prime", omega_prime(&x, t, &k, d, &space))?;
        writeln!(s, "{d:?},{w:?}")?;
    }
    Ok(s)
}

fn parse_g(arg: &str) -> Result<GFunction> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("cannot read rate function file {arg}"))?
    };
    let spec: GSpec = serde_json::from_str(&text).context("rate function")?;
    Ok(spec.try_into()?)
}

fn cmd_timechange(path: &Path, g: &str) -> Result<String> {
    let x = read_path(path)?;
    let g = parse_g(g)?;
    Ok(time_change(&g, &x)?.to_json())
}

fn cmd_compactness(cfg: &Config) -> Result<String> {
    let c = cfg.compactness.as_ref().ok_or_else(|| anyhow!("config has no `compactness` section"))?;
    if c.deltas.is_empty() || c.t.is_empty() || c.radii.is_empty() {
        bail!("compactness needs nonempty t, radii and deltas");
    }
    c.t.iter().try_for_each(|&t| check_t(t))?;
    let d = c.family.build()?;
    let dim = d[0].dim();
    let space = StateSpace::new(dim, cfg.metric)?;
    let ks: Vec<CompactSet> = c.radii.iter().map(|&r| ball(dim, r)).collect::<Result<_>>()?;
    let curves = compactness_report(&d, &c.t, &ks, &c.deltas, c.tol, &space);
    let mut s = String::from("t,region,delta,sup_omega,relatively_compact\n");
    for cv in curves {
        for (delta, w) in cv.deltas.iter().zip(&cv.sup_omega) {
            writeln!(s, "{:?},{},{delta:?},{:?},{}", cv.t, cv.region, check_finite("sup_omega", *w)?, cv.relatively_compact)?;
        }
    }
    Ok(s)
}

fn cmd_tight(cfg: &Config, seed: u64) -> Result<String> {
    let c = cfg.tight.as_ref().ok_or_else(|| anyhow!("config has no `tight` section"))?;
    if c.samplers.is_empty() {
        bail!("tight needs at least one sampler");
    }
    check_t(c.t)?;
    let dim = c
        .samplers
        .iter()
        .find_map(|s| match &s.family {
            SamplerKind::Fixed { path } => Some(path.dim()),
            _ => None,
        })
        .unwrap_or(1);
    let space = StateSpace::new(dim, cfg.metric)?;
    let k = ball(dim, c.radius)?;
    let report = match c.statistic {
        TightStatistic::OmegaPrime => tightness_statistic(&c.samplers, c.t, &k, c.epsilon, &c.deltas, c.n_mc, seed, &space)?,
        TightStatistic::RestrictedAlpha => {
            aldous_statistic(&c.samplers, c.epsilon, c.t, &k, &c.deltas, c.n_mc, seed, c.max_index, &space)?
        }
    };
    if report.rows.iter().any(|r| !(0.0..=1.0).contains(&r.estimate)) {
        return Err(Bug("probability estimate outside [0, 1]".into()).into());
    }
    Ok(report.to_csv())
}

fn cmd_simulate(cfg: &Config, seed: u64) -> Result<String> {
    let c = cfg.simulate.as_ref().ok_or_else(|| anyhow!("config has no `simulate` section"))?;
    let p = match c {
        SimulateConfig::Ode { spec } => ode_path(spec)?,
        SimulateConfig::Levy { spec } => levy_step_path(spec, seed)?,
    };
    Ok(p.to_json())
}

fn cmd_demo(cfg: &Config) -> Result<String> {
    let c = cfg.demo.as_ref().ok_or_else(|| anyhow!("config has no `demo` section"))?;
    let x0 = match (&c.straddle, c.x0.is_empty()) {
        (Some(s), true) => {
            let (a, b) = straddle_pair(&c.template, s.lo, s.hi, s.tol, s.gap)?;
            vec![a, b]
        }
        (None, false) if c.x0.len() >= 2 => c.x0.clone(),
        (None, false) => bail!("demo needs at least two x0 values"),
        (Some(_), false) => bail!("give either `x0` or `straddle`, not both"),
        (None, true) => bail!("demo needs `x0` or `straddle`"),
    };
    let g = match &c.g {
        Some(spec) => GFunction::try_from(spec.clone())?,
        None => {
            let family = ode_family(&x0, &c.template)?;
            GFunction::Radial(build_regularizing_g(&family, &Region::Whole, &c.regularize)?)
        }
    };
    let report = continuity_demo(&x0, &c.template, &g, &c.options)?;
    Ok(report.to_csv())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Bug(e.to_string()))?;
    }
    let seed = cli.seed.unwrap_or(cfg.seed);
    let out = cli.out.clone().or_else(|| cfg.out.clone());
    let text = match &cli.cmd {
        Cmd::Dist { paths, t, radius, format } => cmd_dist(&cfg, paths, *t, *radius, *format)?,
        Cmd::Omega { path, t, radius, deltas } => cmd_omega(&cfg, path, *t, *radius, deltas)?,
        Cmd::Timechange { path, g } => cmd_timechange(path, g)?,
        Cmd::Compactness => cmd_compactness(&cfg)?,
        Cmd::Tight => cmd_tight(&cfg, seed)?,
        Cmd::Simulate => cmd_simulate(&cfg, seed)?,
        Cmd::Demo => cmd_demo(&cfg)?,
    };
    emit(out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Bug>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
        Err(_) => ExitCode::from(3),
    }
}
