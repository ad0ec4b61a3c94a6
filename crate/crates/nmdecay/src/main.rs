//! Command line front end.
//!
//! Every subcommand resolves its model from three layers with fixed
//! precedence: command line flag, then `--config` file entry, then the
//! built-in default. Data files land in `--out` and are byte-reproducible;
//! wall times are printed to stdout only.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nmdecay::dynamics::{loschmidt_echo, survival_probability, TimeSeries};
use nmdecay::lattice::{CaseId, SystemSpec};
use nmdecay::rates::{fit_decay, rate_sweep, table1_report, table1_text, FitWindow, SweepConfig, TableConfig};
use nmdecay::spectral::{
    gf_poles, ldos_bulk, ldos_site_a, ldos_surface, le_rate_prediction, scfgr_rate, wba_rate,
};
use nmdecay::spinmap::{mapping_deviation, SpinChainSpec};
use nmdecay::{Direction, Error, Result};

#[derive(Parser)]
#[command(name = "nmdecay", version, about = "Decay and decoherence rates of a two-site excitation coupled to tight-binding environments")]
struct Cli {
    /// `key = value` file supplying model parameters; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads (default: NMDECAY_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for output files.
    #[arg(long, global = true, default_value = ".", value_name = "DIR")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Survival probability of site A, written as CSV.
    Sp(ModelArgs),
    /// Loschmidt echo of site A under sign reversal of the two-site block.
    Le(ModelArgs),
    /// Local density of states across the environment band, written as CSV.
    Ldos {
        #[command(flatten)]
        model: ModelArgs,
        /// Which density to tabulate.
        #[arg(long, value_enum, default_value_t = LdosKind::SiteA)]
        kind: LdosKind,
        /// Number of energy samples across the band.
        #[arg(long, default_value_t = 801)]
        points: usize,
    },
    /// Green's function pole of the resonance: position, half width, rate.
    Poles {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
        direction: DirectionArg,
    },
    /// Fit decay rates from the simulated dynamics and compare them with the
    /// golden-rule predictions.
    Rates(ModelArgs),
    /// Fit rates for several couplings and report the quadratic-scaling slope.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated couplings v0 to sweep.
        #[arg(long, default_value = "0.05,0.1,0.15,0.2", value_name = "LIST")]
        v0_list: String,
    },
    /// Run all benchmark geometries and check the fitted rates against the
    /// stored references. Exits 2 when any row fails.
    Table1 {
        /// Coupling shared by every row.
        #[arg(long)]
        v0: Option<f64>,
        #[arg(long)]
        n_env: Option<usize>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Compare an XY spin chain correlation with its one-excitation image.
    /// Exits 3 when the deviation exceeds the tolerance.
    JwtCheck {
        /// Number of spins (2..=14).
        #[arg(long, default_value_t = 10)]
        sites: usize,
        /// Splittings: one value for all sites or a comma-separated list.
        #[arg(long, default_value = "0.5", value_name = "LIST")]
        omega: String,
        /// Exchange couplings: one value or a list of length sites-1.
        #[arg(long, default_value = "1.0", value_name = "LIST")]
        j: String,
        #[arg(long, default_value_t = 0)]
        i_site: usize,
        /// Defaults to the last site.
        #[arg(long)]
        f_site: Option<usize>,
        #[arg(long, default_value_t = 12.0)]
        t_max: f64,
        #[arg(long, default_value_t = 0.05)]
        dt: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Geometry: I, II, III, IV, V, VI or FiveSite.
    #[arg(long)]
    case: Option<String>,
    /// System-environment coupling.
    #[arg(long)]
    v0: Option<f64>,
    /// Environment hopping.
    #[arg(long)]
    v: Option<f64>,
    /// Two-site hopping.
    #[arg(long)]
    v_ab: Option<f64>,
    /// Hopping inside the five-site system.
    #[arg(long)]
    v_s: Option<f64>,
    #[arg(long)]
    e_a: Option<f64>,
    #[arg(long)]
    e_b: Option<f64>,
    #[arg(long)]
    e_env: Option<f64>,
    /// Sites per environment chain (default: shortest horizon-safe chain).
    #[arg(long)]
    n_env: Option<usize>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LdosKind {
    Surface,
    Bulk,
    SiteA,
}

impl LdosKind {
    fn tag(self) -> &'static str {
        match self {
            LdosKind::Surface => "surface",
            LdosKind::Bulk => "bulk",
            LdosKind::SiteA => "site_a",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
    Both,
}

impl DirectionArg {
    fn directions(self) -> &'static [Direction] {
        match self {
            DirectionArg::Forward => &[Direction::Forward],
            DirectionArg::Backward => &[Direction::Backward],
            DirectionArg::Both => &[Direction::Forward, Direction::Backward],
        }
    }
}

/// Fully resolved dynamics request.
struct Model {
    spec: SystemSpec,
    t_max: f64,
    dt: f64,
}

const CONFIG_KEYS: [&str; 11] = [
    "case", "v0", "v", "v_ab", "v_s", "e_a", "e_b", "e_env", "n_env", "t_max", "dt",
];

fn load_config(path: &Path) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", ln + 1)))?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key '{key}'")));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn cfg_parse<T: FromStr>(cfg: &HashMap<String, String>, key: &str) -> Result<Option<T>> {
    match cfg.get(key) {
        None => Ok(None),
        Some(s) => s
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::Config(format!("key '{key}' has unusable value '{s}'"))),
    }
}

fn resolve(args: &ModelArgs, cfg: &HashMap<String, String>) -> Result<Model> {
    let case = args
        .case
        .clone()
        .or_else(|| cfg.get("case").cloned())
        .ok_or_else(|| Error::Config("no case given (use --case or a config file)".into()))?;
    let case_id = CaseId::from_str(&case)?;
    let v0 = args.v0.or(cfg_parse(cfg, "v0")?).unwrap_or(0.1);
    let v = args.v.or(cfg_parse(cfg, "v")?).unwrap_or(1.0);
    let t_max = args.t_max.or(cfg_parse(cfg, "t_max")?).unwrap_or(40.0);
    let dt = args.dt.or(cfg_parse(cfg, "dt")?).unwrap_or(0.05);
    let n_env = args
        .n_env
        .or(cfg_parse(cfg, "n_env")?)
        .unwrap_or_else(|| SystemSpec::min_n_env(v, t_max));
    let mut spec = SystemSpec::new(case_id, v0, v, n_env);
    if let Some(x) = args.v_ab.or(cfg_parse(cfg, "v_ab")?) {
        spec.v_ab = x;
    }
    if let Some(x) = args.v_s.or(cfg_parse(cfg, "v_s")?) {
        spec.v_s = x;
    }
    if let Some(x) = args.e_a.or(cfg_parse(cfg, "e_a")?) {
        spec.e_a = x;
    }
    if let Some(x) = args.e_b.or(cfg_parse(cfg, "e_b")?) {
        spec.e_b = x;
    }
    if let Some(x) = args.e_env.or(cfg_parse(cfg, "e_env")?) {
        spec.e_env = x;
    }
    spec.validate()?;
    Ok(Model { spec, t_max, dt })
}

fn model_json(m: &Model) -> serde_json::Value {
    json!({
        "case": m.spec.case_id.to_string(),
        "v_ab": m.spec.v_ab,
        "v0": m.spec.v0,
        "v": m.spec.v,
        "v_s": m.spec.v_s,
        "e_a": m.spec.e_a,
        "e_b": m.spec.e_b,
        "e_env": m.spec.e_env,
        "n_env": m.spec.n_env,
        "t_max": m.t_max,
        "dt": m.dt,
    })
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Numerical(format!("json encoding failed: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_manifest(
    dir: &Path,
    stem: &str,
    command: &str,
    config: serde_json::Value,
    outputs: &[String],
) -> Result<()> {
    let manifest = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "outputs": outputs,
    });
    write_json(&dir.join(format!("{stem}.manifest.json")), &manifest)
}

fn series_csv(series: &TimeSeries, m: &Model) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    series.write_csv(&mut buf, m.spec.case_id, m.spec.v0, m.spec.v)?;
    Ok(buf)
}

fn parse_f64_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{what}: '{s}' is not a number")))
        })
        .collect()
}

/// One value means "uniform"; otherwise the list must have exactly `n`
/// entries.
fn parse_uniform_list(text: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let vals = parse_f64_list(text, what)?;
    if vals.len() == 1 {
        return Ok(vec![vals[0]; n]);
    }
    if vals.len() != n {
        return Err(Error::Config(format!(
            "{what}: expected 1 or {n} values, got {}",
            vals.len()
        )));
    }
    Ok(vals)
}

/// Midpoint grid over the environment band; stays clear of the band edges
/// where the bulk density diverges.
fn band_grid(e_env: f64, v: f64, points: usize) -> Vec<f64> {
    let step = 4.0 * v / points as f64;
    (0..points)
        .map(|i| e_env - 2.0 * v + (i as f64 + 0.5) * step)
        .collect()
}

fn run_series(kind_is_echo: bool, args: &ModelArgs, cli: &Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => HashMap::new(),
    };
    let m = resolve(args, &cfg)?;
    m.spec.check_horizon(m.t_max)?;
    let started = Instant::now();
    let (name, series) = if kind_is_echo {
        ("le", loschmidt_echo(&m.spec, m.t_max, m.dt)?)
    } else {
        ("sp", survival_probability(&m.spec, m.t_max, m.dt)?)
    };
    let stem = format!("{name}_{}", m.spec.case_id);
    let csv_name = format!("{stem}.csv");
    fs::write(cli.out.join(&csv_name), series_csv(&series, &m)?)?;
    write_manifest(&cli.out, &stem, name, model_json(&m), &[csv_name.clone()])?;
    println!(
        "wrote {} ({} samples) in {:.2} s",
        cli.out.join(&csv_name).display(),
        series.t.len(),
        started.elapsed().as_secs_f64()
    );
    Ok(ExitCode::SUCCESS)
}

fn run_ldos(args: &ModelArgs, kind: LdosKind, points: usize, cli: &Cli) -> Result<ExitCode> {
    if points == 0 {
        return Err(Error::Config("points must be positive".into()));
    }
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => HashMap::new(),
    };
    let m = resolve(args, &cfg)?;
    let grid = band_grid(m.spec.e_env, m.spec.v, points);
    let mut text = format!(
        "# case={} v0={} v={} kind={}\neps,n\n",
        m.spec.case_id,
        m.spec.v0,
        m.spec.v,
        kind.tag()
    );
    for &eps in &grid {
        let n = match kind {
            LdosKind::Surface => ldos_surface(eps - m.spec.e_env, m.spec.v),
            LdosKind::Bulk => ldos_bulk(eps - m.spec.e_env, m.spec.v)?,
            LdosKind::SiteA => ldos_site_a(eps, &m.spec)?,
        };
        text.push_str(&format!("{:.14e},{:.14e}\n", eps, n));
    }
    let stem = format!("ldos_{}_{}", m.spec.case_id, kind.tag());
    let csv_name = format!("{stem}.csv");
    fs::write(cli.out.join(&csv_name), text)?;
    write_manifest(&cli.out, &stem, "ldos", model_json(&m), &[csv_name.clone()])?;
    println!("wrote {}", cli.out.join(&csv_name).display());
    Ok(ExitCode::SUCCESS)
}

/// The closed forms hold for centered models only.
fn centered(spec: &SystemSpec) -> bool {
    spec.e_a == 0.0 && spec.e_b == 0.0 && spec.e_env == 0.0
}

fn run_poles(args: &ModelArgs, direction: DirectionArg, cli: &Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => HashMap::new(),
    };
    let m = resolve(args, &cfg)?;
    if !centered(&m.spec) {
        return Err(Error::Unsupported(
            "pole predictions assume e_a = e_b = e_env = 0".into(),
        ));
    }
    let mut poles = Vec::new();
    for &dir in direction.directions() {
        let p = gf_poles(m.spec.case_id, m.spec.v_ab, m.spec.v0, m.spec.v, dir)?;
        println!(
            "{dir}: delta0 = {:+.6}, gamma0 = {:.6}, rate = {:.6} ({:.4} v0^2/v)",
            p.delta0,
            p.gamma0,
            p.rate,
            p.rate * m.spec.v / (m.spec.v0 * m.spec.v0)
        );
        poles.push(p);
    }
    let value = serde_json::to_value(&poles)
        .map_err(|e| Error::Numerical(format!("json encoding failed: {e}")))?;
    let path = cli.out.join(format!("poles_{}.json", m.spec.case_id));
    write_json(&path, &value)?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn run_rates(args: &ModelArgs, cli: &Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => HashMap::new(),
    };
    let m = resolve(args, &cfg)?;
    m.spec.check_horizon(m.t_max)?;
    let started = Instant::now();
    let win = FitWindow::Auto {
        t_min: 2.0 / m.spec.v,
    };
    let sp = fit_decay(&survival_probability(&m.spec, m.t_max, m.dt)?, win)?;
    let le = fit_decay(&loschmidt_echo(&m.spec, m.t_max, m.dt)?, win)?;
    let norm = m.spec.v / (m.spec.v0 * m.spec.v0);
    let s = &m.spec;
    let wba = wba_rate(s.case_id, s.v0, s.v).ok();
    let (fwd, bwd, le_pred) = if centered(s) {
        (
            scfgr_rate(s.case_id, s.v_ab, s.v0, s.v, Direction::Forward).ok(),
            scfgr_rate(s.case_id, s.v_ab, s.v0, s.v, Direction::Backward).ok(),
            le_rate_prediction(s.case_id, s.v_ab, s.v0, s.v).ok(),
        )
    } else {
        (None, None, None)
    };
    let report = json!({
        "config": model_json(&m),
        "sp_fit": sp,
        "le_fit": le,
        "sp_norm": sp.rate * norm,
        "le_norm": le.rate * norm,
        "wba": wba,
        "scfgr_forward": fwd,
        "scfgr_backward": bwd,
        "le_prediction": le_pred,
    });
    let path = cli.out.join(format!("rates_{}.json", s.case_id));
    write_json(&path, &report)?;
    println!(
        "SP {:.6} ({:.4} v0^2/v, window [{:.2}, {:.2}], r2 {:.5})",
        sp.rate,
        sp.rate * norm,
        sp.window.0,
        sp.window.1,
        sp.r_squared
    );
    println!(
        "LE {:.6} ({:.4} v0^2/v, window [{:.2}, {:.2}], r2 {:.5})",
        le.rate,
        le.rate * norm,
        le.window.0,
        le.window.1,
        le.r_squared
    );
    println!(
        "wrote {} in {:.2} s",
        path.display(),
        started.elapsed().as_secs_f64()
    );
    Ok(ExitCode::SUCCESS)
}

fn run_sweep(args: &ModelArgs, v0_list: &str, cli: &Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => HashMap::new(),
    };
    let m = resolve(args, &cfg)?;
    let list = parse_f64_list(v0_list, "--v0-list")?;
    let sweep_cfg = SweepConfig {
        t_max: m.t_max,
        dt: m.dt,
        n_env: Some(m.spec.n_env),
    };
    let started = Instant::now();
    let result = rate_sweep(m.spec.case_id, &list, m.spec.v, sweep_cfg)?;
    let value = serde_json::to_value(&result)
        .map_err(|e| Error::Numerical(format!("json encoding failed: {e}")))?;
    let path = cli.out.join(format!("sweep_{}.json", m.spec.case_id));
    write_json(&path, &value)?;
    println!(
        "slope SP {:.4} v0^2/v, slope LE {:.4} v0^2/v ({} points, {:.2} s)",
        result.slope_sp,
        result.slope_le,
        result.points.len(),
        started.elapsed().as_secs_f64()
    );
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn run_table1(
    v0: Option<f64>,
    n_env: Option<usize>,
    t_max: Option<f64>,
    dt: Option<f64>,
    cli: &Cli,
) -> Result<ExitCode> {
    let defaults = TableConfig::default();
    let cfg = TableConfig {
        v0: v0.unwrap_or(defaults.v0),
        n_env: n_env.unwrap_or(defaults.n_env),
        t_max: t_max.unwrap_or(defaults.t_max),
        dt: dt.unwrap_or(defaults.dt),
    };
    let started = Instant::now();
    let rows = table1_report(cfg)?;
    print!("{}", table1_text(&rows));
    println!("completed in {:.1} s", started.elapsed().as_secs_f64());
    let value = serde_json::to_value(&rows)
        .map_err(|e| Error::Numerical(format!("json encoding failed: {e}")))?;
    let path = cli.out.join("table1.json");
    write_json(&path, &value)?;
    println!("wrote {}", path.display());
    if rows.iter().all(|r| r.pass) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

#[allow(clippy::too_many_arguments)]
fn run_jwt_check(
    sites: usize,
    omega: &str,
    j: &str,
    i_site: usize,
    f_site: Option<usize>,
    t_max: f64,
    dt: f64,
    tol: f64,
) -> Result<ExitCode> {
    if sites < 2 {
        return Err(Error::Config("need at least two spins".into()));
    }
    let spec = SpinChainSpec {
        omega: parse_uniform_list(omega, sites, "--omega")?,
        j: parse_uniform_list(j, sites - 1, "--j")?,
        i_site,
        f_site: f_site.unwrap_or(sites - 1),
    };
    let dev = mapping_deviation(&spec, t_max, dt)?;
    println!(
        "max |P_spin - P_particle| = {dev:.3e} over t in [0, {t_max}] ({sites} spins)"
    );
    if dev <= tol {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(3))
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Sp(args) => run_series(false, args, cli),
        Command::Le(args) => run_series(true, args, cli),
        Command::Ldos {
            model,
            kind,
            points,
        } => run_ldos(model, *kind, *points, cli),
        Command::Poles { model, direction } => run_poles(model, *direction, cli),
        Command::Rates(args) => run_rates(args, cli),
        Command::Sweep { model, v0_list } => run_sweep(model, v0_list, cli),
        Command::Table1 {
            v0,
            n_env,
            t_max,
            dt,
        } => run_table1(*v0, *n_env, *t_max, *dt, cli),
        Command::JwtCheck {
            sites,
            omega,
            j,
            i_site,
            f_site,
            t_max,
            dt,
            tol,
        } => run_jwt_check(*sites, omega, j, *i_site, *f_site, *t_max, *dt, *tol),
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidSpec(_) | Error::Unsupported(_) | Error::Config(_) | Error::Io(_) => 1,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("NMDECAY_THREADS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    // OpenBLAS reads this on first use; set it before any numeric call.
    std::env::set_var("OPENBLAS_NUM_THREADS", threads.to_string());
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
