use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use slowbond::harness::{
    self, config_hash, simulate_series, write_outputs, Experiment, ExperimentConfig, KappaSource, KappaSweepConfig,
    RateSource, RunOutput, ShapeConfig, SimulateSpec, Table,
};
use slowbond::hydro::{invariance_check, uniform_mesh, value_function, MacroProfile, ProfileSpec};
use slowbond::tasep::{write_snapshot, Snapshot};

#[derive(Parser)]
#[command(
    name = "slowbond",
    version,
    about = "TASEP with a slow bond: LPP, hydrodynamics and simulation"
)]
struct Cli {
    /// Overrides every seed in a config file, or sets the seed of an ad hoc run.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for CSV and JSON outputs.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo estimate of κ(r).
    Kappa {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        replicas: usize,
        /// Comma-separated sizes; adds an n^(-1/3) fit.
        #[arg(long, value_delimiter = ',')]
        ladder: Option<Vec<usize>>,
    },
    /// Homogeneous shape probe T(⌊nx⌋, ⌊ny⌋)/n.
    Shape {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        replicas: usize,
    },
    /// Value function v(x,t) and density on a uniform mesh.
    Hydro {
        #[command(flatten)]
        rate: RateArgs,
        /// Profile JSON file.
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        xmin: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        xmax: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// Checks whether a profile is invariant; exit code 0 iff it is.
    InvariantCheck {
        #[command(flatten)]
        rate: RateArgs,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.1,1,5")]
        times: Vec<f64>,
    },
    /// Particle simulation sampled at evenly spaced times.
    Simulate {
        #[arg(long)]
        r: f64,
        #[arg(long, conflicts_with = "profile")]
        rho: Option<f64>,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        /// Windows as a:b, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1:1")]
        windows: Vec<String>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_delimiter = ',', default_value = "density,current")]
        measure: Vec<String>,
        /// Writes the final configuration here.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Micro-vs-macro comparison from a JSON config.
    Compare(ConfigArg),
    /// κ sweep over rates and sizes from a JSON config.
    KappaSweep(ConfigArg),
    /// Invariance suite from a JSON config.
    Invariance(ConfigArg),
    /// Stationary pair correlation from a JSON config.
    Paircorr(ConfigArg),
}

#[derive(Args)]
struct ConfigArg {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct RateArgs {
    #[arg(long, conflicts_with = "r")]
    lambda0: Option<f64>,
    /// Slow-bond rate; κ(r) is estimated first.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    kappa_n: usize,
    #[arg(long, default_value_t = 10)]
    kappa_replicas: usize,
}

impl RateArgs {
    fn source(&self, seed: u64) -> Result<RateSource> {
        match (self.lambda0, self.r) {
            (Some(l), None) => Ok(RateSource::Lambda0(l)),
            (None, Some(r)) => Ok(RateSource::Kappa {
                r,
                kappa: KappaSource::Estimate {
                    n: self.kappa_n,
                    replicas: self.kappa_replicas,
                    seed,
                },
            }),
            _ => bail!("give exactly one of --lambda0 or --r"),
        }
    }
}

fn read_profile(path: &Path) -> Result<ProfileSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

fn set_seeds(value: &mut Value, seed: u64) {
    match value {
        Value::Object(map) => {
            for (k, v) in map.iter_mut() {
                if k == "seed" {
                    *v = Value::from(seed);
                } else {
                    set_seeds(v, seed);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| set_seeds(v, seed)),
        _ => {}
    }
}

fn load_config(path: &Path, expected: &str, seed: Option<u64>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut value: Value = serde_json::from_str(&text)?;
    if let Some(s) = seed {
        set_seeds(&mut value, s);
    }
    if let Value::Object(map) = &mut value {
        map.entry("kind").or_insert_with(|| Value::from(expected));
    }
    let cfg = ExperimentConfig::from_json(&value.to_string())?;
    if cfg.experiment.name() != expected {
        bail!("config kind is {}, expected {expected}", cfg.experiment.name());
    }
    Ok(cfg)
}

fn finish(out: &RunOutput, dir: &Path) -> Result<bool> {
    for p in out.write(dir)? {
        println!("{}", p.display());
    }
    log::info!(
        "{}: {}",
        out.name,
        if out.passed {
            "all checks passed"
        } else {
            "checks failed"
        }
    );
    Ok(out.passed)
}

fn run(cli: Cli) -> Result<bool> {
    let seed = cli.seed.unwrap_or(0);
    let out_dir = |cfg_dir: Option<&PathBuf>| cli.out_dir.clone().or(cfg_dir.cloned()).unwrap_or_else(|| "out".into());
    match cli.command {
        Command::Kappa { r, n, replicas, ladder } => {
            let extrapolate = ladder.is_some();
            let cfg = ExperimentConfig {
                experiment: Experiment::KappaSweep(KappaSweepConfig {
                    rates: vec![r],
                    ladder: ladder.unwrap_or_else(|| vec![n]),
                    replicas,
                    seed,
                    extrapolate,
                }),
                out_dir: None,
            };
            finish(&harness::run(&cfg)?, &out_dir(None))
        }
        Command::Shape { x, y, n, replicas } => {
            let cfg = ExperimentConfig {
                experiment: Experiment::Shape(ShapeConfig {
                    points: vec![(x, y)],
                    n,
                    replicas,
                    seed,
                    tolerance: 0.05,
                }),
                out_dir: None,
            };
            finish(&harness::run(&cfg)?, &out_dir(None))
        }
        Command::Hydro {
            rate,
            profile,
            t,
            xmin,
            xmax,
            points,
        } => {
            let spec = read_profile(&profile)?;
            let source = rate.source(seed)?;
            let hash = config_hash(&(&spec, &source, t, xmin, xmax, points))?;
            let (rate, kappa) = source.resolve()?;
            let profile = MacroProfile::from_spec(&spec)?;
            let sol = value_function(&profile, t, &rate, &uniform_mesh(xmin, xmax, points)?)?;
            let mut table = Table::new(&["x", "v", "rho", "argmax_q"]);
            for k in 0..sol.mesh.len() {
                let rho = sol.rho_values.get(k).copied().unwrap_or(f64::NAN);
                table.push(
                    seed,
                    &hash,
                    [sol.mesh[k], sol.v_values[k], rho, sol.argmax_q[k]]
                        .iter()
                        .map(|x| Table::float(*x))
                        .collect(),
                );
            }
            let summary = serde_json::json!({ "config_hash": hash, "t": t, "lambda0": rate.lambda0(), "kappa": kappa });
            let (c, j) = write_outputs(&out_dir(None), "hydro", &table, &summary)?;
            println!("{}\n{}", c.display(), j.display());
            Ok(true)
        }
        Command::InvariantCheck { rate, profile, times } => {
            let spec = read_profile(&profile)?;
            let source = rate.source(seed)?;
            let (rate, _) = source.resolve()?;
            let report = invariance_check(&MacroProfile::from_spec(&spec)?, &rate, &times)?;
            println!("{}", harness::to_json(&report)?);
            Ok(report.invariant)
        }
        Command::Simulate {
            r,
            rho,
            profile,
            n,
            t,
            windows,
            steps,
            measure,
            snapshot,
        } => {
            let profile = match (rho, profile) {
                (Some(rho), None) => ProfileSpec {
                    left_tail: rho,
                    segments: vec![],
                },
                (None, Some(p)) => read_profile(&p)?,
                _ => bail!("give exactly one of --rho or --profile"),
            };
            let windows = windows
                .iter()
                .map(|w| {
                    let (a, b) = w.split_once(':').with_context(|| format!("window {w} is not a:b"))?;
                    Ok((a.trim().parse()?, b.trim().parse()?))
                })
                .collect::<Result<Vec<(f64, f64)>>>()?;
            let known = ["density", "current", "paircorr"];
            if let Some(m) = measure.iter().find(|m| !known.contains(&m.as_str())) {
                bail!("unknown measurement {m}; expected one of {known:?}");
            }
            let spec = SimulateSpec {
                r,
                profile,
                n,
                t,
                seed,
                windows,
                steps,
            };
            let hash = config_hash(&spec)?;
            let (points, last, _) = simulate_series(&spec, &hash)?;
            let mut cols = vec!["t", "a", "b"];
            cols.extend(known.iter().filter(|k| measure.iter().any(|m| m == *k)));
            let mut table = Table::new(&cols);
            for p in &points {
                let mut cells = vec![p.t, p.a, p.b];
                for c in &cols[3..] {
                    cells.push(match *c {
                        "density" => p.density,
                        "current" => p.current,
                        _ => p.paircorr,
                    });
                }
                table.push(seed, &hash, cells.into_iter().map(Table::float).collect());
            }
            let (c, j) = write_outputs(&out_dir(None), "simulate", &table, &spec)?;
            println!("{}\n{}", c.display(), j.display());
            if let Some(path) = snapshot {
                let snap = Snapshot {
                    occ: last,
                    time: n as f64 * t,
                    seed,
                };
                write_snapshot(BufWriter::new(File::create(&path)?), &snap)?;
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Compare(c) => run_config(&c.config, "compare", cli.seed, &out_dir),
        Command::KappaSweep(c) => run_config(&c.config, "kappa_sweep", cli.seed, &out_dir),
        Command::Invariance(c) => run_config(&c.config, "invariance", cli.seed, &out_dir),
        Command::Paircorr(c) => run_config(&c.config, "paircorr", cli.seed, &out_dir),
    }
}

fn run_config(
    path: &Path,
    kind: &str,
    seed: Option<u64>,
    out_dir: &dyn Fn(Option<&PathBuf>) -> PathBuf,
) -> Result<bool> {
    let cfg = load_config(path, kind, seed)?;
    let out = harness::run(&cfg)?;
    finish(&out, &out_dir(cfg.out_dir.as_ref()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
