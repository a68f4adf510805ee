//! Command-line experiment harness.
//!
//! Three subcommands: `ruin` (one-shot query), `experiment` (the table
//! reproductions), `figure` (plot-ready CSV). Flags can be preloaded from a
//! flat `key=value` config file (`--config`); explicit flags win. Exit
//! codes: 0 success, 2 domain error, 3 numeric/runtime error. The
//! `RUINKIT_THREADS` environment variable caps worker parallelism.

mod run;
mod spec;

pub use run::{
    auto_grid, emit_figure_data, figure_grid, fmt_sig, measurement_grid, run_experiment,
    ExperimentOutput,
};
pub use spec::{
    ExperimentKind, ExperimentSpec, GridPolicy, AUTO_GRID_POINTS, DEFAULT_DIGITS, DEFAULT_SAMPLES,
    DEFAULT_SEED,
};

use crate::distributions::ClaimModel;
use crate::error::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::collections::HashMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "ruinkit",
    version,
    about = "Ruin probabilities for heavy-tailed compound Poisson risk models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the spectral, heavy-tail and heavy-traffic approximations
    /// at given capital values.
    Ruin(CommonArgs),
    /// Run a named experiment and write its table as CSV.
    Experiment(ExperimentArgs),
    /// Emit figure data: reference, approximations and the bound level over
    /// the range where the reference exceeds the bound.
    Figure(CommonArgs),
}

#[derive(Debug, Args, Default, Clone)]
pub struct CommonArgs {
    /// Claim family: abate-whitt | weibull-half | pareto.
    #[arg(long)]
    pub model: Option<String>,
    /// Abate-Whitt rate parameter.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Weibull scale parameter (shape is fixed at 1/2).
    #[arg(long)]
    pub a: Option<f64>,
    /// Pareto shape parameter.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Pareto scale parameter.
    #[arg(long)]
    pub b: Option<f64>,
    /// Load(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub rho: Option<Vec<f64>>,
    /// Phase count(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
    /// Target bound for the spectral approximation.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Capital value(s) for one-shot queries, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub u: Option<Vec<f64>>,
    /// Evaluation grid: "auto" or a comma-separated list of capitals.
    #[arg(long)]
    pub grid: Option<String>,
    /// Monte Carlo sample count (used when no exact reference exists).
    #[arg(long)]
    pub samples: Option<u64>,
    /// Monte Carlo seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits in CSV and summaries.
    #[arg(long)]
    pub digits: Option<usize>,
    /// Flat key=value config file; explicit flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// phases-impact | bound-quality | approx-comparison | bound-matching |
    /// single-query.
    #[arg(long)]
    pub kind: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Parse a flat `key=value` file; `#` starts a comment.
fn parse_config_file(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::domain(format!(
                "config {}:{}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| Error::domain(format!("config key '{key}': cannot parse '{value}'")))
}

fn parse_num_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|tok| parse_num::<T>(key, tok.trim()))
        .collect()
}

/// Fill every flag that was not given on the command line from the config
/// file, so explicit flags take precedence.
fn apply_config(args: &mut CommonArgs, kind: &mut Option<String>) -> Result<()> {
    let Some(path) = &args.config else {
        return Ok(());
    };
    let map = parse_config_file(path)?;
    for (key, value) in &map {
        match key.as_str() {
            "kind" => {
                if kind.is_none() {
                    *kind = Some(value.clone());
                }
            }
            "model" => {
                if args.model.is_none() {
                    args.model = Some(value.clone());
                }
            }
            "mu" => {
                if args.mu.is_none() {
                    args.mu = Some(parse_num(key, value)?);
                }
            }
            "a" => {
                if args.a.is_none() {
                    args.a = Some(parse_num(key, value)?);
                }
            }
            "alpha" => {
                if args.alpha.is_none() {
                    args.alpha = Some(parse_num(key, value)?);
                }
            }
            "b" => {
                if args.b.is_none() {
                    args.b = Some(parse_num(key, value)?);
                }
            }
            "rho" => {
                if args.rho.is_none() {
                    args.rho = Some(parse_num_list(key, value)?);
                }
            }
            "k" => {
                if args.k.is_none() {
                    args.k = Some(parse_num_list(key, value)?);
                }
            }
            "delta" => {
                if args.delta.is_none() {
                    args.delta = Some(parse_num(key, value)?);
                }
            }
            "u" => {
                if args.u.is_none() {
                    args.u = Some(parse_num_list(key, value)?);
                }
            }
            "grid" => {
                if args.grid.is_none() {
                    args.grid = Some(value.clone());
                }
            }
            "samples" => {
                if args.samples.is_none() {
                    args.samples = Some(parse_num(key, value)?);
                }
            }
            "seed" => {
                if args.seed.is_none() {
                    args.seed = Some(parse_num(key, value)?);
                }
            }
            "out" => {
                if args.out.is_none() {
                    args.out = Some(PathBuf::from(value));
                }
            }
            "digits" => {
                if args.digits.is_none() {
                    args.digits = Some(parse_num(key, value)?);
                }
            }
            other => {
                return Err(Error::domain(format!(
                    "config {}: unknown key '{other}'",
                    path.display()
                )));
            }
        }
    }
    Ok(())
}

fn build_model(args: &CommonArgs) -> Result<ClaimModel> {
    let Some(name) = &args.model else {
        return Err(Error::domain(
            "a claim model is required (--model abate-whitt|weibull-half|pareto)",
        ));
    };
    match name.as_str() {
        "abate-whitt" => {
            let mu = args
                .mu
                .ok_or_else(|| Error::domain("abate-whitt needs --mu"))?;
            ClaimModel::abate_whitt(mu)
        }
        "weibull-half" => {
            let a = args
                .a
                .ok_or_else(|| Error::domain("weibull-half needs --a"))?;
            ClaimModel::weibull_half(a)
        }
        "pareto" => {
            let alpha = args
                .alpha
                .ok_or_else(|| Error::domain("pareto needs --alpha"))?;
            let b = args.b.ok_or_else(|| Error::domain("pareto needs --b"))?;
            ClaimModel::pareto(alpha, b)
        }
        other => Err(Error::domain(format!(
            "unknown model '{other}' (expected abate-whitt, weibull-half or pareto)"
        ))),
    }
}

fn build_grid(args: &CommonArgs) -> Result<GridPolicy> {
    match args.grid.as_deref() {
        None | Some("auto") => Ok(GridPolicy::Auto),
        Some(list) => Ok(GridPolicy::Explicit(parse_num_list("grid", list)?)),
    }
}

fn build_spec(kind: ExperimentKind, args: &CommonArgs) -> Result<ExperimentSpec> {
    Ok(ExperimentSpec {
        kind,
        model: build_model(args)?,
        rhos: args.rho.clone().unwrap_or_default(),
        ks: args.k.clone().unwrap_or_default(),
        delta: args.delta,
        grid: build_grid(args)?,
        us: args.u.clone().unwrap_or_default(),
        samples: args.samples.unwrap_or(DEFAULT_SAMPLES),
        seed: args.seed.unwrap_or(DEFAULT_SEED),
        digits: args.digits.unwrap_or(DEFAULT_DIGITS),
    })
}

fn write_output(
    out: &Option<PathBuf>,
    default_name: &str,
    result: &ExperimentOutput,
) -> Result<()> {
    for w in &result.warnings {
        eprintln!("note: {w}");
    }
    let path = out.clone().unwrap_or_else(|| PathBuf::from(default_name));
    std::fs::write(&path, &result.csv)
        .map_err(|e| Error::numeric(format!("cannot write {}: {e}", path.display())))?;
    print!("{}", result.summary);
    println!("wrote {}", path.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ruin(mut args) => {
            apply_config(&mut args, &mut None)?;
            let spec = build_spec(ExperimentKind::SingleQuery, &args)?;
            let result = run_experiment(&spec)?;
            for w in &result.warnings {
                eprintln!("note: {w}");
            }
            print!("{}", result.summary);
            if let Some(path) = &args.out {
                std::fs::write(path, &result.csv)
                    .map_err(|e| Error::numeric(format!("cannot write {}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Experiment(mut exp) => {
            let mut kind_name = exp.kind.take();
            apply_config(&mut exp.common, &mut kind_name)?;
            let kind_name = kind_name
                .ok_or_else(|| Error::domain("an experiment kind is required (--kind)"))?;
            let kind = ExperimentKind::parse(&kind_name)?;
            let spec = build_spec(kind, &exp.common)?;
            let result = run_experiment(&spec)?;
            write_output(
                &exp.common.out,
                &format!("ruinkit-{}.csv", kind.name()),
                &result,
            )
        }
        Command::Figure(mut args) => {
            apply_config(&mut args, &mut None)?;
            let spec = build_spec(ExperimentKind::ApproxComparison, &args)?;
            let result = emit_figure_data(&spec)?;
            write_output(&args.out, "ruinkit-figure.csv", &result)
        }
    }
}

/// Entry point for the binary: parse, honor `RUINKIT_THREADS`, map errors
/// to exit codes (2 domain, 3 numeric).
pub fn main_impl() -> i32 {
    if let Ok(threads) = std::env::var("RUINKIT_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                // Ignore failure: the pool may already be initialized.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => eprintln!("note: ignoring invalid RUINKIT_THREADS='{threads}'"),
        }
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e @ Error::Domain(_)) => {
            eprintln!("error: {e}");
            2
        }
        Err(e @ Error::Numeric(_)) => {
            eprintln!("error: {e}");
            3
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_construction_from_args() {
        let mut args = CommonArgs {
            model: Some("pareto".into()),
            alpha: Some(4.0),
            b: Some(3.0),
            ..Default::default()
        };
        assert_eq!(build_model(&args).unwrap().family_name(), "pareto");
        args.model = Some("weibull-half".into());
        assert!(build_model(&args).is_err()); // missing --a
        args.a = Some(3.0);
        assert!(build_model(&args).is_ok());
        args.model = Some("nope".into());
        assert!(build_model(&args).is_err());
        args.model = None;
        assert!(build_model(&args).is_err());
    }

    #[test]
    fn grid_parsing() {
        let mut args = CommonArgs::default();
        assert_eq!(build_grid(&args).unwrap(), GridPolicy::Auto);
        args.grid = Some("auto".into());
        assert_eq!(build_grid(&args).unwrap(), GridPolicy::Auto);
        args.grid = Some("0,1,2.5".into());
        assert_eq!(
            build_grid(&args).unwrap(),
            GridPolicy::Explicit(vec![0.0, 1.0, 2.5])
        );
        args.grid = Some("0,x".into());
        assert!(build_grid(&args).is_err());
    }

    #[test]
    fn config_fills_only_missing_flags() {
        let dir = std::env::temp_dir().join(format!("ruinkit-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("test.conf");
        std::fs::write(
            &path,
            "# comment\nmodel = pareto\nalpha=4\nb=3\nrho=0.5\nseed=7\n",
        )
        .unwrap();
        let mut args = CommonArgs {
            config: Some(path.clone()),
            rho: Some(vec![0.7]), // explicit flag wins
            ..Default::default()
        };
        apply_config(&mut args, &mut None).unwrap();
        assert_eq!(args.model.as_deref(), Some("pareto"));
        assert_eq!(args.rho, Some(vec![0.7]));
        assert_eq!(args.seed, Some(7));
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn config_rejects_unknown_keys_and_bad_lines() {
        let dir = std::env::temp_dir().join(format!("ruinkit-cfg2-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let bad_key = dir.join("bad_key.conf");
        std::fs::write(&bad_key, "nonsense=1\n").unwrap();
        let mut args = CommonArgs {
            config: Some(bad_key),
            ..Default::default()
        };
        assert!(apply_config(&mut args, &mut None).is_err());

        let bad_line = dir.join("bad_line.conf");
        std::fs::write(&bad_line, "model pareto\n").unwrap();
        args.config = Some(bad_line);
        assert!(apply_config(&mut args, &mut None).is_err());
    }
}
