//! Batch front-end for the survroute optimizer: run the engine on an
//! instance file, enumerate an instance's exact front, or compare two
//! fronts.
//!
//! Exit codes: 0 success, 2 configuration or input-format error, 3
//! instance error, 4 instance too large for the exhaustive oracle.

pub mod config;
pub mod format;
pub mod output;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use survroute::engine::EngineError;
use survroute::measures::{additive_epsilon, coverage, hypervolume, ReferencePoint};
use survroute::netmodel::{InstanceError, OracleScopeError};
use survroute::{run, NetworkInstance, ObjectiveVector};
use thiserror::Error;

use config::{ConfigError, RunConfig};
use output::{FrontRow, Iterations, MeasureReport, PoolRecord, Summary, G12};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: io::Error },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("cannot read instance {path}: {source}")]
    InstanceRead { path: PathBuf, source: io::Error },
    #[error("instance {path}: {source}")]
    Instance { path: PathBuf, source: InstanceError },
    #[error("instance {path}: {message}")]
    Infeasible { path: PathBuf, message: String },
    #[error(transparent)]
    OracleScope(#[from] OracleScopeError),
    #[error("{path}: {message}")]
    Front { path: PathBuf, message: String },
    #[error("{0}")]
    Measure(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InstanceRead { .. } | CliError::Instance { .. } | CliError::Infeasible { .. } => 3,
            CliError::OracleScope(_) => 4,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "survroute", version, about = "Multi-objective route optimisation for nested mobile networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the optimizer and write front.csv and summary.json.
    Run(RunArgs),
    /// Enumerate the exact Pareto front of a small instance.
    Oracle(OracleArgs),
    /// Compare two front files: hypervolume, additive epsilon, coverage.
    Measure(MeasureArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// key=value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Evaluation budget.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override any configuration key.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub instance: PathBuf,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    pub front_a: PathBuf,
    pub front_b: PathBuf,
    /// Reference point, e.g. `--ref 3,3`.
    #[arg(long = "ref", value_name = "X,Y")]
    pub reference: String,
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Oracle(args) => cmd_oracle(&args),
        Command::Measure(args) => cmd_measure(&args),
    }
}

/// Reads and parses an instance file.
pub fn load_instance(path: &Path) -> Result<NetworkInstance, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::InstanceRead {
        path: path.to_path_buf(),
        source,
    })?;
    NetworkInstance::parse(&text).map_err(|source| CliError::Instance {
        path: path.to_path_buf(),
        source,
    })
}

/// Merges the config file, `--set` overrides and the dedicated flags, in
/// that order of increasing precedence.
pub fn resolve_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
                path: path.clone(),
                source,
            })?;
            RunConfig::parse(&text, path.parent())?
        }
        None => RunConfig::default(),
    };
    for item in &args.set {
        config.apply_override(item)?;
    }
    if let Some(path) = &args.instance {
        config.instance = Some(path.clone());
    }
    if let Some(path) = &args.out {
        config.out = Some(path.clone());
    }
    if let Some(seed) = args.seed {
        config.params.seed = seed;
    }
    if let Some(budget) = args.budget {
        config.params.budget = budget;
    }
    Ok(config)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let config = resolve_config(args)?;
    let instance_path = config.instance.clone().ok_or(ConfigError::Missing("instance"))?;
    let out = config.out.clone().ok_or(ConfigError::Missing("output directory"))?;
    config
        .params
        .validate()
        .map_err(|e| CliError::Params(e.to_string()))?;
    let instance = load_instance(&instance_path)?;

    let result = run(&instance, &config.params).map_err(|e| match e {
        EngineError::Instance(err) => CliError::Infeasible {
            path: instance_path.clone(),
            message: err.to_string(),
        },
        other => CliError::Params(other.to_string()),
    })?;

    let rows: Vec<FrontRow> = result
        .archive
        .members()
        .iter()
        .map(|m| FrontRow {
            z1: m.objectives.get(0),
            z2: m.objectives.get(1),
            genotype: instance.encode_assignment(&m.genotype),
        })
        .collect();
    let summary = Summary {
        seed: config.params.seed,
        instance: instance_path.display().to_string(),
        params: (&config.params).into(),
        evaluations: result.evaluations,
        archive_size: result.archive.len(),
        final_hypervolume: G12(result.final_hypervolume()),
        reference_point: result.reference.values().iter().copied().map(G12).collect(),
        hypervolume_trace: result.hv_trace.iter().copied().map(G12).collect(),
        iterations: Iterations {
            inner: result.inner_iterations,
            outer: result.outer_iterations,
        },
        scheduler: result.scheduler.iter().map(PoolRecord::from).collect(),
        wall_clock_seconds: G12(result.wall_clock.as_secs_f64()),
    };

    fs::create_dir_all(&out).map_err(|source| CliError::Write {
        path: out.clone(),
        source,
    })?;
    write_file(&out.join("front.csv"), &output::front_csv(&rows))?;
    write_file(&out.join("summary.json"), &summary.to_json())?;
    println!(
        "{} front points, hypervolume {}, {} evaluations -> {}",
        rows.len(),
        format::g12(result.final_hypervolume()),
        result.evaluations,
        out.display()
    );
    Ok(())
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?;
    let front = instance.brute_force_pareto()?;
    let rows: Vec<FrontRow> = front
        .iter()
        .map(|p| FrontRow {
            z1: p.objectives.get(0),
            z2: p.objectives.get(1),
            genotype: instance.encode_assignment(&p.witness),
        })
        .collect();
    let csv = output::front_csv(&rows);
    match &args.out {
        Some(path) => write_file(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn read_front_file(path: &Path) -> Result<Vec<ObjectiveVector>, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::Front {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    output::read_front(file).map_err(|message| CliError::Front {
        path: path.to_path_buf(),
        message,
    })
}

/// Computes the indicators reported by `measure`.
pub fn measure_fronts(
    a: &[ObjectiveVector],
    b: &[ObjectiveVector],
    reference: &[f64],
) -> Result<MeasureReport, CliError> {
    if reference.len() != 2 {
        return Err(CliError::Measure(format!(
            "reference point needs 2 coordinates, got {}",
            reference.len()
        )));
    }
    let r = ObjectiveVector::new(reference.to_vec())
        .map(ReferencePoint::new)
        .map_err(|e| CliError::Measure(e.to_string()))?;
    let hv = |front: &[ObjectiveVector], name: &str| {
        hypervolume(front, &r).map_err(|e| CliError::Measure(format!("front {name}: {e}")))
    };
    Ok(MeasureReport {
        reference_point: reference.iter().copied().map(G12).collect(),
        hv_a: G12(hv(a, "a")?),
        hv_b: G12(hv(b, "b")?),
        epsilon: additive_epsilon(a, b).ok().map(G12),
        coverage_ab: coverage(a, b).ok().map(G12),
        coverage_ba: coverage(b, a).ok().map(G12),
    })
}

pub fn cmd_measure(args: &MeasureArgs) -> Result<(), CliError> {
    let reference = output::parse_reference(&args.reference).map_err(CliError::Measure)?;
    let a = read_front_file(&args.front_a)?;
    let b = read_front_file(&args.front_b)?;
    let report = measure_fronts(&a, &b, &reference)?;
    print!("{}", report.to_json());
    Ok(())
}
