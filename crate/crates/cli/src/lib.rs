//! Problem-file front end: parses a JSON problem, runs the named pipeline
//! and collects outputs, certificates and plot series into a bundle.

mod commands;
mod series;

use std::collections::BTreeMap;
use std::time::Instant;

use hardy_interp::config::{GridConfig, Settings, Tolerances};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use series::{emit_plot_data, format_number, Series};

/// Problem-file schema version understood by this build.
pub const PROBLEM_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandName {
    Sequence,
    Pick,
    Construct,
    Diagnose,
    Modelspace,
    Rearrange,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    pub command: CommandName,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<BTreeMap<String, f64>>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let p: Self = serde_json::from_str(text).map_err(|e| CliError::Input(format!("problem file: {e}")))?;
        if p.version != PROBLEM_VERSION {
            return Err(CliError::Input(format!(
                "unsupported problem version {}, expected {PROBLEM_VERSION}",
                p.version
            )));
        }
        Ok(p)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        1
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    #[default]
    Ok,
    /// A result was produced but one of its certificates does not hold.
    Uncertified,
    /// The data admits no solution.
    Infeasible,
    NumericFailure,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Uncertified | Status::Infeasible => 2,
            Status::NumericFailure => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultBundle {
    pub tool_version: String,
    pub command: CommandName,
    pub status: Status,
    pub inputs_echo: ProblemFile,
    pub grid_parameters: GridConfig,
    pub tolerances: Tolerances,
    pub outputs: BTreeMap<String, Value>,
    pub certificates: BTreeMap<String, Value>,
    pub series: BTreeMap<String, Series>,
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl ResultBundle {
    /// Pretty JSON with a trailing newline. Map keys are sorted, so equal
    /// bundles serialize to equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub grid: GridConfig,
    /// `--grid M`: default number of boundary samples.
    pub grid_m: Option<usize>,
    pub tol_overrides: Vec<(String, f64)>,
    pub timings: bool,
}

/// Parses `key=value`.
pub fn parse_override(s: &str) -> Result<(String, f64), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Input(format!("override `{s}` is not key=value")))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("override `{s}` has a non-numeric value")))?;
    Ok((k.trim().to_string(), v))
}

fn settings_for(problem: &ProblemFile, opts: &RunOptions) -> Result<Settings, CliError> {
    let mut grid = opts.grid;
    if let Some(m) = opts.grid_m {
        if m < 64 || !m.is_power_of_two() || m > grid.max_m {
            return Err(CliError::Input(format!(
                "--grid {m} must be a power of two in [64, {}]",
                grid.max_m
            )));
        }
        grid.default_m = m;
    }
    let mut tol = Tolerances::default();
    let from_file = problem.tolerances.iter().flatten().map(|(k, v)| (k.clone(), *v));
    for (k, v) in from_file.chain(opts.tol_overrides.iter().cloned()) {
        tol.set(&k, v).map_err(CliError::Input)?;
    }
    Ok(Settings { grid, tol })
}

/// Runs a parsed problem. Input errors produce no bundle; infeasibility
/// and numerical failure produce a bundle whose status carries the exit code.
pub fn run(problem: &ProblemFile, opts: &RunOptions) -> Result<ResultBundle, CliError> {
    let settings = settings_for(problem, opts)?;
    let start = Instant::now();
    let report = commands::dispatch(problem.command, &problem.payload, &settings)?;
    let timings = opts
        .timings
        .then(|| BTreeMap::from([("run_seconds".to_string(), start.elapsed().as_secs_f64())]));
    Ok(ResultBundle {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: problem.command,
        status: report.status,
        inputs_echo: problem.clone(),
        grid_parameters: settings.grid,
        tolerances: settings.tol,
        outputs: report.outputs,
        certificates: report.certificates,
        series: report.series,
        diagnostics: report.diagnostics,
        timings,
    })
}
