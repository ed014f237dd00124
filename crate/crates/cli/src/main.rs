use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hardy_interp::config::GridConfig;
use hardy_interp_cli::{emit_plot_data, parse_override, run, CliError, ProblemFile, RunOptions};

/// Outer-function interpolation and model-space diagnostics on the unit disk.
#[derive(Parser)]
#[command(name = "hardy-interp", version)]
struct Args {
    /// Problem file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Directory for `bundle.json` and emitted CSV files. Without it the
    /// bundle, or the single emitted series, goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plot series to write as CSV; repeatable.
    #[arg(long)]
    emit: Vec<String>,
    /// Tolerance override `key=value`; repeatable.
    #[arg(long = "tol-override", value_parser = parse_override_arg)]
    tol_override: Vec<(String, f64)>,
    /// Default number of boundary samples (power of two).
    #[arg(long)]
    grid: Option<usize>,
    /// Record wall-clock timings in the bundle.
    #[arg(long)]
    timings: bool,
}

fn parse_override_arg(s: &str) -> Result<(String, f64), String> {
    parse_override(s).map_err(|e| e.to_string())
}

fn execute(args: Args) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    let problem = ProblemFile::parse(&text)?;
    let opts = RunOptions {
        grid: GridConfig::from_env(),
        grid_m: args.grid,
        tol_overrides: args.tol_override,
        timings: args.timings,
    };
    let bundle = run(&problem, &opts)?;
    let csv: Vec<(String, String)> = args
        .emit
        .iter()
        .map(|s| Ok((s.clone(), emit_plot_data(&bundle, s)?)))
        .collect::<Result<_, CliError>>()?;
    match &args.out {
        Some(dir) => {
            let write = |name: &str, body: &str| {
                std::fs::write(dir.join(name), body).map_err(|e| CliError::Output(format!("{name}: {e}")))
            };
            std::fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
            write("bundle.json", &bundle.to_json())?;
            for (name, body) in &csv {
                write(&format!("{name}.csv"), body)?;
            }
        }
        None if csv.len() == 1 => print!("{}", csv[0].1),
        None if csv.len() > 1 => return Err(CliError::Input("several --emit series need --out".into())),
        None => print!("{}", bundle.to_json()),
    }
    for d in &bundle.diagnostics {
        eprintln!("{d}");
    }
    Ok(bundle.status.exit_code())
}

fn main() -> ExitCode {
    // clap's own usage errors exit with 2, which is reserved for infeasibility
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
