//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or invalid experiment file, 3 degenerate
//! state or submanifold, 4 numerical failure.

pub mod experiment;
mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::error::Error;
use crate::io::write_matrix_csv;
use experiment::{dims, run_experiment, run_one, set_parameter, Dims, ExperimentResult, ExperimentSpec, RunOptions};
use output::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    if e.is_degenerate() {
        EXIT_DEGENERATE
    } else if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kahler-entanglement",
    version,
    about = "Restriction states on P^n1 x P^n2 and their entanglement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Section-space dimensions d1, d2 and dN = d1 d2.
    Dims {
        n1: i64,
        n2: i64,
        /// Line bundle power.
        #[arg(value_name = "N")]
        power: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run an experiment file and report on every N it lists.
    Run {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Include rho_N in JSON output.
        #[arg(long)]
        emit_matrix: bool,
        /// Leave rho_N out of the output when dN exceeds this.
        #[arg(long, default_value_t = 1024)]
        max_matrix_dim: usize,
        /// Also write rho_N as CSV (row,col,re,im); `_N<k>` is appended to the
        /// file stem when the experiment has several powers.
        #[arg(long, value_name = "PATH")]
        matrix_csv: Option<PathBuf>,
    },
    /// Run an experiment over a range of one parameter.
    Sweep {
        spec: PathBuf,
        /// `N`, `nodes`, or a dotted path into `submanifold.params`, e.g.
        /// `radius` or `first.radius`.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(
            long,
            value_delimiter = ',',
            required_unless_present = "range",
            conflicts_with = "range"
        )]
        values: Vec<f64>,
        /// Inclusive `start:stop:step`.
        #[arg(long)]
        range: Option<String>,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Quadrature nodes per parameter dimension (default: per kind).
    #[arg(long)]
    nodes: Option<usize>,
    /// Verdict and PPT threshold (default 1e-9 and 1e-10).
    #[arg(long)]
    tol: Option<f64>,
    /// Sequential reduction in a fixed order and no wall time, so that
    /// repeated runs give identical bytes.
    #[arg(long)]
    deterministic: bool,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
struct RunDocument<'a> {
    schema: u32,
    n1: usize,
    n2: usize,
    submanifold: &'static str,
    results: &'a [ExperimentResult],
}

#[derive(Serialize)]
struct SweepEntry {
    param: String,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<ExperimentResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return e.exit_code();
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Spec(format!("{}: {e}", path.display()))
}

fn read_doc(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))
}

fn emit(bytes: &[u8], output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Error> {
    match output {
        Some(p) => fs::write(p, bytes).map_err(|e| io_err(p, e)),
        None => stdout.write_all(bytes).map_err(|e| Error::Spec(format!("stdout: {e}"))),
    }
}

fn to_json<S: Serialize>(value: &S) -> Result<Vec<u8>, Error> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Spec(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn options(common: &Common) -> Result<RunOptions, Error> {
    if let Some(t) = common.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Spec("--tol must be positive".into()));
        }
    }
    Ok(RunOptions {
        nodes: common.nodes,
        tolerance: common.tol,
        deterministic: common.deterministic,
        ..RunOptions::default()
    })
}

fn matrix_path(base: &Path, power: u32, several: bool) -> PathBuf {
    if !several {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_N{power}.{}", ext.to_string_lossy()),
        None => format!("{stem}_N{power}"),
    };
    base.with_file_name(name)
}

/// Inclusive `start:stop:step`.
fn parse_range(text: &str) -> Result<Vec<f64>, Error> {
    let bad = || Error::Spec(format!("bad range {text:?}, expected start:stop:step"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(bad());
    }
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Dims { n1, n2, power, format } => {
            let d = dims(n1, n2, power)?;
            let bytes = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        n1: i64,
                        n2: i64,
                        #[serde(rename = "N")]
                        power: i64,
                        #[serde(flatten)]
                        dims: Dims,
                    }
                    to_json(&Row { n1, n2, power, dims: d })?
                }
                Format::Csv => {
                    format!("n1,n2,N,d1,d2,dN\n{n1},{n2},{power},{},{},{}\n", d.d1, d.d2, d.d_n).into_bytes()
                }
            };
            emit(&bytes, None, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Run {
            spec,
            common,
            format,
            emit_matrix,
            max_matrix_dim,
            matrix_csv,
        } => {
            let experiment = ExperimentSpec::from_value(read_doc(&spec)?)?;
            let opts = RunOptions {
                emit_matrix: emit_matrix || matrix_csv.is_some(),
                max_matrix_dim,
                ..options(&common)?
            };
            let mut results = run_experiment(&experiment, &opts)?;
            for r in &results {
                for w in &r.warnings {
                    let _ = writeln!(stderr, "warning (N={}): {w}", r.power);
                }
            }
            if let Some(base) = &matrix_csv {
                for r in &results {
                    if let Some(rho) = &r.rho {
                        let path = matrix_path(base, r.power, results.len() > 1);
                        let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
                        write_matrix_csv(rho.matrix(), file)?;
                    }
                }
                if !emit_matrix {
                    for r in &mut results {
                        r.rho = None;
                    }
                }
            }
            let bytes = match format {
                Format::Json => to_json(&RunDocument {
                    schema: experiment::SCHEMA_VERSION,
                    n1: experiment.n1,
                    n2: experiment.n2,
                    submanifold: experiment.submanifold.kind_name(),
                    results: &results,
                })?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    let mut table = Table::new(&mut buf, &[], &[])?;
                    for r in &results {
                        table.row(&[], Some(r), &[])?;
                    }
                    table.finish()?;
                    buf
                }
            };
            emit(&bytes, common.output.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            spec,
            param,
            values,
            range,
            common,
            format,
        } => {
            let doc = read_doc(&spec)?;
            // validate the base experiment before sweeping
            ExperimentSpec::from_value(doc.clone())?;
            let values = match range {
                Some(r) => parse_range(&r)?,
                None => values,
            };
            let opts = options(&common)?;
            let mut entries = Vec::new();
            let mut first_error = None;
            for &value in &values {
                let experiment = set_parameter(&doc, &param, value).and_then(ExperimentSpec::from_value)?;
                for &power in &experiment.powers {
                    let (result, error) = match run_one(&experiment, power, &opts) {
                        Ok(r) => (Some(r), None),
                        Err(e) => {
                            let _ = writeln!(stderr, "error ({param}={value}, N={power}): {e}");
                            first_error.get_or_insert(exit_code(&e));
                            (None, Some(e.to_string()))
                        }
                    };
                    entries.push(SweepEntry {
                        param: param.clone(),
                        value,
                        result,
                        error,
                    });
                }
            }
            let bytes = match format {
                Format::Json => to_json(&entries)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    let mut table = Table::new(&mut buf, &["param", "value"], &["error"])?;
                    for e in &entries {
                        let lead = [e.param.clone(), crate::io::fmt17(e.value)];
                        table.row(&lead, e.result.as_ref(), &[e.error.clone().unwrap_or_default()])?;
                    }
                    table.finish()?;
                    buf
                }
            };
            emit(&bytes, common.output.as_deref(), stdout)?;
            // partial failures are recorded per row; only a sweep with no
            // successful point fails as a whole
            Ok(match first_error {
                Some(code) if entries.iter().all(|e| e.result.is_none()) => code,
                _ => EXIT_OK,
            })
        }
    }
}
