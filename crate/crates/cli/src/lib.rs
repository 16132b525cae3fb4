//! Command-line frontend: reads JSON state files, prints one JSON document per
//! invocation, and optionally writes CSV/SVG side files.

pub mod render;
pub mod state;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use athermal::esets::{construct_gap_example, default_e_max, fa_point, gap_samples, gap_set, DEFAULT_GRID};
use athermal::monotones::{cooling_monotone, critical_energies, heating_monotone};
use athermal::oracle::{lp_relatively_majorizes, DEFAULT_TOL};
use athermal::tempbounds::{beta_max, beta_min, max_ground_overlap};
use athermal::{compute_elbows, relatively_majorizes, AthermalityState};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::render::{render_boundary, render_series, PlotFormat};
use crate::state::{LoadedState, StateFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("malformed state file: {0}")]
    Parse(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] athermal::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        use athermal::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::Input(_) => "invalid_input",
            CliError::Core(e) => match e {
                E::EmptyVector => "empty_vector",
                E::NonFiniteEntry { .. } => "non_finite_entry",
                E::NegativeEntry { .. } => "negative_entry",
                E::NormalizationOutOfTolerance { .. } => "normalization",
                E::RankDeficientGibbs { .. } => "rank_deficient_gibbs",
                E::DimensionMismatch { .. } => "dimension_mismatch",
                E::YOutOfRange(_) => "y_out_of_range",
                E::NonFiniteBeta(_) => "non_finite_beta",
                E::NonPositiveBeta(_) => "non_positive_beta",
                E::NonPositiveGap(_) => "non_positive_gap",
                E::DegenerateTarget => "degenerate_target",
                E::WrongDegeneracy { .. } => "wrong_degeneracy",
                E::TrivialRatio => "trivial_ratio",
                E::WOutOfRange(_) => "w_out_of_range",
                E::InvalidDensityMatrix(_) => "invalid_density_matrix",
                E::InvalidArgument(_) => "invalid_argument",
                E::BisectionFailure(_) => "numeric_failure",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(athermal::Error::BisectionFailure(_)) => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "athermal", version, about = "Thermomajorization toolkit for quasi-classical states")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Side file to write.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format of the side file.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct Pair {
    #[arg(long)]
    from: PathBuf,
    #[arg(long)]
    to: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Largest inverse temperature the target system can be cooled to.
    Cool {
        #[arg(short, long)]
        state: PathBuf,
        #[arg(short, long)]
        target: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest (possibly negative) inverse temperature the target can be heated to.
    Heat {
        #[arg(short, long)]
        state: PathBuf,
        #[arg(short, long)]
        target: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Maximal ground-space population of the target.
    Overlap {
        #[arg(short, long)]
        state: PathBuf,
        #[arg(short, long)]
        target: PathBuf,
        #[arg(long)]
        ground_degeneracy: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Whether `--from` can be converted into `--to`.
    Convert {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        output: Output,
    },
    /// Cooling and heating monotones at the given gaps.
    Monotones {
        #[arg(short, long)]
        state: PathBuf,
        #[arg(short = 'E', long = "gap", required = true, allow_negative_numbers = true)]
        gaps: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Gaps at which the monotones decide convertibility into the state.
    CriticalEnergies {
        #[arg(short, long)]
        state: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Qubit gaps that can be driven from β to `--beta-tilde`.
    Eset {
        #[arg(short, long)]
        state: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        beta_tilde: f64,
        #[arg(long)]
        e_max: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Qubit resource whose gap set at ratio `--a` is not an interval.
    GapExample {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long)]
        e_max: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// LP feasibility of the conversion `--from` → `--to`.
    Oracle {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Points of the qubit elbow curve F_a(w) on a uniform grid in w.
    Curve {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Elbows of the testing-region boundaries of one or more states.
    Boundary {
        #[arg(short, long, required = true)]
        state: Vec<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

/// Result of a command: the JSON document, an optional side file and the exit code.
struct Report {
    doc: Value,
    side: Option<Side>,
    exit: i32,
}

enum Side {
    Series(Vec<Vec<(f64, f64)>>),
    Raw { csv: Vec<u8>, svg: Vec<u8> },
}

impl Report {
    fn ok(doc: Value) -> Self {
        Report {
            doc,
            side: None,
            exit: EXIT_OK,
        }
    }
}

fn load(path: &Path) -> Result<LoadedState, CliError> {
    StateFile::read(path)?.load()
}

fn load_pair(pair: &Pair) -> Result<(AthermalityState, AthermalityState), CliError> {
    Ok((load(&pair.from)?.state, load(&pair.to)?.state))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Resource and target must share the bath temperature.
fn resource_and_target(state: &Path, target: &Path) -> Result<(AthermalityState, athermal::GibbsContext), CliError> {
    let resource = load(state)?;
    let target = StateFile::read(target)?.system()?;
    if resource.system.beta() != target.beta() {
        return Err(CliError::Input(format!(
            "resource is at beta = {} but target at beta = {}",
            resource.system.beta(),
            target.beta()
        )));
    }
    Ok((resource.state, target))
}

fn execute(command: &Command) -> Result<Report, CliError> {
    Ok(match command {
        Command::Cool { state, target, .. } => {
            let (resource, target) = resource_and_target(state, target)?;
            let report = beta_max(&resource, &target)?;
            Report::ok(json!({
                "beta": target.beta(),
                "beta_max": to_value(&report.beta_max),
                "per_condition": to_value(&report.per_condition),
            }))
        }
        Command::Heat { state, target, .. } => {
            let (resource, target) = resource_and_target(state, target)?;
            let report = beta_min(&resource, &target)?;
            Report::ok(json!({
                "beta": target.beta(),
                "beta_min": to_value(&report.beta_min),
                "per_condition": to_value(&report.per_condition),
            }))
        }
        Command::Overlap {
            state,
            target,
            ground_degeneracy,
            ..
        } => {
            let (resource, target) = resource_and_target(state, target)?;
            let o = max_ground_overlap(&resource, &target, *ground_degeneracy)?;
            Report::ok(json!({
                "ground_degeneracy": ground_degeneracy,
                "equilibrium_overlap": *ground_degeneracy as f64 * target.gibbs()[0],
                "o_max": o,
            }))
        }
        Command::Convert { pair, .. } => {
            let (from, to) = load_pair(pair)?;
            let convertible = relatively_majorizes(&from, &to);
            Report {
                doc: json!({ "convertible": convertible }),
                side: None,
                exit: if convertible { EXIT_OK } else { EXIT_INFEASIBLE },
            }
        }
        Command::Monotones { state, gaps, .. } => {
            let loaded = load(state)?;
            let beta = loaded.system.beta();
            let mut values = Vec::with_capacity(gaps.len());
            for &gap in gaps {
                values.push(json!({
                    "gap": gap,
                    "cooling": to_value(&cooling_monotone(&loaded.state, beta, gap)?),
                    "heating": to_value(&heating_monotone(&loaded.state, beta, gap)?),
                }));
            }
            Report::ok(json!({ "beta": beta, "values": values }))
        }
        Command::CriticalEnergies { state, .. } => {
            let loaded = load(state)?;
            let set = critical_energies(&loaded.state, loaded.system.beta())?;
            Report::ok(to_value(&set))
        }
        Command::Eset {
            state,
            beta_tilde,
            e_max,
            grid,
            ..
        } => {
            let loaded = load(state)?;
            let beta = loaded.system.beta();
            let e_max = e_max.unwrap_or_else(|| default_e_max(beta));
            let set = gap_set(&loaded.state, beta, *beta_tilde, e_max, *grid)?;
            let samples = gap_samples(&loaded.state, beta, *beta_tilde, e_max, *grid)?;
            let mut csv = String::from("energy,phi,member\n");
            for s in &samples {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    athermal::majorization::format_sig17(s.energy),
                    athermal::majorization::format_sig17(s.phi),
                    s.member
                ));
            }
            let boundary: Vec<(f64, f64)> = compute_elbows(&loaded.state).elbows().iter().map(|e| (e.x, e.y)).collect();
            let mut series = vec![boundary];
            if *beta_tilde != beta {
                series.push(curve_points(beta_tilde / beta, 200)?);
            }
            Report {
                doc: json!({
                    "beta": beta,
                    "beta_tilde": beta_tilde,
                    "e_max": e_max,
                    "intervals": to_value(&set.intervals),
                    "resolution": set.resolution,
                    "is_interval": set.is_interval(),
                    "witnesses": to_value(&set.witnesses()),
                }),
                side: Some(Side::Raw {
                    csv: csv.into_bytes(),
                    svg: render_series(&series, PlotFormat::Svg),
                }),
                exit: EXIT_OK,
            }
        }
        Command::GapExample { a, e_max, grid, .. } => {
            let s = construct_gap_example(*a)?;
            let e_max = e_max.unwrap_or_else(|| default_e_max(1.0));
            let set = gap_set(&s, 1.0, *a, e_max, *grid)?;
            let states = [s.clone()];
            Report {
                doc: json!({
                    "a": a,
                    "beta": 1.0,
                    "r": to_value(s.r()),
                    "g": to_value(s.g()),
                    "intervals": to_value(&set.intervals),
                    "witnesses": to_value(&set.witnesses()),
                }),
                side: Some(Side::Raw {
                    csv: render_boundary(&states, PlotFormat::Csv),
                    svg: render_boundary(&states, PlotFormat::Svg),
                }),
                exit: EXIT_OK,
            }
        }
        Command::Oracle { pair, tol, .. } => {
            let (from, to) = load_pair(pair)?;
            let res = lp_relatively_majorizes(&from, &to, *tol)?;
            Report {
                doc: to_value(&res),
                side: None,
                exit: if res.feasible { EXIT_OK } else { EXIT_INFEASIBLE },
            }
        }
        Command::Curve { a, grid, .. } => {
            let points = curve_points(*a, *grid)?;
            Report {
                doc: json!({ "a": a, "points": to_value(&points) }),
                side: Some(Side::Series(vec![points])),
                exit: EXIT_OK,
            }
        }
        Command::Boundary { state, .. } => {
            let states = state.iter().map(|p| load(p).map(|l| l.state)).collect::<Result<Vec<_>, _>>()?;
            let series: Vec<Vec<(f64, f64)>> = states
                .iter()
                .map(|s| compute_elbows(s).elbows().iter().map(|e| (e.x, e.y)).collect())
                .collect();
            let boundaries: Vec<Value> = states.iter().map(|s| json!({ "elbows": to_value(&compute_elbows(s).elbows()) })).collect();
            Report {
                doc: json!({ "boundaries": boundaries }),
                side: Some(Side::Series(series)),
                exit: EXIT_OK,
            }
        }
    })
}

/// `F_a(w)` at `grid` points `w = k/grid`, `k = 1..=grid`.
fn curve_points(a: f64, grid: usize) -> Result<Vec<(f64, f64)>, CliError> {
    if grid == 0 {
        return Err(CliError::Input("grid must be positive".into()));
    }
    (1..=grid)
        .map(|k| fa_point(a, k as f64 / grid as f64).map_err(CliError::from))
        .collect()
}

fn output_of(command: &Command) -> &Output {
    match command {
        Command::Cool { output, .. }
        | Command::Heat { output, .. }
        | Command::Overlap { output, .. }
        | Command::Convert { output, .. }
        | Command::Monotones { output, .. }
        | Command::CriticalEnergies { output, .. }
        | Command::Eset { output, .. }
        | Command::GapExample { output, .. }
        | Command::Oracle { output, .. }
        | Command::Curve { output, .. }
        | Command::Boundary { output, .. } => output,
    }
}

fn write_side(output: &Output, report: &Report, json_text: &str) -> Result<(), CliError> {
    let Some(path) = &output.out else { return Ok(()) };
    let bytes = match (output.format, &report.side) {
        (Format::Json, _) => json_text.as_bytes().to_vec(),
        (Format::Csv, Some(Side::Series(s))) => render_series(s, PlotFormat::Csv),
        (Format::Svg, Some(Side::Series(s))) => render_series(s, PlotFormat::Svg),
        (Format::Csv, Some(Side::Raw { csv, .. })) => csv.clone(),
        (Format::Svg, Some(Side::Raw { svg, .. })) => svg.clone(),
        (format, None) => {
            return Err(CliError::Usage(format!(
                "format {format:?} is not available for this command"
            )))
        }
    };
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn error_doc(code: &str, message: &str) -> String {
    json!({ "error": { "code": code, "message": message } }).to_string()
}

/// Runs the CLI on `args` (including the program name), writing to the given streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let _ = writeln!(stderr, "{}", error_doc("usage", e.to_string().trim()));
            return EXIT_INPUT;
        }
    };
    let result = execute(&cli.command).and_then(|report| {
        let text = serde_json::to_string_pretty(&report.doc).expect("JSON values serialize");
        write_side(output_of(&cli.command), &report, &text)?;
        Ok((text, report.exit))
    });
    match result {
        Ok((text, exit)) => {
            let _ = writeln!(stdout, "{text}");
            exit
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_doc(e.code(), &e.to_string()));
            e.exit_code()
        }
    }
}

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
