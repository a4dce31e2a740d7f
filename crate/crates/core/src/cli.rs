//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime error, 2 usage error.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::config::{SosConfig, StateSize, WindowConfig};
use crate::error::{Error, Result};
use crate::io::csv_input::read_csv_path;
use crate::io::plot::{emit_plot, PlotOptions};
use crate::io::results::{write_results, write_results_to};
use crate::matrix::TimeSeriesMatrix;
use crate::pipeline::{self, resolve_state_size, PipelineConfig, SosChoice};
use crate::regime::DEFAULT_SLOPE_TOL;
use crate::registry::{estimators, result_writers};
use crate::worldbank::{
    assemble_demo_matrix, demo_requests, fetch_all, fetch_indicator, FetchOptions,
    IndicatorRequest, WorldBankApi, API_BASE, CACHE_DIR_ENV, FIXTURE_CACHE_DIR,
};

#[derive(Debug, Parser)]
#[command(
    name = "fisher-info",
    version,
    about = "Fisher information index for multivariate time series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the sliding-window FI series of a CSV time series.
    Compute(ComputeArgs),
    /// Print the size of state estimated from a CSV time series.
    EstimateSos(EstimateArgs),
    /// Run the GDP per capita / population demonstration (USA, 1960-2013).
    Demo(DemoArgs),
    /// Fetch one World Bank indicator into the cache and print it.
    Fetch(FetchArgs),
}

/// Inclusive `a:b` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span<T>(pub T, pub T);

impl<T: FromStr + PartialOrd + Copy + std::fmt::Display> FromStr for Span<T> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected `start:end`, got `{s}`"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<T>()
                .map_err(|_| format!("`{v}` is not a valid bound"))
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a > b {
            return Err(format!("range start {a} exceeds end {b}"));
        }
        Ok(Span(a, b))
    }
}

/// Comma-separated size-of-state values.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaList(pub Vec<f64>);

impl FromStr for DeltaList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_deltas(s).map(DeltaList)
    }
}

fn parse_deltas(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| {
            let v = v.trim();
            match v.parse::<f64>() {
                Ok(d) if d >= 0.0 => Ok(d),
                _ => Err(format!("`{v}` is not a non-negative number")),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// Time steps per window.
    #[arg(long, default_value_t = 8)]
    pub window_size: usize,
    /// Time steps between consecutive windows.
    #[arg(long, default_value_t = 1)]
    pub increment: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SosArgs {
    /// Explicit size of state, one comma-separated value per variable.
    /// Takes precedence over --k and --stable-range.
    #[arg(long, allow_hyphen_values = true)]
    pub sos: Option<DeltaList>,
    /// Chebyshev multiplier for the estimated size of state [default: 2].
    #[arg(long)]
    pub k: Option<f64>,
    /// Inclusive 0-based row range `a:b` of a stable period to estimate from.
    #[arg(long)]
    pub stable_range: Option<Span<usize>>,
    /// Standard deviation estimator.
    #[arg(long, default_value = "sample-sd")]
    pub sd_method: String,
}

impl SosArgs {
    fn choice(&self) -> Result<SosChoice> {
        if let Some(DeltaList(deltas)) = &self.sos {
            if self.k.is_some() || self.stable_range.is_some() {
                log::warn!("--sos given; ignoring --k and --stable-range");
            }
            return Ok(SosChoice::Explicit(StateSize::new(deltas.clone())?));
        }
        let cfg = SosConfig::new(
            self.k.unwrap_or(2.0),
            self.stable_range.map(|Span(a, b)| (a, b)),
        )?;
        estimators().get(&self.sd_method)?;
        Ok(SosChoice::Estimate {
            method: self.sd_method.clone(),
            cfg,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct RegimeArgs {
    /// Slope tolerance (FI units per time step) separating stable from trending.
    #[arg(long, default_value_t = DEFAULT_SLOPE_TOL)]
    pub slope_tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Results file; written to stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Results format (csv, json); inferred from the output extension by default.
    #[arg(long)]
    pub format: Option<String>,
    /// Also write an SVG line chart of the FI series.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    /// Input CSV: header row, time column first, one column per variable.
    #[arg(short, long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub sos: SosArgs,
    #[command(flatten)]
    pub regime: RegimeArgs,
    /// Time-label range `from:to` for the regime verdict [default: whole series].
    #[arg(long)]
    pub regime_range: Option<Span<f64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub k: f64,
    #[arg(long)]
    pub stable_range: Option<Span<usize>>,
    #[arg(long, default_value = "sample-sd")]
    pub sd_method: String,
}

#[derive(Debug, Clone, Args)]
pub struct CacheArgs {
    /// Cache directory [default: the bundled fixture directory].
    #[arg(long, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Never use the network; fail on a cache miss.
    #[arg(long)]
    pub offline: bool,
    /// Ignore cached copies and fetch live data.
    #[arg(long, conflicts_with = "offline")]
    pub refresh: bool,
    /// API base URL.
    #[arg(long, default_value = API_BASE, hide = true)]
    pub api_base: String,
}

impl CacheArgs {
    fn options(&self) -> FetchOptions {
        FetchOptions {
            cache_dir: self
                .cache_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from(FIXTURE_CACHE_DIR)),
            offline: self.offline,
            refresh: self.refresh,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[command(flatten)]
    pub cache: CacheArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub sos: SosArgs,
    #[command(flatten)]
    pub regime: RegimeArgs,
    /// Time-label range `from:to` for the regime verdict.
    #[arg(long, default_value = "1975:2013")]
    pub regime_range: Span<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FetchArgs {
    #[arg(long, default_value = "USA")]
    pub country: String,
    #[arg(long)]
    pub indicator: String,
    #[arg(long, default_value_t = 1960)]
    pub from: i32,
    #[arg(long, default_value_t = 2013)]
    pub to: i32,
    #[command(flatten)]
    pub cache: CacheArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn init_logging() {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format(|buf, record| {
            let level = match record.level() {
                log::Level::Warn => "warning".to_string(),
                l => l.as_str().to_ascii_lowercase(),
            };
            writeln!(buf, "{level}: {}", record.args())
        })
        .try_init();
}

/// Parses `args` and runs the selected command, returning the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    init_logging();
    let result = match cli.command {
        Command::Compute(a) => cmd_compute(&a),
        Command::EstimateSos(a) => cmd_estimate_sos(&a),
        Command::Demo(a) => cmd_demo(&a),
        Command::Fetch(a) => cmd_fetch(&a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn resolve_format(out: &OutputArgs) -> Result<String> {
    let registry = result_writers();
    if let Some(f) = &out.format {
        registry.get(f)?;
        return Ok(f.clone());
    }
    let by_ext = out
        .output
        .as_deref()
        .and_then(Path::extension)
        .and_then(|e| e.to_str())
        .and_then(|ext| registry.iter().find(|w| w.extension() == ext))
        .map(|w| w.name().to_string());
    Ok(by_ext.unwrap_or_else(|| registry.names()[0].to_string()))
}

fn run_and_report(
    matrix: &TimeSeriesMatrix,
    cfg: &PipelineConfig,
    out: &OutputArgs,
    title: &str,
) -> Result<()> {
    let format = resolve_format(out)?;
    let run = pipeline::run(matrix, cfg)?;

    let mut summary = String::new();
    summary.push_str(&format!(
        "FI points: {} (window {}, increment {})\n",
        run.series.len(),
        cfg.window.window_size(),
        cfg.window.increment()
    ));
    let sizes: Vec<String> = matrix
        .labels()
        .iter()
        .zip(run.series.state_size.deltas())
        .map(|(l, d)| format!("{l}={d}"))
        .collect();
    summary.push_str(&format!("size of state: {}\n", sizes.join(" ")));
    match &run.verdict {
        Some(v) => {
            let (a, b) = v.slope_window;
            summary.push_str(&format!(
                "regime: {} (slope {:.6} FI/step, mean FI {:.6}, {}..{})\n",
                v.category,
                v.slope,
                v.mean_fi,
                run.series.points[a].time_label,
                run.series.points[b].time_label
            ));
        }
        None => summary.push_str("regime: not classified (fewer than 2 FI points)\n"),
    }

    match &out.output {
        Some(path) => {
            write_results(&run.document, &format, path)?;
            print!("{summary}");
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_results_to(&run.document, &format, &mut lock)?;
            lock.flush().map_err(|e| Error::io("<stdout>", e))?;
            eprint!("{summary}");
        }
    }

    if let Some(path) = &out.plot {
        let opts = PlotOptions {
            title: title.to_string(),
            ..Default::default()
        };
        emit_plot(&run.series, &opts, path)?;
    }
    Ok(())
}

fn pipeline_config(
    window: &WindowArgs,
    sos: &SosArgs,
    regime: &RegimeArgs,
    range: Option<Span<f64>>,
) -> Result<PipelineConfig> {
    Ok(PipelineConfig {
        window: WindowConfig::new(window.window_size, window.increment)?,
        sos: sos.choice()?,
        slope_tol: regime.slope_tol,
        regime_range: range.map(|Span(a, b)| (a, b)),
    })
}

pub fn cmd_compute(args: &ComputeArgs) -> Result<()> {
    let matrix = read_csv_path(&args.input)?;
    let cfg = pipeline_config(&args.window, &args.sos, &args.regime, args.regime_range)?;
    run_and_report(&matrix, &cfg, &args.output, "Fisher information")
}

pub fn cmd_estimate_sos(args: &EstimateArgs) -> Result<()> {
    let matrix = read_csv_path(&args.input)?;
    let choice = SosChoice::Estimate {
        method: args.sd_method.clone(),
        cfg: SosConfig::new(args.k, args.stable_range.map(|Span(a, b)| (a, b)))?,
    };
    let (size, _) = resolve_state_size(&matrix, &choice)?;
    println!("variable,delta");
    for (label, d) in matrix.labels().iter().zip(size.deltas()) {
        println!("{label},{d}");
    }
    Ok(())
}

pub fn cmd_demo(args: &DemoArgs) -> Result<()> {
    let opts = args.cache.options();
    let api = WorldBankApi::new(args.cache.api_base.clone())?;
    let series = fetch_all(&demo_requests(), &opts, &api)?;
    let matrix = assemble_demo_matrix(&series)?;
    let cfg = pipeline_config(
        &args.window,
        &args.sos,
        &args.regime,
        Some(args.regime_range),
    )?;
    run_and_report(
        &matrix,
        &cfg,
        &args.output,
        "Fisher information: USA GDP per capita and population",
    )
}

pub fn cmd_fetch(args: &FetchArgs) -> Result<()> {
    let req = IndicatorRequest::new(&args.country, &args.indicator, args.from, args.to)?;
    let api = WorldBankApi::new(args.cache.api_base.clone())?;
    let series = fetch_indicator(&req, &args.cache.options(), &api)?;
    let mut body = format!("year,{}\n", series.indicator_id);
    for (y, v) in &series.observations {
        body.push_str(&format!("{y},{v}\n"));
    }
    match &args.output {
        Some(path) => std::fs::write(path, body).map_err(|e| Error::io(path, e)),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}
