//! The `ioha` command line: every analysis of the library as a subcommand
//! writing a CSV, LaTeX or JSON table, plus `serve` for the HTTP API.

use std::ffi::OsString;
use std::io::Write;
use std::net::{Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, ValueEnum};
use ioha_core::pipeline::{parse_targets_csv, RangeSpec, Selection};
use ioha_core::{load_experiment, DataSetCollection, Perspective, ScaleChoice};
use ioha_export::report::{self, Report, Request, Scope, TargetSource};
use ioha_export::{Format, Layout};
use ioha_service::ServiceConfig;
use thiserror::Error;

/// Exit status of a run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Load(#[from] ioha_core::dataset::LoadError),
    #[error(transparent)]
    Analysis(#[from] ioha_core::Error),
    #[error(transparent)]
    Export(#[from] ioha_export::ExportError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Data sets in the archive.
    Summary,
    /// Runtime (fixed-target) or function value (fixed-budget) statistics.
    Stats,
    /// Per-algorithm overview of one function.
    Overview,
    /// Empirical cumulative distribution functions.
    Ecdf,
    /// Area under the fixed-target ECDF.
    Auc,
    /// Pairwise Kolmogorov-Smirnov tests.
    Test,
    /// Glicko-2 ranking over the functions of a dimension.
    Rank,
    /// Statistics of recorded algorithm parameters.
    Params,
    /// Raw aligned samples.
    Samples,
    /// Per-function performance at the radar targets.
    Radar,
    /// Histogram of the sample at one anchor.
    Density,
    /// Run the HTTP API.
    Serve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PerspectiveArg {
    Target,
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Latex,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LayoutArg {
    Long,
    Wide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetSourceArg {
    Default,
    Radar,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    Function,
    Dimension,
}

/// Performance analysis of iterative optimization heuristics.
#[derive(Debug, Parser)]
#[command(name = "ioha", version)]
pub struct Cli {
    pub command: Command,
    /// Data directory or archive (.zip, .tar, .tar.gz, .tar.bz2, .tar.xz).
    pub input: Option<PathBuf>,
    /// Dimension; the smallest one when omitted.
    #[arg(long)]
    dim: Option<u32>,
    /// Function id; the smallest one in the dimension when omitted.
    #[arg(long)]
    func: Option<u32>,
    /// Algorithm to include; repeat for several. All when omitted.
    #[arg(long = "alg", value_name = "NAME")]
    algs: Vec<String>,
    /// Lower end of the target or budget range.
    #[arg(long, allow_negative_numbers = true)]
    fmin: Option<f64>,
    /// Upper end of the target or budget range.
    #[arg(long, allow_negative_numbers = true)]
    fmax: Option<f64>,
    /// Spacing between anchors, in decades on a log scale.
    #[arg(long, conflicts_with = "count")]
    step: Option<f64>,
    /// Number of evenly spaced anchors.
    #[arg(long)]
    count: Option<usize>,
    /// Anchor spacing; auto picks log when the range spans two decades.
    #[arg(long, value_enum, default_value = "auto")]
    scale: ScaleArg,
    /// Fixed-target (runtimes) or fixed-budget (function values).
    #[arg(long, value_enum, default_value = "target")]
    perspective: PerspectiveArg,
    /// CSV table of funcId,target rows.
    #[arg(long, value_name = "PATH")]
    targets_file: Option<PathBuf>,
    /// Where per-function targets come from.
    #[arg(long, value_enum)]
    target_source: Option<TargetSourceArg>,
    /// Aggregate ECDFs over one function or the whole dimension.
    #[arg(long, value_enum, default_value = "function")]
    scope: ScopeArg,
    /// Single target or budget for `test` and `density`.
    #[arg(long, allow_negative_numbers = true)]
    anchor: Option<f64>,
    /// Target defining success in fixed-budget statistics.
    #[arg(long, allow_negative_numbers = true)]
    success_target: Option<f64>,
    /// Significance level of the KS tests after Bonferroni correction.
    #[arg(long, default_value_t = ioha_core::comparison::DEFAULT_ALPHA)]
    alpha: f64,
    /// Glicko-2 rounds.
    #[arg(long, default_value_t = ioha_core::comparison::DEFAULT_ROUNDS)]
    rounds: usize,
    /// Seed of the ranking game sampler.
    #[arg(long, default_value_t = ioha_core::comparison::DEFAULT_SEED)]
    seed: u64,
    /// Lower end of the AUC budget range; 1 when omitted.
    #[arg(long)]
    t_min: Option<f64>,
    /// Upper end of the AUC budget range; the largest budget when omitted.
    #[arg(long)]
    t_max: Option<f64>,
    /// Parameter names for `params`; all when omitted.
    #[arg(long = "param", value_name = "NAME")]
    params: Vec<String>,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Sample table layout: one row per value, or one column per run.
    #[arg(long, value_enum, default_value = "long")]
    layout: LayoutArg,
    /// Output file; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Port for `serve`.
    #[arg(long, default_value_t = ioha_service::DEFAULT_PORT)]
    port: u16,
    /// Upload size limit for `serve`.
    #[arg(long, default_value_t = 100)]
    max_upload_mb: usize,
    /// Idle minutes before a session expires.
    #[arg(long, default_value_t = 60)]
    session_ttl_min: u64,
    /// Only origin allowed by CORS; any origin when omitted.
    #[arg(long, value_name = "ORIGIN")]
    allow_origin: Option<String>,
    /// Directory of UI assets to serve at `/`.
    #[arg(long, value_name = "PATH")]
    static_dir: Option<PathBuf>,
}

impl Cli {
    fn request(&self) -> Result<Request, CliError> {
        let target_map = match (&self.targets_file, self.target_source) {
            (Some(path), None | Some(TargetSourceArg::File)) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                Some(parse_targets_csv(&text)?)
            }
            (None, Some(TargetSourceArg::File)) => {
                return Err(CliError::Usage("--target-source file needs --targets-file".into()))
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "--targets-file only combines with --target-source file".into(),
                ))
            }
            (None, _) => None,
        };
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(CliError::Usage(format!(
                "--alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(Request {
            selection: Selection {
                func_id: self.func,
                dimension: self.dim,
                algorithms: self.algs.clone(),
            },
            perspective: match self.perspective {
                PerspectiveArg::Target => Perspective::FixedTarget,
                PerspectiveArg::Budget => Perspective::FixedBudget,
            },
            range: RangeSpec {
                min: self.fmin,
                max: self.fmax,
                step: self.step,
                count: self.count,
                scale: match self.scale {
                    ScaleArg::Linear => ScaleChoice::Linear,
                    ScaleArg::Log => ScaleChoice::Log,
                    ScaleArg::Auto => ScaleChoice::Auto,
                },
            },
            anchors: None,
            target_map,
            target_source: match self.target_source {
                Some(TargetSourceArg::Radar) => TargetSource::Radar,
                _ => TargetSource::Default,
            },
            scope: match self.scope {
                ScopeArg::Function => Scope::Function,
                ScopeArg::Dimension => Scope::Dimension,
            },
            anchor: self.anchor,
            success_target: self.success_target,
            alpha: self.alpha,
            rounds: self.rounds,
            seed: self.seed,
            t_min: self.t_min,
            t_max: self.t_max,
            params: self.params.clone(),
            layout: match self.layout {
                LayoutArg::Long => Layout::Long,
                LayoutArg::Wide => Layout::Wide,
            },
        })
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Latex => Format::Latex,
            FormatArg::Json => Format::Json,
        }
    }

    fn load(&self) -> Result<DataSetCollection, CliError> {
        let path = self
            .input
            .as_ref()
            .ok_or_else(|| CliError::Usage("missing <INPUT> data directory or archive".into()))?;
        if !path.exists() {
            return Err(CliError::Io {
                path: path.clone(),
                source: std::io::ErrorKind::NotFound.into(),
            });
        }
        Ok(load_experiment(path)?)
    }
}

/// Runs an analysis subcommand and returns the rendered output.
pub fn render(cli: &Cli) -> Result<String, CliError> {
    let req = cli.request()?;
    let c = cli.load()?;
    let rep: Report = match cli.command {
        Command::Summary => report::summary(&c),
        Command::Stats => report::stats(&c, &req)?,
        Command::Overview => report::overview(&c, &req)?,
        Command::Ecdf => report::ecdf(&c, &req)?,
        Command::Auc => report::auc(&c, &req)?,
        Command::Test => report::test(&c, &req)?,
        Command::Rank => report::rank(&c, &req)?,
        Command::Params => report::params(&c, &req)?,
        Command::Samples => report::samples(&c, &req)?,
        Command::Radar => report::radar(&c, &req)?,
        Command::Density => report::density(&c, &req)?,
        Command::Serve => return Err(CliError::Usage("`serve` produces no table".into())),
    };
    match cli.format() {
        Format::Json => {
            let body = serde_json::to_string_pretty(&rep.to_json()).map_err(ioha_export::ExportError::from)?;
            Ok(format!("{body}\n"))
        }
        f => Ok(rep.table.render(f)?),
    }
}

fn serve(cli: &Cli) -> Result<(), CliError> {
    let config = ServiceConfig {
        max_upload_bytes: cli.max_upload_mb.saturating_mul(1024 * 1024),
        session_ttl: Duration::from_secs(cli.session_ttl_min.saturating_mul(60)),
        allow_origin: cli.allow_origin.clone(),
        static_dir: cli.static_dir.clone(),
    };
    let addr = SocketAddr::from((Ipv4Addr::UNSPECIFIED, cli.port));
    let rt = tokio::runtime::Runtime::new().map_err(|source| CliError::Io {
        path: PathBuf::from("<runtime>"),
        source,
    })?;
    rt.block_on(ioha_service::serve(addr, config))
        .map_err(|source| CliError::Io {
            path: PathBuf::from(addr.to_string()),
            source,
        })
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    if cli.command == Command::Serve {
        return serve(cli);
    }
    let out = render(cli)?;
    match &cli.out {
        Some(path) => std::fs::write(path, out).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => stdout.write_all(out.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Errors go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
