//! `barnopt`: envelope optimization for barn-type houses from the command line.
//!
//! Exit codes: 0 success, 1 internal or I/O failure, 2 invalid input.

mod audit;
mod output;

use std::fs;
use std::io::Write as _;
use std::net::IpAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use barn_core::export::{self, to_json};
use barn_core::fields::{
    compactness_contours, compactness_field, floor_curve, surface_field, sweep_curves, AxisRange,
    DEFAULT_FIELD_RESOLUTION, DEFAULT_RATIO_RANGE,
};
use barn_core::geometry::check_solver_slope;
use barn_core::verify::{run_verification, DEFAULT_CASES, DEFAULT_SEED};
use barn_core::{assess, optimize_fixed_floor, optimize_fixed_volume, BarnError, HouseParams};
use barn_service::ServiceConfig;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "barnopt", version, about = "Optimal proportions and compactness of barn-type houses")]
struct Cli {
    /// Output format. Reports default to text, data exports to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; `-` writes to stdout.
    #[arg(long, global = true, default_value = "-")]
    out: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldKind {
    Surface,
    Compactness,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum-envelope proportions for a given volume and roof slope.
    OptimizeVolume {
        #[arg(long)]
        volume: f64,
        /// Roof slope in degrees.
        #[arg(long)]
        alpha: f64,
    },
    /// Minimum-envelope width and length for a given floor area and wall height.
    OptimizeFloor {
        #[arg(long)]
        floor: f64,
        #[arg(long)]
        height: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Compare one design with both optima.
    Assess {
        #[arg(long)]
        width: f64,
        #[arg(long)]
        length: f64,
        #[arg(long)]
        height: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Assess every house in a CSV file with header `name,W,L,H,alpha_deg`.
    Audit { csv: PathBuf },
    /// Sample S(r, k) or the compactness ratio over a grid of shape ratios.
    Field {
        /// Defaults to `surface` when --volume is given, else `compactness`.
        #[arg(long, value_enum)]
        kind: Option<FieldKind>,
        #[arg(long)]
        volume: Option<f64>,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        window: Window,
    },
    /// Level curves of the compactness ratio.
    Contours {
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<f64>,
        #[command(flatten)]
        window: Window,
    },
    /// Optimal W, L, H across a range of roof slopes.
    Sweep {
        #[arg(long)]
        volume: f64,
        #[arg(long)]
        alpha_min: f64,
        #[arg(long)]
        alpha_max: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// S(W) at fixed floor area and wall height.
    Curve {
        #[arg(long)]
        floor: f64,
        #[arg(long)]
        height: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, requires = "wmax")]
        wmin: Option<f64>,
        #[arg(long, requires = "wmin")]
        wmax: Option<f64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Cross-check the closed forms against the brute-force oracle.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: usize,
        #[arg(long, hide = true)]
        perturb: Option<f64>,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        bind: Option<IpAddr>,
        /// Extra allowed CORS origin; repeatable.
        #[arg(long = "cors-allow")]
        cors_allow: Vec<String>,
        /// TOML file with `bind`, `port` and `cors_allow`.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
struct Window {
    #[arg(long, default_value_t = DEFAULT_RATIO_RANGE.min)]
    rmin: f64,
    #[arg(long, default_value_t = DEFAULT_RATIO_RANGE.max)]
    rmax: f64,
    #[arg(long, default_value_t = DEFAULT_RATIO_RANGE.min)]
    kmin: f64,
    #[arg(long, default_value_t = DEFAULT_RATIO_RANGE.max)]
    kmax: f64,
    /// Grid intervals per axis.
    #[arg(long, default_value_t = DEFAULT_FIELD_RESOLUTION)]
    res: usize,
}

impl Window {
    fn ranges(&self) -> (AxisRange, AxisRange) {
        (AxisRange::new(self.rmin, self.rmax), AxisRange::new(self.kmin, self.kmax))
    }
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

fn flag_for(param: &str) -> &'static str {
    match param {
        "V" => "--volume",
        "F" => "--floor",
        "H" => "--height",
        "W" => "--width",
        "L" => "--length",
        "alpha" => "--alpha",
        "alpha_max" => "--alpha-max",
        "r" => "--rmin/--rmax",
        "k" => "--kmin/--kmax",
        "resolution" => "--res",
        "samples" => "--samples",
        "levels" => "--levels",
        _ => "input",
    }
}

impl From<BarnError> for CliError {
    fn from(err: BarnError) -> Self {
        match &err {
            BarnError::SolverFailure(_) => CliError::Internal(err.to_string()),
            _ => match err.parameter() {
                Some(p) => CliError::Invalid(format!("{}: {}", flag_for(p), err.describe_in_degrees())),
                None => CliError::Invalid(err.describe_in_degrees()),
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    to_json(value).map_err(|e| CliError::Internal(format!("serialization failed: {e}")))
}

fn emit(out: &str, body: &str) -> CliResult<()> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(body.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Internal(format!("writing to stdout: {e}")))
    } else {
        fs::write(out, body).map_err(|e| CliError::Internal(format!("writing {out}: {e}")))
    }
}

fn report<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> CliResult<String> {
    match format {
        Format::Text => Ok(text(value)),
        Format::Json => json(value),
        Format::Csv => output::flat_csv(value),
    }
}

fn run(cli: Cli) -> CliResult<(String, u8)> {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    let body = match cli.command {
        Command::OptimizeVolume { volume, alpha } => {
            let opt = optimize_fixed_volume(volume, alpha.to_radians())?;
            report(fmt(Format::Text), &opt, output::volume_text)?
        }
        Command::OptimizeFloor { floor, height, alpha } => {
            let opt = optimize_fixed_floor(floor, height, alpha.to_radians())?;
            report(fmt(Format::Text), &opt, output::floor_text)?
        }
        Command::Assess { width, length, height, alpha } => {
            let p = HouseParams::from_degrees(width, length, height, alpha)?;
            report(fmt(Format::Text), &assess(&p)?, output::assess_text)?
        }
        Command::Audit { csv } => {
            let file = fs::File::open(&csv)
                .map_err(|e| CliError::Internal(format!("reading {}: {e}", csv.display())))?;
            let outcome = audit::audit(file)?;
            for e in &outcome.errors {
                eprintln!("error: row {}: {}", e.row, e.message);
            }
            let body = match fmt(Format::Text) {
                Format::Text => output::audit_text(&outcome.rows),
                Format::Json => json(&outcome)?,
                Format::Csv => output::rows_csv(&outcome.rows)?,
            };
            let code = if outcome.errors.is_empty() { 0 } else { 2 };
            return Ok((body, code));
        }
        Command::Field { kind, volume, alpha, window } => {
            let (r, k) = window.ranges();
            let alpha = alpha.to_radians();
            let kind = kind.unwrap_or(if volume.is_some() {
                FieldKind::Surface
            } else {
                FieldKind::Compactness
            });
            let field = match (kind, volume) {
                (FieldKind::Surface, Some(v)) => surface_field(v, alpha, r, k, window.res)?,
                (FieldKind::Surface, None) => {
                    return Err(CliError::Invalid("--volume is required for --kind surface".into()))
                }
                (FieldKind::Compactness, _) => compactness_field(alpha, r, k, window.res)?,
            };
            match fmt(Format::Json) {
                Format::Json => json(&field)?,
                Format::Csv => export::field_to_csv(&field),
                Format::Text => output::field_text(&field),
            }
        }
        Command::Contours { alpha, levels, window } => {
            let (r, k) = window.ranges();
            let set = compactness_contours(alpha.to_radians(), &levels, r, k, window.res)?;
            match fmt(Format::Json) {
                Format::Json => json(&set)?,
                Format::Csv => export::contours_to_csv(&set),
                Format::Text => output::contours_text(&set),
            }
        }
        Command::Sweep { volume, alpha_min, alpha_max, samples } => {
            let (lo, hi) = (alpha_min.to_radians(), alpha_max.to_radians());
            check_solver_slope(lo)
                .map_err(|e| CliError::Invalid(format!("--alpha-min: {}", e.describe_in_degrees())))?;
            check_solver_slope(hi)
                .map_err(|e| CliError::Invalid(format!("--alpha-max: {}", e.describe_in_degrees())))?;
            let sweep = sweep_curves(volume, lo, hi, samples)?;
            match fmt(Format::Json) {
                Format::Json => json(&sweep)?,
                Format::Csv | Format::Text => export::sweep_to_csv(&sweep),
            }
        }
        Command::Curve { floor, height, alpha, wmin, wmax, samples } => {
            let range = wmin.zip(wmax).map(|(a, b)| AxisRange::new(a, b));
            let curve = floor_curve(floor, height, alpha.to_radians(), range, samples)
                .map_err(|e| match e.parameter() {
                    Some("W") => CliError::Invalid(format!("--wmin/--wmax: {e}")),
                    _ => e.into(),
                })?;
            match fmt(Format::Json) {
                Format::Json => json(&curve)?,
                Format::Csv | Format::Text => export::curve_to_csv(&curve),
            }
        }
        Command::Verify { seed, cases, perturb } => {
            if cases == 0 {
                return Err(CliError::Invalid("--cases: at least one case is required".into()));
            }
            let rep = run_verification(seed, cases, perturb)?;
            let body = report(fmt(Format::Text), &rep, output::verify_text)?;
            if rep.all_passed {
                body
            } else {
                let (v, f) = rep.failures();
                let dump = json(&serde_json::json!({ "volume_cases": v, "floor_cases": f }))?;
                eprint!("verification failed; failing cases:\n{dump}");
                return Ok((body, 1));
            }
        }
        Command::Serve { port, bind, cors_allow, config } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| CliError::Internal(format!("reading {}: {e}", path.display())))?;
                    ServiceConfig::from_toml(&text)
                        .map_err(|e| CliError::Invalid(format!("--config {}: {e}", path.display())))?
                }
                None => ServiceConfig::default(),
            };
            if let Some(p) = port {
                cfg.port = p;
            }
            if let Some(b) = bind {
                cfg.bind = b;
            }
            cfg.cors_allow.extend(cors_allow);
            serve(cfg)?;
            String::new()
        }
    };
    Ok((body, 0))
}

fn serve(cfg: ServiceConfig) -> CliResult<()> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    let rt = tokio::runtime::Runtime::new()
        .map_err(|e| CliError::Internal(format!("starting runtime: {e}")))?;
    rt.block_on(barn_service::serve(cfg))
        .map_err(|e| CliError::Internal(format!("server: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli).and_then(|(body, code)| emit(&out, &body).map(|_| code)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
