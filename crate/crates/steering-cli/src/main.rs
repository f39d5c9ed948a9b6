//! `steering` — boundary sweeps, steering-game simulations, and Gaussian
//! covariance-matrix checks from the command line.
//!
//! Exit codes: 0 on success, 1 on domain errors (invalid parameters or
//! covariance matrices), 2 on usage errors and malformed input files.
//! stdout carries only data; diagnostics go to stderr.

mod format;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use format::fmt_g9;
use steering_core::gaussian::{
    self, is_separable_two_mode, is_steerable_gaussian, is_valid_cm, non_steering_ensemble_cm,
    reid_epr_product, steering_witness_measurement, CovarianceMatrix,
};
use steering_core::{
    gaussian_symmetric_boundaries, inept_boundaries, inept_cheat_simulation, isotropic_boundaries,
    isotropic_cheat_overlap, werner_boundaries, werner_cheat_overlap, BoundaryReport, Error,
    SimOutcome,
};

/// Directory prepended to relative `--output` paths when set.
const OUTPUT_DIR_ENV: &str = "STEERING_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "steering",
    about = "Separable / steerable / Bell-nonlocal state classification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep hierarchy boundaries over a parameter grid.
    Boundary(BoundaryArgs),
    /// Monte Carlo simulation of the optimal cheating strategy.
    Simulate(SimulateArgs),
    /// Covariance-matrix checks on a JSON file.
    Gaussian {
        #[command(subcommand)]
        action: GaussianAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryFamily {
    Werner,
    Isotropic,
    Inept,
    GaussianSymmetric,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct BoundaryArgs {
    /// State family to sweep.
    #[arg(value_enum)]
    family: BoundaryFamily,
    /// Grid: `start:stop:count` (linear, inclusive) or a comma list.
    /// Werner and isotropic grids must be integers d >= 2.
    #[arg(long)]
    grid: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Output file; stdout when omitted. Relative paths land in
    /// $STEERING_OUTPUT_DIR when that is set.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimFamilyArg {
    Werner,
    Isotropic,
    Inept,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    family: SimFamilyArg,
    /// Dimension (werner / isotropic).
    #[arg(long)]
    d: Option<usize>,
    /// Entanglement parameter ε (inept).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Mixing parameter η.
    #[arg(long)]
    eta: f64,
    #[arg(long)]
    shots: u64,
    #[arg(long)]
    seed: u64,
    /// Worker threads for the shot loop (default: rayon's choice). Results
    /// are identical for any value.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GaussianAction {
    /// Validity, separability, steerability, and the Reid EPR product.
    Check {
        #[arg(long)]
        cm: PathBuf,
    },
    /// Steering-witness measurement CM for a steerable state.
    Witness {
        #[arg(long)]
        cm: PathBuf,
    },
    /// Simulating-ensemble CM U for a non-steerable state.
    Ensemble {
        #[arg(long)]
        cm: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedInput(_) => Failure::usage(e.to_string()),
            _ => Failure::domain(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Boundary(args) => cmd_boundary(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Gaussian { action } => cmd_gaussian(action),
    }
}

// ── boundary ────────────────────────────────────────────────────────────────

fn cmd_boundary(args: BoundaryArgs) -> Result<(), Failure> {
    let grid = parse_grid(&args.grid)?;
    let reports: Vec<BoundaryReport> = match args.family {
        BoundaryFamily::Werner => integer_grid(&grid)?
            .into_iter()
            .map(werner_boundaries)
            .collect::<Result<_, _>>()?,
        BoundaryFamily::Isotropic => integer_grid(&grid)?
            .into_iter()
            .map(isotropic_boundaries)
            .collect::<Result<_, _>>()?,
        BoundaryFamily::Inept => grid
            .iter()
            .map(|&e| inept_boundaries(e))
            .collect::<Result<_, _>>()?,
        BoundaryFamily::GaussianSymmetric => grid
            .iter()
            .map(|&n| gaussian_symmetric_boundaries(n))
            .collect::<Result<_, _>>()?,
    };
    let integer_param = matches!(
        args.family,
        BoundaryFamily::Werner | BoundaryFamily::Isotropic
    );
    let text = match args.format {
        OutputFormat::Csv => render_boundary_csv(&reports, integer_param),
        OutputFormat::Json => render_boundary_json(&reports, integer_param),
    };
    emit(args.output.as_deref(), &text)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = |detail: &str| Failure::usage(format!("bad grid '{spec}': {detail}"));
    let values: Vec<f64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("want start:stop:count"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("start is not a number"))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad("stop is not a number"))?;
        let count: usize = parts[2].parse().map_err(|_| bad("count is not an integer"))?;
        if count == 0 {
            return Err(bad("count must be at least 1"));
        }
        if count == 1 {
            vec![start]
        } else {
            (0..count)
                .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                .collect()
        }
    } else {
        spec.split(',')
            .map(|tok| tok.trim().parse::<f64>().map_err(|_| bad("not a number")))
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(bad("empty grid"));
    }
    Ok(values)
}

fn integer_grid(grid: &[f64]) -> Result<Vec<u64>, Failure> {
    grid.iter()
        .map(|&v| {
            if v.fract() == 0.0 && v >= 0.0 && v <= u64::MAX as f64 {
                Ok(v as u64)
            } else {
                Err(Failure::domain(format!(
                    "dimension grid values must be integers, got {v}"
                )))
            }
        })
        .collect()
}

const BOUNDARY_COLUMNS: &str = "param,eta_ent,eta_steer,eta_steer_kind,eta_bell_lower,eta_bell_upper";

fn fmt_param(value: f64, integer: bool) -> String {
    if integer {
        format!("{}", value as u64)
    } else {
        fmt_g9(value)
    }
}

fn render_boundary_csv(reports: &[BoundaryReport], integer_param: bool) -> String {
    let mut out = String::from(BOUNDARY_COLUMNS);
    out.push('\n');
    for r in reports {
        let opt = |v: Option<f64>| v.map(fmt_g9).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_param(r.param, integer_param),
            fmt_g9(r.eta_ent),
            fmt_g9(r.eta_steer),
            r.eta_steer_kind.name(),
            opt(r.eta_bell_lower),
            opt(r.eta_bell_upper),
        ));
    }
    out
}

fn render_boundary_json(reports: &[BoundaryReport], integer_param: bool) -> String {
    let mut out = String::from("[\n");
    for (i, r) in reports.iter().enumerate() {
        let opt = |v: Option<f64>| v.map(fmt_g9).unwrap_or_else(|| "null".to_string());
        out.push_str(&format!(
            "  {{\"param\": {}, \"eta_ent\": {}, \"eta_steer\": {}, \"eta_steer_kind\": \"{}\", \"eta_bell_lower\": {}, \"eta_bell_upper\": {}}}{}\n",
            fmt_param(r.param, integer_param),
            fmt_g9(r.eta_ent),
            fmt_g9(r.eta_steer),
            r.eta_steer_kind.name(),
            opt(r.eta_bell_lower),
            opt(r.eta_bell_upper),
            if i + 1 < reports.len() { "," } else { "" },
        ));
    }
    out.push_str("]\n");
    out
}

// ── simulate ────────────────────────────────────────────────────────────────

fn cmd_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let outcome = run_in_pool(args.threads, || -> Result<SimOutcome, Failure> {
        match args.family {
            SimFamilyArg::Werner => {
                let d = args
                    .d
                    .ok_or_else(|| Failure::usage("werner simulation needs --d"))?;
                Ok(werner_cheat_overlap(d, args.eta, args.shots, args.seed)?)
            }
            SimFamilyArg::Isotropic => {
                let d = args
                    .d
                    .ok_or_else(|| Failure::usage("isotropic simulation needs --d"))?;
                Ok(isotropic_cheat_overlap(d, args.eta, args.shots, args.seed)?)
            }
            SimFamilyArg::Inept => {
                let epsilon = args
                    .epsilon
                    .ok_or_else(|| Failure::usage("inept simulation needs --epsilon"))?;
                Ok(inept_cheat_simulation(epsilon, args.eta, args.shots, args.seed)?.outcome)
            }
        }
    })?;
    let text = format!(
        "{{\"empirical\": {}, \"std_error\": {}, \"theoretical_quantum\": {}, \"theoretical_cheat_bound\": {}, \"verdict\": \"{}\"}}\n",
        fmt_g9(outcome.empirical),
        fmt_g9(outcome.std_error),
        fmt_g9(outcome.theoretical_quantum),
        fmt_g9(outcome.theoretical_cheat_bound),
        outcome.verdict.name(),
    );
    emit(args.output.as_deref(), &text)
}

fn run_in_pool<T>(
    threads: Option<usize>,
    job: impl FnOnce() -> Result<T, Failure> + Send,
) -> Result<T, Failure>
where
    T: Send,
{
    match threads {
        None => job(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::usage(format!("cannot build thread pool: {e}")))?;
            pool.install(job)
        }
    }
}

// ── gaussian ────────────────────────────────────────────────────────────────

fn cmd_gaussian(action: GaussianAction) -> Result<(), Failure> {
    match action {
        GaussianAction::Check { cm } => {
            let v = load_cm(&cm)?;
            let separable = if v.n_modes_a() == 1 && v.n_modes_b() == 1 {
                Some(is_separable_two_mode(&v)?)
            } else {
                None
            };
            let reid = reid_epr_product(&v).ok();
            let text = format!(
                "{{\"valid\": true, \"separable\": {}, \"steerable\": {}, \"reid_product\": {}}}\n",
                separable.map(|b| b.to_string()).unwrap_or_else(|| "null".into()),
                is_steerable_gaussian(&v),
                reid.map(fmt_g9).unwrap_or_else(|| "null".into()),
            );
            emit(None, &text)
        }
        GaussianAction::Witness { cm } => {
            let v = load_cm(&cm)?;
            let witness = steering_witness_measurement(&v)?;
            let text = format!(
                "{{\"t_a\": {}}}\n",
                render_real_matrix(&witness.measurement.to_rows())
            );
            emit(None, &text)
        }
        GaussianAction::Ensemble { cm } => {
            let v = load_cm(&cm)?;
            let u = non_steering_ensemble_cm(&v)?;
            let text = format!("{{\"u\": {}}}\n", render_real_matrix(&gaussian::matrix_rows(&u)));
            emit(None, &text)
        }
    }
}

fn load_cm(path: &Path) -> Result<CovarianceMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let v = CovarianceMatrix::from_json_str(&text)?;
    if !is_valid_cm(&v) {
        return Err(Failure::domain(
            "invalid covariance matrix: V + iΣ is not positive semidefinite",
        ));
    }
    Ok(v)
}

fn render_real_matrix(rows: &[Vec<f64>]) -> String {
    let body: Vec<String> = rows
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|&x| fmt_g9(x)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", body.join(", "))
}

// ── output plumbing ─────────────────────────────────────────────────────────

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let resolved = match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.to_path_buf(),
            };
            fs::write(&resolved, text)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", resolved.display())))
        }
    }
}
