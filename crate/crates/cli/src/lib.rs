//! `mbqc-vote` command line.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 resource limit,
//! 4 numerical failure.

pub mod recommend;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use mbqc_vote::analytics::{FanOut, DEFAULT_ANY_N_MAX, DEFAULT_GRID_N_MAX};
use mbqc_vote::montecarlo::{
    analytic, compare_to_prediction, run_experiment_with_workers, CalibrationFile,
    ExperimentConfig, Predictor, SweepTable, TableFormat,
};
use mbqc_vote::Error;

#[derive(Debug, Parser)]
#[command(name = "mbqc-vote", version, about = "Majority-vote measurement error mitigation for one-way quantum computation")]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Table format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => TableFormat::Csv,
            Format::Json => TableFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Topology {
    Linear,
    LogDepth,
}

impl From<Topology> for FanOut {
    fn from(t: Topology) -> Self {
        match t {
            Topology::Linear => FanOut::Linear,
            Topology::LogDepth => FanOut::LogDepth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Approx,
    Exact,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig5,
    ZeroNoise,
    Fig7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PredictorArg {
    #[value(alias = "eq2")]
    Binomial,
    #[value(alias = "eq9")]
    Effective,
    #[value(alias = "eq10")]
    Estimate,
}

impl From<PredictorArg> for Predictor {
    fn from(p: PredictorArg) -> Self {
        match p {
            PredictorArg::Binomial => Predictor::Binomial,
            PredictorArg::Effective => Predictor::Effective,
            PredictorArg::Estimate => Predictor::Estimate,
        }
    }
}

/// Lists are comma separated (`0.01,0.05`) or inclusive ranges
/// `start:stop:step` (`0:0.2:0.001`), or a mix (`1,3:9:2`).
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Misidentification probability of an N-vote majority.
    Misid {
        #[arg(long)]
        r: String,
        #[arg(long)]
        n: String,
    },
    /// Smallest odd vote count reaching a target misidentification.
    RequiredN {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        r: String,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Continuous-N upper bound against the log-depth effective error.
    EpsEst {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        n: String,
    },
    /// Regime classification over a γ grid.
    Regimes {
        #[arg(long)]
        r: String,
        #[arg(long = "gamma-grid")]
        gamma_grid: String,
    },
    /// Both regime boundaries in γ.
    CriticalGamma {
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = DEFAULT_ANY_N_MAX)]
        n_max: u32,
    },
    /// Odd N with the smallest misidentification.
    BestN(GridArgs),
    /// First odd N that improves on a single vote (0 if none).
    FirstN(GridArgs),
    /// Run a Monte Carlo experiment.
    Simulate(SimulateArgs),
    /// Size a verification register for every qubit of a calibration file.
    Recommend {
        calibration: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Topology::LogDepth)]
        topology: Topology,
    },
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub r: String,
    #[arg(long)]
    pub gamma: String,
    #[arg(long, default_value_t = DEFAULT_GRID_N_MAX)]
    pub n_max: u32,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Experiment configuration (JSON).
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Use the full 1000 × 10000 sampling for the fig5 preset.
    #[arg(long)]
    pub full_scale: bool,
    /// Override the master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores). Does not change the output.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Compare the table with a prediction.
    #[arg(long, value_enum)]
    pub predict: Option<PredictorArg>,
    /// Where to write the comparison report; defaults to `<out>.report.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooManyQubits { .. } => 3,
            Error::NoRoot { .. }
            | Error::NoConvergence { .. }
            | Error::NormCollapse
            | Error::CapExceeded { .. } => 4,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    usage(format!("{}: {e}", path.display()))
}

/// Parse a list of numbers, see [`Command`].
pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| usage(format!("`{t}` is not a number")))
        };
        match fields.as_slice() {
            [x] => out.push(num(x)?),
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if step.is_nan() || step <= 0.0 || b < a {
                    return Err(usage(format!("bad range `{part}` (need start <= stop and step > 0)")));
                }
                let count = ((b - a) / step + 1e-9).floor() as usize + 1;
                if count > 10_000_000 {
                    return Err(usage(format!("range `{part}` has too many points")));
                }
                out.extend((0..count).map(|i| a + i as f64 * step));
            }
            _ => return Err(usage(format!("bad list element `{part}`"))),
        }
    }
    if out.is_empty() {
        return Err(usage("empty list"));
    }
    Ok(out)
}

pub fn parse_int_list(s: &str) -> Result<Vec<u32>, CliError> {
    parse_list(s)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
                Ok(x as u32)
            } else {
                Err(usage(format!("`{x}` is not a non-negative integer")))
            }
        })
        .collect()
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| io_error(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(args: &SimulateArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = match (&args.config, args.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            ExperimentConfig::from_json(&text)?
        }
        (None, Some(Preset::Fig5)) => ExperimentConfig::fig5_preset(0, args.full_scale),
        (None, Some(Preset::ZeroNoise)) => ExperimentConfig::zero_noise_preset(0),
        (None, Some(Preset::Fig7)) => ExperimentConfig::fig7_preset(0),
        (None, None) => return Err(usage("simulate needs a config file or --preset")),
    };
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    Ok(config)
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> Result<(), CliError> {
    let config = load_config(args)?;
    let table = run_experiment_with_workers(&config, args.workers)?;
    write_output(cli.out.as_deref(), &table.render(cli.format.into()))?;
    if let Some(predictor) = args.predict {
        let report = compare_to_prediction(&table, predictor.into())?;
        eprintln!("{}", report.summary());
        let path = args
            .report
            .clone()
            .or_else(|| cli.out.as_ref().map(|o| PathBuf::from(format!("{}.report.json", o.display()))));
        if let Some(path) = path {
            let json = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
            std::fs::write(&path, json).map_err(|e| io_error(&path, e))?;
        }
    }
    Ok(())
}

fn emit(cli: &Cli, table: SweepTable) -> Result<(), CliError> {
    write_output(cli.out.as_deref(), &table.render(cli.format.into()))
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Misid { r, n } => emit(cli, analytic::misid_table(&parse_list(r)?, &parse_int_list(n)?)?),
        Command::RequiredN { eps, r, method } => {
            let method = match method {
                Method::Approx => analytic::SizingMethod::Approx,
                Method::Exact => analytic::SizingMethod::Exact,
                Method::Both => analytic::SizingMethod::Both,
            };
            emit(cli, analytic::required_n_table(&parse_list(eps)?, &parse_list(r)?, method)?)
        }
        Command::EpsEst { r, gamma, n } => {
            emit(cli, analytic::eps_est_table(*r, &parse_list(gamma)?, &parse_list(n)?)?)
        }
        Command::Regimes { r, gamma_grid } => {
            emit(cli, analytic::regimes_table(&parse_list(r)?, &parse_list(gamma_grid)?)?)
        }
        Command::CriticalGamma { r, n_max } => {
            emit(cli, analytic::critical_gamma_table(&parse_list(r)?, *n_max)?)
        }
        Command::BestN(g) => emit(
            cli,
            analytic::best_n_table(&parse_list(&g.r)?, &parse_list(&g.gamma)?, g.n_max)?,
        ),
        Command::FirstN(g) => emit(
            cli,
            analytic::first_n_table(&parse_list(&g.r)?, &parse_list(&g.gamma)?, g.n_max)?,
        ),
        Command::Simulate(args) => simulate(cli, args),
        Command::Recommend {
            calibration,
            eps,
            topology,
        } => {
            let text = std::fs::read_to_string(calibration).map_err(|e| io_error(calibration, e))?;
            let file = CalibrationFile::from_json(&text)?;
            let rec = recommend::recommend(&file, *eps, (*topology).into())?;
            let json = serde_json::to_string_pretty(&rec).expect("recommendations serialize") + "\n";
            write_output(cli.out.as_deref(), &json)?;
            eprint!("{}", rec.human_readable());
            Ok(())
        }
    }
}

/// Parse arguments, run, print a one-line diagnostic on failure and return
/// the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
