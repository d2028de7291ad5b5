use rayon::prelude::*;

use super::config::{Axis, ExperimentConfig, ExperimentKind, Metric};
use super::table::{config_hash, Params, SweepRow, SweepTable, TableMetadata};
use super::combined_error;
use crate::analytics::{effective_error_for, misid_prob, FanOut};
use crate::error::{Error, Result};
use crate::owqc::{
    attach_verification, mitigated_measure, prepare_graph_state, run_owqc_shot,
    VerificationTopology,
};
use crate::qsim::{readout_only, ErrorModel, FlipRates, RngStream, StateVector, RNG_ALGORITHM};

#[derive(Debug, Clone, Copy, PartialEq)]
struct GridPoint {
    p: f64,
    r: f64,
    gamma: f64,
    register_size: usize,
    topology: FanOut,
    alpha: Option<f64>,
    q: f64,
}

impl GridPoint {
    fn votes(&self) -> u32 {
        self.register_size as u32 + 1
    }

    fn params(&self, config: &ExperimentConfig) -> Params {
        let kind = config.kind;
        let calibrated = config.calibration.is_some();
        let mut m = Params::new();
        if kind.uses(Axis::P) && !calibrated {
            m.insert("p".into(), self.p.into());
        }
        if kind.uses(Axis::R) && !calibrated {
            m.insert("r".into(), self.r.into());
        }
        if kind.uses(Axis::Gamma) && !calibrated {
            m.insert("gamma".into(), self.gamma.into());
        }
        if calibrated {
            m.insert("noise".into(), "calibration".into());
        }
        if kind.uses(Axis::RegisterSize) {
            m.insert("register_size".into(), self.register_size.into());
            m.insert("n_votes".into(), self.votes().into());
        }
        if kind.uses(Axis::Topology) {
            m.insert("topology".into(), self.topology.as_str().into());
        }
        if let Some(a) = self.alpha {
            m.insert("alpha".into(), a.into());
        }
        if kind.uses(Axis::Q) {
            m.insert("q".into(), self.q.into());
        }
        m
    }
}

fn or_default<T: Copy>(values: &[T], default: T) -> Vec<T> {
    if values.is_empty() {
        vec![default]
    } else {
        values.to_vec()
    }
}

fn expand(config: &ExperimentConfig) -> Vec<GridPoint> {
    let g = &config.grid;
    let alphas: Vec<Option<f64>> = if g.alpha.is_empty() {
        vec![None]
    } else {
        g.alpha.iter().copied().map(Some).collect()
    };
    let mut points = Vec::new();
    for &p in &or_default(&g.p, 0.0) {
        for &r in &or_default(&g.r, 0.0) {
            for &gamma in &or_default(&g.gamma, 0.0) {
                for &register_size in &or_default(&g.register_sizes, 0) {
                    for &topology in &or_default(&g.topologies, FanOut::Linear) {
                        for &alpha in &alphas {
                            for &q in &or_default(&g.q, 0.0) {
                                points.push(GridPoint { p, r, gamma, register_size, topology, alpha, q });
                            }
                        }
                    }
                }
            }
        }
    }
    points
}

/// Run with rayon's default thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SweepTable> {
    run_experiment_with_workers(config, 0)
}

/// Run on a private pool of `workers` threads (0 picks rayon's default).
///
/// Every `(grid point, repetition)` job owns
/// `RngStream::for_job(master_seed, grid_index, repetition)`, and results
/// are reduced in job order, so the table does not depend on `workers`.
pub fn run_experiment_with_workers(config: &ExperimentConfig, workers: usize) -> Result<SweepTable> {
    config.validate()?;
    let points = expand(config);
    let metadata = TableMetadata {
        kind: config.kind.as_str().to_owned(),
        config_hash: config_hash(config),
        seed: Some(config.master_seed),
        code_version: env!("CARGO_PKG_VERSION").to_owned(),
        rng_algorithm: RNG_ALGORITHM.to_owned(),
        runs: Some(config.runs),
        repetitions: Some(config.repetitions),
    };

    if config.kind == ExperimentKind::AnalyticSweep {
        let rows = points
            .iter()
            .map(|pt| {
                let q = combined_error(pt.p, pt.r);
                let r_tilde = effective_error_for(pt.topology, q, pt.gamma, pt.votes())?;
                Ok(SweepRow::exact(pt.params(config), misid_prob(pt.votes(), r_tilde.get())?))
            })
            .collect::<Result<_>>()?;
        return Ok(SweepTable { metadata, rows });
    }

    let models = points
        .iter()
        .map(|pt| match &config.calibration {
            Some(cal) => cal.to_error_model(),
            None => ErrorModel::uniform(pt.p, pt.r, pt.gamma),
        })
        .collect::<Result<Vec<_>>>()?;

    let reps = config.repetitions;
    let jobs: Vec<(usize, u64)> = (0..points.len())
        .flat_map(|i| (0..reps).map(move |rep| (i, rep)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let failures: Vec<u64> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, rep)| {
                let mut rng = RngStream::for_job(config.master_seed, i as u64, rep);
                run_batch(config, &points[i], &models[i], &mut rng)
            })
            .collect::<Result<_>>()
    })?;

    let runs = config.runs as f64;
    let rows = points
        .iter()
        .zip(failures.chunks(reps as usize))
        .map(|(pt, counts)| {
            let means: Vec<f64> = counts.iter().map(|&c| c as f64 / runs).collect();
            let (value, sem) = mean_and_sem(&means);
            SweepRow {
                params: pt.params(config),
                value,
                sem,
                n: config.runs * reps,
            }
        })
        .collect();
    Ok(SweepTable { metadata, rows })
}

/// Mean and `sd / sqrt(n)` with the `n - 1` sample deviation; SEM is 0 for a
/// single value.
pub fn mean_and_sem(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Failures in one batch of `runs` shots.
fn run_batch(config: &ExperimentConfig, pt: &GridPoint, noise: &ErrorModel, rng: &mut RngStream) -> Result<u64> {
    let runs = config.runs;
    let mut failures = 0u64;
    match config.kind {
        ExperimentKind::Bernoulli => {
            for _ in 0..runs {
                failures += u64::from(rng.bernoulli(pt.q));
            }
        }
        ExperimentKind::ReadoutVoting => {
            let readout = FlipRates::symmetric(pt.r)?;
            let votes = pt.votes() as usize;
            for _ in 0..runs {
                let bit = u8::from(rng.bernoulli(0.5));
                let ones = readout_only(bit, readout, votes, rng).iter().filter(|&&b| b == 1).count();
                let verdict = u8::from(2 * ones > votes);
                failures += u64::from(verdict != bit);
            }
        }
        ExperimentKind::ProjectionMitigation => {
            let alpha = pt.alpha.unwrap_or_else(|| rng.angle());
            let topology = VerificationTopology::new(pt.topology, pt.register_size);
            let mut template = prepare_graph_state(alpha)?.state;
            if pt.register_size > 0 {
                template = template.tensor(&StateVector::new(pt.register_size)?)?;
            }
            for _ in 0..runs {
                let mut state = template.clone();
                attach_verification(&mut state, topology, alpha, noise, rng, config.options.mode)?;
                let vote = mitigated_measure(&mut state, pt.register_size, alpha, noise, rng, config.options)?;
                failures += u64::from(vote.verdict != vote.true_branch());
            }
        }
        ExperimentKind::OwqcEndToEnd => {
            let alpha = pt.alpha.unwrap_or_else(|| rng.angle());
            let topology = VerificationTopology::new(pt.topology, pt.register_size);
            for _ in 0..runs {
                let shot = run_owqc_shot(alpha, noise, topology, rng, config.options)?;
                let failed = match config.metric {
                    Metric::Misidentification => shot.misidentified,
                    Metric::WrongOutput => shot.output_bit == 1,
                };
                failures += u64::from(failed);
            }
        }
        ExperimentKind::AnalyticSweep => unreachable!("analytic sweeps are not sampled"),
    }
    Ok(failures)
}
