//! End-to-end Monte Carlo engine.
//!
//! Each trial replays the whole physical chain: partial relay selection on
//! stale estimates, the realized RF SNR of the chosen relay, an independent
//! optical irradiance draw squared into the FSO electrical SNR, and the
//! fixed-gain SNDR combining with the amplifier's distortion floor. The
//! estimators here are the second, independent route to every quantity the
//! closed forms in [`crate::analysis`] produce; the test suites hold the two
//! routes against each other.
//!
//! Reproducibility contract: every trial draws from its own counter-derived
//! random stream keyed by `(seed, trial index)`, and accumulation runs over
//! fixed-size trial blocks that are reduced in block order with compensated
//! summation. Estimates are therefore bit-identical for a given seed no
//! matter how many worker threads run (`RFSO_THREADS` caps them) or which
//! batch size streams the trials.

use std::env;
use std::f64::consts::{E, TAU};
use std::thread;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{LinkModel, ModulationParams, NeumaierSum};
use crate::error::{Result, RfsoError};
use crate::impairment::end_to_end_sndr;

/// Trials per accumulation block. Fixed so that the summation tree never
/// depends on batch size or thread count.
const BLOCK_TRIALS: u64 = 4096;

/// Two-sided 99% normal quantile used for the reported confidence bands.
const CI99_FACTOR: f64 = 2.576;

/// Quantity a Monte Carlo run estimates.
#[derive(Debug, Clone)]
pub enum McMetric {
    /// P(SNDR < gamma_th).
    Outage { gamma_th: f64 },
    /// Average bit error probability under the given modulation.
    Bep { modulation: ModulationParams },
    /// Ergodic capacity E[log2(1 + e*SNDR/(2 pi))] in bits/s/Hz.
    Capacity,
}

impl McMetric {
    fn validate(&self) -> Result<()> {
        if let McMetric::Outage { gamma_th } = self {
            if !gamma_th.is_finite() || *gamma_th <= 0.0 {
                return Err(RfsoError::InvalidParameter(format!(
                    "outage threshold must be positive and finite, got {gamma_th}"
                )));
            }
        }
        Ok(())
    }

    /// Per-trial statistic whose expectation is the metric.
    fn statistic(&self, sndr: f64) -> f64 {
        match self {
            McMetric::Outage { gamma_th } => {
                if sndr < *gamma_th {
                    1.0
                } else {
                    0.0
                }
            }
            McMetric::Bep { modulation } => modulation.conditional_error(sndr),
            McMetric::Capacity => (1.0 + sndr * E / TAU).log2(),
        }
    }

    /// Closed-form value of the same quantity.
    pub fn analytic(&self, model: &LinkModel) -> Result<f64> {
        match self {
            McMetric::Outage { gamma_th } => model.outage_cf(*gamma_th),
            McMetric::Bep { modulation } => model.bep_cf(modulation),
            McMetric::Capacity => model.ergodic_capacity(),
        }
    }

    /// High-SNR expansion of the same quantity.
    pub fn asymptotic(&self, model: &LinkModel) -> Result<f64> {
        match self {
            McMetric::Outage { gamma_th } => model.outage_asym(*gamma_th),
            McMetric::Bep { modulation } => model.bep_asym(modulation),
            McMetric::Capacity => model.ergodic_capacity_asym(),
        }
    }
}

/// Size, seeding, and target of one Monte Carlo run.
#[derive(Debug, Clone)]
pub struct McPlan {
    trials: u64,
    seed: u64,
    batch: u64,
    metric: McMetric,
}

impl McPlan {
    /// At least 10^4 trials; `batch` must divide `trials`. The batch controls
    /// how many trials are scheduled in flight at once (rounded up to whole
    /// accumulation blocks) and never changes the estimate.
    pub fn new(trials: u64, seed: u64, batch: u64, metric: McMetric) -> Result<Self> {
        if trials < 10_000 {
            return Err(RfsoError::InvalidParameter(format!(
                "at least 10000 trials required for a usable interval, got {trials}"
            )));
        }
        if batch == 0 || trials % batch != 0 {
            return Err(RfsoError::InvalidParameter(format!(
                "batch must be a positive divisor of trials, got batch={batch}, trials={trials}"
            )));
        }
        metric.validate()?;
        Ok(Self {
            trials,
            seed,
            batch,
            metric,
        })
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn batch(&self) -> u64 {
        self.batch
    }

    pub fn metric(&self) -> &McMetric {
        &self.metric
    }
}

/// Outcome of a Monte Carlo run: sample mean, its standard error, and the
/// half width of the two-sided 99% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub ci99_halfwidth: f64,
    pub trials_used: u64,
}

/// One grid point of a sweep: the three routes side by side.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub snr_db: f64,
    pub analytic: f64,
    pub asymptotic: f64,
    pub mc: McEstimate,
}

/// Worker count: `RFSO_THREADS` when set to a positive integer, otherwise
/// the machine parallelism.
fn worker_count() -> usize {
    env::var("RFSO_THREADS")
        .ok()
        .and_then(|raw| raw.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Estimates the planned metric on one link configuration.
pub fn run_point(model: &LinkModel, plan: &McPlan) -> Result<McEstimate> {
    run_point_with_threads(model, plan, worker_count())
}

fn run_point_with_threads(model: &LinkModel, plan: &McPlan, threads: usize) -> Result<McEstimate> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| RfsoError::Config(format!("worker pool construction failed: {e}")))?;
    let blocks = plan.trials.div_ceil(BLOCK_TRIALS);
    let blocks_per_batch = plan.batch.div_ceil(BLOCK_TRIALS).max(1);

    let mut sum = NeumaierSum::default();
    let mut sum_sq = NeumaierSum::default();
    let mut batch_partials: Vec<(f64, f64)> = Vec::new();
    let mut start = 0u64;
    while start < blocks {
        let stop = (start + blocks_per_batch).min(blocks);
        pool.install(|| {
            (start as usize..stop as usize)
                .into_par_iter()
                .map(|block| block_sums(model, plan, block as u64))
                .collect_into_vec(&mut batch_partials)
        });
        for &(s, s2) in &batch_partials {
            sum.add(s);
            sum_sq.add(s2);
        }
        start = stop;
    }

    let n = plan.trials as f64;
    let mean = sum.value() / n;
    let variance = ((sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0);
    let stderr = (variance / n).sqrt();
    Ok(McEstimate {
        value: mean,
        stderr,
        ci99_halfwidth: CI99_FACTOR * stderr,
        trials_used: plan.trials,
    })
}

/// Accumulates the statistic and its square over one fixed trial block.
fn block_sums(model: &LinkModel, plan: &McPlan, block: u64) -> (f64, f64) {
    let base = ChaCha8Rng::seed_from_u64(plan.seed);
    let first = block * BLOCK_TRIALS;
    let last = (first + BLOCK_TRIALS).min(plan.trials);
    let mut sum = NeumaierSum::default();
    let mut sum_sq = NeumaierSum::default();
    for trial in first..last {
        let mut rng = base.clone();
        rng.set_stream(trial);
        let (_stale_estimate, gamma1) = model.rf().sample_selected_pair(&mut rng);
        let irradiance = model.fso().sample_normalized(&mut rng);
        let gamma2 = model.fso_mean_snr() * irradiance * irradiance;
        let sndr = end_to_end_sndr(gamma1, gamma2, model.kappa(), model.zeta());
        let x = plan.metric.statistic(sndr);
        sum.add(x);
        sum_sq.add(x * x);
    }
    (sum.value(), sum_sq.value())
}

/// Runs the three routes across an SNR grid. `template` builds the link for
/// one average SNR (linear scale); the conventional coupling sets both hop
/// means to the swept value. Every grid point reuses the plan's seed, so a
/// sweep is reproducible point by point.
pub fn sweep<F>(template: F, snr_grid: &[f64], plan: &McPlan) -> Result<Vec<SweepResult>>
where
    F: Fn(f64) -> Result<LinkModel>,
{
    if snr_grid.is_empty() {
        return Err(RfsoError::InvalidParameter(
            "sweep requires a non-empty SNR grid".into(),
        ));
    }
    let mut results = Vec::with_capacity(snr_grid.len());
    for &snr in snr_grid {
        if !snr.is_finite() || snr <= 0.0 {
            return Err(RfsoError::InvalidParameter(format!(
                "swept SNR values must be positive and finite, got {snr}"
            )));
        }
        let model = template(snr)?;
        results.push(SweepResult {
            snr_db: 10.0 * snr.log10(),
            analytic: plan.metric.analytic(&model)?,
            asymptotic: plan.metric.asymptotic(&model)?,
            mc: run_point(&model, plan)?,
        });
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fso_hop::FsoChannel;
    use crate::impairment::SelImpairment;
    use crate::rf_hop::RfSelection;

    const ALPHA_MODERATE: f64 = 4.399688;
    const BETA_MODERATE: f64 = 2.571723;
    const XI2_MODERATE: f64 = 47.679175;

    fn assert_near(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol * expected.abs().max(1e-12),
            "expected {expected}, got {actual}"
        );
    }

    fn table_model(snr: f64, ibo_db: Option<f64>) -> LinkModel {
        let rf = RfSelection::new(5, 5, 0.9, snr).unwrap();
        let fso = FsoChannel::new(ALPHA_MODERATE, BETA_MODERATE, XI2_MODERATE.sqrt()).unwrap();
        let hpa = match ibo_db {
            Some(db) => SelImpairment::from_ibo_db(db).unwrap(),
            None => SelImpairment::ideal(),
        };
        LinkModel::new(rf, fso, snr, hpa).unwrap()
    }

    #[test]
    fn plan_rejects_bad_shapes() {
        let metric = McMetric::Capacity;
        assert!(McPlan::new(9_999, 1, 1, metric.clone()).is_err());
        assert!(McPlan::new(10_000, 1, 0, metric.clone()).is_err());
        assert!(McPlan::new(10_000, 1, 3, metric.clone()).is_err());
        assert!(McPlan::new(
            10_000,
            1,
            100,
            McMetric::Outage { gamma_th: -1.0 }
        )
        .is_err());
        let plan = McPlan::new(10_000, 7, 100, metric).unwrap();
        assert_eq!(plan.trials(), 10_000);
        assert_eq!(plan.seed(), 7);
        assert_eq!(plan.batch(), 100);
        assert!(matches!(plan.metric(), McMetric::Capacity));
    }

    #[test]
    fn estimates_are_deterministic_and_schedule_invariant() {
        let model = table_model(100.0, None);
        let plan = McPlan::new(10_000, 0xfeed, 10_000, McMetric::Capacity).unwrap();
        let a = run_point(&model, &plan).unwrap();
        let b = run_point(&model, &plan).unwrap();
        assert_eq!(a, b);

        // Slicing the same trials into different batches or across a
        // different number of workers must not move a single bit.
        let fine = McPlan::new(10_000, 0xfeed, 100, McMetric::Capacity).unwrap();
        assert_eq!(run_point(&model, &fine).unwrap(), a);
        assert_eq!(run_point_with_threads(&model, &plan, 1).unwrap(), a);
        assert_eq!(run_point_with_threads(&model, &plan, 3).unwrap(), a);

        // A different seed moves the estimate but not the expectation scale.
        let reseeded = McPlan::new(10_000, 0xbeef, 10_000, McMetric::Capacity).unwrap();
        let c = run_point(&model, &reseeded).unwrap();
        assert_ne!(c.value, a.value);
        assert!((c.value - a.value).abs() < 6.0 * (a.stderr + c.stderr));
    }

    #[test]
    fn trivial_selection_limit_matches_exponential() {
        // One relay, perfectly fresh CSI, an effectively transparent optical
        // hop, ideal amplifier: the SNDR collapses to the single Rayleigh
        // SNR and the outage to 1 - exp(-gamma_th / mean).
        let rf = RfSelection::new(1, 1, 1.0, 5.0).unwrap();
        let fso = FsoChannel::new(ALPHA_MODERATE, BETA_MODERATE, XI2_MODERATE.sqrt()).unwrap();
        let model = LinkModel::new(rf, fso, 1e12, SelImpairment::ideal()).unwrap();
        let plan = McPlan::new(
            200_000,
            42,
            200_000,
            McMetric::Outage { gamma_th: 1.0 },
        )
        .unwrap();
        let estimate = run_point(&model, &plan).unwrap();
        let expected = 1.0 - (-1.0f64 / 5.0).exp();
        assert!(
            (estimate.value - expected).abs() <= estimate.ci99_halfwidth,
            "estimate {} vs {expected}, ci99 {}",
            estimate.value,
            estimate.ci99_halfwidth
        );
        assert_eq!(estimate.trials_used, 200_000);
        assert!(estimate.stderr > 0.0);
    }

    #[test]
    fn matches_closed_forms_at_moderate_snr() {
        // Cross-validation of all three metrics against the closed forms on
        // the clear-air configuration at 10 dB, where 2 * 10^5 trials give
        // tight intervals in well under a second per metric.
        let model = table_model(10.0, Some(30.0));
        let metrics = [
            McMetric::Outage { gamma_th: 0.01 },
            McMetric::Bep {
                modulation: ModulationParams::cbfsk(),
            },
            McMetric::Capacity,
        ];
        for metric in metrics {
            let analytic = metric.analytic(&model).unwrap();
            let plan = McPlan::new(200_000, 0x5eed, 200_000, metric).unwrap();
            let estimate = run_point(&model, &plan).unwrap();
            assert!(
                (estimate.value - analytic).abs() <= estimate.ci99_halfwidth,
                "{:?}: estimate {} vs analytic {analytic}, ci99 {}",
                plan.metric(),
                estimate.value,
                estimate.ci99_halfwidth
            );
        }
    }

    #[test]
    fn stderr_scales_as_inverse_root_trials() {
        let model = table_model(100.0, Some(30.0));
        let small = McPlan::new(10_000, 9, 10_000, McMetric::Capacity).unwrap();
        let large = McPlan::new(40_000, 9, 40_000, McMetric::Capacity).unwrap();
        let s = run_point(&model, &small).unwrap().stderr;
        let l = run_point(&model, &large).unwrap().stderr;
        let ratio = s / l;
        assert!(
            (1.6..=2.4).contains(&ratio),
            "quadrupling trials scaled stderr by {ratio}, expected about 2"
        );
    }

    #[test]
    fn sweep_covers_grid_and_saturates_at_the_ceiling() {
        let template = |snr: f64| {
            let rf = RfSelection::new(5, 5, 0.9, snr)?;
            let fso = FsoChannel::new(ALPHA_MODERATE, BETA_MODERATE, XI2_MODERATE.sqrt())?;
            LinkModel::new(rf, fso, snr, SelImpairment::from_ibo_db(3.0)?)
        };
        let plan = McPlan::new(20_000, 77, 20_000, McMetric::Capacity).unwrap();
        assert!(sweep(template, &[], &plan).is_err());
        assert!(sweep(template, &[-3.0], &plan).is_err());

        let grid: Vec<f64> = (0..=10).map(|k| 10f64.powf(0.5 * k as f64)).collect();
        let results = sweep(template, &grid, &plan).unwrap();
        assert_eq!(results.len(), 11);
        for (k, point) in results.iter().enumerate() {
            assert_near(point.snr_db, 5.0 * k as f64, 1e-9);
            assert!(point.analytic.is_finite());
            assert!(point.asymptotic.is_finite());
        }
        // Fig-4-style saturation: the last two capacity estimates sit on the
        // amplifier ceiling and differ by far less than the climb rate.
        let ceiling = template(1e5).unwrap().capacity_ceiling();
        let tail = &results[9..];
        assert!((tail[0].mc.value - tail[1].mc.value).abs() < 0.1);
        for point in tail {
            assert!((point.mc.value - ceiling).abs() < 0.3);
        }
    }

    #[test]
    fn sweep_outage_is_monotone_up_to_interval_noise() {
        let template = |snr: f64| {
            let rf = RfSelection::new(5, 5, 0.9, snr)?;
            let fso = FsoChannel::new(ALPHA_MODERATE, BETA_MODERATE, XI2_MODERATE.sqrt())?;
            LinkModel::new(rf, fso, snr, SelImpairment::ideal())
        };
        let plan = McPlan::new(100_000, 3, 100_000, McMetric::Outage { gamma_th: 0.01 }).unwrap();
        let grid = [1.0, 10.0, 100.0, 1000.0];
        let results = sweep(template, &grid, &plan).unwrap();
        for pair in results.windows(2) {
            let slack = 3.0 * (pair[0].mc.stderr + pair[1].mc.stderr);
            assert!(
                pair[1].mc.value <= pair[0].mc.value + slack,
                "outage grew from {} to {} across a grid step",
                pair[0].mc.value,
                pair[1].mc.value
            );
        }
    }
}
