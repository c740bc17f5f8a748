//! Output-SINR evaluation against the true scenario and seeded Monte-Carlo
//! aggregation of per-snapshot SINR trajectories.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::array::{generate_snapshots, run_seed, steering_vector, Scenario, SnapshotBatch};
use crate::error::{Error, Result};

/// Lower guard for SINR in dB (covers weights orthogonal to the SOI).
pub const SINR_FLOOR_DB: f64 = -100.0;

/// Mean output-SINR trajectory over a set of Monte-Carlo runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrCurve {
    /// 1-based snapshot indices.
    pub snapshot_index: Vec<usize>,
    /// Mean SINR in dB at each snapshot (averaged in dB across runs).
    pub sinr_db: Vec<f64>,
    /// Number of runs averaged.
    pub num_runs: usize,
}

impl SinrCurve {
    /// SINR at the final snapshot.
    pub fn final_sinr_db(&self) -> f64 {
        *self.sinr_db.last().expect("curve is never empty")
    }

    /// Mean over the trailing `window` snapshots (steady-state estimate).
    pub fn steady_state_db(&self, window: usize) -> f64 {
        let n = self.sinr_db.len();
        let w = window.clamp(1, n);
        self.sinr_db[n - w..].iter().sum::<f64>() / w as f64
    }
}

/// Precomputed quantities for evaluating output SINR of candidate weights:
/// the true SOI steering vector and the interference-plus-noise covariance
/// `R_{i+n} = Σ_{k≥1} σs²·a(θ_k)a(θ_k)ᴴ + σn²·I`, both built from the true
/// DOAs (mismatch affects only what the algorithms are told).
#[derive(Debug, Clone)]
pub struct SinrEvaluator {
    soi_steering: DVector<Complex64>,
    interference_noise: DMatrix<Complex64>,
    source_power: f64,
}

impl SinrEvaluator {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        let m = scenario.geometry.num_sensors;
        let soi_steering = steering_vector(&scenario.geometry, scenario.doas_deg[0])?;
        let mut interference_noise =
            DMatrix::<Complex64>::identity(m, m) * Complex64::new(scenario.noise_power, 0.0);
        for &theta in &scenario.doas_deg[1..] {
            let a = steering_vector(&scenario.geometry, theta)?;
            interference_noise.gerc(
                Complex64::new(scenario.source_power, 0.0),
                &a,
                &a,
                Complex64::new(1.0, 0.0),
            );
        }
        Ok(Self {
            soi_steering,
            interference_noise,
            source_power: scenario.source_power,
        })
    }

    /// Output SINR in dB: `σs²·|wᴴa(θ0)|² / (wᴴ R_{i+n} w)`, floored at
    /// −100 dB. Invariant under scaling of `w` by any nonzero complex scalar.
    pub fn sinr_db(&self, weight: &DVector<Complex64>) -> Result<f64> {
        let norm_sq = weight.norm_squared();
        if !(norm_sq > 0.0 && norm_sq.is_finite()) {
            return Err(Error::ZeroWeight);
        }
        let numerator = self.source_power * weight.dotc(&self.soi_steering).norm_sqr();
        let denominator = weight.dotc(&(&self.interference_noise * weight)).re;
        let ratio = numerator / denominator;
        if ratio > 0.0 {
            Ok((10.0 * ratio.log10()).max(SINR_FLOOR_DB))
        } else {
            Ok(SINR_FLOOR_DB)
        }
    }
}

/// Output SINR of a single weight vector against `scenario`.
pub fn output_sinr(weight: &DVector<Complex64>, scenario: &Scenario) -> Result<f64> {
    SinrEvaluator::new(scenario)?.sinr_db(weight)
}

/// Run `num_runs` independent chains of an adaptive algorithm and average the
/// per-snapshot SINR of the evolving effective weight, in dB, across runs.
///
/// `run_weights` maps a snapshot batch to the per-snapshot effective weight
/// trajectory; run k sees the batch generated with `run_seed(base_seed, k)`.
/// Runs execute in parallel; the reduction is ordered by run index, so the
/// result is deterministic for a fixed `base_seed`.
pub fn monte_carlo_sinr<F>(
    run_weights: F,
    scenario: &Scenario,
    num_runs: usize,
    base_seed: u64,
) -> Result<SinrCurve>
where
    F: Fn(&SnapshotBatch) -> Result<Vec<DVector<Complex64>>> + Sync,
{
    if num_runs == 0 {
        return Err(Error::config("num_runs", "must be at least 1"));
    }
    scenario.validate()?;
    let evaluator = SinrEvaluator::new(scenario)?;
    let n = scenario.num_snapshots;

    let trajectories: Vec<Vec<f64>> = (0..num_runs)
        .into_par_iter()
        .map(|run| {
            let batch = generate_snapshots(scenario, run_seed(base_seed, run as u64))
                .map_err(|e| e.in_run(run))?;
            let weights = run_weights(&batch).map_err(|e| e.in_run(run))?;
            if weights.len() != n {
                return Err(Error::config(
                    "trajectory",
                    format!("runner produced {} weights for {} snapshots", weights.len(), n),
                )
                .in_run(run));
            }
            weights
                .iter()
                .map(|w| evaluator.sinr_db(w))
                .collect::<Result<Vec<f64>>>()
                .map_err(|e| e.in_run(run))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sinr_db = vec![0.0f64; n];
    for trajectory in &trajectories {
        for (acc, value) in sinr_db.iter_mut().zip(trajectory) {
            *acc += value;
        }
    }
    for value in &mut sinr_db {
        *value /= num_runs as f64;
    }
    Ok(SinrCurve {
        snapshot_index: (1..=n).collect(),
        sinr_db,
        num_runs,
    })
}
