//! ULA signal model: steering vectors and synthetic snapshot generation.
//!
//! Snapshots follow the narrowband model `x(i) = Σ_k a(θ_k)·s_k(i) + n(i)`
//! with equiprobable real BPSK symbols `s_k(i) = ±√σs²` and circularly
//! symmetric complex Gaussian sensor noise of covariance `σn²·I`. The first
//! DOA is the signal of interest; its transmitted symbols are recorded so
//! tests can form reference statistics.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Uniform linear array geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    /// Number of sensor elements `m`.
    pub num_sensors: usize,
    /// Inter-element spacing over carrier wavelength, `d/λc`.
    pub spacing_over_wavelength: f64,
}

impl ArrayGeometry {
    pub fn new(num_sensors: usize, spacing_over_wavelength: f64) -> Result<Self> {
        if num_sensors == 0 {
            return Err(Error::config("num_sensors", "must be at least 1"));
        }
        if !(spacing_over_wavelength > 0.0) || !spacing_over_wavelength.is_finite() {
            return Err(Error::config(
                "spacing_over_wavelength",
                format!("must be a positive finite number, got {spacing_over_wavelength}"),
            ));
        }
        Ok(Self {
            num_sensors,
            spacing_over_wavelength,
        })
    }

    /// Half-wavelength spaced ULA, the conventional default.
    pub fn half_wavelength(num_sensors: usize) -> Result<Self> {
        Self::new(num_sensors, 0.5)
    }
}

/// Source/interference scenario driving snapshot generation.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: ArrayGeometry,
    /// Source DOAs in degrees; the first entry is the SOI.
    pub doas_deg: Vec<f64>,
    /// Per-source BPSK power σs².
    pub source_power: f64,
    /// Sensor noise power σn².
    pub noise_power: f64,
    /// Offset added to the SOI DOA reported to the algorithms (steering mismatch).
    pub presumed_doa_offset_deg: f64,
    /// Observation size N.
    pub num_snapshots: usize,
}

impl Scenario {
    pub fn new(
        geometry: ArrayGeometry,
        doas_deg: Vec<f64>,
        source_power: f64,
        noise_power: f64,
        presumed_doa_offset_deg: f64,
        num_snapshots: usize,
    ) -> Result<Self> {
        let scenario = Self {
            geometry,
            doas_deg,
            source_power,
            noise_power,
            presumed_doa_offset_deg,
            num_snapshots,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Construct with the noise power derived from a per-sensor SOI SNR:
    /// `σn² = σs²·10^(−SNR/10)`.
    pub fn from_snr(
        geometry: ArrayGeometry,
        doas_deg: Vec<f64>,
        source_power: f64,
        snr_db: f64,
        presumed_doa_offset_deg: f64,
        num_snapshots: usize,
    ) -> Result<Self> {
        let noise_power = source_power * 10f64.powf(-snr_db / 10.0);
        Self::new(
            geometry,
            doas_deg,
            source_power,
            noise_power,
            presumed_doa_offset_deg,
            num_snapshots,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.doas_deg.len();
        let m = self.geometry.num_sensors;
        if q == 0 || q > m {
            return Err(Error::config(
                "doas_deg",
                format!("need 1 ≤ q ≤ m sources, got q = {q} with m = {m}"),
            ));
        }
        for &theta in &self.doas_deg {
            if !(theta > 0.0 && theta < 180.0) {
                return Err(Error::AngleOutOfRange { theta_deg: theta });
            }
        }
        for i in 0..q {
            for j in (i + 1)..q {
                if self.doas_deg[i] == self.doas_deg[j] {
                    return Err(Error::config(
                        "doas_deg",
                        format!("DOAs must be pairwise distinct, {}° repeats", self.doas_deg[i]),
                    ));
                }
            }
        }
        if !(self.source_power > 0.0) {
            return Err(Error::config(
                "source_power",
                format!("must be positive, got {}", self.source_power),
            ));
        }
        if !(self.noise_power > 0.0) {
            return Err(Error::config(
                "noise_power",
                format!("must be positive, got {}", self.noise_power),
            ));
        }
        if self.num_snapshots == 0 {
            return Err(Error::config("num_snapshots", "must be at least 1"));
        }
        Ok(())
    }

    /// SOI direction the algorithms are told (true DOA plus mismatch offset).
    pub fn presumed_doa_deg(&self) -> f64 {
        self.doas_deg[0] + self.presumed_doa_offset_deg
    }

    /// Per-sensor SOI SNR implied by the configured powers.
    pub fn snr_db(&self) -> f64 {
        10.0 * (self.source_power / self.noise_power).log10()
    }
}

/// One batch of received snapshots plus the SOI's transmitted symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotBatch {
    /// `x(i)`, each of length m.
    pub snapshots: Vec<DVector<Complex64>>,
    /// `s_0(i)`, the desired user's BPSK symbols.
    pub soi_symbols: Vec<f64>,
}

impl SnapshotBatch {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }
}

/// Raw (unnormalized) ULA steering vector: entry k is
/// `exp(−2πj·k·(d/λc)·cos θ)`, so every entry has unit modulus and entry 0
/// equals 1. Callers normalize where an algorithm requires unit norm.
pub fn steering_vector(geometry: &ArrayGeometry, theta_deg: f64) -> Result<DVector<Complex64>> {
    if !(theta_deg > 0.0 && theta_deg < 180.0) {
        // End-fire directions are ambiguous for a ULA.
        return Err(Error::AngleOutOfRange { theta_deg });
    }
    let phase_step = -2.0 * PI * geometry.spacing_over_wavelength * theta_deg.to_radians().cos();
    Ok(DVector::from_iterator(
        geometry.num_sensors,
        (0..geometry.num_sensors).map(|k| Complex64::from_polar(1.0, phase_step * k as f64)),
    ))
}

/// Steering vector normalized to unit Euclidean norm.
pub fn unit_steering_vector(
    geometry: &ArrayGeometry,
    theta_deg: f64,
) -> Result<DVector<Complex64>> {
    let a = steering_vector(geometry, theta_deg)?;
    let norm = a.norm();
    Ok(a / Complex64::new(norm, 0.0))
}

/// Generate `scenario.num_snapshots` received vectors. Deterministic given
/// `(scenario, seed)`: the generator is ChaCha8 seeded with `seed`, symbols
/// are drawn source-by-source (SOI first) and noise sensor-by-sensor
/// (real part, then imaginary part) in fixed order.
pub fn generate_snapshots(scenario: &Scenario, seed: u64) -> Result<SnapshotBatch> {
    let m = scenario.geometry.num_sensors;
    let steering: Vec<DVector<Complex64>> = scenario
        .doas_deg
        .iter()
        .map(|&theta| steering_vector(&scenario.geometry, theta))
        .collect::<Result<_>>()?;
    let amplitude = scenario.source_power.sqrt();
    let noise_sigma = (scenario.noise_power / 2.0).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut snapshots = Vec::with_capacity(scenario.num_snapshots);
    let mut soi_symbols = Vec::with_capacity(scenario.num_snapshots);
    for _ in 0..scenario.num_snapshots {
        let mut x = DVector::<Complex64>::zeros(m);
        for (k, a) in steering.iter().enumerate() {
            let symbol = if rng.random_bool(0.5) {
                amplitude
            } else {
                -amplitude
            };
            if k == 0 {
                soi_symbols.push(symbol);
            }
            x.axpy(
                Complex64::new(symbol, 0.0),
                a,
                Complex64::new(1.0, 0.0),
            );
        }
        for j in 0..m {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            x[j] += Complex64::new(re * noise_sigma, im * noise_sigma);
        }
        snapshots.push(x);
    }
    Ok(SnapshotBatch {
        snapshots,
        soi_symbols,
    })
}

/// Derive an independent per-run seed from `(base_seed, run_index)`
/// (splitmix64-style finalizer).
pub fn run_seed(base_seed: u64, run_index: u64) -> u64 {
    let mut z = base_seed ^ run_index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
