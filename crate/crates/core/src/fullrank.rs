//! Full-rank constrained beamformers: the closed-form constant-modulus
//! solution and the stochastic-gradient CCM/CMV baselines used for the
//! comparison curves.
//!
//! Both SG updates keep the array-response constraint `wᴴa = g` intact: the
//! CCM step moves only inside the constraint surface (the update direction is
//! projected orthogonal to `a`), and the Frost-type CMV step re-projects the
//! weight back onto the surface after every move.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::array::SnapshotBatch;
use crate::error::{Error, Result};
use crate::linalg::solve_checked;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// State of a full-rank constrained stochastic-gradient beamformer.
#[derive(Debug, Clone)]
pub struct FullRankState {
    weight: DVector<Complex64>,
    step_size: f64,
    /// Unit-norm presumed steering vector.
    steering: DVector<Complex64>,
    /// Constrained response `wᴴa` toward the unit-norm steering vector.
    response: f64,
}

impl FullRankState {
    /// Start at the constrained quiescent solution `w(0) = a/(aᴴa)` with the
    /// steering vector normalized to unit norm (so `w(0) = a`).
    pub fn new(presumed_steering: &DVector<Complex64>, step_size: f64) -> Result<Self> {
        Self::with_response(presumed_steering, step_size, 1.0)
    }

    /// Same, but constraining `wᴴa = response` toward the unit-norm steering
    /// vector. Passing `1/√m` pins unit gain toward the raw (unit-modulus
    /// entry) array response, which puts a unit-power constant-modulus source
    /// at the criterion's target modulus.
    pub fn with_response(
        presumed_steering: &DVector<Complex64>,
        step_size: f64,
        response: f64,
    ) -> Result<Self> {
        let norm = presumed_steering.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DegenerateInitialization);
        }
        let steering = presumed_steering / Complex64::new(norm, 0.0);
        let weight = &steering * Complex64::new(response, 0.0);
        Ok(Self {
            weight,
            step_size,
            steering,
            response,
        })
    }

    pub fn weight(&self) -> &DVector<Complex64> {
        &self.weight
    }

    pub fn steering(&self) -> &DVector<Complex64> {
        &self.steering
    }

    /// Beamformer output `y = wᴴx`.
    pub fn output(&self, snapshot: &DVector<Complex64>) -> Complex64 {
        self.weight.dotc(snapshot)
    }

    /// `|wᴴa − g|`, the constraint residual.
    pub fn constraint_residual(&self) -> f64 {
        (self.weight.dotc(&self.steering) - Complex64::new(self.response, 0.0)).norm()
    }

    /// One constrained constant-modulus SG step,
    /// `w ← w − μ·e·y*·(I − aaᴴ)·x` with `y = wᴴx`, `e = |y|² − 1`.
    /// Returns the pre-update output `y`; `wᴴa` is untouched because the
    /// projector annihilates `a`.
    pub fn ccm_sg_step(&mut self, snapshot: &DVector<Complex64>) -> Complex64 {
        let y = self.output(snapshot);
        let error = y.norm_sqr() - 1.0;
        if error == 0.0 {
            return y;
        }
        let along = self.steering.dotc(snapshot);
        let tangential = snapshot - &self.steering * along;
        let factor = Complex64::new(self.step_size * error, 0.0) * y.conj();
        self.weight -= tangential * factor;
        y
    }

    /// One constrained minimum-variance SG step (Frost),
    /// `w ← (I − aaᴴ)(w − μ·y*·x) + g·a`. Returns the pre-update output;
    /// `wᴴa = g` is restored exactly each step.
    pub fn cmv_sg_step(&mut self, snapshot: &DVector<Complex64>) -> Complex64 {
        let y = self.output(snapshot);
        let mut w = &self.weight - snapshot * (Complex64::new(self.step_size, 0.0) * y.conj());
        let along = self.steering.dotc(&w);
        w -= &self.steering * along;
        w += &self.steering * Complex64::new(self.response, 0.0);
        self.weight = w;
        y
    }
}

/// Sample average of `2(|y(i)|² − 1)·x(i)x(i)ᴴ`, the constant-modulus
/// cross-correlation estimate used by the closed-form solutions.
pub fn cm_cross_covariance(
    snapshots: &[DVector<Complex64>],
    outputs: &[Complex64],
) -> DMatrix<Complex64> {
    assert_eq!(
        snapshots.len(),
        outputs.len(),
        "one prior output per snapshot"
    );
    assert!(!snapshots.is_empty(), "need at least one snapshot");
    let m = snapshots[0].len();
    let scale = 1.0 / snapshots.len() as f64;
    let mut r = DMatrix::<Complex64>::zeros(m, m);
    for (x, y) in snapshots.iter().zip(outputs) {
        let weight = 2.0 * (y.norm_sqr() - 1.0) * scale;
        r.gerc(Complex64::new(weight, 0.0), x, x, ONE);
    }
    r
}

/// Closed-form constrained CM weight from an already-estimated
/// cross-correlation matrix: `w = R̂⁻¹a / (aᴴR̂⁻¹a)` with `loading·I` added
/// before inversion.
pub fn ccm_weight_from_covariance(
    r_hat: &DMatrix<Complex64>,
    presumed_steering: &DVector<Complex64>,
    loading: f64,
) -> Result<DVector<Complex64>> {
    let mut loaded = r_hat.clone();
    for i in 0..loaded.nrows() {
        loaded[(i, i)] += Complex64::new(loading, 0.0);
    }
    let solved = solve_checked(&loaded, presumed_steering, "cross-correlation matrix")?;
    let denom = presumed_steering.dotc(&solved);
    if !(denom.norm() > 0.0) || !denom.is_finite() {
        return Err(Error::SingularMatrix {
            context: "cross-correlation matrix",
        });
    }
    Ok(solved / denom)
}

/// Closed-form constrained CM beamformer: estimates the cross-correlation
/// matrix from `snapshots` weighted by the prior outputs `y(i)` and returns
/// `w = R̂⁻¹a / (aᴴR̂⁻¹a)`, which satisfies `wᴴa = 1` by construction.
pub fn ccm_closed_form(
    snapshots: &SnapshotBatch,
    presumed_steering: &DVector<Complex64>,
    prior_outputs: &[Complex64],
    loading: f64,
) -> Result<DVector<Complex64>> {
    let r_hat = cm_cross_covariance(&snapshots.snapshots, prior_outputs);
    ccm_weight_from_covariance(&r_hat, presumed_steering, loading)
}

/// Default diagonal loading: `10⁻³·|trace|/dim`.
pub fn default_loading(matrix: &DMatrix<Complex64>) -> f64 {
    1e-3 * matrix.trace().re.abs() / matrix.nrows() as f64
}
