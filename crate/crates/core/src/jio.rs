//! Joint iterative optimization (JIO) of a projection matrix and a
//! reduced-rank weight under the constrained constant-modulus criterion.
//!
//! The received snapshot is compressed through an adaptive m×r projection
//! matrix, `x̄ = T_rᴴx`, and filtered by an adaptive reduced-rank weight,
//! `y = w̄ᴴx̄`, with both factors updated by stochastic gradients of the
//! constant-modulus cost `(|y|² − 1)²` under the joint array-response
//! constraint `w̄ᴴT_rᴴa = g`.
//!
//! The update geometry keeps the constraint exact without re-projection:
//! for a unit-norm steering vector the projection update moves `T_r` only
//! along directions orthogonal to `a` (so `aᴴT_r` is invariant, hence the
//! projected steering `ā = T_rᴴa` never moves), and the weight update moves
//! `w̄` only orthogonal to `ā` (so `āᴴw̄` is invariant).
//!
//! A closed-form fixed-point companion solves for each factor against
//! sample-averaged statistics; its projection solution is an outer product
//! (rank one), so it serves as an SINR-level reference rather than a
//! matrix-level one.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::array::SnapshotBatch;
use crate::error::{Error, Result};
use crate::fullrank::cm_cross_covariance;
use crate::linalg::solve_checked;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Below this squared norm the projected steering vector counts as zero.
const DEGENERATE_EPS: f64 = 1e-24;

/// State of the joint reduced-rank adaptation: projection matrix `T_r`,
/// reduced-rank weight `w̄`, the unit-norm presumed steering vector, and the
/// two step sizes.
#[derive(Debug, Clone)]
pub struct JioState {
    /// m×r projection matrix `T_r`.
    projection: DMatrix<Complex64>,
    /// Reduced-rank weight `w̄`, length r.
    weight: DVector<Complex64>,
    /// Unit-norm presumed steering vector, length m.
    steering: DVector<Complex64>,
    step_projection: f64,
    step_weight: f64,
    /// Constrained joint response `w̄ᴴT_rᴴa` toward the unit-norm steering.
    response: f64,
}

impl JioState {
    /// Initialize with `T_r(0) = [I_r 0]ᵀ` and
    /// `w̄(0) = T_rᴴ(0)a / ‖T_rᴴ(0)a‖²`, which meets the joint constraint
    /// `w̄ᴴT_rᴴa = 1` exactly.
    pub fn init(
        rank: usize,
        presumed_steering: &DVector<Complex64>,
        step_projection: f64,
        step_weight: f64,
    ) -> Result<Self> {
        Self::init_with_response(rank, presumed_steering, step_projection, step_weight, 1.0)
    }

    /// Same initialization with the joint constraint pinned to
    /// `w̄ᴴT_rᴴa = response` (toward the unit-norm steering vector). The SG
    /// updates preserve whatever value is set here. Passing `1/√m` pins unit
    /// gain toward the raw array response, placing a unit-power
    /// constant-modulus source at the criterion's target modulus.
    pub fn init_with_response(
        rank: usize,
        presumed_steering: &DVector<Complex64>,
        step_projection: f64,
        step_weight: f64,
        response: f64,
    ) -> Result<Self> {
        let m = presumed_steering.len();
        if rank == 0 || rank >= m {
            return Err(Error::config(
                "rank",
                format!("need 1 ≤ r < m, got r = {rank} with m = {m}"),
            ));
        }
        let norm = presumed_steering.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DegenerateInitialization);
        }
        let steering = presumed_steering / Complex64::new(norm, 0.0);
        let mut projection = DMatrix::<Complex64>::zeros(m, rank);
        for l in 0..rank {
            projection[(l, l)] = ONE;
        }
        let projected = projection.ad_mul(&steering);
        let energy = projected.norm_squared();
        if energy < DEGENERATE_EPS {
            return Err(Error::DegenerateInitialization);
        }
        let weight = projected * Complex64::new(response / energy, 0.0);
        Ok(Self {
            projection,
            weight,
            steering,
            step_projection,
            step_weight,
            response,
        })
    }

    pub fn rank(&self) -> usize {
        self.projection.ncols()
    }

    pub fn num_sensors(&self) -> usize {
        self.projection.nrows()
    }

    pub fn projection(&self) -> &DMatrix<Complex64> {
        &self.projection
    }

    pub fn weight(&self) -> &DVector<Complex64> {
        &self.weight
    }

    pub fn steering(&self) -> &DVector<Complex64> {
        &self.steering
    }

    pub fn response(&self) -> f64 {
        self.response
    }

    pub(crate) fn set_projection(&mut self, projection: DMatrix<Complex64>) {
        debug_assert_eq!(projection.shape(), self.projection.shape());
        self.projection = projection;
    }

    /// Dimensionality reduction `x̄ = T_rᴴx`.
    pub fn project(&self, snapshot: &DVector<Complex64>) -> DVector<Complex64> {
        self.projection.ad_mul(snapshot)
    }

    /// Reduced-rank output `y = w̄ᴴT_rᴴx`.
    pub fn output(&self, snapshot: &DVector<Complex64>) -> Complex64 {
        self.weight.dotc(&self.project(snapshot))
    }

    /// Projected steering vector `ā = T_rᴴa`.
    pub fn projected_steering(&self) -> DVector<Complex64> {
        self.projection.ad_mul(&self.steering)
    }

    /// Effective full-rank weight `T_r·w̄`; satisfies
    /// `(effective_weight)ᴴx = output(x)` for every snapshot.
    pub fn effective_weight(&self) -> DVector<Complex64> {
        &self.projection * &self.weight
    }

    /// `|w̄ᴴT_rᴴa − g|`, the joint constraint residual.
    pub fn constraint_residual(&self) -> f64 {
        (self.weight.dotc(&self.projected_steering()) - Complex64::new(self.response, 0.0)).norm()
    }

    /// Projection-matrix SG update,
    /// `T_r ← T_r − μ_Tr·e·y*·[x − a(aᴴx)]w̄ᴴ` with `e = |y|² − 1`.
    ///
    /// `output` must be the output computed from the current state and this
    /// snapshot. Because the bracket is orthogonal to the unit-norm steering
    /// vector, `aᴴT_r` (and with it `ā`) is left invariant.
    pub fn update_projection(&mut self, snapshot: &DVector<Complex64>, output: Complex64) {
        let error = output.norm_sqr() - 1.0;
        if error == 0.0 {
            return;
        }
        let along = self.steering.dotc(snapshot);
        let tangential = snapshot - &self.steering * along;
        let factor = Complex64::new(self.step_projection * error, 0.0) * output.conj();
        // Rank-one correction T_r -= factor · tangential · w̄ᴴ.
        self.projection.gerc(-factor, &tangential, &self.weight, ONE);
    }

    /// Reduced-rank weight SG update,
    /// `w̄ ← w̄ − μ_w̄·e·y*·[I − āāᴴ/(āᴴā)]·x̄`.
    ///
    /// `projected` and `output` must come from the current state. The update
    /// direction is orthogonal to `ā`, so `āᴴw̄` is left invariant.
    pub fn update_weight(
        &mut self,
        projected: &DVector<Complex64>,
        output: Complex64,
    ) -> Result<()> {
        let projected_steering = self.projected_steering();
        let energy = projected_steering.norm_squared();
        if energy < DEGENERATE_EPS {
            return Err(Error::DegenerateSubspace);
        }
        let error = output.norm_sqr() - 1.0;
        if error == 0.0 {
            return Ok(());
        }
        let along = projected_steering.dotc(projected) / Complex64::new(energy, 0.0);
        let tangential = projected - projected_steering * along;
        let factor = Complex64::new(self.step_weight * error, 0.0) * output.conj();
        self.weight -= tangential * factor;
        Ok(())
    }

    /// One joint iteration: compute `y` from the current pair, update the
    /// projection matrix, then update the weight against the refreshed
    /// subspace (`x̄` and `ā` recomputed from the new `T_r`). Both updates
    /// share the single pre-update `y`. Returns that output.
    pub fn iterate(&mut self, snapshot: &DVector<Complex64>) -> Result<Complex64> {
        let y = self.output(snapshot);
        self.update_projection(snapshot, y);
        let projected = self.project(snapshot);
        self.update_weight(&projected, y)?;
        Ok(y)
    }

    /// Rescale the weight so the joint constraint holds exactly again:
    /// `w̄ ← (g/(āᴴw̄))·w̄`. Used after operations (such as
    /// re-orthonormalization) that change `ā`.
    pub(crate) fn restore_constraint(&mut self) -> Result<()> {
        let projected_steering = self.projected_steering();
        let current = projected_steering.dotc(&self.weight);
        if !(current.norm() > 0.0) || !current.is_finite() {
            return Err(Error::DegenerateSubspace);
        }
        let factor = Complex64::new(self.response, 0.0) / current;
        self.weight *= factor;
        Ok(())
    }
}

fn load_diagonal(matrix: &DMatrix<Complex64>, loading: f64) -> DMatrix<Complex64> {
    let mut loaded = matrix.clone();
    for i in 0..loaded.nrows() {
        loaded[(i, i)] += Complex64::new(loading, 0.0);
    }
    loaded
}

/// Closed-form constrained projection solution against sample statistics:
/// `T_r = R⁻¹a·w̄ᴴR̄_w⁻¹ / (w̄ᴴR̄_w⁻¹w̄ · aᴴR⁻¹a)`.
///
/// `r_hat` (m×m) and `rw_hat` (r×r) must be Hermitian estimates;
/// `loading·I` is added to each before inversion. The result is an outer
/// product (rank one) whose column space is `span{R⁻¹a}`, and it satisfies
/// `w̄ᴴT_rᴴa = 1` by construction.
pub fn closed_form_projection(
    r_hat: &DMatrix<Complex64>,
    rw_hat: &DMatrix<Complex64>,
    weight: &DVector<Complex64>,
    presumed_steering: &DVector<Complex64>,
    loading: f64,
) -> Result<DMatrix<Complex64>> {
    let solved_steering = solve_checked(
        &load_diagonal(r_hat, loading),
        presumed_steering,
        "cross-correlation matrix",
    )?;
    let solved_weight = solve_checked(
        &load_diagonal(rw_hat, loading),
        weight,
        "weight correlation matrix",
    )?;
    let denom = weight.dotc(&solved_weight) * presumed_steering.dotc(&solved_steering);
    if !(denom.norm() > 0.0) || !denom.is_finite() {
        return Err(Error::SingularMatrix {
            context: "closed-form projection denominator",
        });
    }
    // R̄_w is Hermitian, so w̄ᴴR̄_w⁻¹ = (R̄_w⁻¹w̄)ᴴ.
    let projection = (&solved_steering * solved_weight.adjoint()) / denom;
    if projection.iter().any(|c| !c.is_finite()) {
        return Err(Error::SingularMatrix {
            context: "closed-form projection",
        });
    }
    Ok(projection)
}

/// Closed-form constrained reduced-rank weight solution:
/// `w̄ = R̄⁻¹ā / (āᴴR̄⁻¹ā)`, satisfying `āᴴw̄ = 1` by construction.
pub fn closed_form_weight(
    rbar_hat: &DMatrix<Complex64>,
    projected_steering: &DVector<Complex64>,
    loading: f64,
) -> Result<DVector<Complex64>> {
    if projected_steering.norm_squared() < DEGENERATE_EPS {
        return Err(Error::DegenerateSubspace);
    }
    let solved = solve_checked(
        &load_diagonal(rbar_hat, loading),
        projected_steering,
        "reduced-rank cross-correlation matrix",
    )?;
    let denom = projected_steering.dotc(&solved);
    if !(denom.norm() > 0.0) || !denom.is_finite() {
        return Err(Error::SingularMatrix {
            context: "reduced-rank cross-correlation matrix",
        });
    }
    let w = solved / denom;
    if w.iter().any(|c| !c.is_finite()) {
        return Err(Error::SingularMatrix {
            context: "reduced-rank cross-correlation matrix",
        });
    }
    Ok(w)
}

/// Alternate the closed-form projection and weight solutions on one fixed
/// batch, refreshing the prior outputs from the current pair before each
/// solve. Statistics are sample averages over the batch; each estimated
/// matrix gets diagonal loading `loading_scale·|trace|/dim`. Returns the
/// effective weight `T_r·w̄` after `alternations` rounds.
pub fn closed_form_fixed_point(
    batch: &SnapshotBatch,
    presumed_steering: &DVector<Complex64>,
    rank: usize,
    alternations: usize,
    loading_scale: f64,
) -> Result<DVector<Complex64>> {
    let seed = JioState::init(rank, presumed_steering, 0.0, 0.0)?;
    let steering = seed.steering().clone();
    let mut projection = seed.projection().clone();
    let mut weight = seed.weight().clone();

    for _ in 0..alternations {
        let outputs: Vec<Complex64> = batch
            .snapshots
            .iter()
            .map(|x| weight.dotc(&projection.ad_mul(x)))
            .collect();
        let r_hat = cm_cross_covariance(&batch.snapshots, &outputs);
        let mut rw_hat = DMatrix::<Complex64>::zeros(rank, rank);
        rw_hat.gerc(ONE, &weight, &weight, Complex64::new(0.0, 0.0));
        let loading = loading_scale
            * (r_hat.trace().re.abs() / r_hat.nrows() as f64)
                .max(rw_hat.trace().re.abs() / rank as f64)
                .max(f64::MIN_POSITIVE);
        projection = closed_form_projection(&r_hat, &rw_hat, &weight, &steering, loading)?;

        let projected: Vec<DVector<Complex64>> = batch
            .snapshots
            .iter()
            .map(|x| projection.ad_mul(x))
            .collect();
        let outputs: Vec<Complex64> = projected.iter().map(|xb| weight.dotc(xb)).collect();
        let rbar_hat = cm_cross_covariance(&projected, &outputs);
        let projected_steering = projection.ad_mul(&steering);
        let loading = loading_scale * (rbar_hat.trace().re.abs() / rank as f64).max(f64::MIN_POSITIVE);
        weight = closed_form_weight(&rbar_hat, &projected_steering, loading)?;
    }
    Ok(&projection * &weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{unit_steering_vector, ArrayGeometry};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DVector<Complex64> {
        DVector::from_fn(n, |_, _| {
            Complex64::new(
                rng.random_range(-scale..scale),
                rng.random_range(-scale..scale),
            )
        })
    }

    /// Circularly symmetric complex standard-normal snapshot (unit variance
    /// per entry), the natural "random snapshot" for long SG chains.
    fn random_cn_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<Complex64> {
        let sigma = 0.5f64.sqrt();
        DVector::from_fn(n, |_, _| {
            let re: f64 = rng.sample(rand_distr::StandardNormal);
            let im: f64 = rng.sample(rand_distr::StandardNormal);
            Complex64::new(re * sigma, im * sigma)
        })
    }

    fn test_steering(m: usize, theta: f64) -> DVector<Complex64> {
        unit_steering_vector(&ArrayGeometry::half_wavelength(m).unwrap(), theta).unwrap()
    }

    #[test]
    fn init_builds_selector_and_meets_constraint() {
        let a = test_steering(32, 90.0);
        let state = JioState::init(5, &a, 0.002, 0.001).unwrap();
        assert_eq!(state.projection().shape(), (32, 5));
        for l in 0..5 {
            for i in 0..32 {
                let expected = if i == l { ONE } else { Complex64::new(0.0, 0.0) };
                assert_eq!(state.projection()[(i, l)], expected);
            }
        }
        assert!(state.constraint_residual() < 1e-12);
    }

    #[test]
    fn init_rejects_rank_out_of_range() {
        let a = test_steering(4, 90.0);
        assert!(matches!(
            JioState::init(4, &a, 0.1, 0.1),
            Err(Error::Config { .. })
        ));
        assert!(matches!(
            JioState::init(0, &a, 0.1, 0.1),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn init_rejects_steering_with_empty_leading_block() {
        // Zero first r entries make the w̄(0) denominator vanish.
        let mut a = DVector::<Complex64>::zeros(6);
        a[4] = ONE;
        a[5] = ONE;
        assert!(matches!(
            JioState::init(3, &a, 0.1, 0.1),
            Err(Error::DegenerateInitialization)
        ));
    }

    #[test]
    fn project_selects_leading_entries_at_init() {
        let a = test_steering(8, 75.0);
        let state = JioState::init(3, &a, 0.1, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let x = random_vector(&mut rng, 8, 1.0);
        let projected = state.project(&x);
        for l in 0..3 {
            assert_eq!(projected[l], x[l]);
        }
    }

    #[test]
    fn project_matches_per_column_inner_products() {
        // Brute-force oracle: entry l of x̄ is t_lᴴx.
        let a = test_steering(8, 75.0);
        let mut state = JioState::init(4, &a, 0.01, 0.01).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        // Move away from the selector initialization first.
        for _ in 0..32 {
            let x = random_vector(&mut rng, 8, 1.0);
            state.iterate(&x).unwrap();
        }
        let x = random_vector(&mut rng, 8, 1.0);
        let projected = state.project(&x);
        for l in 0..4 {
            let column = state.projection().column(l).clone_owned();
            let expected = column.dotc(&x);
            assert!((projected[l] - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn output_is_one_at_presumed_steering() {
        let a = test_steering(16, 65.0);
        let state = JioState::init(5, &a, 0.01, 0.01).unwrap();
        assert!((state.output(&a) - ONE).norm() < 1e-12);
        let zero = DVector::<Complex64>::zeros(16);
        assert_eq!(state.output(&zero), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn output_agrees_with_effective_weight() {
        let a = test_steering(12, 80.0);
        let mut state = JioState::init(4, &a, 0.01, 0.005).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..50 {
            let x = random_vector(&mut rng, 12, 1.0);
            state.iterate(&x).unwrap();
        }
        let w_eff = state.effective_weight();
        for _ in 0..100 {
            let x = random_vector(&mut rng, 12, 1.0);
            assert!((w_eff.dotc(&x) - state.output(&x)).norm() < 1e-12);
        }
    }

    #[test]
    fn projection_update_frozen_at_unit_modulus_output() {
        let a = test_steering(8, 70.0);
        let mut state = JioState::init(3, &a, 0.05, 0.05).unwrap();
        let before = state.projection().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = random_vector(&mut rng, 8, 1.0);
        // |i|² = 1 exactly, so e = 0 bit for bit.
        state.update_projection(&x, Complex64::new(0.0, 1.0));
        assert_eq!(&before, state.projection());
    }

    #[test]
    fn projection_update_cancels_along_steering_snapshot() {
        // x = a: the bracket collapses because aᴴa = 1.
        let a = test_steering(8, 70.0);
        let mut state = JioState::init(3, &a, 0.05, 0.05).unwrap();
        let before = state.projection().clone();
        let y = state.output(&a);
        state.update_projection(&a, y);
        assert!((state.projection() - &before).norm() < 1e-12);
    }

    #[test]
    fn projection_update_preserves_steering_row() {
        // Unit response toward the raw array response keeps |y| near the
        // constant-modulus target, so the chain stays O(1) for 10⁴ steps.
        let a = test_steering(32, 90.0);
        let response = 1.0 / 32f64.sqrt();
        let mut state = JioState::init_with_response(5, &a, 0.002, 0.001, response).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..10_000 {
            let x = random_cn_vector(&mut rng, 32);
            let before = state.projection().ad_mul(state.steering());
            let y = state.output(&x);
            state.update_projection(&x, y);
            let after = state.projection().ad_mul(state.steering());
            assert!(
                (&after - &before).norm() < 1e-12,
                "aᴴT_r drifted by {}",
                (&after - &before).norm()
            );
        }
    }

    #[test]
    fn weight_update_frozen_at_unit_modulus_output() {
        let a = test_steering(8, 70.0);
        let mut state = JioState::init(3, &a, 0.05, 0.05).unwrap();
        let before = state.weight().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let projected = random_vector(&mut rng, 3, 1.0);
        state
            .update_weight(&projected, Complex64::new(0.0, -1.0))
            .unwrap();
        assert_eq!(&before, state.weight());
    }

    #[test]
    fn weight_update_ignores_projected_steering_direction() {
        let a = test_steering(8, 70.0);
        let mut state = JioState::init(3, &a, 0.05, 0.05).unwrap();
        let before = state.weight().clone();
        let projected = state.projected_steering();
        state
            .update_weight(&projected, Complex64::new(0.3, 0.4))
            .unwrap();
        assert!((state.weight() - &before).norm() < 1e-12);
    }

    #[test]
    fn weight_update_preserves_projected_constraint() {
        let a = test_steering(16, 55.0);
        let response = 1.0 / 16f64.sqrt();
        let mut state = JioState::init_with_response(6, &a, 0.01, 0.01, response).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..10_000 {
            let x = random_cn_vector(&mut rng, 16);
            let projected = state.project(&x);
            let abar = state.projected_steering();
            let before = abar.dotc(state.weight());
            let y = state.output(&x);
            state.update_weight(&projected, y).unwrap();
            let after = abar.dotc(state.weight());
            assert!((after - before).norm() < 1e-12);
        }
    }

    #[test]
    fn iterate_fixed_point_at_unit_modulus() {
        // x = a gives y = 1 (the joint constraint), so the state is frozen.
        let a = test_steering(16, 95.0);
        let mut state = JioState::init(4, &a, 0.01, 0.01).unwrap();
        let proj_before = state.projection().clone();
        let weight_before = state.weight().clone();
        let y = state.iterate(&a).unwrap();
        assert!((y - ONE).norm() < 1e-12);
        assert!((state.projection() - &proj_before).norm() < 1e-12);
        assert!((state.weight() - &weight_before).norm() < 1e-12);
    }

    #[test]
    fn iterate_with_zero_steps_never_moves() {
        let a = test_steering(8, 95.0);
        let mut state = JioState::init(3, &a, 0.0, 0.0).unwrap();
        let proj_before = state.projection().clone();
        let weight_before = state.weight().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let x = random_vector(&mut rng, 8, 2.0);
            state.iterate(&x).unwrap();
        }
        assert_eq!(&proj_before, state.projection());
        assert_eq!(&weight_before, state.weight());
    }

    #[test]
    fn iterate_keeps_joint_constraint_through_long_runs() {
        let a = test_steering(32, 90.0);
        let response = 1.0 / 32f64.sqrt();
        let mut state = JioState::init_with_response(5, &a, 0.002, 0.001, response).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10_000 {
            let x = random_cn_vector(&mut rng, 32);
            state.iterate(&x).unwrap();
        }
        assert!(
            state.constraint_residual() < 1e-6,
            "accumulated residual {}",
            state.constraint_residual()
        );
    }

    #[test]
    fn effective_weight_zero_for_zero_weight() {
        let a = test_steering(8, 90.0);
        let mut state = JioState::init(3, &a, 0.01, 0.01).unwrap();
        state.weight = DVector::zeros(3);
        assert_eq!(state.effective_weight(), DVector::zeros(8));
    }

    #[test]
    fn closed_form_projection_identity_matrices() {
        // R̂ = I, R̄_w = I collapse the solution to a·w̄ᴴ/(w̄ᴴw̄).
        let a = test_steering(8, 85.0);
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let weight = random_vector(&mut rng, 3, 1.0);
        let r = DMatrix::<Complex64>::identity(8, 8);
        let rw = DMatrix::<Complex64>::identity(3, 3);
        let t = closed_form_projection(&r, &rw, &weight, &a, 0.0).unwrap();
        let expected = (&a * weight.adjoint()) / Complex64::new(weight.norm_squared(), 0.0);
        assert!((&t - &expected).norm() < 1e-12);
        let constraint = weight.dotc(&t.ad_mul(&a));
        assert!((constraint - ONE).norm() < 1e-12);
    }

    #[test]
    fn closed_form_projection_is_rank_one_along_solved_steering() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let m = 8;
        let rank = 3;
        let a = test_steering(m, 100.0);
        let weight = random_vector(&mut rng, rank, 1.0);
        // Hermitian positive-definite R̂ via AᴴA + I.
        let g = DMatrix::<Complex64>::from_fn(m, m, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let r_hat = g.ad_mul(&g) + DMatrix::<Complex64>::identity(m, m);
        let rw_hat = DMatrix::<Complex64>::identity(rank, rank);
        let t = closed_form_projection(&r_hat, &rw_hat, &weight, &a, 0.0).unwrap();
        // Every column must be parallel to R̂⁻¹a.
        let direction = r_hat.clone().lu().solve(&a).unwrap();
        let unit = &direction / Complex64::new(direction.norm(), 0.0);
        for l in 0..rank {
            let column = t.column(l).clone_owned();
            let residual = &column - &unit * unit.dotc(&column);
            assert!(
                residual.norm() <= 1e-10 * column.norm().max(1e-30),
                "column {l} leaves span(R̂⁻¹a)"
            );
        }
        // Constraint holds regardless of the statistics.
        let constraint = weight.dotc(&t.ad_mul(&a));
        assert!((constraint - ONE).norm() < 1e-10);
    }

    #[test]
    fn closed_form_projection_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let a = test_steering(6, 95.0);
        let weight = random_vector(&mut rng, 2, 1.0);
        let g = DMatrix::<Complex64>::from_fn(6, 6, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let r_hat = g.ad_mul(&g) + DMatrix::<Complex64>::identity(6, 6);
        let rw_hat = DMatrix::<Complex64>::identity(2, 2);
        let t1 = closed_form_projection(&r_hat, &rw_hat, &weight, &a, 0.0).unwrap();
        let t2 = closed_form_projection(
            &(&r_hat * Complex64::new(4.0, 0.0)),
            &rw_hat,
            &weight,
            &a,
            0.0,
        )
        .unwrap();
        assert!((&t1 - &t2).norm() < 1e-10);
    }

    #[test]
    fn closed_form_weight_identity_and_hand_case() {
        // R̄ = I → w̄ = ā/‖ā‖².
        let abar = DVector::from_vec(vec![ONE, Complex64::new(0.0, 1.0)]);
        let identity = DMatrix::<Complex64>::identity(2, 2);
        let w = closed_form_weight(&identity, &abar, 0.0).unwrap();
        let expected = &abar / Complex64::new(abar.norm_squared(), 0.0);
        assert!((&w - &expected).norm() < 1e-14);

        // R̄ = diag(1, 2), ā = [1, 1]ᵀ → w̄ = [2/3, 1/3]ᵀ.
        let rbar = DMatrix::from_diagonal(&DVector::from_vec(vec![
            ONE,
            Complex64::new(2.0, 0.0),
        ]));
        let abar = DVector::from_vec(vec![ONE, ONE]);
        let w = closed_form_weight(&rbar, &abar, 0.0).unwrap();
        assert!((w[0] - Complex64::new(2.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!((w[1] - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-14);
        // Constraint āᴴw̄ = 1.
        assert!((abar.dotc(&w) - ONE).norm() < 1e-12);
    }

    #[test]
    fn closed_form_weight_scale_invariant_and_guards() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let g = DMatrix::<Complex64>::from_fn(3, 3, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let rbar = g.ad_mul(&g) + DMatrix::<Complex64>::identity(3, 3);
        let abar = random_vector(&mut rng, 3, 1.0);
        let w1 = closed_form_weight(&rbar, &abar, 0.0).unwrap();
        let w2 =
            closed_form_weight(&(&rbar * Complex64::new(0.2, 0.0)), &abar, 0.0).unwrap();
        assert!((&w1 - &w2).norm() < 1e-10);

        let zero = DVector::<Complex64>::zeros(3);
        assert!(matches!(
            closed_form_weight(&rbar, &zero, 0.0),
            Err(Error::DegenerateSubspace)
        ));
        let singular = DMatrix::<Complex64>::zeros(3, 3);
        assert!(matches!(
            closed_form_weight(&singular, &abar, 0.0),
            Err(Error::SingularMatrix { .. })
        ));
    }
}
