//! Gram-Schmidt re-orthonormalization of the projection matrix and the
//! orthogonally-constrained variant of the joint iteration.
//!
//! The orthogonal constraint `T_rᴴT_r = I` is enforced by replacing the
//! projection matrix with its Gram-Schmidt orthonormalization after every
//! projection update. Modified Gram-Schmidt (sequential re-projection
//! against the already-orthonormalized columns) is used for numerical
//! stability; in exact arithmetic it matches the classical formula.
//!
//! Re-orthonormalization changes `ā = T_rᴴa`, which breaks the joint
//! response constraint, so each iteration ends with an exact complex rescale
//! of the weight restoring it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jio::JioState;

/// Relative residual below which a column counts as linearly dependent.
const RANK_TOL: f64 = 1e-8;

/// Orthonormalize the columns of `matrix` by modified Gram-Schmidt.
///
/// Column l of the output is a unit vector inside `span{t_1…t_l}`, and the
/// full column spaces of input and output are identical. Each output column
/// is rotated so its largest-magnitude entry is real positive, which makes
/// the result deterministic. A column whose residual falls below
/// `1e-8`× its original norm trips a rank-deficiency error naming the
/// column.
pub fn gs_orthonormalize(matrix: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let mut q = matrix.clone();
    for l in 0..q.ncols() {
        let mut v = q.column(l).clone_owned();
        let original_norm = v.norm();
        for j in 0..l {
            let basis = q.column(j);
            let coefficient = basis.dotc(&v);
            v.axpy(-coefficient, &basis, Complex64::new(1.0, 0.0));
        }
        let norm = v.norm();
        if norm <= RANK_TOL * original_norm || !(norm > 0.0) {
            return Err(Error::RankDeficient { column: l });
        }
        v /= Complex64::new(norm, 0.0);
        // Deterministic phase: largest-magnitude entry made real positive.
        let pivot = v
            .iter()
            .copied()
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .expect("columns are non-empty");
        if pivot.norm_sqr() > 0.0 {
            let phase = pivot / Complex64::new(pivot.norm(), 0.0);
            v *= phase.conj();
        }
        q.set_column(l, &v);
    }
    Ok(q)
}

/// One orthogonally-constrained joint iteration: projection SG update, GS
/// re-orthonormalization, weight SG update against the refreshed subspace
/// (`x̄` and `ā` recomputed from the orthonormal `T_r`), then an exact
/// rescale of the weight restoring the joint response constraint. Both SG
/// updates share the single pre-update output, which is returned.
pub fn jio_gs_iterate(state: &mut JioState, snapshot: &DVector<Complex64>) -> Result<Complex64> {
    let y = state.output(snapshot);
    state.update_projection(snapshot, y);
    let orthonormal = gs_orthonormalize(state.projection())?;
    state.set_projection(orthonormal);
    let projected = state.project(snapshot);
    state.update_weight(&projected, y)?;
    state.restore_constraint()?;
    Ok(y)
}
