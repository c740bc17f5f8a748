//! Small internal linear-algebra helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative residual above which a solve counts as failed. Partial-pivot LU
/// is backward stable, so a large residual against the right-hand side means
/// the system was numerically singular (and inconsistent).
const SOLVE_RESIDUAL_TOL: f64 = 1e-6;

/// Solve `matrix · x = rhs` by LU with a residual check, mapping both exact
/// and numerical singularity to [`Error::SingularMatrix`].
pub(crate) fn solve_checked(
    matrix: &DMatrix<Complex64>,
    rhs: &DVector<Complex64>,
    context: &'static str,
) -> Result<DVector<Complex64>> {
    let singular = || Error::SingularMatrix { context };
    let solution = matrix.clone().lu().solve(rhs).ok_or_else(singular)?;
    if solution.iter().any(|c| !c.is_finite()) {
        return Err(singular());
    }
    let residual = (matrix * &solution - rhs).norm();
    if !residual.is_finite() || residual > SOLVE_RESIDUAL_TOL * rhs.norm().max(f64::MIN_POSITIVE) {
        return Err(singular());
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_well_conditioned_systems() {
        let matrix = DMatrix::<Complex64>::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(3.0, 0.0),
            ],
        );
        let rhs = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let x = solve_checked(&matrix, &rhs, "test").unwrap();
        assert!((&matrix * &x - &rhs).norm() < 1e-12);
    }

    #[test]
    fn flags_inconsistent_singular_systems() {
        // Rank-1 matrix, right-hand side outside its range.
        let u = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)]);
        let mut matrix = DMatrix::<Complex64>::zeros(2, 2);
        matrix.gerc(Complex64::new(1.0, 0.0), &u, &u, Complex64::new(0.0, 0.0));
        let rhs = DVector::from_vec(vec![Complex64::new(0.0, -2.0), Complex64::new(1.0, 0.0)]);
        assert!(matches!(
            solve_checked(&matrix, &rhs, "test"),
            Err(Error::SingularMatrix { .. })
        ));
    }
}
