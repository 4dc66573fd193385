//! Small dense kernels shared by the solver, the dual machinery and the sampler.

use nalgebra::{DMatrix, SymmetricEigen};

pub(crate) fn min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    SymmetricEigen::new(symmetrized(a)).eigenvalues.min()
}

pub(crate) fn symmetrized(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

pub(crate) fn frobenius_dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Largest `alpha` with `x + alpha dx` positive semidefinite, for positive definite `x`.
///
/// Returns `None` when `x` is not numerically positive definite.
pub(crate) fn max_psd_step(x: &DMatrix<f64>, dx: &DMatrix<f64>) -> Option<f64> {
    let chol = x.clone().cholesky()?;
    let l = chol.l();
    let a = l.solve_lower_triangular(dx)?;
    let b = l.solve_lower_triangular(&a.transpose())?;
    let lam = min_eigenvalue(&b);
    Some(if lam >= 0.0 { f64::INFINITY } else { -1.0 / lam })
}

/// Largest `alpha` with `v + alpha dv >= 0` componentwise, for positive `v`.
pub(crate) fn max_nonneg_step(v: &[f64], dv: &[f64]) -> f64 {
    v.iter()
        .zip(dv)
        .filter(|(_, &d)| d < 0.0)
        .map(|(&x, &d)| -x / d)
        .fold(f64::INFINITY, f64::min)
}

/// Spectral norm of a symmetric matrix.
pub(crate) fn sym_norm(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    SymmetricEigen::new(symmetrized(a))
        .eigenvalues
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psd_step_on_diagonal() {
        let x = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0]));
        let dx = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-0.5, 1.0]));
        assert!((max_psd_step(&x, &dx).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(max_psd_step(&x, &(dx.abs())).unwrap(), f64::INFINITY);
        assert!(max_psd_step(&(-x), &dx).is_none());
    }

    #[test]
    fn nonneg_step() {
        assert_eq!(max_nonneg_step(&[1.0, 2.0], &[-1.0, -4.0]), 0.5);
        assert_eq!(max_nonneg_step(&[1.0], &[1.0]), f64::INFINITY);
    }
}
