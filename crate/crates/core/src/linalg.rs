//! Small dense linear-algebra helpers shared by the sensing, solver, and
//! certification modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Returns `(eigenvalues, eigenvectors)` with columns matching the value
/// order. The input must be Hermitian; this is not checked.
pub fn hermitian_eigen(matrix: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(matrix.nrows(), matrix.ncols(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn lambda_min_hermitian(matrix: &DMatrix<Complex64>) -> f64 {
    matrix
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, &v| acc.min(v))
}

/// Hermitian square root `U diag(sqrt(lambda)) U^*`.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything more negative
/// fails as not positive semidefinite.
pub fn hermitian_sqrt(matrix: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let (values, vectors) = hermitian_eigen(matrix);
    let mut roots = Vec::with_capacity(values.len());
    for &v in &values {
        if v < -1e-10 {
            return Err(Error::NotPositiveSemidefinite { lambda_min: v });
        }
        roots.push(Complex64::new(v.max(0.0).sqrt(), 0.0));
    }
    let lam = DMatrix::from_diagonal(&DVector::from_vec(roots));
    Ok(&vectors * lam * vectors.adjoint())
}

/// Least-squares solution of `min ||b - A x||_2` via QR.
///
/// Fails if the triangular factor is numerically rank-deficient.
pub fn least_squares(a: &DMatrix<Complex64>, b: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    let rows = a.nrows();
    let cols = a.ncols();
    if rows < cols {
        return Err(Error::Parameter(format!(
            "least squares needs at least as many rows ({rows}) as columns ({cols})"
        )));
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let diag_max = (0..cols).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
    let threshold = diag_max * (rows.max(cols) as f64) * f64::EPSILON * 16.0;
    if (0..cols).any(|i| r[(i, i)].norm() <= threshold) {
        return Err(Error::NumericalRank(format!(
            "QR factor has a negligible diagonal entry (threshold {threshold:.3e})"
        )));
    }
    let rhs = qr.q().adjoint() * b;
    r.solve_upper_triangular(&rhs)
        .ok_or_else(|| Error::NumericalRank("upper-triangular solve failed".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigen_of_hermitian_tridiagonal() {
        // Toeplitz tridiagonal with unit diagonal and off-diagonal 1/4:
        // eigenvalues 1 + 0.5 cos(k pi / 4), k = 1..3.
        let v = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(0.25, 0.0),
                c(0.0, 0.0),
                c(0.25, 0.0),
                c(1.0, 0.0),
                c(0.25, 0.0),
                c(0.0, 0.0),
                c(0.25, 0.0),
                c(1.0, 0.0),
            ],
        );
        let (values, vectors) = hermitian_eigen(&v);
        let expected = [
            1.0 - 0.5 * (std::f64::consts::FRAC_PI_4).cos(),
            1.0,
            1.0 + 0.5 * (std::f64::consts::FRAC_PI_4).cos(),
        ];
        for (got, want) in values.iter().zip(expected) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(lambda_min_hermitian(&v), expected[0], epsilon = 1e-12);

        let lam = DMatrix::from_diagonal(&DVector::from_vec(
            values.iter().map(|&x| c(x, 0.0)).collect(),
        ));
        let rec = &vectors * lam * vectors.adjoint();
        assert!((rec - v).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn sqrt_squares_back() {
        let v = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.3, 0.2), c(0.3, -0.2), c(1.0, 0.0)],
        );
        let s = hermitian_sqrt(&v).unwrap();
        let sq = &s * &s;
        assert!((sq - &v).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let v = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        assert!(matches!(
            hermitian_sqrt(&v),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn least_squares_recovers_exact_solution() {
        let a = DMatrix::from_row_slice(
            4,
            2,
            &[
                c(1.0, 0.0),
                c(0.0, 1.0),
                c(1.0, 1.0),
                c(2.0, 0.0),
                c(0.5, 0.0),
                c(1.0, -1.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ],
        );
        let x = DVector::from_vec(vec![c(1.0, -2.0), c(0.5, 0.25)]);
        let b = &a * &x;
        let got = least_squares(&a, &b).unwrap();
        assert!((got - x).norm() < 1e-12);
    }

    #[test]
    fn least_squares_flags_rank_deficiency() {
        let col = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        let a = DMatrix::from_fn(3, 2, |r, _| col[r]);
        let b = DVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            least_squares(&a, &b),
            Err(Error::NumericalRank(_))
        ));
    }
}
