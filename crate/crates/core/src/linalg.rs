//! Dense complex linear algebra over `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative cutoff below which singular values count as zero.
const RANK_RTOL: f64 = 1e-12;

/// Minimum-norm least-squares solution of `a·x = b` and its max-abs residual.
pub fn min_norm_solve(a: &CMatrix, b: &CVector) -> (CVector, f64) {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = (smax * RANK_RTOL).max(f64::MIN_POSITIVE);
    let x = svd
        .solve(b, eps)
        .unwrap_or_else(|_| CVector::zeros(a.ncols()));
    let residual = max_abs(&(a * &x - b));
    (x, residual)
}

/// Orthonormal basis of `{x : a·x = 0}` (singular values at most `rtol·σ_max` count as zero).
pub fn null_space(a: &CMatrix, rtol: f64) -> Vec<CVector> {
    let n = a.ncols();
    // pad to square so the thin SVD carries every right singular vector
    let rows = a.nrows().max(n);
    let mut sq = CMatrix::zeros(rows, n);
    sq.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = if smax == 0.0 {
        f64::INFINITY
    } else {
        smax * rtol
    };
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    order
        .into_iter()
        .filter(|&i| smax == 0.0 || svd.singular_values[i] <= cut)
        .map(|i| vt.row(i).adjoint())
        .collect()
}

pub fn determinant(a: &CMatrix) -> Complex64 {
    a.clone().lu().determinant()
}

pub fn inverse(a: &CMatrix) -> Option<CMatrix> {
    a.clone().lu().try_inverse()
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn max_abs(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn min_norm_of_underdetermined_system() {
        let a = CMatrix::from_row_slice(1, 2, &[c(0.5, 0.0), c(0.5, 0.0)]);
        let b = CVector::from_vec(vec![c(1.0, 0.0)]);
        let (x, r) = min_norm_solve(&a, &b);
        assert!(r < 1e-14);
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-14 && (x[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn inconsistent_system_has_residual() {
        let a = CMatrix::from_row_slice(2, 1, &[c(1.0, 0.0), c(1.0, 0.0)]);
        let b = CVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]);
        let (_, r) = min_norm_solve(&a, &b);
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn null_space_of_sum_row() {
        let a = CMatrix::from_row_slice(1, 2, &[c(1.0, 0.0), c(1.0, 0.0)]);
        let ns = null_space(&a, 1e-10);
        assert_eq!(ns.len(), 1);
        assert!((ns[0][0] + ns[0][1]).norm() < 1e-14);
        assert!((ns[0].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn determinant_and_spectrum() {
        let a =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert!((determinant(&a) - c(2.0, 0.0)).norm() < 1e-14);
        let h =
            CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let ev = hermitian_eigenvalues(&h);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }
}
