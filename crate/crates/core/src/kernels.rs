//! Dense proximal operators and elimination statistics used by the solvers
//! and the regularity metric.

use crate::error::{Error, Result};
use crate::scalar::{all_finite, max_abs, DenseMatrix, Real};

/// Singular value thresholding: `U · max(Σ - tau, 0) · Vᵀ`.
///
/// This is the proximal map of `tau·‖·‖_*`, i.e. it minimizes
/// `tau·‖J‖_* + ½‖J - m‖_F²`.
pub fn svt<T: Real>(m: &DenseMatrix<T>, tau: T) -> Result<DenseMatrix<T>> {
    if !all_finite(m) {
        return Err(Error::input("svt: non-finite matrix entry"));
    }
    if tau < T::zero() {
        return Err(Error::input("svt: negative threshold"));
    }
    let (rows, cols) = m.shape();
    // Every singular value is bounded by the Frobenius norm.
    if rows == 0 || cols == 0 || m.norm() <= tau {
        return Ok(DenseMatrix::zeros(rows, cols));
    }
    if tau == T::zero() {
        return Ok(m.clone());
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > tau)
        .collect();
    if keep.is_empty() {
        return Ok(DenseMatrix::zeros(rows, cols));
    }
    let mut us = DenseMatrix::<T>::zeros(rows, keep.len());
    let mut vs = DenseMatrix::<T>::zeros(keep.len(), cols);
    for (c, &k) in keep.iter().enumerate() {
        let shrunk = svd.singular_values[k] - tau;
        us.set_column(c, &(u.column(k) * shrunk));
        vs.set_row(c, &v_t.row(k));
    }
    Ok(us * vs)
}

/// Column-wise group shrinkage, the proximal map of `tau·‖·‖_{2,1}`.
///
/// Columns with norm at or below `tau` become zero; the rest are scaled by
/// `(‖ψ_i‖ - tau) / ‖ψ_i‖`.
pub fn l21_prox<T: Real>(psi: &DenseMatrix<T>, tau: T) -> Result<DenseMatrix<T>> {
    if !all_finite(psi) {
        return Err(Error::input("l21_prox: non-finite matrix entry"));
    }
    if tau < T::zero() {
        return Err(Error::input("l21_prox: negative threshold"));
    }
    let mut out = psi.clone();
    for mut col in out.column_iter_mut() {
        let norm = col.norm();
        if norm > tau {
            col *= (norm - tau) / norm;
        } else {
            col.fill(T::zero());
        }
    }
    Ok(out)
}

/// Rank and nonzero count of the reduced row echelon form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EchelonStats {
    pub rank: usize,
    pub nnz: usize,
}

/// Gauss-Jordan elimination with partial pivoting.
///
/// Values with magnitude at or below `tol · max|m|` count as zero, both when
/// choosing pivots and when counting nonzeros of the reduced form.
pub fn rref_stats<T: Real>(m: &DenseMatrix<T>, tol: T) -> Result<EchelonStats> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::input("rref_stats: empty matrix"));
    }
    if tol <= T::zero() {
        return Err(Error::input("rref_stats: tolerance must be positive"));
    }
    if !all_finite(m) {
        return Err(Error::input("rref_stats: non-finite matrix entry"));
    }
    let scale = max_abs(m);
    if scale == T::zero() {
        return Ok(EchelonStats { rank: 0, nnz: 0 });
    }
    let thresh = tol * scale;
    let mut a = m.clone();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let (best, best_abs) = (pivot_row..rows)
            .map(|r| (r, a[(r, col)].abs()))
            .fold((pivot_row, T::zero()), |acc, cand| if cand.1 > acc.1 { cand } else { acc });
        if best_abs <= thresh {
            for r in pivot_row..rows {
                a[(r, col)] = T::zero();
            }
            continue;
        }
        a.swap_rows(pivot_row, best);
        let p = a[(pivot_row, col)];
        for c in col..cols {
            a[(pivot_row, c)] /= p;
        }
        for r in 0..rows {
            if r == pivot_row {
                continue;
            }
            let f = a[(r, col)];
            if f == T::zero() {
                continue;
            }
            for c in col..cols {
                let v = a[(pivot_row, c)];
                a[(r, c)] -= f * v;
            }
            a[(r, col)] = T::zero();
        }
        pivot_row += 1;
    }
    let nnz = a.iter().filter(|v| v.abs() > thresh).count();
    Ok(EchelonStats {
        rank: pivot_row,
        nnz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;
    use proptest::prelude::*;

    #[test]
    fn svt_diagonal() {
        let m = dmatrix![2.0, 0.0; 0.0, 0.5];
        let j = svt(&m, 1.0).unwrap();
        assert_abs_diff_eq!(j, dmatrix![1.0, 0.0; 0.0, 0.0], epsilon = 1e-12);
    }

    #[test]
    fn svt_zero_threshold_is_identity() {
        let m = dmatrix![0.3, -1.2, 4.0; 2.0, 0.1, -0.7; 0.0, 5.0, 1.0];
        assert_abs_diff_eq!(svt(&m, 0.0).unwrap(), m, epsilon = 1e-12);
    }

    #[test]
    fn svt_rejects_nan() {
        let m = dmatrix![f64::NAN, 0.0; 0.0, 1.0];
        assert!(matches!(svt(&m, 1.0), Err(Error::Input(_))));
    }

    #[test]
    fn l21_examples() {
        let above = l21_prox(&dmatrix![3.0; 4.0], 1.0).unwrap();
        assert_abs_diff_eq!(above, dmatrix![2.4; 3.2], epsilon = 1e-12);
        let below = l21_prox(&dmatrix![0.3; 0.4], 1.0).unwrap();
        assert_eq!(below, dmatrix![0.0; 0.0]);
        // tie at the threshold maps to zero
        let tie = l21_prox(&dmatrix![3.0; 4.0], 5.0).unwrap();
        assert_eq!(tie, dmatrix![0.0; 0.0]);
    }

    #[test]
    fn rref_examples() {
        let eye = DenseMatrix::<f64>::identity(3, 3);
        assert_eq!(rref_stats(&eye, 1e-6).unwrap(), EchelonStats { rank: 3, nnz: 3 });
        let ones = dmatrix![1.0, 1.0; 1.0, 1.0];
        assert_eq!(rref_stats(&ones, 1e-6).unwrap(), EchelonStats { rank: 1, nnz: 2 });
        let zero = DenseMatrix::<f64>::zeros(3, 3);
        assert_eq!(rref_stats(&zero, 1e-6).unwrap(), EchelonStats { rank: 0, nnz: 0 });
        assert!(rref_stats(&DenseMatrix::<f64>::zeros(0, 0), 1e-6).is_err());
    }

    #[test]
    fn kernels_work_in_single_precision() {
        let m = nalgebra::dmatrix![2.0f32, 0.0; 0.0, 0.5];
        let j = svt(&m, 1.0f32).unwrap();
        assert!((j[(0, 0)] - 1.0).abs() < 1e-5 && j[(1, 1)].abs() < 1e-5);
        assert_eq!(rref_stats(&m, 1e-4f32).unwrap().rank, 2);
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix<f64>> {
        prop::collection::vec(-3.0f64..3.0, rows * cols)
            .prop_map(move |v| DenseMatrix::from_vec(rows, cols, v))
    }

    fn sorted_spectrum(m: &DenseMatrix<f64>) -> Vec<f64> {
        let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    }

    proptest! {
        #[test]
        fn svt_soft_thresholds_spectrum(m in arb_matrix(5, 4), tau in 0.0f64..4.0) {
            let out = svt(&m, tau).unwrap();
            let expect: Vec<f64> = sorted_spectrum(&m).iter().map(|s| (s - tau).max(0.0)).collect();
            let got = sorted_spectrum(&out);
            for (a, b) in expect.iter().zip(&got) {
                prop_assert!((a - b).abs() < 1e-8);
            }
        }

        #[test]
        fn l21_scales_columns(m in arb_matrix(4, 5), tau in 0.0f64..5.0) {
            let out = l21_prox(&m, tau).unwrap();
            for c in 0..m.ncols() {
                let n_in = m.column(c).norm();
                let n_out = out.column(c).norm();
                prop_assert!((n_out - (n_in - tau).max(0.0)).abs() < 1e-10);
                // nonnegative scaling of the input column
                prop_assert!(out.column(c).dot(&m.column(c)) >= -1e-12);
                if n_out > 0.0 {
                    let diff = out.column(c) * n_in - m.column(c) * n_out;
                    prop_assert!(diff.norm() < 1e-9);
                }
            }
        }

        #[test]
        fn rref_rank_ignores_row_order(m in arb_matrix(5, 5), swap in (0usize..5, 0usize..5)) {
            let mut p = m.clone();
            p.swap_rows(swap.0, swap.1);
            prop_assert_eq!(
                rref_stats(&m, 1e-6).unwrap().rank,
                rref_stats(&p, 1e-6).unwrap().rank
            );
        }

        #[test]
        fn kernels_are_deterministic(m in arb_matrix(4, 4)) {
            prop_assert_eq!(svt(&m, 0.5).unwrap(), svt(&m, 0.5).unwrap());
            prop_assert_eq!(l21_prox(&m, 0.5).unwrap(), l21_prox(&m, 0.5).unwrap());
        }
    }
}
