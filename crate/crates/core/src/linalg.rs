//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// Relative cutoff below which singular values are treated as zero in solves.
const SOLVE_RCOND: f64 = 1e-13;

/// Minimum-norm least-squares solution of `a x ≈ b`.
pub fn lstsq(a: &DMatrix<C64>, b: &DVector<C64>) -> DVector<C64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.solve(b, smax * SOLVE_RCOND)
        .unwrap_or_else(|_| DVector::zeros(a.ncols()))
}

/// Orthonormal basis (as columns) of the numerical null space of `a`:
/// right singular vectors whose singular value is below `rel_tol * σ_max`.
pub fn null_space(a: &DMatrix<C64>, rel_tol: f64) -> DMatrix<C64> {
    let (m, n) = a.shape();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad to square so the SVD yields a full set of right singular vectors.
    let rows = m.max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = if smax == 0.0 { f64::INFINITY } else { rel_tol * smax };
    let cols: Vec<DVector<C64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < cutoff || smax == 0.0)
        .map(|(i, _)| vt.row(i).adjoint())
        .collect();
    if cols.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    DMatrix::from_columns(&cols)
}

/// Outcome of a pivot-thresholded Cholesky attempt.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CholeskyOutcome {
    pub success: bool,
    /// Smallest pivot encountered (the failing pivot when unsuccessful).
    pub min_pivot: f64,
}

/// Cholesky factorization of a Hermitian matrix that succeeds only when every
/// pivot exceeds `threshold`.
pub fn cholesky_pivots(h: &DMatrix<C64>, threshold: f64) -> CholeskyOutcome {
    let n = h.nrows();
    let mut l = DMatrix::<C64>::zeros(n, n);
    let mut min_pivot = f64::INFINITY;
    for j in 0..n {
        let mut diag = h[(j, j)].re;
        for k in 0..j {
            diag -= l[(j, k)].norm_sqr();
        }
        min_pivot = min_pivot.min(diag);
        if !(diag > threshold) {
            return CholeskyOutcome {
                success: false,
                min_pivot: diag,
            };
        }
        let ljj = diag.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    CholeskyOutcome {
        success: true,
        min_pivot,
    }
}

/// Largest `|h_ij − conj(h_ji)|`.
pub fn hermitian_defect(h: &DMatrix<C64>) -> f64 {
    let n = h.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(h: &DMatrix<C64>) -> f64 {
    h.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn det(h: &DMatrix<C64>) -> C64 {
    if h.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    h.clone().lu().determinant()
}

/// Numerical adjugate by cofactors.
pub fn adjugate(h: &DMatrix<C64>) -> DMatrix<C64> {
    let n = h.nrows();
    if n == 1 {
        return DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    }
    DMatrix::from_fn(n, n, |i, j| {
        let minor = h.clone().remove_row(j).remove_column(i);
        let d = det(&minor);
        if (i + j) % 2 == 0 {
            d
        } else {
            -d
        }
    })
}
