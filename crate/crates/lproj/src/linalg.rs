//! Small dense linear-algebra helpers shared by the estimators.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Condition-number limit beyond which a regressor matrix is treated as
/// rank deficient. No silent regularization is applied past this point.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Least-squares fit of `y` on the columns of `x`, solved through the SVD.
#[derive(Debug, Clone)]
pub struct LstsqFit {
    pub coefficients: DVector<f64>,
    pub residuals: DVector<f64>,
    pub fitted: DVector<f64>,
    /// (X'X)^-1, reconstructed from the SVD factors.
    pub xtx_inv: DMatrix<f64>,
    /// Condition number of `x` (ratio of extreme singular values).
    pub condition: f64,
}

/// Solves min ||y - X b|| and reports the pieces the variance estimators need.
///
/// Fails when `x` has more columns than rows or its condition number exceeds
/// [`CONDITION_LIMIT`].
pub fn lstsq(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<LstsqFit> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(Error::InvalidData(format!(
            "response length {} does not match {} design rows",
            y.len(),
            n
        )));
    }
    if n < k {
        return Err(Error::InsufficientObservations {
            required: k,
            available: n,
            context: "least squares".into(),
        });
    }
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(Error::RankDeficient {
            condition,
            limit: CONDITION_LIMIT,
            horizon: 0,
        });
    }
    let coefficients = svd
        .solve(y, 0.0)
        .map_err(|e| Error::SingularMatrix(e.to_string()))?;
    let fitted = x * &coefficients;
    let residuals = y - &fitted;

    // (X'X)^-1 = V S^-2 V'
    let v_t = svd.v_t.as_ref().expect("svd computed with vectors");
    let mut vs = v_t.transpose();
    for j in 0..vs.ncols() {
        let s = svd.singular_values[j];
        for i in 0..vs.nrows() {
            vs[(i, j)] /= s * s;
        }
    }
    let xtx_inv = &vs * v_t;

    Ok(LstsqFit {
        coefficients,
        residuals,
        fitted,
        xtx_inv,
        condition,
    })
}

/// Inverts a symmetric matrix through its eigendecomposition, failing when
/// the condition number exceeds [`CONDITION_LIMIT`].
pub fn sym_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = m.clone().symmetric_eigen();
    let emax = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let emin_abs = eig
        .eigenvalues
        .iter()
        .map(|e| e.abs())
        .fold(f64::MAX, f64::min);
    if emin_abs == 0.0 || emax.abs() / emin_abs > CONDITION_LIMIT {
        return Err(Error::SingularMatrix(format!(
            "symmetric inverse: condition number exceeds {CONDITION_LIMIT:.1e}"
        )));
    }
    let mut q = eig.eigenvectors.clone();
    for j in 0..q.ncols() {
        let e = eig.eigenvalues[j];
        for i in 0..q.nrows() {
            q[(i, j)] /= e;
        }
    }
    Ok(&q * eig.eigenvectors.transpose())
}

/// Symmetric PSD square-root factor `F` with `F F' = m`.
///
/// Eigenvalues below `-1e-10` are an error; values in `[-1e-10, 0]` are
/// clamped to zero so numerically semi-definite covariances factor cleanly.
pub fn psd_factor(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = m.clone().symmetric_eigen();
    let mut f = eig.eigenvectors.clone();
    for j in 0..f.ncols() {
        let e = eig.eigenvalues[j];
        if e < -1e-10 {
            return Err(Error::NotPositiveSemiDefinite { eigenvalue: e });
        }
        let s = e.max(0.0).sqrt();
        for i in 0..f.nrows() {
            f[(i, j)] *= s;
        }
    }
    Ok(f)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::MAX, f64::min)
}
