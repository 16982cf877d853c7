//! Minimum-distance smoothing of an estimated impulse response onto a
//! low-dimensional linear basis, with an overidentification test.

use nalgebra::{DMatrix, DVector};

use crate::dist::chi2_cdf;
use crate::error::{Error, Result};
use crate::estimators::IrfEstimate;
use crate::linalg::{self, sym_inverse};

/// How a basis matrix was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisKind {
    Bspline { degree: usize, interior_knots: Vec<f64> },
    Identity,
    Custom,
}

/// An `(H+1) x k` basis whose columns span the candidate response shapes.
#[derive(Debug, Clone)]
pub struct BasisMatrix {
    pub values: DMatrix<f64>,
    pub kind: BasisKind,
}

impl BasisMatrix {
    /// Full-rank custom basis with `k <= H+1` columns.
    pub fn custom(values: DMatrix<f64>) -> Result<Self> {
        let (rows, k) = values.shape();
        if k == 0 || k > rows {
            return Err(Error::InvalidParameter(format!(
                "basis needs 1..={rows} columns, got {k}"
            )));
        }
        let sv = values.clone().svd(false, false).singular_values;
        if sv.min() <= 0.0 || sv.max() / sv.min() > linalg::CONDITION_LIMIT {
            return Err(Error::RankDeficient {
                condition: sv.max() / sv.min().max(f64::MIN_POSITIVE),
                limit: linalg::CONDITION_LIMIT,
                horizon: 0,
            });
        }
        Ok(Self {
            values,
            kind: BasisKind::Custom,
        })
    }

    /// The saturated basis: fitting it reproduces the estimate exactly.
    pub fn identity(horizons: usize) -> Self {
        Self {
            values: DMatrix::identity(horizons, horizons),
            kind: BasisKind::Identity,
        }
    }

    pub fn n_params(&self) -> usize {
        self.values.ncols()
    }
}

/// Cox-de Boor evaluation of one degree-`d` basis function on a knot
/// vector, with the conventional closure of the last interval.
fn cox_de_boor(knots: &[f64], i: usize, d: usize, u: f64) -> f64 {
    if d == 0 {
        let is_last = knots[i + 1] >= knots[knots.len() - 1] && u == knots[knots.len() - 1];
        return if (knots[i] <= u && u < knots[i + 1]) || is_last {
            1.0
        } else {
            0.0
        };
    }
    let mut value = 0.0;
    let denom_left = knots[i + d] - knots[i];
    if denom_left > 0.0 {
        value += (u - knots[i]) / denom_left * cox_de_boor(knots, i, d - 1, u);
    }
    let denom_right = knots[i + d + 1] - knots[i + 1];
    if denom_right > 0.0 {
        value += (knots[i + d + 1] - u) / denom_right * cox_de_boor(knots, i + 1, d - 1, u);
    }
    value
}

/// B-spline basis over the horizon grid `0 ..= H`, clamped at both ends.
///
/// The knot vector repeats 0 and `H` `degree + 1` times around the strictly
/// increasing interior knots, giving `#interior + degree + 1` columns that
/// are nonnegative and sum to one across each row.
pub fn bspline_basis(horizon_max: usize, degree: usize, interior_knots: &[f64]) -> Result<BasisMatrix> {
    let h_end = horizon_max as f64;
    for w in interior_knots.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParameter(
                "interior knots must be strictly increasing".into(),
            ));
        }
    }
    if interior_knots
        .iter()
        .any(|k| !(*k > 0.0 && *k < h_end))
    {
        return Err(Error::InvalidParameter(format!(
            "interior knots must lie strictly inside (0, {h_end})"
        )));
    }
    let k = interior_knots.len() + degree + 1;
    if k > horizon_max + 1 {
        return Err(Error::InvalidParameter(format!(
            "basis has {k} columns but only {} horizons",
            horizon_max + 1
        )));
    }

    let mut knots = Vec::with_capacity(2 * (degree + 1) + interior_knots.len());
    knots.extend(std::iter::repeat(0.0).take(degree + 1));
    knots.extend_from_slice(interior_knots);
    knots.extend(std::iter::repeat(h_end).take(degree + 1));

    let mut values = DMatrix::zeros(horizon_max + 1, k);
    for h in 0..=horizon_max {
        let u = h as f64;
        for j in 0..k {
            values[(h, j)] = cox_de_boor(&knots, j, degree, u);
        }
    }
    Ok(BasisMatrix {
        values,
        kind: BasisKind::Bspline {
            degree,
            interior_knots: interior_knots.to_vec(),
        },
    })
}

/// Default smoothing basis: cubic with an interior knot every third
/// horizon, dropping the degree on grids too short for a cubic.
pub fn default_bspline(horizon_max: usize) -> Result<BasisMatrix> {
    let interior: Vec<f64> = (1..)
        .map(|i| (3 * i) as f64)
        .take_while(|k| *k < horizon_max as f64)
        .collect();
    // Column count is #interior + degree + 1 and may not exceed H + 1.
    let max_degree = horizon_max.saturating_sub(interior.len());
    bspline_basis(horizon_max, max_degree.min(3), &interior)
}

/// A fitted minimum-distance smooth of an impulse response.
#[derive(Debug, Clone)]
pub struct SmoothFit {
    pub theta: DVector<f64>,
    /// The smoothed path `Phi theta` on the horizon grid.
    pub fitted: Vec<f64>,
    /// Minimized weighted distance.
    pub q_statistic: f64,
    /// Overidentifying restrictions: horizons minus parameters.
    pub df: usize,
    /// Upper-tail chi-square p-value of `q_statistic`; 1 when `df == 0`.
    pub p_value: f64,
    pub cov_theta: DMatrix<f64>,
}

/// Weighted minimum-distance fit of `irf.beta` onto the basis columns:
/// generalized least squares in the metric of the inverse joint covariance,
/// so the criterion doubles as an overidentification statistic.
pub fn fit_smooth_irf(irf: &IrfEstimate, basis: &BasisMatrix) -> Result<SmoothFit> {
    let d = irf.horizons();
    let omega = irf.cov.as_ref().ok_or_else(|| {
        Error::InvalidData("smoothing needs the joint covariance (gmm estimates)".into())
    })?;
    if basis.values.nrows() != d {
        return Err(Error::InvalidData(format!(
            "basis has {} rows but the estimate covers {} horizons",
            basis.values.nrows(),
            d
        )));
    }
    let omega_inv = sym_inverse(omega)?;
    let phi = &basis.values;
    let beta = DVector::from_column_slice(&irf.beta);

    let gram = phi.transpose() * &omega_inv * phi;
    let cov_theta = sym_inverse(&gram)?;
    let theta = &cov_theta * (phi.transpose() * (&omega_inv * &beta));
    let fitted_vec = phi * &theta;
    let resid = &beta - &fitted_vec;
    let q_statistic = (resid.transpose() * &omega_inv * &resid)[(0, 0)].max(0.0);
    let k = basis.n_params();
    let df = d - k;
    let p_value = if df == 0 {
        1.0
    } else {
        1.0 - chi2_cdf(df, q_statistic)
    };
    Ok(SmoothFit {
        theta,
        fitted: fitted_vec.iter().copied().collect(),
        q_statistic,
        df,
        p_value,
        cov_theta: (&cov_theta + cov_theta.transpose()) * 0.5,
    })
}
