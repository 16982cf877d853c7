//! Long-run (HAC), heteroskedasticity-robust, and wild-block-bootstrap
//! variance estimators.
//!
//! The Bartlett long-run variance is
//!
//! ```text
//! L = G_0 + sum_{j=1}^{J} (1 - j/(J+1)) (G_j + G_j')
//! G_j = (1/T) sum_{t=j+1}^{T} g_t g_{t-j}'
//! ```
//!
//! with scores demeaned first and autocovariances divided by `T` (not
//! `T - j`), which keeps the estimate positive semi-definite.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::design::RegressionDesign;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::{derive_seed, rng_from_seed};
use crate::spec::HcVariant;

/// A Bartlett-kernel long-run covariance estimate.
#[derive(Debug, Clone)]
pub struct LrvEstimate {
    /// k x k long-run covariance (k = 1 gives a scalar in a 1x1 matrix).
    pub value: DMatrix<f64>,
    /// Truncation lag J used in the kernel sum.
    pub truncation: usize,
}

impl LrvEstimate {
    /// Convenience accessor for the scalar (k = 1) case.
    pub fn scalar(&self) -> f64 {
        self.value[(0, 0)]
    }
}

/// Newey-West long-run variance of score rows (`T x k`), demeaned
/// column-wise before the autocovariances are formed.
pub fn newey_west_lrv(scores: &DMatrix<f64>, truncation: usize) -> Result<LrvEstimate> {
    let (t_len, k) = scores.shape();
    if k == 0 {
        return Err(Error::InvalidData("scores have zero columns".into()));
    }
    if t_len < truncation + 2 {
        return Err(Error::InsufficientObservations {
            required: truncation + 2,
            available: t_len,
            context: "newey-west".into(),
        });
    }

    let mut demeaned = scores.clone();
    for j in 0..k {
        let mean = demeaned.column(j).sum() / t_len as f64;
        for i in 0..t_len {
            demeaned[(i, j)] -= mean;
        }
    }

    let autocov = |lag: usize| -> DMatrix<f64> {
        let mut g = DMatrix::zeros(k, k);
        for t in lag..t_len {
            for a in 0..k {
                let ga = demeaned[(t, a)];
                for b in 0..k {
                    g[(a, b)] += ga * demeaned[(t - lag, b)];
                }
            }
        }
        g / t_len as f64
    };

    let mut value = autocov(0);
    for j in 1..=truncation {
        let weight = 1.0 - j as f64 / (truncation as f64 + 1.0);
        let gj = autocov(j);
        value += (&gj + gj.transpose()) * weight;
    }
    Ok(LrvEstimate {
        value,
        truncation,
    })
}

/// Scalar-series convenience wrapper around [`newey_west_lrv`].
pub fn newey_west_lrv_scalar(values: &[f64], truncation: usize) -> Result<f64> {
    let m = DMatrix::from_column_slice(values.len(), 1, values);
    Ok(newey_west_lrv(&m, truncation)?.scalar())
}

/// Heteroskedasticity-robust covariance of the coefficient vector:
/// `(X'X)^-1 X' diag(w u^2) X (X'X)^-1` with HC0/HC1/HC3 weights.
pub fn hc_variance(
    design: &RegressionDesign,
    residuals: &DVector<f64>,
    variant: HcVariant,
) -> Result<DMatrix<f64>> {
    let x = &design.regressors;
    let (n, k) = x.shape();
    if residuals.len() != n {
        return Err(Error::InvalidData(format!(
            "residual length {} does not match {} design rows",
            residuals.len(),
            n
        )));
    }
    let xtx_inv = linalg::sym_inverse(&(x.transpose() * x))?;

    let mut meat = DMatrix::zeros(k, k);
    for t in 0..n {
        let row = x.row(t);
        let weight = match variant {
            HcVariant::Hc0 => 1.0,
            HcVariant::Hc1 => n as f64 / (n - k) as f64,
            HcVariant::Hc3 => {
                let leverage = (row * &xtx_inv * row.transpose())[(0, 0)];
                let slack = 1.0 - leverage;
                if slack < 1e-12 {
                    return Err(Error::Estimation(format!(
                        "leverage equals one at row {t}; HC3 weight undefined"
                    )));
                }
                1.0 / (slack * slack)
            }
        };
        let scale = weight * residuals[t] * residuals[t];
        for a in 0..k {
            for b in 0..k {
                meat[(a, b)] += scale * row[a] * row[b];
            }
        }
    }
    Ok(&xtx_inv * meat * &xtx_inv)
}

/// Wild block bootstrap standard error of the mean of `values`.
///
/// The series is demeaned, consecutive blocks of length `block_size` (the
/// last block may be shorter) each receive an independent Rademacher weight
/// per replicate, and the replicate statistic is the weighted mean plus the
/// original mean. Returns the standard deviation across replicate means.
/// Deterministic for a given seed regardless of scheduling: replicate `r`
/// draws from the sub-stream `derive_seed(seed, r)`.
pub fn wild_block_bootstrap_se(
    values: &[f64],
    block_size: usize,
    replications: usize,
    seed: u64,
) -> Result<f64> {
    wild_block_bootstrap_impl(values, block_size, replications, |rep, n_blocks| {
        let mut rng = rng_from_seed(derive_seed(seed, rep as u64));
        (0..n_blocks)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect()
    })
}

/// Bootstrap engine with injectable block weights (test hook).
pub(crate) fn wild_block_bootstrap_impl<F>(
    values: &[f64],
    block_size: usize,
    replications: usize,
    mut block_weights: F,
) -> Result<f64>
where
    F: FnMut(usize, usize) -> Vec<f64>,
{
    let n = values.len();
    if block_size == 0 || block_size > n / 2 {
        return Err(Error::InvalidParameter(format!(
            "block size {block_size} outside [1, {}]",
            n / 2
        )));
    }
    if replications < 2 {
        return Err(Error::InvalidParameter(
            "bootstrap needs at least 2 replications".into(),
        ));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let n_blocks = n.div_ceil(block_size);

    let mut rep_means = Vec::with_capacity(replications);
    for rep in 0..replications {
        let weights = block_weights(rep, n_blocks);
        debug_assert_eq!(weights.len(), n_blocks);
        let mut acc = 0.0;
        for (t, v) in centered.iter().enumerate() {
            acc += weights[t / block_size] * v;
        }
        rep_means.push(mean + acc / n as f64);
    }

    let grand = rep_means.iter().sum::<f64>() / replications as f64;
    let var = rep_means
        .iter()
        .map(|m| (m - grand) * (m - grand))
        .sum::<f64>()
        / (replications - 1) as f64;
    Ok(var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Roles, TimeSeriesDataset};
    use crate::design::build_design;
    use crate::spec::LpSpec;
    use approx::assert_relative_eq;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn bartlett_sum_hand_example() {
        // Scores 1,-1,1,-1: G0 = 1, G1 = -3/4, value = 1 + 0.5*2*(-0.75).
        let v = newey_west_lrv_scalar(&[1.0, -1.0, 1.0, -1.0], 1).unwrap();
        assert_relative_eq!(v, 0.25, epsilon = 1e-14);
    }

    #[test]
    fn truncation_zero_is_divisor_t_variance() {
        let xs = [0.3, -1.2, 0.8, 2.0, -0.4, 0.1];
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        assert_relative_eq!(newey_west_lrv_scalar(&xs, 0).unwrap(), var, epsilon = 1e-14);
    }

    #[test]
    fn constant_series_has_zero_lrv() {
        assert_relative_eq!(
            newey_west_lrv_scalar(&[3.5; 20], 3).unwrap(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn lrv_invariant_to_constant_shift() {
        let xs: Vec<f64> = (0..50).map(|i| ((i * 13 % 7) as f64).sin()).collect();
        let shifted: Vec<f64> = xs.iter().map(|x| x + 100.0).collect();
        assert_relative_eq!(
            newey_west_lrv_scalar(&xs, 4).unwrap(),
            newey_west_lrv_scalar(&shifted, 4).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn lrv_is_psd_on_random_multivariate_scores() {
        let mut rng = crate::rng::rng_from_seed(99);
        for trial in 0..20 {
            let t_len = 30 + trial;
            let mut scores = DMatrix::zeros(t_len, 3);
            for i in 0..t_len {
                for j in 0..3 {
                    scores[(i, j)] = StandardNormal.sample(&mut rng);
                }
            }
            let lrv = newey_west_lrv(&scores, 5).unwrap();
            assert!(linalg::min_eigenvalue(&lrv.value) >= -1e-12);
            let sym_gap = (&lrv.value - lrv.value.transpose()).abs().max();
            assert!(sym_gap < 1e-12);
        }
    }

    #[test]
    fn lrv_rejects_truncation_at_or_past_t() {
        assert!(newey_west_lrv_scalar(&[1.0, 2.0, 3.0], 3).is_err());
    }

    fn tiny_design() -> (RegressionDesign, DVector<f64>) {
        let y = vec![1.0, 0.4, -0.3, 2.2, 1.7];
        let s = vec![0.2, -1.0, 0.5, 1.4, -0.7];
        let data = TimeSeriesDataset::new(
            vec![("y", y), ("s", s)],
            Roles::new("y", "s"),
        )
        .unwrap();
        let spec = LpSpec::new(0);
        let d = build_design(&data, &spec, 0).unwrap();
        let fit = linalg::lstsq(&d.regressors, &d.responses).unwrap();
        let resid = fit.residuals;
        (d, resid)
    }

    #[test]
    fn hc1_is_hc0_scaled_by_dof_ratio() {
        let (d, resid) = tiny_design();
        let hc0 = hc_variance(&d, &resid, HcVariant::Hc0).unwrap();
        let hc1 = hc_variance(&d, &resid, HcVariant::Hc1).unwrap();
        let n = d.n_rows() as f64;
        let k = d.n_cols() as f64;
        assert_relative_eq!(hc1, hc0 * (n / (n - k)), epsilon = 1e-14);
    }

    #[test]
    fn hc3_matches_explicit_sandwich_oracle() {
        let (d, resid) = tiny_design();
        let hc3 = hc_variance(&d, &resid, HcVariant::Hc3).unwrap();

        // Independent oracle: everything by explicit scalar algebra.
        let x = &d.regressors;
        let n = x.nrows();
        let k = x.ncols();
        let mut xtx = vec![vec![0.0; k]; k];
        for t in 0..n {
            for a in 0..k {
                for b in 0..k {
                    xtx[a][b] += x[(t, a)] * x[(t, b)];
                }
            }
        }
        // 2x2 inverse by cofactors.
        assert_eq!(k, 2);
        let det = xtx[0][0] * xtx[1][1] - xtx[0][1] * xtx[1][0];
        let inv = [
            [xtx[1][1] / det, -xtx[0][1] / det],
            [-xtx[1][0] / det, xtx[0][0] / det],
        ];
        let mut meat = [[0.0; 2]; 2];
        for t in 0..n {
            let xt = [x[(t, 0)], x[(t, 1)]];
            let mut lev = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    lev += xt[a] * inv[a][b] * xt[b];
                }
            }
            let w = resid[t] * resid[t] / ((1.0 - lev) * (1.0 - lev));
            for a in 0..2 {
                for b in 0..2 {
                    meat[a][b] += w * xt[a] * xt[b];
                }
            }
        }
        let mut oracle = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        oracle[a][b] += inv[a][i] * meat[i][j] * inv[j][b];
                    }
                }
            }
        }
        for a in 0..2 {
            for b in 0..2 {
                assert_relative_eq!(hc3[(a, b)], oracle[a][b], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn hc_is_symmetric_psd_and_hc3_dominates_hc0() {
        let (d, resid) = tiny_design();
        for variant in [HcVariant::Hc0, HcVariant::Hc1, HcVariant::Hc3] {
            let v = hc_variance(&d, &resid, variant).unwrap();
            assert!((&v - v.transpose()).abs().max() < 1e-12);
            assert!(linalg::min_eigenvalue(&v) >= -1e-12);
        }
        let hc0 = hc_variance(&d, &resid, HcVariant::Hc0).unwrap();
        let hc3 = hc_variance(&d, &resid, HcVariant::Hc3).unwrap();
        for a in 0..d.n_cols() {
            assert!(hc3[(a, a)] >= hc0[(a, a)]);
        }
    }

    #[test]
    fn forced_unit_weights_give_zero_se() {
        let xs: Vec<f64> = (0..30).map(|i| (i as f64 * 0.77).sin() * 2.0).collect();
        let se = wild_block_bootstrap_impl(&xs, 4, 50, |_, n_blocks| vec![1.0; n_blocks]).unwrap();
        assert_relative_eq!(se, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn constant_series_bootstraps_to_zero_se() {
        let se = wild_block_bootstrap_se(&[2.5; 40], 5, 200, 7).unwrap();
        assert_relative_eq!(se, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn iid_bootstrap_se_matches_analytic_formula() {
        let mut rng = crate::rng::rng_from_seed(1234);
        let t_len = 500;
        let xs: Vec<f64> = (0..t_len)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let se = wild_block_bootstrap_se(&xs, 1, 2000, 42).unwrap();
        let mean = xs.iter().sum::<f64>() / t_len as f64;
        let sd =
            (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (t_len - 1) as f64).sqrt();
        let analytic = sd / (t_len as f64).sqrt();
        assert!((se - analytic).abs() / analytic < 0.10);
    }

    #[test]
    fn two_seeds_agree_within_monte_carlo_error() {
        let mut rng = crate::rng::rng_from_seed(5);
        let xs: Vec<f64> = (0..400).map(|_| StandardNormal.sample(&mut rng)).collect();
        let b = 2000;
        let se1 = wild_block_bootstrap_se(&xs, 4, b, 11).unwrap();
        let se2 = wild_block_bootstrap_se(&xs, 4, b, 22).unwrap();
        // sd of a bootstrap SE estimate is roughly se / sqrt(2 B).
        let mc_se = |se: f64| se / (2.0 * b as f64).sqrt();
        let tol = 3.0 * (mc_se(se1).powi(2) + mc_se(se2).powi(2)).sqrt();
        assert!((se1 - se2).abs() < tol, "se1={se1} se2={se2} tol={tol}");
    }

    #[test]
    fn bootstrap_validates_parameters() {
        let xs = vec![1.0; 10];
        assert!(wild_block_bootstrap_se(&xs, 0, 100, 1).is_err());
        assert!(wild_block_bootstrap_se(&xs, 6, 100, 1).is_err());
        assert!(wild_block_bootstrap_se(&xs, 2, 1, 1).is_err());
    }

    #[test]
    fn bootstrap_is_deterministic_given_seed() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 7 % 13) as f64) - 6.0).collect();
        let a = wild_block_bootstrap_se(&xs, 8, 500, 123).unwrap();
        let b = wild_block_bootstrap_se(&xs, 8, 500, 123).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
