//! The local projection estimators: per-horizon OLS, feasible GLS (two
//! variants), lag augmentation, stacked GMM/IV, and the split-panel
//! jackknife combination.

use nalgebra::{DMatrix, DVector};

use crate::dataset::TimeSeriesDataset;
use crate::design::{build_design, build_design_on_range, fwl_partial, RegressionDesign};
use crate::error::{Error, Result};
use crate::linalg::{self, lstsq};
use crate::spec::{EstimatorKind, HcVariant, LpSpec, Partialling, VarianceKind};
use crate::variance::{hc_variance, newey_west_lrv};

/// Guard against a vanishing instrument-treatment covariance, relative to
/// the scale of the two series.
const WEAK_INSTRUMENT_FACTOR: f64 = 1e-8;

/// An estimated impulse response path with its uncertainty.
#[derive(Debug, Clone)]
pub struct IrfEstimate {
    /// Treatment coefficient per horizon, `h = 0 ..= H`.
    pub beta: Vec<f64>,
    /// Standard error of each coefficient (directly usable half-width
    /// generators; the sample-size scaling is already included).
    pub se: Vec<f64>,
    /// Joint covariance of the coefficient vector, populated by the GMM
    /// path. Its diagonal equals `se` squared.
    pub cov: Option<DMatrix<f64>>,
    /// Observations used per horizon.
    pub n_obs: Vec<usize>,
    pub estimator: EstimatorKind,
    pub variance: VarianceKind,
}

impl IrfEstimate {
    pub fn horizons(&self) -> usize {
        self.beta.len()
    }
}

/// Which feasible-GLS construction to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FglsVariant {
    /// First-horizon residuals, scaled by earlier response estimates, are
    /// subtracted from the dependent variable.
    Lusompa,
    /// The previous-period residual is subtracted with unit weight and the
    /// remaining residual history enters as extra regressors.
    BreitungBruegemann,
}

/// Dispatches on `spec.estimator`.
pub fn estimate(data: &TimeSeriesDataset, spec: &LpSpec) -> Result<IrfEstimate> {
    match spec.estimator {
        EstimatorKind::Ols => lp_ols(data, spec),
        EstimatorKind::Fgls => lp_fgls(data, spec, FglsVariant::Lusompa),
        EstimatorKind::FglsBb => lp_fgls(data, spec, FglsVariant::BreitungBruegemann),
        EstimatorKind::LagAugmented => lp_lag_augmented(data, spec),
        EstimatorKind::Gmm => lp_gmm(data, spec, true),
    }
}

/// Newey-West sandwich variance of a coefficient vector: the bread is
/// `(X'X)^-1`, the meat the long-run variance of the score `x_t u_t`.
fn nw_sandwich(
    design: &RegressionDesign,
    residuals: &DVector<f64>,
    xtx_inv: &DMatrix<f64>,
    truncation: usize,
) -> Result<DMatrix<f64>> {
    let x = &design.regressors;
    let (n, k) = x.shape();
    let mut scores = DMatrix::zeros(n, k);
    for t in 0..n {
        for j in 0..k {
            scores[(t, j)] = x[(t, j)] * residuals[t];
        }
    }
    let lrv = newey_west_lrv(&scores, truncation)?;
    Ok(xtx_inv * (lrv.value * n as f64) * xtx_inv)
}

fn coefficient_variance(
    design: &RegressionDesign,
    fit: &linalg::LstsqFit,
    spec: &LpSpec,
) -> Result<DMatrix<f64>> {
    match spec.variance {
        VarianceKind::NeweyWest { .. } => nw_sandwich(
            design,
            &fit.residuals,
            &fit.xtx_inv,
            spec.nw_lag_for_horizon(design.horizon),
        ),
        VarianceKind::Hc(v) => hc_variance(design, &fit.residuals, v),
        VarianceKind::WildBlock { .. } => Err(Error::InvalidSpec(
            "wild block variance applies to significance bands, not coefficient estimates".into(),
        )),
    }
}

/// Robust variance for estimators whose scores are serially uncorrelated by
/// construction (FGLS, lag augmentation): always heteroskedasticity-robust,
/// never HAC.
fn hc_only_variance(
    design: &RegressionDesign,
    residuals: &DVector<f64>,
    spec: &LpSpec,
    default_hc: HcVariant,
) -> Result<DMatrix<f64>> {
    let variant = match spec.variance {
        VarianceKind::Hc(v) => v,
        _ => default_hc,
    };
    hc_variance(design, residuals, variant)
}

/// Per-horizon OLS with HAC (or HC) standard errors for the treatment
/// coefficient.
pub fn lp_ols(data: &TimeSeriesDataset, spec: &LpSpec) -> Result<IrfEstimate> {
    spec.validate(data)?;
    let cap_h = spec.horizon_max;
    match spec.partialling {
        Partialling::ExplicitRegressors => {
            let mut beta = Vec::with_capacity(cap_h + 1);
            let mut se = Vec::with_capacity(cap_h + 1);
            let mut n_obs = Vec::with_capacity(cap_h + 1);
            for h in 0..=cap_h {
                let design = build_design(data, spec, h)?;
                let fit = lstsq(&design.regressors, &design.responses)?;
                let var = coefficient_variance(&design, &fit, spec)?;
                beta.push(fit.coefficients[0]);
                se.push(var[(0, 0)].max(0.0).sqrt());
                n_obs.push(design.n_rows());
            }
            Ok(IrfEstimate {
                beta,
                se,
                cov: None,
                n_obs,
                estimator: EstimatorKind::Ols,
                variance: spec.variance,
            })
        }
        Partialling::FwlPrewash => {
            let part = fwl_partial(data, spec)?;
            let n = part.n_rows();
            let s = &part.treatment;
            let s_sq: f64 = s.iter().map(|v| v * v).sum();
            if s_sq <= 0.0 {
                return Err(Error::Estimation("partialled treatment is zero".into()));
            }
            let mut beta = Vec::with_capacity(cap_h + 1);
            let mut se = Vec::with_capacity(cap_h + 1);
            for h in 0..=cap_h {
                let y_h = part.leads.column(h);
                let b = y_h.dot(s) / s_sq;
                let score: Vec<f64> = (0..n).map(|t| s[t] * (y_h[t] - b * s[t])).collect();
                let lrv = crate::variance::newey_west_lrv_scalar(
                    &score,
                    spec.nw_lag_for_horizon(h),
                )?;
                let var = n as f64 * lrv / (s_sq * s_sq);
                beta.push(b);
                se.push(var.max(0.0).sqrt());
            }
            Ok(IrfEstimate {
                beta,
                se,
                cov: None,
                n_obs: vec![n; cap_h + 1],
                estimator: EstimatorKind::Ols,
                variance: spec.variance,
            })
        }
    }
}

/// Feasible GLS. The first-horizon regression supplies residuals `u`; later
/// horizons strip the moving-average part of the projection error and then
/// need only heteroskedasticity-robust standard errors.
pub fn lp_fgls(
    data: &TimeSeriesDataset,
    spec: &LpSpec,
    variant: FglsVariant,
) -> Result<IrfEstimate> {
    spec.validate(data)?;
    if spec.partialling == Partialling::FwlPrewash {
        return Err(Error::InvalidSpec(
            "fgls runs with explicit regressors; prewash is not supported".into(),
        ));
    }
    let cap_h = spec.horizon_max;
    let t_len = data.len();
    let p = spec.control_lags;
    let y = data.outcome();

    let mut beta = Vec::with_capacity(cap_h + 1);
    let mut se = Vec::with_capacity(cap_h + 1);
    let mut n_obs = Vec::with_capacity(cap_h + 1);

    // h = 0: the contemporaneous regression has no moving-average error.
    {
        let design = build_design(data, spec, 0)?;
        let fit = lstsq(&design.regressors, &design.responses)?;
        let var = hc_only_variance(&design, &fit.residuals, spec, HcVariant::Hc1)?;
        beta.push(fit.coefficients[0]);
        se.push(var[(0, 0)].max(0.0).sqrt());
        n_obs.push(design.n_rows());
    }
    if cap_h == 0 {
        return Ok(IrfEstimate {
            beta,
            se,
            cov: None,
            n_obs,
            estimator: estimator_kind(variant),
            variance: spec.variance,
        });
    }

    // h = 1 supplies the residual series: u[tau] is the residual of the
    // regression row whose dependent variable is dated tau.
    let mut u_hat = vec![f64::NAN; t_len];
    {
        let design = build_design(data, spec, 1)?;
        let fit = lstsq(&design.regressors, &design.responses)?;
        for (row, t) in (design.first_t..=design.last_t).enumerate() {
            u_hat[t + 1] = fit.residuals[row];
        }
        let var = hc_only_variance(&design, &fit.residuals, spec, HcVariant::Hc1)?;
        beta.push(fit.coefficients[0]);
        se.push(var[(0, 0)].max(0.0).sqrt());
        n_obs.push(design.n_rows());
    }

    for h in 2..=cap_h {
        let design = match variant {
            FglsVariant::Lusompa => {
                let mut design = build_design(data, spec, h)?;
                for (row, t) in (design.first_t..=design.last_t).enumerate() {
                    let mut adj = 0.0;
                    for j in 1..h {
                        adj += beta[j] * u_hat[t + h - j];
                    }
                    design.responses[row] = y[t + h] - adj;
                }
                design
            }
            FglsVariant::BreitungBruegemann => {
                // u_t must exist, which costs one extra observation at the
                // start of the sample.
                let first_t = p + 1;
                let last_t = t_len - 1 - h;
                let mut design = build_design_on_range(data, spec, h, first_t, last_t)?;
                let n = design.n_rows();
                let base_k = design.n_cols();
                let mut extended = DMatrix::zeros(n, base_k + h - 1);
                extended.view_mut((0, 0), (n, base_k)).copy_from(&design.regressors);
                for (row, t) in (first_t..=last_t).enumerate() {
                    design.responses[row] = y[t + h] - u_hat[t + h - 1];
                    for j in 0..h - 1 {
                        extended[(row, base_k + j)] = u_hat[t + j];
                    }
                }
                design.regressors = extended;
                design
            }
        };
        let fit = lstsq(&design.regressors, &design.responses)?;
        let var = hc_only_variance(&design, &fit.residuals, spec, HcVariant::Hc1)?;
        beta.push(fit.coefficients[0]);
        se.push(var[(0, 0)].max(0.0).sqrt());
        n_obs.push(design.n_rows());
    }

    Ok(IrfEstimate {
        beta,
        se,
        cov: None,
        n_obs,
        estimator: estimator_kind(variant),
        variance: spec.variance,
    })
}

fn estimator_kind(variant: FglsVariant) -> EstimatorKind {
    match variant {
        FglsVariant::Lusompa => EstimatorKind::Fgls,
        FglsVariant::BreitungBruegemann => EstimatorKind::FglsBb,
    }
}

/// Lag-augmented local projection: one extra lag of the treatment makes the
/// effective regressor stationary, so the regression score is serially
/// uncorrelated and heteroskedasticity-robust errors suffice (HC3 unless
/// the spec picks another variant).
pub fn lp_lag_augmented(data: &TimeSeriesDataset, spec: &LpSpec) -> Result<IrfEstimate> {
    let mut spec = spec.clone();
    spec.estimator = EstimatorKind::LagAugmented;
    spec.validate(data)?;
    let cap_h = spec.horizon_max;
    let mut beta = Vec::with_capacity(cap_h + 1);
    let mut se = Vec::with_capacity(cap_h + 1);
    let mut n_obs = Vec::with_capacity(cap_h + 1);
    for h in 0..=cap_h {
        let design = build_design(data, &spec, h)?;
        let fit = lstsq(&design.regressors, &design.responses)?;
        let var = hc_only_variance(&design, &fit.residuals, &spec, HcVariant::Hc3)?;
        beta.push(fit.coefficients[0]);
        se.push(var[(0, 0)].max(0.0).sqrt());
        n_obs.push(design.n_rows());
    }
    Ok(IrfEstimate {
        beta,
        se,
        cov: None,
        n_obs,
        estimator: EstimatorKind::LagAugmented,
        variance: spec.variance,
    })
}

/// Stacked GMM/IV over all horizons on a common sample, with the joint
/// coefficient covariance.
///
/// Controls and the intercept are absorbed by a Frisch-Waugh-Lovell prewash
/// before stacking, so the moments are exactly `E[z_t (y_{t+h} - beta_h
/// s_t)] = 0`. Step one solves with an identity weighting; the Bartlett
/// long-run variance `L` of the stacked scores then prices the covariance
/// `[(A' L^-1 A)]^-1 / N` with `A = (1/N) sum Z_t' S_t`.
///
/// With one scalar instrument the system is exactly identified: `A` is
/// `gamma I`, the re-weighted problem returns the step-one solution for any
/// weighting (so `two_step` cannot change the coefficients), and the
/// covariance reduces to `L / (gamma^2 N)` without ever inverting `L`. A
/// horizon whose moment is pinned exactly — regressing a series on itself —
/// therefore reports a zero standard error instead of failing.
pub fn lp_gmm(data: &TimeSeriesDataset, spec: &LpSpec, two_step: bool) -> Result<IrfEstimate> {
    let mut spec = spec.clone();
    spec.estimator = EstimatorKind::Gmm;
    spec.validate(data)?;
    let cap_h = spec.horizon_max;
    let part = fwl_partial(data, &spec)?;
    let n = part.n_rows();
    let s = &part.treatment;
    let z = &part.instrument;

    let gamma = z.dot(s) / n as f64;
    let sd = |v: &DVector<f64>| {
        let mean = v.sum() / n as f64;
        (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64).sqrt()
    };
    let guard = WEAK_INSTRUMENT_FACTOR * sd(s) * sd(z);
    if gamma.abs() <= guard || gamma == 0.0 {
        return Err(Error::WeakInstrument {
            gamma: gamma.abs(),
            guard,
        });
    }

    // Moment pieces for a scalar instrument: A = gamma I, b_h = mean(z y_h).
    let dim = cap_h + 1;
    let mut b = DVector::zeros(dim);
    for h in 0..dim {
        b[h] = part.leads.column(h).dot(z) / n as f64;
    }
    let beta_vec = &b / gamma;
    // Identical under identity or optimal weighting; the flag is kept for
    // interface parity with overidentified extensions.
    let _ = two_step;

    // Long-run variance of the stacked scores z_t v_t(H).
    let mut scores = DMatrix::zeros(n, dim);
    for h in 0..dim {
        for t in 0..n {
            scores[(t, h)] = z[t] * (part.leads[(t, h)] - s[t] * beta_vec[h]);
        }
    }
    let truncation = match spec.variance {
        VarianceKind::NeweyWest { lag: Some(j) } => j,
        _ => cap_h + 1,
    };
    let lambda = newey_west_lrv(&scores, truncation)?.value;

    let mut cov = lambda / (gamma * gamma * n as f64);
    // Exact symmetry for downstream factorization.
    cov = (&cov + cov.transpose()) * 0.5;
    let se: Vec<f64> = (0..dim).map(|h| cov[(h, h)].max(0.0).sqrt()).collect();

    Ok(IrfEstimate {
        beta: beta_vec.iter().copied().collect(),
        se,
        cov: Some(cov),
        n_obs: vec![n; dim],
        estimator: EstimatorKind::Gmm,
        variance: spec.variance,
    })
}

/// Split-panel jackknife bias combination: two half-sample estimates pull
/// the full-sample path by `2 b - (b_a + b_b) / 2` per horizon. Standard
/// errors are carried over from the full sample unchanged; no variance
/// correction is applied.
pub fn split_panel_jackknife(
    full: &IrfEstimate,
    first_half: &IrfEstimate,
    second_half: &IrfEstimate,
) -> Result<IrfEstimate> {
    let n = full.horizons();
    if first_half.horizons() != n || second_half.horizons() != n {
        return Err(Error::InvalidData(format!(
            "horizon mismatch: {} vs {} vs {}",
            n,
            first_half.horizons(),
            second_half.horizons()
        )));
    }
    let beta = (0..n)
        .map(|h| 2.0 * full.beta[h] - 0.5 * (first_half.beta[h] + second_half.beta[h]))
        .collect();
    Ok(IrfEstimate {
        beta,
        se: full.se.clone(),
        cov: full.cov.clone(),
        n_obs: full.n_obs.clone(),
        estimator: full.estimator,
        variance: full.variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Roles;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn sn(rng: &mut impl Rng) -> f64 {
        StandardNormal.sample(rng)
    }

    fn ar1_data(t: usize, rho: f64, seed: u64) -> TimeSeriesDataset {
        let mut rng = crate::rng::rng_from_seed(seed);
        let mut y = Vec::with_capacity(t);
        let mut prev = 0.0;
        for _ in 0..t + 200 {
            let u: f64 = StandardNormal.sample(&mut rng);
            prev = rho * prev + u;
            y.push(prev);
        }
        let y = y.split_off(200);
        TimeSeriesDataset::new(vec![("y", y)], Roles::new("y", "y")).unwrap()
    }

    #[test]
    fn perfect_fit_has_zero_se() {
        let s = vec![0.4, -1.1, 2.0, 0.3, -0.6, 1.2];
        let data = TimeSeriesDataset::new(
            vec![("y", s.clone()), ("s", s)],
            Roles::new("y", "s"),
        )
        .unwrap();
        let spec = LpSpec::new(0);
        let irf = lp_ols(&data, &spec).unwrap();
        assert_relative_eq!(irf.beta[0], 1.0, epsilon = 1e-12);
        assert!(irf.se[0] < 1e-10);
    }

    #[test]
    fn ten_row_fixture_matches_closed_form_oracle() {
        let y = vec![0.3, 1.1, -0.4, 0.9, 2.0, -1.3, 0.6, 1.8, -0.2, 0.5];
        let s = vec![1.0, -0.5, 0.8, 0.1, -1.2, 0.7, 1.5, -0.9, 0.4, -0.3];
        let data = TimeSeriesDataset::new(
            vec![("y", y.clone()), ("s", s.clone())],
            Roles::new("y", "s"),
        )
        .unwrap();
        let spec = LpSpec::new(1);
        let irf = lp_ols(&data, &spec).unwrap();

        // Closed-form simple regression of y_{t+1} on (s_t, 1): slope =
        // cov(s, y_lead) / var(s) with raw sums.
        let n = 9;
        let ylead: Vec<f64> = (0..n).map(|t| y[t + 1]).collect();
        let sx: Vec<f64> = (0..n).map(|t| s[t]).collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (ms, my) = (mean(&sx), mean(&ylead));
        let slope = sx
            .iter()
            .zip(&ylead)
            .map(|(a, b)| (a - ms) * (b - my))
            .sum::<f64>()
            / sx.iter().map(|a| (a - ms) * (a - ms)).sum::<f64>();
        assert_relative_eq!(irf.beta[1], slope, epsilon = 1e-12);
    }

    #[test]
    fn estimators_agree_at_horizon_zero() {
        let data = ar1_data(150, 0.6, 3);
        let spec = LpSpec::new(4);
        let ols = lp_ols(&data, &spec).unwrap();
        let fgls = lp_fgls(&data, &spec, FglsVariant::Lusompa).unwrap();
        let bb = lp_fgls(&data, &spec, FglsVariant::BreitungBruegemann).unwrap();
        assert_relative_eq!(ols.beta[0], fgls.beta[0], epsilon = 1e-12);
        assert_relative_eq!(ols.beta[0], bb.beta[0], epsilon = 1e-12);
    }

    #[test]
    fn fgls_base_case_is_ols_at_h1() {
        let data = ar1_data(120, 0.5, 4);
        let spec = LpSpec::new(3);
        let ols = lp_ols(&data, &spec).unwrap();
        for variant in [FglsVariant::Lusompa, FglsVariant::BreitungBruegemann] {
            let fgls = lp_fgls(&data, &spec, variant).unwrap();
            assert_relative_eq!(ols.beta[1], fgls.beta[1], epsilon = 1e-12);
        }
    }

    /// Minimal independent OLS for the oracles below: solves the normal
    /// equations by Gaussian elimination on plain arrays.
    fn solve_ols(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
        let k = rows[0].len();
        let mut a = vec![vec![0.0; k + 1]; k];
        for (r, row) in rows.iter().enumerate() {
            for i in 0..k {
                for j in 0..k {
                    a[i][j] += row[i] * row[j];
                }
                a[i][k] += row[i] * y[r];
            }
        }
        for col in 0..k {
            let pivot = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
            a.swap(col, pivot);
            let d = a[col][col];
            for j in col..=k {
                a[col][j] /= d;
            }
            for i in 0..k {
                if i != col {
                    let f = a[i][col];
                    for j in col..=k {
                        a[i][j] -= f * a[col][j];
                    }
                }
            }
        }
        (0..k).map(|i| a[i][k]).collect()
    }

    #[test]
    fn fgls_twelve_row_recursion_matches_scripted_oracle() {
        let y = vec![
            0.5, -0.2, 1.4, 0.9, -0.7, 0.3, 1.1, -0.4, 0.8, 1.6, -1.0, 0.2,
        ];
        let data = TimeSeriesDataset::new(vec![("y", y.clone())], Roles::new("y", "y")).unwrap();
        let spec = LpSpec::new(3);
        let irf = lp_fgls(&data, &spec, FglsVariant::Lusompa).unwrap();

        let t_len = y.len();
        // Step h=1: regress y_{t+1} on (y_t, 1) -> slope b1 and residuals.
        let rows1: Vec<Vec<f64>> = (0..t_len - 1).map(|t| vec![y[t], 1.0]).collect();
        let y1: Vec<f64> = (0..t_len - 1).map(|t| y[t + 1]).collect();
        let c1 = solve_ols(&rows1, &y1);
        let b1 = c1[0];
        let mut u = vec![f64::NAN; t_len];
        for t in 0..t_len - 1 {
            u[t + 1] = y[t + 1] - (c1[0] * y[t] + c1[1]);
        }
        assert_relative_eq!(irf.beta[1], b1, epsilon = 1e-12);

        // Step h=2: transformed dependent y_{t+2} - b1 u_{t+1} on (y_t, 1).
        let rows2: Vec<Vec<f64>> = (0..t_len - 2).map(|t| vec![y[t], 1.0]).collect();
        let y2: Vec<f64> = (0..t_len - 2).map(|t| y[t + 2] - b1 * u[t + 1]).collect();
        let c2 = solve_ols(&rows2, &y2);
        let b2 = c2[0];
        assert_relative_eq!(irf.beta[2], b2, epsilon = 1e-12);

        // Step h=3: y_{t+3} - b1 u_{t+2} - b2 u_{t+1} on (y_t, 1).
        let rows3: Vec<Vec<f64>> = (0..t_len - 3).map(|t| vec![y[t], 1.0]).collect();
        let y3: Vec<f64> = (0..t_len - 3)
            .map(|t| y[t + 3] - b1 * u[t + 2] - b2 * u[t + 1])
            .collect();
        let c3 = solve_ols(&rows3, &y3);
        assert_relative_eq!(irf.beta[3], c3[0], epsilon = 1e-12);
    }

    #[test]
    fn fgls_bb_matches_scripted_oracle_at_h2() {
        let y = vec![
            0.5, -0.2, 1.4, 0.9, -0.7, 0.3, 1.1, -0.4, 0.8, 1.6, -1.0, 0.2,
        ];
        let data = TimeSeriesDataset::new(vec![("y", y.clone())], Roles::new("y", "y")).unwrap();
        let spec = LpSpec::new(2);
        let irf = lp_fgls(&data, &spec, FglsVariant::BreitungBruegemann).unwrap();

        let t_len = y.len();
        let rows1: Vec<Vec<f64>> = (0..t_len - 1).map(|t| vec![y[t], 1.0]).collect();
        let y1: Vec<f64> = (0..t_len - 1).map(|t| y[t + 1]).collect();
        let c1 = solve_ols(&rows1, &y1);
        let mut u = vec![f64::NAN; t_len];
        for t in 0..t_len - 1 {
            u[t + 1] = y[t + 1] - (c1[0] * y[t] + c1[1]);
        }
        // h=2 rows t = 1..T-3: dependent y_{t+2} - u_{t+1} on (y_t, 1, u_t).
        let rows2: Vec<Vec<f64>> = (1..t_len - 2).map(|t| vec![y[t], 1.0, u[t]]).collect();
        let y2: Vec<f64> = (1..t_len - 2).map(|t| y[t + 2] - u[t + 1]).collect();
        let c2 = solve_ols(&rows2, &y2);
        assert_relative_eq!(irf.beta[2], c2[0], epsilon = 1e-10);
        assert_eq!(irf.n_obs[2], t_len - 3);
    }

    #[test]
    fn lag_augmented_span_identity() {
        // Reparameterizing (s_t, s_{t-1}) as (s_t - c s_{t-1}, s_{t-1})
        // leaves the first coefficient unchanged.
        let mut rng = crate::rng::rng_from_seed(9);
        for _ in 0..5 {
            let t_len = 80;
            let c: f64 = rng.gen_range(-2.0..2.0);
            let y: Vec<f64> = (0..t_len).map(|_| StandardNormal.sample(&mut rng)).collect();
            let data =
                TimeSeriesDataset::new(vec![("y", y.clone())], Roles::new("y", "y")).unwrap();
            let spec = LpSpec::new(2).with_estimator(EstimatorKind::LagAugmented);
            let direct = lp_lag_augmented(&data, &spec).unwrap();

            // Shifted dataset: treatment y_t - c y_{t-1}, control y_{t-1}.
            let mixed: Vec<f64> = (1..t_len).map(|t| y[t] - c * y[t - 1]).collect();
            let lagged: Vec<f64> = (1..t_len).map(|t| y[t - 1]).collect();
            let outcome: Vec<f64> = (1..t_len).map(|t| y[t]).collect();
            let shifted = TimeSeriesDataset::new(
                vec![("y", outcome), ("m", mixed), ("ylag", lagged)],
                Roles::new("y", "m").with_controls(["ylag"]),
            )
            .unwrap();
            let spec2 = LpSpec::new(2);
            for h in 0..=2 {
                let d = build_design(&shifted, &spec2, h).unwrap();
                let fit = lstsq(&d.regressors, &d.responses).unwrap();
                assert_relative_eq!(direct.beta[h], fit.coefficients[0], epsilon = 1e-10);
            }
        }
    }

    fn iv_fixture(seed: u64, t_len: usize) -> TimeSeriesDataset {
        let mut rng = crate::rng::rng_from_seed(seed);
        let mut z = Vec::with_capacity(t_len);
        let mut s = Vec::with_capacity(t_len);
        let mut y = Vec::with_capacity(t_len);
        let mut prev = 0.0;
        for _ in 0..t_len {
            let zt: f64 = StandardNormal.sample(&mut rng);
            let st = 0.8 * zt + 0.5 * sn(&mut rng);
            prev = 0.4 * prev + 0.6 * st + sn(&mut rng);
            z.push(zt);
            s.push(st);
            y.push(prev);
        }
        TimeSeriesDataset::new(
            vec![("y", y), ("s", s), ("z", z)],
            Roles::new("y", "s").with_instrument("z"),
        )
        .unwrap()
    }

    #[test]
    fn gmm_with_own_instrument_reproduces_common_sample_ols() {
        // No explicit instrument: z defaults to s, the just-identified case.
        let mut rng = crate::rng::rng_from_seed(11);
        let t_len = 90;
        let s: Vec<f64> = (0..t_len).map(|_| sn(&mut rng)).collect();
        let mut y = vec![0.0; t_len];
        for t in 1..t_len {
            y[t] = 0.4 * y[t - 1] + 0.9 * s[t] + sn(&mut rng);
        }
        let data =
            TimeSeriesDataset::new(vec![("y", y), ("s", s)], Roles::new("y", "s")).unwrap();
        let spec = LpSpec::new(5).with_estimator(EstimatorKind::Gmm);
        let gmm = lp_gmm(&data, &spec, true).unwrap();
        for h in 0..=5 {
            let d = build_design(&data, &spec, h).unwrap();
            let fit = lstsq(&d.regressors, &d.responses).unwrap();
            assert_relative_eq!(gmm.beta[h], fit.coefficients[0], epsilon = 1e-10);
        }
    }

    #[test]
    fn gmm_pins_the_degenerate_own_shock_horizon() {
        // Outcome, treatment, and instrument all the same series: the h = 0
        // moment is exact, so beta_0 = 1 with no sampling uncertainty.
        let data = ar1_data(90, 0.5, 11);
        let spec = LpSpec::new(4).with_estimator(EstimatorKind::Gmm);
        let gmm = lp_gmm(&data, &spec, true).unwrap();
        assert_relative_eq!(gmm.beta[0], 1.0, epsilon = 1e-12);
        assert!(gmm.se[0] < 1e-12);
        for h in 1..=4 {
            assert!(gmm.se[h] > 0.0);
        }
    }

    #[test]
    fn gmm_weighting_is_irrelevant_when_just_identified() {
        let data = iv_fixture(21, 120);
        let spec = LpSpec::new(4).with_estimator(EstimatorKind::Gmm);
        let one = lp_gmm(&data, &spec, false).unwrap();
        let two = lp_gmm(&data, &spec, true).unwrap();
        for h in 0..=4 {
            assert_relative_eq!(one.beta[h], two.beta[h], epsilon = 1e-10);
        }
    }

    #[test]
    fn gmm_matches_closed_form_iv_ratio_without_intercept() {
        let data = iv_fixture(22, 100);
        let spec = LpSpec::new(3)
            .with_estimator(EstimatorKind::Gmm)
            .with_intercept(false);
        let gmm = lp_gmm(&data, &spec, true).unwrap();
        let y = data.outcome();
        let s = data.treatment();
        let z = data.instrument();
        let n = 100 - 3 - 1;
        for h in 0..=3 {
            let num: f64 = (0..n).map(|t| z[t] * y[t + h]).sum();
            let den: f64 = (0..n).map(|t| z[t] * s[t]).sum();
            assert_relative_eq!(gmm.beta[h], num / den, epsilon = 1e-10);
        }
    }

    #[test]
    fn gmm_covariance_is_symmetric_psd_with_matching_se() {
        let data = iv_fixture(23, 150);
        let spec = LpSpec::new(4).with_estimator(EstimatorKind::Gmm);
        let gmm = lp_gmm(&data, &spec, true).unwrap();
        let cov = gmm.cov.as_ref().unwrap();
        assert!((cov - cov.transpose()).abs().max() < 1e-14);
        assert!(linalg::min_eigenvalue(cov) >= -1e-12);
        for h in 0..=4 {
            assert!(cov[(h, h)] > 0.0);
            assert_relative_eq!(gmm.se[h], cov[(h, h)].sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn gmm_rejects_weak_instrument() {
        let mut rng = crate::rng::rng_from_seed(31);
        let t_len = 80;
        let y: Vec<f64> = (0..t_len).map(|_| StandardNormal.sample(&mut rng)).collect();
        let s: Vec<f64> = (0..t_len).map(|_| StandardNormal.sample(&mut rng)).collect();
        // Instrument exactly orthogonal to s over the gmm common sample
        // (the first T - H - 1 rows with H = 2).
        let mut z: Vec<f64> = vec![0.0; t_len];
        for t in 0..t_len / 2 {
            z[2 * t] = s[2 * t + 1];
            z[2 * t + 1] = -s[2 * t];
        }
        let n = t_len - 2 - 1;
        let dot: f64 = (0..n).map(|t| z[t] * s[t]).sum();
        z[0] -= dot / s[0];
        let data = TimeSeriesDataset::new(
            vec![("y", y), ("s", s), ("z", z)],
            Roles::new("y", "s").with_instrument("z"),
        )
        .unwrap();
        let spec = LpSpec::new(2)
            .with_estimator(EstimatorKind::Gmm)
            .with_intercept(false);
        assert!(matches!(
            lp_gmm(&data, &spec, true),
            Err(Error::WeakInstrument { .. })
        ));
    }

    #[test]
    fn jackknife_fixed_point_and_arithmetic() {
        let base = IrfEstimate {
            beta: vec![1.0, 0.8],
            se: vec![0.1, 0.2],
            cov: None,
            n_obs: vec![50, 49],
            estimator: EstimatorKind::Ols,
            variance: VarianceKind::NeweyWest { lag: None },
        };
        let same = split_panel_jackknife(&base, &base, &base).unwrap();
        assert_eq!(same.beta, base.beta);

        let mut a = base.clone();
        a.beta = vec![0.8, 0.8];
        let mut b = base.clone();
        b.beta = vec![0.6, 0.8];
        let combined = split_panel_jackknife(&base, &a, &b).unwrap();
        assert_relative_eq!(combined.beta[0], 2.0 - 0.5 * 1.4, epsilon = 1e-14);
        assert_eq!(combined.se, base.se);
    }

    #[test]
    fn jackknife_is_linear_in_inputs() {
        let mk = |b: Vec<f64>| IrfEstimate {
            beta: b,
            se: vec![0.0; 2],
            cov: None,
            n_obs: vec![10; 2],
            estimator: EstimatorKind::Ols,
            variance: VarianceKind::NeweyWest { lag: None },
        };
        let (f, a, b) = (mk(vec![1.0, -0.5]), mk(vec![0.7, -0.1]), mk(vec![0.4, 0.3]));
        let jk = split_panel_jackknife(&f, &a, &b).unwrap();
        let c = 3.5;
        let scale = |e: &IrfEstimate| mk(e.beta.iter().map(|x| c * x).collect());
        let jk_scaled = split_panel_jackknife(&scale(&f), &scale(&a), &scale(&b)).unwrap();
        for h in 0..2 {
            assert_relative_eq!(jk_scaled.beta[h], c * jk.beta[h], epsilon = 1e-12);
        }
    }

    #[test]
    fn jackknife_rejects_horizon_mismatch() {
        let mk = |n: usize| IrfEstimate {
            beta: vec![0.0; n],
            se: vec![0.0; n],
            cov: None,
            n_obs: vec![10; n],
            estimator: EstimatorKind::Ols,
            variance: VarianceKind::NeweyWest { lag: None },
        };
        assert!(split_panel_jackknife(&mk(3), &mk(3), &mk(2)).is_err());
    }

    #[test]
    fn estimators_are_deterministic() {
        let data = iv_fixture(77, 130);
        let spec = LpSpec::new(4);
        let a = lp_ols(&data, &spec).unwrap();
        let b = lp_ols(&data, &spec).unwrap();
        assert_eq!(a.beta.len(), b.beta.len());
        for h in 0..a.beta.len() {
            assert_eq!(a.beta[h].to_bits(), b.beta[h].to_bits());
            assert_eq!(a.se[h].to_bits(), b.se[h].to_bits());
        }
    }

    #[test]
    fn fwl_prewash_matches_explicit_on_common_sample() {
        let mut rng = crate::rng::rng_from_seed(41);
        let t_len = 90;
        let x: Vec<f64> = (0..t_len).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut y = vec![0.0; t_len];
        let mut s = vec![0.0; t_len];
        for t in 1..t_len {
            s[t] = 0.5 * x[t] + sn(&mut rng);
            y[t] = 0.4 * y[t - 1] + 0.8 * s[t] + 0.3 * x[t]
                + sn(&mut rng);
        }
        let data = TimeSeriesDataset::new(
            vec![("y", y), ("s", s), ("x", x)],
            Roles::new("y", "s").with_controls(["x"]),
        )
        .unwrap();
        let cap_h = 4;
        let explicit_spec = LpSpec::new(cap_h);
        let prewash_spec = LpSpec::new(cap_h).with_partialling(Partialling::FwlPrewash);
        let prewash = lp_ols(&data, &prewash_spec).unwrap();
        // The explicit path must be restricted to the same common sample.
        for h in 0..=cap_h {
            let d = build_design_on_range(&data, &explicit_spec, h, 0, t_len - 1 - cap_h)
                .unwrap();
            let fit = lstsq(&d.regressors, &d.responses).unwrap();
            let rel = (prewash.beta[h] - fit.coefficients[0]).abs()
                / fit.coefficients[0].abs().max(1.0);
            assert!(rel < 1e-10, "h={h}: {} vs {}", prewash.beta[h], fit.coefficients[0]);
        }
    }
}
