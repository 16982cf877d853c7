//! Band constructions and tests: pointwise, Scheffe, sup-t, significance
//! bands around the zero null (asymptotic and wild block bootstrap), the
//! scalar LM statistic, and the joint zero-response test.
//!
//! Confidence bands are drawn around the estimated path; significance bands
//! are drawn around zero under the null that the treatment has no effect,
//! with the test variance evaluated at that null (the LM principle). An
//! estimate escaping a significance band signals a nonzero response.

use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};

use crate::dataset::TimeSeriesDataset;
use crate::design::fwl_partial;
use crate::dist::{chi2_cdf, chi2_quantile, normal_quantile};
use crate::error::{Error, Result};
use crate::estimators::IrfEstimate;
use crate::linalg::psd_factor;
use crate::rng::{derive_seed, rng_from_seed};
use crate::spec::{EstimatorKind, LpSpec};
use crate::variance::{newey_west_lrv_scalar, wild_block_bootstrap_se};

/// Which band construction produced a [`BandSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandKind {
    Pointwise,
    Scheffe,
    SupT,
    SignificanceAsymptotic,
    SignificanceBootstrap,
}

impl BandKind {
    pub fn is_significance(self) -> bool {
        matches!(
            self,
            BandKind::SignificanceAsymptotic | BandKind::SignificanceBootstrap
        )
    }
}

impl std::fmt::Display for BandKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BandKind::Pointwise => "pointwise",
            BandKind::Scheffe => "scheffe",
            BandKind::SupT => "sup_t",
            BandKind::SignificanceAsymptotic => "significance_asymptotic",
            BandKind::SignificanceBootstrap => "significance_bootstrap",
        })
    }
}

/// Per-horizon lower/upper bounds with the critical values that built them.
#[derive(Debug, Clone)]
pub struct BandSet {
    pub kind: BandKind,
    /// Confidence level `1 - alpha`.
    pub level: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Multipliers used: a single entry for pointwise/Scheffe/sup-t, one per
    /// horizon for the significance kinds.
    pub critical: Vec<f64>,
    /// What the band is drawn around: the estimate for confidence bands,
    /// zero for significance bands.
    pub center: Vec<f64>,
}

impl BandSet {
    pub fn horizons(&self) -> usize {
        self.lower.len()
    }

    pub fn half_width(&self, h: usize) -> f64 {
        0.5 * (self.upper[h] - self.lower[h])
    }
}

/// Outcome of the joint test that every response coefficient is zero.
#[derive(Debug, Clone)]
pub struct JointTestResult {
    /// Number of horizons whose estimate escapes the band.
    pub statistic: usize,
    pub reject: bool,
    pub per_horizon_flags: Vec<bool>,
}

/// Scalar LM test of a zero response at one horizon.
#[derive(Debug, Clone)]
pub struct LmResult {
    /// The chi-square(1) statistic.
    pub statistic: f64,
    pub p_value: f64,
    /// The unnormalized moment sum `lambda = sum_t z_t y_{t+h}`.
    pub lambda: f64,
    /// Observations entering the sums.
    pub n_obs: usize,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence level requires alpha in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

/// Per-horizon one-sided tail probability after a Bonferroni adjustment
/// across `n_horizons` horizons.
pub fn bonferroni_level(alpha: f64, n_horizons: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if n_horizons == 0 {
        return Err(Error::InvalidParameter(
            "bonferroni adjustment needs at least one horizon".into(),
        ));
    }
    Ok(alpha / (2.0 * n_horizons as f64))
}

/// Classic per-horizon band: estimate plus/minus the normal critical value
/// times the standard error.
pub fn pointwise_bands(irf: &IrfEstimate, alpha: f64) -> Result<BandSet> {
    check_alpha(alpha)?;
    let zeta = normal_quantile(1.0 - alpha / 2.0)?;
    let lower = irf
        .beta
        .iter()
        .zip(&irf.se)
        .map(|(b, s)| b - zeta * s)
        .collect();
    let upper = irf
        .beta
        .iter()
        .zip(&irf.se)
        .map(|(b, s)| b + zeta * s)
        .collect();
    Ok(BandSet {
        kind: BandKind::Pointwise,
        level: 1.0 - alpha,
        lower,
        upper,
        critical: vec![zeta],
        center: irf.beta.clone(),
    })
}

/// Scheffe simultaneous band with multiplier `sqrt(chi2_{d,1-alpha} / d)`,
/// `d` the number of horizons covered.
pub fn scheffe_bands(irf: &IrfEstimate, alpha: f64) -> Result<BandSet> {
    check_alpha(alpha)?;
    let d = irf.horizons();
    let multiplier = (chi2_quantile(d, 1.0 - alpha)? / d as f64).sqrt();
    let lower = irf
        .beta
        .iter()
        .zip(&irf.se)
        .map(|(b, s)| b - multiplier * s)
        .collect();
    let upper = irf
        .beta
        .iter()
        .zip(&irf.se)
        .map(|(b, s)| b + multiplier * s)
        .collect();
    Ok(BandSet {
        kind: BandKind::Scheffe,
        level: 1.0 - alpha,
        lower,
        upper,
        critical: vec![multiplier],
        center: irf.beta.clone(),
    })
}

/// Plug-in sup-t band: simulates `N(0, cov)` draws, takes the empirical
/// `1 - alpha` quantile of the maximum absolute standardized coordinate,
/// and widens every horizon by that common multiplier.
pub fn supt_bands(irf: &IrfEstimate, alpha: f64, m_draws: usize, seed: u64) -> Result<BandSet> {
    check_alpha(alpha)?;
    if m_draws < 100 {
        return Err(Error::InvalidParameter(format!(
            "sup-t needs at least 100 draws, got {m_draws}"
        )));
    }
    let cov = irf.cov.as_ref().ok_or_else(|| {
        Error::InvalidData("sup-t bands need the joint covariance (gmm estimates)".into())
    })?;
    let d = irf.horizons();
    let mut inv_sd = Vec::with_capacity(d);
    for h in 0..d {
        let v = cov[(h, h)];
        if v <= 0.0 {
            return Err(Error::InvalidData(format!(
                "covariance diagonal vanishes at horizon {h}"
            )));
        }
        inv_sd.push(1.0 / v.sqrt());
    }
    let factor = psd_factor(cov)?;
    let mut rng = rng_from_seed(seed);
    let mut stats = Vec::with_capacity(m_draws);
    let mut g = DVector::zeros(d);
    for _ in 0..m_draws {
        for i in 0..d {
            g[i] = StandardNormal.sample(&mut rng);
        }
        let v = &factor * &g;
        let mut max_abs: f64 = 0.0;
        for h in 0..d {
            max_abs = max_abs.max((v[h] * inv_sd[h]).abs());
        }
        stats.push(max_abs);
    }
    stats.sort_unstable_by(|a, b| a.total_cmp(b));
    // Conservative nearest-rank order statistic.
    let rank = ((1.0 - alpha) * m_draws as f64).ceil() as usize;
    let q = stats[rank.clamp(1, m_draws) - 1];

    let lower = (0..d).map(|h| irf.beta[h] - q / inv_sd[h]).collect();
    let upper = (0..d).map(|h| irf.beta[h] + q / inv_sd[h]).collect();
    Ok(BandSet {
        kind: BandKind::SupT,
        level: 1.0 - alpha,
        lower,
        upper,
        critical: vec![q],
        center: irf.beta.clone(),
    })
}

/// The per-horizon score series of the zero-response null together with the
/// instrument-treatment covariance scale.
struct NullScores {
    /// `eta[h][t] = y_{t+h} z_t` on the working sample (orthogonalized
    /// first when controls are present).
    eta: Vec<Vec<f64>>,
    /// Full-sample (or common-sample) average of `s_t z_t`.
    gamma_sz: f64,
    /// Per-horizon treatment-instrument products for the LM identity path.
    zs: Vec<f64>,
}

fn null_scores(data: &TimeSeriesDataset, spec: &LpSpec) -> Result<NullScores> {
    spec.validate(data)?;
    let cap_h = spec.horizon_max;
    if data.n_controls() == 0 {
        let y = data.outcome();
        let s = data.treatment();
        let z = data.instrument();
        let t_len = data.len();
        let gamma_sz = (0..t_len).map(|t| s[t] * z[t]).sum::<f64>() / t_len as f64;
        guard_gamma(gamma_sz, s, z)?;
        let eta = (0..=cap_h)
            .map(|h| (0..t_len - h).map(|t| y[t + h] * z[t]).collect())
            .collect();
        let zs = (0..t_len).map(|t| s[t] * z[t]).collect();
        Ok(NullScores { eta, gamma_sz, zs })
    } else {
        // Orthogonalize once over a sample common to all horizons; every
        // score series then shares that sample.
        let mut part_spec = spec.clone();
        part_spec.estimator = EstimatorKind::Ols;
        let part = fwl_partial(data, &part_spec)?;
        let n = part.n_rows();
        let s = &part.treatment;
        let z = &part.instrument;
        let gamma_sz = z.dot(s) / n as f64;
        guard_gamma(gamma_sz, s.as_slice(), z.as_slice())?;
        let eta = (0..=cap_h)
            .map(|h| (0..n).map(|t| part.leads[(t, h)] * z[t]).collect())
            .collect();
        let zs = (0..n).map(|t| s[t] * z[t]).collect();
        Ok(NullScores { eta, gamma_sz, zs })
    }
}

fn guard_gamma(gamma: f64, s: &[f64], z: &[f64]) -> Result<()> {
    let sd = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64).sqrt()
    };
    let guard = 1e-8 * sd(s) * sd(z);
    if gamma.abs() <= guard {
        return Err(Error::WeakInstrument {
            gamma: gamma.abs(),
            guard,
        });
    }
    Ok(())
}

fn significance_bands_impl<F>(
    data: &TimeSeriesDataset,
    spec: &LpSpec,
    alpha: f64,
    kind: BandKind,
    mut eta_se: F,
) -> Result<BandSet>
where
    F: FnMut(usize, &[f64]) -> Result<f64>,
{
    check_alpha(alpha)?;
    let scores = null_scores(data, spec)?;
    let cap_h = spec.horizon_max;
    let tail = bonferroni_level(alpha, cap_h + 1)?;
    let zeta = normal_quantile(1.0 - tail)?;

    let mut lower = Vec::with_capacity(cap_h + 1);
    let mut upper = Vec::with_capacity(cap_h + 1);
    let mut critical = Vec::with_capacity(cap_h + 1);
    for h in 0..=cap_h {
        let se_eta = eta_se(h, &scores.eta[h])?;
        let se_beta = se_eta / scores.gamma_sz.abs();
        lower.push(-zeta * se_beta);
        upper.push(zeta * se_beta);
        critical.push(zeta);
    }
    Ok(BandSet {
        kind,
        level: 1.0 - alpha,
        lower,
        upper,
        critical,
        center: vec![0.0; cap_h + 1],
    })
}

/// Significance band from the asymptotic approximation: the standard error
/// of the intercept in a constant-only regression of `eta_{t,h} = y_{t+h}
/// z_t`, estimated by Newey-West, scaled by the instrument-treatment
/// covariance, with a Bonferroni-adjusted normal critical value.
pub fn significance_bands_asymptotic(
    data: &TimeSeriesDataset,
    spec: &LpSpec,
    alpha: f64,
) -> Result<BandSet> {
    let truncation = spec.nw_lag_for_significance(data.len());
    significance_bands_impl(
        data,
        spec,
        alpha,
        BandKind::SignificanceAsymptotic,
        |_h, eta| {
            let lrv = newey_west_lrv_scalar(eta, truncation)?;
            Ok((lrv / eta.len() as f64).sqrt())
        },
    )
}

/// Significance band with the intercept standard error replaced by a wild
/// block bootstrap. Deterministic for a given seed; horizon `h` draws from
/// the sub-stream `derive_seed(seed, h)`.
pub fn significance_bands_bootstrap(
    data: &TimeSeriesDataset,
    spec: &LpSpec,
    alpha: f64,
    block_size: usize,
    replications: usize,
    seed: u64,
) -> Result<BandSet> {
    significance_bands_impl(
        data,
        spec,
        alpha,
        BandKind::SignificanceBootstrap,
        |h, eta| {
            wild_block_bootstrap_se(eta, block_size, replications, derive_seed(seed, h as u64))
        },
    )
}

/// Per-horizon just-identified IV estimates evaluated the way the
/// zero-response test evaluates them: `sum z y_lead / sum z s` on each
/// horizon's own sample. Standard errors are the null-imposed ones that
/// also generate the significance bands.
pub fn iv_irf_at_null(data: &TimeSeriesDataset, spec: &LpSpec) -> Result<IrfEstimate> {
    let scores = null_scores(data, spec)?;
    let truncation = spec.nw_lag_for_significance(data.len());
    let cap_h = spec.horizon_max;
    let mut beta = Vec::with_capacity(cap_h + 1);
    let mut se = Vec::with_capacity(cap_h + 1);
    let mut n_obs = Vec::with_capacity(cap_h + 1);
    for h in 0..=cap_h {
        let eta = &scores.eta[h];
        let n = eta.len();
        let lambda: f64 = eta.iter().sum();
        let zs_sum: f64 = scores.zs[..n].iter().sum();
        if zs_sum == 0.0 {
            return Err(Error::WeakInstrument {
                gamma: 0.0,
                guard: f64::MIN_POSITIVE,
            });
        }
        let lrv = newey_west_lrv_scalar(eta, truncation)?;
        beta.push(lambda / zs_sum);
        se.push((lrv / n as f64).sqrt() / (zs_sum / n as f64).abs());
        n_obs.push(n);
    }
    Ok(IrfEstimate {
        beta,
        se,
        cov: None,
        n_obs,
        estimator: EstimatorKind::Gmm,
        variance: spec.variance,
    })
}

/// LM test of a zero response at horizon `h`: the squared moment sum over
/// its null-imposed long-run variance, referred to chi-square(1).
pub fn lm_statistic(data: &TimeSeriesDataset, spec: &LpSpec, h: usize) -> Result<LmResult> {
    if h > spec.horizon_max {
        return Err(Error::InvalidSpec(format!(
            "horizon {h} exceeds horizon_max {}",
            spec.horizon_max
        )));
    }
    let scores = null_scores(data, spec)?;
    let eta = &scores.eta[h];
    let n = eta.len();
    let lambda: f64 = eta.iter().sum();
    let omega = newey_west_lrv_scalar(eta, spec.nw_lag_for_significance(data.len()))?;
    if omega <= 0.0 {
        return Err(Error::Estimation(
            "null-imposed long-run variance is zero".into(),
        ));
    }
    let statistic = lambda * lambda / (n as f64 * omega);
    Ok(LmResult {
        statistic,
        p_value: 1.0 - chi2_cdf(1, statistic),
        lambda,
        n_obs: n,
    })
}

/// Rejects the joint zero-response null when at least one estimate escapes
/// its significance band; the statistic counts the escapes.
pub fn joint_zero_test(irf: &IrfEstimate, bands: &BandSet) -> Result<JointTestResult> {
    if !bands.kind.is_significance() {
        return Err(Error::InvalidParameter(format!(
            "joint zero test needs a significance band, got {}",
            bands.kind
        )));
    }
    if bands.horizons() != irf.horizons() {
        return Err(Error::InvalidData(format!(
            "band covers {} horizons but the estimate has {}",
            bands.horizons(),
            irf.horizons()
        )));
    }
    let per_horizon_flags: Vec<bool> = irf
        .beta
        .iter()
        .enumerate()
        .map(|(h, b)| *b < bands.lower[h] || *b > bands.upper[h])
        .collect();
    let statistic = per_horizon_flags.iter().filter(|f| **f).count();
    Ok(JointTestResult {
        statistic,
        reject: statistic > 0,
        per_horizon_flags,
    })
}
