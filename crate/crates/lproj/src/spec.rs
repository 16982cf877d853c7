//! The estimation recipe: horizons, control lags, estimator and variance
//! choices.

use crate::dataset::TimeSeriesDataset;
use crate::error::{Error, Result};

/// Which local projection estimator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    /// Per-horizon OLS with HAC standard errors.
    Ols,
    /// Feasible GLS: first-horizon residuals whiten later horizons.
    Fgls,
    /// Feasible GLS, Breitung-Bruegemann variant (residuals as regressors).
    FglsBb,
    /// One extra treatment lag; heteroskedasticity-robust errors suffice.
    LagAugmented,
    /// All horizons stacked and estimated jointly from instrument moments.
    Gmm,
}

impl std::fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EstimatorKind::Ols => "ols",
            EstimatorKind::Fgls => "fgls",
            EstimatorKind::FglsBb => "fgls_bb",
            EstimatorKind::LagAugmented => "lag_augmented",
            EstimatorKind::Gmm => "gmm",
        };
        f.write_str(s)
    }
}

/// Heteroskedasticity-robust weight variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcVariant {
    Hc0,
    Hc1,
    Hc3,
}

impl std::fmt::Display for HcVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HcVariant::Hc0 => "hc0",
            HcVariant::Hc1 => "hc1",
            HcVariant::Hc3 => "hc3",
        })
    }
}

/// Variance estimator attached to the point estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceKind {
    /// Bartlett-kernel long-run variance. `lag: None` selects `h + 1` at
    /// horizon `h`, matching the moving-average order of the projection
    /// residual; significance bands fall back to the `4 (T/100)^{2/9}` rule
    /// since their null imposes no such structure.
    NeweyWest { lag: Option<usize> },
    Hc(HcVariant),
    /// Wild block bootstrap; only meaningful for significance bands.
    WildBlock { block_size: usize, replications: usize },
}

impl std::fmt::Display for VarianceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VarianceKind::NeweyWest { lag: Some(j) } => write!(f, "newey_west({j})"),
            VarianceKind::NeweyWest { lag: None } => write!(f, "newey_west(auto)"),
            VarianceKind::Hc(v) => write!(f, "{v}"),
            VarianceKind::WildBlock {
                block_size,
                replications,
            } => write!(f, "wild_block({block_size},{replications})"),
        }
    }
}

/// How controls are absorbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Partialling {
    /// Controls enter each per-horizon regression as explicit columns.
    #[default]
    ExplicitRegressors,
    /// Outcome leads, treatment, and instrument are orthogonalized against
    /// the controls once, over a sample common to all horizons.
    FwlPrewash,
}

/// Estimation recipe shared by every estimator.
///
/// With `control_lags == 0` each declared control enters dated `t`; with
/// `control_lags == p >= 1` it enters as lags `t-1, ..., t-p` instead. This
/// keeps both the contemporaneous-control projection and the
/// "lags of everything" projection expressible without inferring intent.
#[derive(Debug, Clone)]
pub struct LpSpec {
    pub horizon_max: usize,
    pub control_lags: usize,
    pub include_intercept: bool,
    pub estimator: EstimatorKind,
    pub variance: VarianceKind,
    pub partialling: Partialling,
}

impl LpSpec {
    pub fn new(horizon_max: usize) -> Self {
        Self {
            horizon_max,
            control_lags: 0,
            include_intercept: true,
            estimator: EstimatorKind::Ols,
            variance: VarianceKind::NeweyWest { lag: None },
            partialling: Partialling::ExplicitRegressors,
        }
    }

    pub fn with_control_lags(mut self, p: usize) -> Self {
        self.control_lags = p;
        self
    }

    pub fn with_intercept(mut self, on: bool) -> Self {
        self.include_intercept = on;
        self
    }

    pub fn with_estimator(mut self, kind: EstimatorKind) -> Self {
        self.estimator = kind;
        self
    }

    pub fn with_variance(mut self, kind: VarianceKind) -> Self {
        self.variance = kind;
        self
    }

    pub fn with_partialling(mut self, p: Partialling) -> Self {
        self.partialling = p;
        self
    }

    /// Newey-West truncation for a horizon-`h` projection.
    pub fn nw_lag_for_horizon(&self, h: usize) -> usize {
        match self.variance {
            VarianceKind::NeweyWest { lag: Some(j) } => j,
            _ => h + 1,
        }
    }

    /// Newey-West truncation for significance bands: the explicit lag when
    /// set, otherwise the standard `ceil(4 (T/100)^{2/9})` rule.
    pub fn nw_lag_for_significance(&self, t_len: usize) -> usize {
        match self.variance {
            VarianceKind::NeweyWest { lag: Some(j) } => j,
            _ => (4.0 * (t_len as f64 / 100.0).powf(2.0 / 9.0)).ceil() as usize,
        }
    }

    /// Validates the recipe against a dataset length.
    pub fn validate(&self, data: &TimeSeriesDataset) -> Result<()> {
        let t_len = data.len();
        if self.horizon_max + self.control_lags + 2 >= t_len {
            return Err(Error::InvalidSpec(format!(
                "need H + p + 2 < T: H = {}, p = {}, T = {}",
                self.horizon_max, self.control_lags, t_len
            )));
        }
        match self.variance {
            VarianceKind::WildBlock {
                block_size,
                replications,
            } => {
                if block_size == 0 || block_size > t_len / 2 {
                    return Err(Error::InvalidSpec(format!(
                        "block size {} outside [1, {}]",
                        block_size,
                        t_len / 2
                    )));
                }
                if replications < 2 {
                    return Err(Error::InvalidSpec(
                        "wild block bootstrap needs at least 2 replications".into(),
                    ));
                }
            }
            VarianceKind::NeweyWest { lag: Some(j) } => {
                if j + 2 > t_len {
                    return Err(Error::InvalidSpec(format!(
                        "Newey-West lag {j} too large for T = {t_len}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}
