//! Local projection impulse responses with a full inference toolkit.
//!
//! A local projection estimates the response of an outcome `y` to an
//! intervention `s` by regressing `y_{t+h}` on period-`t` information, one
//! regression per horizon. This crate covers:
//!
//! * point estimation by per-horizon OLS, feasible GLS (two variants),
//!   lag augmentation, and stacked GMM/IV with a joint covariance;
//! * pointwise Newey-West or heteroskedasticity-robust bands, and the
//!   simultaneous Scheffe and sup-t constructions;
//! * significance bands around the zero null (asymptotic and wild block
//!   bootstrap), the scalar LM test, and the joint zero-response test;
//! * minimum-distance smoothing of an estimated response onto a B-spline
//!   or custom basis, with an overidentification test;
//! * registered data-generating processes and a deterministic, parallel
//!   Monte Carlo harness for size/power and coverage studies.
//!
//! Every stochastic routine takes an explicit seed and derives per-replicate
//! sub-streams, so results are reproducible under any thread schedule.
//!
//! See the `examples/` directory for one runnable program per capability,
//! and the `lproj` binary (in the companion CLI crate) for file-based runs.

pub mod bands;
pub mod dataset;
pub mod design;
pub mod dgp;
pub mod dist;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod mc;
pub mod rng;
pub mod smoothing;
pub mod spec;
pub mod variance;

pub use bands::{
    bonferroni_level, joint_zero_test, lm_statistic, pointwise_bands, scheffe_bands,
    significance_bands_asymptotic, significance_bands_bootstrap, supt_bands, BandKind, BandSet,
    JointTestResult, LmResult,
};
pub use dataset::{Roles, TimeSeriesDataset};
pub use design::{build_design, fwl_partial, PartialledData, RegressionDesign};
pub use dgp::{nonlinear_response, DgpConfig, DgpKind};
pub use dist::{chi2_cdf, chi2_quantile, normal_quantile};
pub use error::{Error, Result};
pub use estimators::{
    estimate, lp_fgls, lp_gmm, lp_lag_augmented, lp_ols, split_panel_jackknife, FglsVariant,
    IrfEstimate,
};
pub use mc::{run_mc, McResult};
pub use smoothing::{bspline_basis, fit_smooth_irf, BasisKind, BasisMatrix, SmoothFit};
pub use spec::{EstimatorKind, HcVariant, LpSpec, Partialling, VarianceKind};
pub use variance::{hc_variance, newey_west_lrv, wild_block_bootstrap_se, LrvEstimate};
