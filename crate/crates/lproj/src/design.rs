//! Per-horizon regression design construction and control partialling.
//!
//! Sample conventions, with 0-based time indices into series of length `T`:
//!
//! * single-equation estimators use rows `t = p .. T-1-h` at horizon `h`
//!   (the sample shrinks with the horizon);
//! * the lag-augmented estimator additionally needs `t >= 1` for the extra
//!   treatment lag;
//! * the GMM system uses one common sample `t = p .. T-2-H` for every
//!   horizon so the stacked moment vector is well defined.

use nalgebra::{DMatrix, DVector};

use crate::dataset::TimeSeriesDataset;
use crate::error::{Error, Result};
use crate::linalg::CONDITION_LIMIT;
use crate::spec::{EstimatorKind, LpSpec};

/// A single horizon's regression: responses aligned so that row `t` pairs
/// `y_{t+h}` with regressors dated `t`. The treatment column always comes
/// first (followed by the treatment lag under lag augmentation, then the
/// intercept, then controls).
#[derive(Debug, Clone)]
pub struct RegressionDesign {
    pub responses: DVector<f64>,
    pub regressors: DMatrix<f64>,
    /// First and last regressor dates used (0-based, inclusive).
    pub first_t: usize,
    pub last_t: usize,
    pub horizon: usize,
}

impl RegressionDesign {
    pub fn n_rows(&self) -> usize {
        self.regressors.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.regressors.ncols()
    }
}

/// Inclusive 0-based regressor-date range used at horizon `h` under `spec`.
pub fn sample_range(data_len: usize, spec: &LpSpec, h: usize) -> Result<(usize, usize)> {
    let p = spec.control_lags;
    let first_t = match spec.estimator {
        EstimatorKind::LagAugmented => p.max(1),
        _ => p,
    };
    let last_t = match spec.estimator {
        EstimatorKind::Gmm => {
            if data_len < spec.horizon_max + 2 {
                return Err(Error::InsufficientObservations {
                    required: spec.horizon_max + 2,
                    available: data_len,
                    context: "gmm common sample".into(),
                });
            }
            data_len - spec.horizon_max - 2
        }
        _ => data_len - 1 - h,
    };
    let k = regressor_count(0, spec); // lower bound; control count added by caller checks
    if last_t < first_t || last_t - first_t + 1 < k + 1 {
        return Err(Error::InsufficientObservations {
            required: first_t + k + 1,
            available: last_t + 1,
            context: format!("horizon {h}"),
        });
    }
    Ok((first_t, last_t))
}

fn regressor_count(n_controls: usize, spec: &LpSpec) -> usize {
    let mut k = 1; // treatment
    if spec.estimator == EstimatorKind::LagAugmented {
        k += 1;
    }
    if spec.include_intercept {
        k += 1;
    }
    k + n_controls * spec.control_lags.max(1)
}

/// Control block for regressor date `t`: the declared controls dated `t`
/// when `control_lags == 0`, otherwise their lags `t-1 ... t-p`.
fn push_control_row(
    controls: &[&[f64]],
    p: usize,
    t: usize,
    out: &mut impl FnMut(f64),
) {
    for c in controls {
        if p == 0 {
            out(c[t]);
        } else {
            for lag in 1..=p {
                out(c[t - lag]);
            }
        }
    }
}

/// Builds the horizon-`h` design with spec-driven trimming.
pub fn build_design(data: &TimeSeriesDataset, spec: &LpSpec, h: usize) -> Result<RegressionDesign> {
    let (first_t, last_t) = sample_range(data.len(), spec, h)?;
    build_design_on_range(data, spec, h, first_t, last_t)
}

/// Builds the horizon-`h` design on an explicit regressor-date range.
pub fn build_design_on_range(
    data: &TimeSeriesDataset,
    spec: &LpSpec,
    h: usize,
    first_t: usize,
    last_t: usize,
) -> Result<RegressionDesign> {
    if h > spec.horizon_max {
        return Err(Error::InvalidSpec(format!(
            "horizon {h} exceeds horizon_max {}",
            spec.horizon_max
        )));
    }
    spec.validate(data)?;
    let t_len = data.len();
    if last_t + h >= t_len || first_t > last_t {
        return Err(Error::InsufficientObservations {
            required: last_t + h + 1,
            available: t_len,
            context: format!("horizon {h} rows {first_t}..{last_t}"),
        });
    }
    let p = spec.control_lags;
    if first_t < p || (spec.estimator == EstimatorKind::LagAugmented && first_t < 1) {
        return Err(Error::InvalidSpec(format!(
            "first regressor date {first_t} leaves no room for lagged terms"
        )));
    }

    let n = last_t - first_t + 1;
    let controls = data.controls();
    let k = regressor_count(controls.len(), spec);
    if n < k {
        return Err(Error::InsufficientObservations {
            required: k,
            available: n,
            context: format!("horizon {h}"),
        });
    }

    let y = data.outcome();
    let s = data.treatment();
    let mut responses = DVector::zeros(n);
    let mut regressors = DMatrix::zeros(n, k);
    for (row, t) in (first_t..=last_t).enumerate() {
        responses[row] = y[t + h];
        let mut col = 0;
        let mut push = |v: f64| {
            regressors[(row, col)] = v;
            col += 1;
        };
        push(s[t]);
        if spec.estimator == EstimatorKind::LagAugmented {
            push(s[t - 1]);
        }
        if spec.include_intercept {
            push(1.0);
        }
        push_control_row(&controls, p, t, &mut push);
        debug_assert_eq!(col, k);
    }

    // Full-column-rank check at build time; estimation assumes it.
    let sv = regressors.clone().svd(false, false).singular_values;
    let condition = sv.max() / sv.min().max(f64::MIN_POSITIVE);
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(Error::RankDeficient {
            condition,
            limit: CONDITION_LIMIT,
            horizon: h,
        });
    }

    Ok(RegressionDesign {
        responses,
        regressors,
        first_t,
        last_t,
        horizon: h,
    })
}

/// Outcome leads, treatment, and instrument orthogonalized against the
/// intercept and controls over a sample common to all horizons.
///
/// Column `h` of `leads` holds the residual of `y_{t+h}` regressed on the
/// period-`t` control block, so estimation with no further controls
/// reproduces explicit-regressor treatment coefficients horizon by horizon.
#[derive(Debug, Clone)]
pub struct PartialledData {
    pub leads: DMatrix<f64>,
    pub treatment: DVector<f64>,
    pub instrument: DVector<f64>,
    /// First regressor date of the common sample (0-based).
    pub first_t: usize,
}

impl PartialledData {
    pub fn n_rows(&self) -> usize {
        self.treatment.len()
    }

    pub fn n_horizons(&self) -> usize {
        self.leads.ncols()
    }
}

/// Frisch-Waugh-Lovell prewash over the estimator's common sample.
pub fn fwl_partial(data: &TimeSeriesDataset, spec: &LpSpec) -> Result<PartialledData> {
    spec.validate(data)?;
    let t_len = data.len();
    let cap_h = spec.horizon_max;
    let p = spec.control_lags;
    let first_t = p;
    let last_t = match spec.estimator {
        EstimatorKind::Gmm => t_len - cap_h - 2,
        _ => t_len - 1 - cap_h,
    };
    if last_t < first_t {
        return Err(Error::InsufficientObservations {
            required: first_t + 1,
            available: last_t + 1,
            context: "fwl common sample".into(),
        });
    }
    let n = last_t - first_t + 1;
    let controls = data.controls();
    let n_ctrl_cols = controls.len() * p.max(1) * usize::from(!controls.is_empty());
    let k = usize::from(spec.include_intercept) + n_ctrl_cols;

    let extract = |series: &[f64], shift: usize| {
        DVector::from_iterator(n, (first_t..=last_t).map(|t| series[t + shift]))
    };

    let mut leads = DMatrix::zeros(n, cap_h + 1);
    let y = data.outcome();
    let s = extract(data.treatment(), 0);
    let z = extract(data.instrument(), 0);

    if k == 0 {
        for h in 0..=cap_h {
            leads.set_column(h, &extract(y, h));
        }
        return Ok(PartialledData {
            leads,
            treatment: s,
            instrument: z,
            first_t,
        });
    }

    let mut c = DMatrix::zeros(n, k);
    for (row, t) in (first_t..=last_t).enumerate() {
        let mut col = 0;
        let mut push = |v: f64| {
            c[(row, col)] = v;
            col += 1;
        };
        if spec.include_intercept {
            push(1.0);
        }
        push_control_row(&controls, p, t, &mut push);
    }

    let svd = c.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 || smax / smin > CONDITION_LIMIT {
        return Err(Error::RankDeficient {
            condition: if smin > 0.0 { smax / smin } else { f64::INFINITY },
            limit: CONDITION_LIMIT,
            horizon: 0,
        });
    }
    let residualize = |v: &DVector<f64>| -> Result<DVector<f64>> {
        let coef = svd
            .solve(v, 0.0)
            .map_err(|e| Error::SingularMatrix(e.to_string()))?;
        Ok(v - &c * coef)
    };

    for h in 0..=cap_h {
        leads.set_column(h, &residualize(&extract(y, h))?);
    }
    Ok(PartialledData {
        leads,
        treatment: residualize(&s)?,
        instrument: residualize(&z)?,
        first_t,
    })
}

/// Subtracts the sample mean from a slice.
pub fn demean(v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - mean).collect()
}
