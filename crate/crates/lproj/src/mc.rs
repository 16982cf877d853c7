//! Monte Carlo harness: repeated simulation, estimation, and band
//! evaluation with deterministic per-replication seeding.

use rayon::prelude::*;

use crate::bands::{
    iv_irf_at_null, joint_zero_test, pointwise_bands, scheffe_bands,
    significance_bands_asymptotic, significance_bands_bootstrap, supt_bands, BandKind,
};
use crate::dgp::DgpConfig;
use crate::error::{Error, Result};
use crate::estimators::estimate;
use crate::rng::derive_seed;
use crate::spec::LpSpec;

/// Harness parameters beyond the estimation spec itself.
#[derive(Debug, Clone, Copy)]
pub struct McOptions {
    pub alpha: f64,
    pub n_reps: usize,
    pub master_seed: u64,
    /// Wild-block parameters for bootstrap significance bands.
    pub block_size: usize,
    pub boot_replications: usize,
    /// Simulation draws for sup-t bands.
    pub supt_draws: usize,
}

impl Default for McOptions {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            n_reps: 1000,
            master_seed: 0,
            block_size: 8,
            boot_replications: 1000,
            supt_draws: 10_000,
        }
    }
}

/// Aggregated outcome for one (process, band kind) cell.
#[derive(Debug, Clone)]
pub struct McResult {
    pub dgp: DgpConfig,
    pub band_kind: BandKind,
    /// Successful replications contributing to the rates.
    pub n_reps: usize,
    pub n_failures: usize,
    /// Share of replications where the joint zero test rejects
    /// (significance kinds only).
    pub rejection_rate: Option<f64>,
    /// Share of replications where the true response lies inside the band
    /// at every horizon (confidence kinds only).
    pub coverage_rate: Option<f64>,
    /// Per-horizon coverage shares (confidence kinds only).
    pub coverage_per_horizon: Option<Vec<f64>>,
    /// Binomial Monte Carlo standard error of the primary rate.
    pub mc_standard_error: f64,
    /// Seeds of failed replications, for replay.
    pub failed_seeds: Vec<u64>,
}

impl McResult {
    /// The rate the cell was run for: rejection for significance bands,
    /// coverage for confidence bands.
    pub fn primary_rate(&self) -> f64 {
        self.rejection_rate
            .or(self.coverage_rate)
            .unwrap_or(f64::NAN)
    }
}

struct KindOutcome {
    reject: Option<bool>,
    covered: Option<bool>,
    covered_per_horizon: Option<Vec<bool>>,
}

fn run_replication(
    config: &DgpConfig,
    spec: &LpSpec,
    band_kinds: &[BandKind],
    options: &McOptions,
    rep_seed: u64,
) -> Result<Vec<KindOutcome>> {
    let data = config.with_seed(rep_seed).simulate()?;
    let cap_h = spec.horizon_max;

    let needs_null_irf = band_kinds.iter().any(|k| k.is_significance());
    let null_irf = if needs_null_irf {
        Some(iv_irf_at_null(&data, spec)?)
    } else {
        None
    };
    let needs_estimate = band_kinds.iter().any(|k| !k.is_significance());
    let fitted = if needs_estimate {
        Some(estimate(&data, spec)?)
    } else {
        None
    };
    let truth = if needs_estimate {
        Some(config.true_irf(cap_h)?)
    } else {
        None
    };

    band_kinds
        .iter()
        .map(|kind| match kind {
            BandKind::SignificanceAsymptotic | BandKind::SignificanceBootstrap => {
                let bands = match kind {
                    BandKind::SignificanceAsymptotic => {
                        significance_bands_asymptotic(&data, spec, options.alpha)?
                    }
                    _ => significance_bands_bootstrap(
                        &data,
                        spec,
                        options.alpha,
                        options.block_size,
                        options.boot_replications,
                        derive_seed(rep_seed, 0x0b00),
                    )?,
                };
                let test = joint_zero_test(null_irf.as_ref().expect("computed above"), &bands)?;
                Ok(KindOutcome {
                    reject: Some(test.reject),
                    covered: None,
                    covered_per_horizon: None,
                })
            }
            _ => {
                let irf = fitted.as_ref().expect("computed above");
                let bands = match kind {
                    BandKind::Pointwise => pointwise_bands(irf, options.alpha)?,
                    BandKind::Scheffe => scheffe_bands(irf, options.alpha)?,
                    BandKind::SupT => supt_bands(
                        irf,
                        options.alpha,
                        options.supt_draws,
                        derive_seed(rep_seed, 0x5007),
                    )?,
                    _ => unreachable!(),
                };
                let truth = truth.as_ref().expect("computed above");
                let flags: Vec<bool> = (0..=cap_h)
                    .map(|h| truth[h] >= bands.lower[h] && truth[h] <= bands.upper[h])
                    .collect();
                Ok(KindOutcome {
                    reject: None,
                    covered: Some(flags.iter().all(|f| *f)),
                    covered_per_horizon: Some(flags),
                })
            }
        })
        .collect()
}

/// Runs the full grid. Replications are independent and evaluated in
/// parallel; replication `i` of configuration `c` always receives the seed
/// `derive_seed(master_seed, c << 32 | i)`, so the aggregate is identical
/// under any thread schedule. A failure share above one percent aborts the
/// cell rather than silently reporting a biased rate.
pub fn run_mc(
    grid: &[DgpConfig],
    spec: &LpSpec,
    band_kinds: &[BandKind],
    options: &McOptions,
) -> Result<Vec<McResult>> {
    if options.n_reps == 0 {
        return Err(Error::InvalidParameter(
            "monte carlo needs at least one replication".into(),
        ));
    }
    if band_kinds.is_empty() {
        return Err(Error::InvalidParameter("no band kinds requested".into()));
    }
    let mut results = Vec::with_capacity(grid.len() * band_kinds.len());
    for (config_idx, config) in grid.iter().enumerate() {
        let outcomes: Vec<(u64, Result<Vec<KindOutcome>>)> = (0..options.n_reps)
            .into_par_iter()
            .map(|rep| {
                let stream = ((config_idx as u64) << 32) | rep as u64;
                let rep_seed = derive_seed(options.master_seed, stream);
                (
                    rep_seed,
                    run_replication(config, spec, band_kinds, options, rep_seed),
                )
            })
            .collect();

        let failed_seeds: Vec<u64> = outcomes
            .iter()
            .filter_map(|(seed, r)| r.is_err().then_some(*seed))
            .collect();
        let n_failures = failed_seeds.len();
        if n_failures * 100 > options.n_reps {
            let first = outcomes
                .iter()
                .find_map(|(_, r)| r.as_ref().err())
                .map(|e| e.to_string())
                .unwrap_or_default();
            return Err(Error::Estimation(format!(
                "{n_failures} of {} replications failed for {} (first error: {first})",
                options.n_reps,
                config.label(),
            )));
        }
        let successes: Vec<&Vec<KindOutcome>> =
            outcomes.iter().filter_map(|(_, r)| r.as_ref().ok()).collect();
        let n_ok = successes.len();

        for (kind_idx, kind) in band_kinds.iter().enumerate() {
            let mut n_reject = 0usize;
            let mut n_covered = 0usize;
            let mut per_h: Option<Vec<usize>> = None;
            for rep in &successes {
                let outcome = &rep[kind_idx];
                if outcome.reject == Some(true) {
                    n_reject += 1;
                }
                if outcome.covered == Some(true) {
                    n_covered += 1;
                }
                if let Some(flags) = &outcome.covered_per_horizon {
                    let acc = per_h.get_or_insert_with(|| vec![0; flags.len()]);
                    for (a, f) in acc.iter_mut().zip(flags) {
                        *a += usize::from(*f);
                    }
                }
            }
            let (rejection_rate, coverage_rate) = if kind.is_significance() {
                (Some(n_reject as f64 / n_ok as f64), None)
            } else {
                (None, Some(n_covered as f64 / n_ok as f64))
            };
            let rate = rejection_rate.or(coverage_rate).unwrap();
            results.push(McResult {
                dgp: *config,
                band_kind: *kind,
                n_reps: n_ok,
                n_failures,
                rejection_rate,
                coverage_rate,
                coverage_per_horizon: per_h.map(|acc| {
                    acc.into_iter().map(|c| c as f64 / n_ok as f64).collect()
                }),
                mc_standard_error: (rate * (1.0 - rate) / n_ok as f64).sqrt(),
                failed_seeds: failed_seeds.clone(),
            });
        }
    }
    Ok(results)
}
