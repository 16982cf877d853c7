//! File-based front end for the `lproj` library: CSV in, plot-ready CSV
//! out, with a JSON metadata sidecar next to every result file.
//!
//! Every numeric value is serialized with 17 significant digits so a
//! round-trip through the CSV is lossless, and every stochastic command
//! requires an explicit `--seed`. Exit codes: 0 success, 2 usage or
//! validation error, 3 numerical/estimation failure.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{merge, FileConfig};
use lproj::bands::iv_irf_at_null;
use lproj::mc::McOptions;
use lproj::*;
use output::{fmt_float, CsvTable, Sidecar};

#[derive(Parser)]
#[command(
    name = "lproj",
    version,
    about = "Local projection impulse responses: estimation, bands, and Monte Carlo studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate an impulse response from a CSV and write per-horizon rows
    Estimate(EstimateArgs),
    /// Zero-null significance bands with the joint response test
    Bands(BandsArgs),
    /// Monte Carlo size/power or coverage study over a process grid
    Mc(McArgs),
    /// Generate a dataset from a registered process
    Simulate(SimulateArgs),
}

#[derive(Args, Clone, Default)]
struct CommonDataArgs {
    /// Input CSV with a header row
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output CSV path (a .meta.json sidecar is written next to it)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Outcome column
    #[arg(long)]
    y: Option<String>,
    /// Treatment column
    #[arg(long)]
    s: Option<String>,
    /// Instrument column (defaults to the treatment)
    #[arg(long)]
    z: Option<String>,
    /// Comma-separated control columns
    #[arg(long, value_delimiter = ',')]
    controls: Option<Vec<String>>,
    /// Maximum horizon H
    #[arg(long)]
    horizon: Option<usize>,
    /// Control lag order p (0 puts controls at date t, p >= 1 uses lags 1..p)
    #[arg(long)]
    lags: Option<usize>,
    /// Drop the intercept
    #[arg(long)]
    no_intercept: bool,
    /// Newey-West truncation lag
    #[arg(long)]
    nw_lag: Option<usize>,
    /// Bands cover at level 1 - alpha
    #[arg(long)]
    alpha: Option<f64>,
    /// Wild-block bootstrap block size
    #[arg(long)]
    block_size: Option<usize>,
    /// Wild-block bootstrap replications
    #[arg(long)]
    boot_reps: Option<usize>,
    /// Draws for the sup-t quantile simulation
    #[arg(long)]
    supt_draws: Option<usize>,
    /// Seed for stochastic steps (required whenever one is requested)
    #[arg(long)]
    seed: Option<u64>,
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    common: CommonDataArgs,
    /// Estimator: ols, fgls, fgls-bb, lag-augmented, gmm
    #[arg(long)]
    estimator: Option<String>,
    /// Variance for coefficient errors: newey-west, hc0, hc1, hc3
    #[arg(long)]
    variance: Option<String>,
    /// Comma-separated band kinds: pointwise, scheffe, sup-t,
    /// significance, significance-bootstrap
    #[arg(long, value_delimiter = ',')]
    bands: Option<Vec<String>>,
}

#[derive(Args)]
struct BandsArgs {
    #[command(flatten)]
    common: CommonDataArgs,
    /// Band kinds (default: significance)
    #[arg(long, value_delimiter = ',')]
    bands: Option<Vec<String>>,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    common: CommonDataArgs,
    /// Process: iv-system, ar1, var1
    #[arg(long)]
    dgp: Option<String>,
    /// Treatment coefficients for iv-system (comma separated)
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    /// Autoregressive roots for ar1 (comma separated)
    #[arg(long, value_delimiter = ',')]
    rho: Option<Vec<f64>>,
    /// Sample sizes (comma separated)
    #[arg(long, value_delimiter = ',')]
    sample_size: Option<Vec<usize>>,
    /// Burn-in override
    #[arg(long)]
    burn_in: Option<usize>,
    /// Monte Carlo replications
    #[arg(long)]
    reps: Option<usize>,
    /// Band kinds to evaluate
    #[arg(long, value_delimiter = ',')]
    bands: Option<Vec<String>>,
    /// Estimator for coverage-style bands
    #[arg(long)]
    estimator: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonDataArgs,
    /// Process: iv-system, ar1, var1
    #[arg(long)]
    dgp: Option<String>,
    /// Treatment coefficient (iv-system)
    #[arg(long)]
    beta: Option<f64>,
    /// Autoregressive root (ar1)
    #[arg(long)]
    rho: Option<f64>,
    /// Intercept (ar1)
    #[arg(long)]
    intercept: Option<f64>,
    /// Sample size
    #[arg(long)]
    sample_size: Option<usize>,
    /// Burn-in override
    #[arg(long)]
    burn_in: Option<usize>,
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<lproj::Error> for Failure {
    fn from(e: lproj::Error) -> Self {
        match e {
            Error::InvalidData(_) | Error::InvalidSpec(_) | Error::InvalidParameter(_) => {
                Failure::usage(e.to_string())
            }
            _ => Failure::numerical(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Bands(args) => cmd_bands(args),
        Command::Mc(args) => cmd_mc(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_band_kinds(names: &[String]) -> Result<Vec<BandKind>, Failure> {
    names
        .iter()
        .map(|n| match n.as_str() {
            "pointwise" => Ok(BandKind::Pointwise),
            "scheffe" => Ok(BandKind::Scheffe),
            "sup-t" | "sup_t" | "supt" => Ok(BandKind::SupT),
            "significance" | "significance-asymptotic" | "significance_asymptotic" => {
                Ok(BandKind::SignificanceAsymptotic)
            }
            "significance-bootstric" => Ok(BandKind::SignificanceBootstrap),
            "significance-bootstrap" | "significance_bootstrap" => {
                Ok(BandKind::SignificanceBootstrap)
            }
            other => Err(Failure::usage(format!("unknown band kind '{other}'"))),
        })
        .collect()
}

fn parse_estimator(name: &str) -> Result<EstimatorKind, Failure> {
    match name {
        "ols" => Ok(EstimatorKind::Ols),
        "fgls" => Ok(EstimatorKind::Fgls),
        "fgls-bb" | "fgls_bb" => Ok(EstimatorKind::FglsBb),
        "lag-augmented" | "lag_augmented" => Ok(EstimatorKind::LagAugmented),
        "gmm" => Ok(EstimatorKind::Gmm),
        other => Err(Failure::usage(format!("unknown estimator '{other}'"))),
    }
}

struct ResolvedData {
    data: TimeSeriesDataset,
    spec: LpSpec,
    alpha: f64,
    block_size: usize,
    boot_reps: usize,
    supt_draws: usize,
    seed: Option<u64>,
    output: PathBuf,
    meta: Vec<(String, String)>,
}

fn resolve_common(
    mut c: CommonDataArgs,
    file: &FileConfig,
    estimator: EstimatorKind,
    variance_name: Option<&str>,
) -> Result<ResolvedData, Failure> {
    merge(&mut c, file);
    let input = c
        .input
        .ok_or_else(|| Failure::usage("--input is required"))?;
    let output = c
        .output
        .ok_or_else(|| Failure::usage("--output is required"))?;
    let y = c.y.ok_or_else(|| Failure::usage("--y is required"))?;
    let s = c.s.ok_or_else(|| Failure::usage("--s is required"))?;
    let horizon = c.horizon.unwrap_or(8);
    let lags = c.lags.unwrap_or(0);
    let alpha = c.alpha.unwrap_or(0.05);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Failure::usage(format!(
            "alpha must be in (0, 1), got {alpha}"
        )));
    }

    let columns = read_csv_columns(&input)?;
    let mut roles = Roles::new(&y, &s);
    if let Some(z) = &c.z {
        roles = roles.with_instrument(z);
    }
    let controls = c.controls.clone().unwrap_or_default();
    roles = roles.with_controls(controls.iter().cloned());
    for name in [&y, &s]
        .into_iter()
        .chain(c.z.iter())
        .chain(controls.iter())
    {
        if !columns.iter().any(|(n, _)| n == name) {
            return Err(Failure::usage(format!(
                "column '{name}' not found in {}",
                input.display()
            )));
        }
    }
    let data =
        TimeSeriesDataset::new(columns, roles).map_err(|e| Failure::usage(e.to_string()))?;

    let variance = match variance_name {
        None | Some("newey-west") | Some("newey_west") => {
            VarianceKind::NeweyWest { lag: c.nw_lag }
        }
        Some("hc0") => VarianceKind::Hc(HcVariant::Hc0),
        Some("hc1") => VarianceKind::Hc(HcVariant::Hc1),
        Some("hc3") => VarianceKind::Hc(HcVariant::Hc3),
        Some(other) => return Err(Failure::usage(format!("unknown variance '{other}'"))),
    };
    let spec = LpSpec::new(horizon)
        .with_control_lags(lags)
        .with_intercept(!c.no_intercept)
        .with_estimator(estimator)
        .with_variance(variance);
    spec.validate(&data)
        .map_err(|e| Failure::usage(e.to_string()))?;

    let meta = vec![
        ("input".to_string(), input.display().to_string()),
        ("outcome".to_string(), y),
        ("treatment".to_string(), s),
        (
            "instrument".to_string(),
            c.z.clone().unwrap_or_else(|| "treatment".into()),
        ),
        ("controls".to_string(), controls.join(",")),
        ("horizon_max".to_string(), horizon.to_string()),
        ("control_lags".to_string(), lags.to_string()),
        ("estimator".to_string(), estimator.to_string()),
        ("variance".to_string(), spec.variance.to_string()),
        ("alpha".to_string(), alpha.to_string()),
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ];

    Ok(ResolvedData {
        data,
        spec,
        alpha,
        block_size: c.block_size.unwrap_or(8),
        boot_reps: c.boot_reps.unwrap_or(1000),
        supt_draws: c.supt_draws.unwrap_or(100_000),
        seed: c.seed,
        output,
        meta,
    })
}

fn read_csv_columns(path: &PathBuf) -> Result<Vec<(String, Vec<f64>)>, Failure> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Failure::usage(format!("bad header row: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut columns: Vec<(String, Vec<f64>)> =
        headers.iter().map(|h| (h.clone(), Vec::new())).collect();
    for (row_idx, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| Failure::usage(format!("row {}: {e}", row_idx + 2)))?;
        for (col, field) in record.iter().enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| {
                Failure::usage(format!(
                    "column '{}', row {}: '{}' is not numeric",
                    headers.get(col).map(String::as_str).unwrap_or("?"),
                    row_idx + 2,
                    field
                ))
            })?;
            columns[col].1.push(value);
        }
    }
    Ok(columns)
}

fn require_seed(seed: Option<u64>, why: &str) -> Result<u64, Failure> {
    seed.ok_or_else(|| Failure::usage(format!("--seed is required ({why})")))
}

fn build_band(kind: BandKind, irf: &IrfEstimate, r: &ResolvedData) -> Result<BandSet, Failure> {
    let band = match kind {
        BandKind::Pointwise => pointwise_bands(irf, r.alpha)?,
        BandKind::Scheffe => scheffe_bands(irf, r.alpha)?,
        BandKind::SupT => {
            let seed = require_seed(r.seed, "sup-t bands simulate their critical value")?;
            supt_bands(irf, r.alpha, r.supt_draws, seed)?
        }
        BandKind::SignificanceAsymptotic => {
            significance_bands_asymptotic(&r.data, &r.spec, r.alpha)?
        }
        BandKind::SignificanceBootstrap => {
            let seed = require_seed(r.seed, "the wild block bootstrap draws weights")?;
            significance_bands_bootstrap(
                &r.data,
                &r.spec,
                r.alpha,
                r.block_size,
                r.boot_reps,
                seed,
            )?
        }
    };
    Ok(band)
}

fn cmd_estimate(args: EstimateArgs) -> Result<(), Failure> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let estimator = parse_estimator(
        args.estimator
            .or_else(|| file.string("estimator"))
            .as_deref()
            .unwrap_or("ols"),
    )?;
    let variance = args.variance.or_else(|| file.string("variance"));
    let r = resolve_common(args.common, &file, estimator, variance.as_deref())?;
    let band_names = args
        .bands
        .or_else(|| file.string_list("bands"))
        .unwrap_or_default();
    let kinds = parse_band_kinds(&band_names)?;

    let irf = estimate(&r.data, &r.spec).map_err(Failure::from)?;
    let bands: Vec<BandSet> = kinds
        .iter()
        .map(|k| build_band(*k, &irf, &r))
        .collect::<Result<_, _>>()?;

    let mut table = CsvTable::new(&r.output);
    let mut header = vec!["h".into(), "beta".into(), "se".into(), "n_obs".into()];
    for b in &bands {
        header.push(format!("{}_lower", b.kind));
        header.push(format!("{}_upper", b.kind));
    }
    table.header(header);
    for h in 0..=r.spec.horizon_max {
        let mut row = vec![
            h.to_string(),
            fmt_float(irf.beta[h]),
            fmt_float(irf.se[h]),
            irf.n_obs[h].to_string(),
        ];
        for b in &bands {
            row.push(fmt_float(b.lower[h]));
            row.push(fmt_float(b.upper[h]));
        }
        table.row(row);
    }
    table.finish().map_err(Failure::numerical)?;

    let mut sidecar = Sidecar::new("estimate", r.meta.clone());
    sidecar.push("bands", band_names.join(","));
    if let Some(seed) = r.seed {
        sidecar.push("seed", seed.to_string());
    }
    sidecar.write(&r.output).map_err(Failure::numerical)?;
    Ok(())
}

fn cmd_bands(args: BandsArgs) -> Result<(), Failure> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let r = resolve_common(args.common, &file, EstimatorKind::Gmm, None)?;
    let band_names = args
        .bands
        .or_else(|| file.string_list("bands"))
        .unwrap_or_else(|| vec!["significance".into()]);
    let kinds = parse_band_kinds(&band_names)?;
    if kinds.iter().any(|k| !k.is_significance()) {
        return Err(Failure::usage(
            "the bands command draws significance bands; use estimate for confidence bands",
        ));
    }

    let irf = iv_irf_at_null(&r.data, &r.spec).map_err(Failure::from)?;
    let bands: Vec<BandSet> = kinds
        .iter()
        .map(|k| build_band(*k, &irf, &r))
        .collect::<Result<_, _>>()?;

    let mut table = CsvTable::new(&r.output);
    let mut header = vec![
        "h".into(),
        "beta_iv".into(),
        "se_null".into(),
        "lm_stat".into(),
        "lm_pvalue".into(),
    ];
    for b in &bands {
        header.push(format!("{}_lower", b.kind));
        header.push(format!("{}_upper", b.kind));
    }
    table.header(header);
    for h in 0..=r.spec.horizon_max {
        let lm = lm_statistic(&r.data, &r.spec, h).map_err(Failure::from)?;
        let mut row = vec![
            h.to_string(),
            fmt_float(irf.beta[h]),
            fmt_float(irf.se[h]),
            fmt_float(lm.statistic),
            fmt_float(lm.p_value),
        ];
        for b in &bands {
            row.push(fmt_float(b.lower[h]));
            row.push(fmt_float(b.upper[h]));
        }
        table.row(row);
    }
    table.finish().map_err(Failure::numerical)?;

    let mut sidecar = Sidecar::new("bands", r.meta.clone());
    sidecar.push("bands", band_names.join(","));
    if let Some(seed) = r.seed {
        sidecar.push("seed", seed.to_string());
    }
    for (kind, band) in kinds.iter().zip(&bands) {
        let test = joint_zero_test(&irf, band).map_err(Failure::from)?;
        sidecar.push(
            format!("joint_test_{kind}"),
            format!(
                "{{\"outside\":{},\"reject\":{}}}",
                test.statistic, test.reject
            ),
        );
    }
    sidecar.write(&r.output).map_err(Failure::numerical)?;
    Ok(())
}

fn parse_dgp_grid(
    dgp: &str,
    betas: &[f64],
    rhos: &[f64],
    sizes: &[usize],
    burn_in: Option<usize>,
    seed: u64,
) -> Result<Vec<DgpConfig>, Failure> {
    let mut grid = Vec::new();
    for &t in sizes {
        match dgp {
            "iv-system" | "iv_system" => {
                for &b in betas {
                    let mut c = DgpConfig::iv_system(b, t, seed);
                    if let Some(burn) = burn_in {
                        c = c.with_burn_in(burn);
                    }
                    grid.push(c);
                }
            }
            "ar1" => {
                for &rho in rhos {
                    let mut c = DgpConfig::ar1(rho, 0.0, t, seed);
                    if let Some(burn) = burn_in {
                        c = c.with_burn_in(burn);
                    }
                    grid.push(c);
                }
            }
            "var1" | "var1-paper" | "var1_paper" => {
                let mut c = DgpConfig::var1_paper(t, seed);
                if let Some(burn) = burn_in {
                    c = c.with_burn_in(burn);
                }
                grid.push(c);
            }
            other => return Err(Failure::usage(format!("unknown dgp '{other}'"))),
        }
    }
    if grid.is_empty() {
        return Err(Failure::usage(
            "empty process grid; pass --sample-size and, for iv-system, --beta",
        ));
    }
    Ok(grid)
}

fn cmd_mc(args: McArgs) -> Result<(), Failure> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let mut common = args.common;
    merge(&mut common, &file);
    let output = common
        .output
        .clone()
        .ok_or_else(|| Failure::usage("--output is required"))?;
    let reps = args
        .reps
        .or_else(|| file.usize_value("reps"))
        .unwrap_or(1000);
    if reps == 0 {
        return Err(Failure::usage("--reps must be positive"));
    }
    let seed = require_seed(common.seed, "monte carlo draws are seeded")?;
    let dgp = args
        .dgp
        .or_else(|| file.string("dgp"))
        .ok_or_else(|| Failure::usage("--dgp is required"))?;
    let betas = args.beta.unwrap_or_else(|| vec![0.0]);
    let rhos = args.rho.unwrap_or_else(|| vec![0.5]);
    let sizes = args
        .sample_size
        .or_else(|| file.usize_list("sample_size"))
        .unwrap_or_else(|| vec![100]);
    let band_names = args
        .bands
        .or_else(|| file.string_list("bands"))
        .unwrap_or_else(|| vec!["significance".into()]);
    let kinds = parse_band_kinds(&band_names)?;
    let estimator = parse_estimator(
        args.estimator
            .or_else(|| file.string("estimator"))
            .as_deref()
            .unwrap_or("ols"),
    )?;

    let horizon = common.horizon.unwrap_or(4);
    let spec = LpSpec::new(horizon)
        .with_control_lags(common.lags.unwrap_or(0))
        .with_estimator(estimator)
        .with_variance(VarianceKind::NeweyWest { lag: common.nw_lag });
    let options = McOptions {
        alpha: common.alpha.unwrap_or(0.05),
        n_reps: reps,
        master_seed: seed,
        block_size: common.block_size.unwrap_or(8),
        boot_replications: common.boot_reps.unwrap_or(1000),
        supt_draws: common.supt_draws.unwrap_or(10_000),
    };
    let grid = parse_dgp_grid(&dgp, &betas, &rhos, &sizes, args.burn_in, seed)?;

    let results = run_mc(&grid, &spec, &kinds, &options).map_err(Failure::from)?;

    let mut table = CsvTable::new(&output);
    table.header(vec![
        "dgp".into(),
        "T".into(),
        "beta".into(),
        "band_kind".into(),
        "rejection_rate".into(),
        "mc_se".into(),
        "n_reps".into(),
        "coverage_rate".into(),
        "n_failures".into(),
    ]);
    for r in &results {
        table.row(vec![
            r.dgp.label(),
            r.dgp.sample_size.to_string(),
            r.dgp
                .treatment_coefficient()
                .map(fmt_float)
                .unwrap_or_default(),
            r.band_kind.to_string(),
            r.rejection_rate.map(fmt_float).unwrap_or_default(),
            fmt_float(r.mc_standard_error),
            r.n_reps.to_string(),
            r.coverage_rate.map(fmt_float).unwrap_or_default(),
            r.n_failures.to_string(),
        ]);
    }
    table.finish().map_err(Failure::numerical)?;

    let mut sidecar = Sidecar::new(
        "mc",
        vec![
            ("dgp".to_string(), dgp),
            ("reps".to_string(), reps.to_string()),
            ("horizon_max".to_string(), horizon.to_string()),
            ("seed".to_string(), seed.to_string()),
            ("alpha".to_string(), options.alpha.to_string()),
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ],
    );
    sidecar.push("bands", band_names.join(","));
    sidecar.write(&output).map_err(Failure::numerical)?;
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let mut common = args.common;
    merge(&mut common, &file);
    let output = common
        .output
        .clone()
        .ok_or_else(|| Failure::usage("--output is required"))?;
    let seed = require_seed(common.seed, "simulation draws are seeded")?;
    let dgp = args
        .dgp
        .or_else(|| file.string("dgp"))
        .ok_or_else(|| Failure::usage("--dgp is required"))?;
    let sample_size = args
        .sample_size
        .or_else(|| file.usize_value("sample_size"))
        .ok_or_else(|| Failure::usage("--sample-size is required"))?;

    let mut config = match dgp.as_str() {
        "ar1" => DgpConfig::ar1(
            args.rho.unwrap_or(0.5),
            args.intercept.unwrap_or(0.0),
            sample_size,
            seed,
        ),
        "var1" | "var1-paper" | "var1_paper" => DgpConfig::var1_paper(sample_size, seed),
        "iv-system" | "iv_system" => {
            DgpConfig::iv_system(args.beta.unwrap_or(0.0), sample_size, seed)
        }
        other => return Err(Failure::usage(format!("unknown dgp '{other}'"))),
    };
    if let Some(burn) = args.burn_in {
        config = config.with_burn_in(burn);
    }
    let data = config.simulate().map_err(Failure::from)?;

    let names: Vec<String> = data.names().map(String::from).collect();
    let mut table = CsvTable::new(&output);
    table.header(names.clone());
    for t in 0..data.len() {
        table.row(
            names
                .iter()
                .map(|n| fmt_float(data.get(n).expect("known column")[t]))
                .collect(),
        );
    }
    table.finish().map_err(Failure::numerical)?;

    let sidecar = Sidecar::new(
        "simulate",
        vec![
            ("dgp".to_string(), config.label()),
            ("sample_size".to_string(), sample_size.to_string()),
            ("burn_in".to_string(), config.burn_in.to_string()),
            ("seed".to_string(), seed.to_string()),
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ],
    );
    sidecar.write(&output).map_err(Failure::numerical)?;
    Ok(())
}
