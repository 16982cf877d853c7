//! Size and power of the joint zero-response test on the instrumented
//! treatment system, in the style of a band-comparison simulation study.
//!
//! Uses a reduced replication count so it finishes quickly; raise `n_reps`
//! (and run with `--release`) for publication-grade rates.

use lproj::mc::McOptions;
use lproj::*;

fn main() -> Result<()> {
    let spec = LpSpec::new(4).with_variance(VarianceKind::NeweyWest { lag: Some(8) });
    let kinds = [
        BandKind::SignificanceAsymptotic,
        BandKind::SignificanceBootstrap,
    ];
    let opts = McOptions {
        alpha: 0.05,
        n_reps: 300,
        master_seed: 1,
        block_size: 8,
        boot_replications: 500,
        supt_draws: 10_000,
    };
    let grid: Vec<DgpConfig> = [100usize, 500]
        .iter()
        .flat_map(|&t| {
            [0.0, 0.25, 0.5, 0.75]
                .iter()
                .map(move |&b| DgpConfig::iv_system(b, t, 0))
        })
        .collect();

    let results = run_mc(&grid, &spec, &kinds, &opts)?;
    println!(
        "{:>5} {:>6} {:>26} {:>8} {:>8}",
        "T", "beta", "band", "reject", "mc se"
    );
    for r in &results {
        println!(
            "{:>5} {:>6} {:>26} {:>8.3} {:>8.3}",
            r.dgp.sample_size,
            r.dgp.treatment_coefficient().unwrap(),
            r.band_kind.to_string(),
            r.rejection_rate.unwrap(),
            r.mc_standard_error
        );
    }
    println!("\nrejection should sit near 0.05 at beta = 0 and climb toward 1 with beta.");
    Ok(())
}
