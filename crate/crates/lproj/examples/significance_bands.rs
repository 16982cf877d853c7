//! Significance bands: is there any response at all?
//!
//! The bands are drawn around zero under the null that the treatment has no
//! effect, with the variance evaluated at that null (the LM principle) and
//! a Bonferroni adjustment across horizons. An estimate escaping the band
//! at any horizon rejects the joint null of a zero response path.

use lproj::bands::iv_irf_at_null;
use lproj::*;

fn main() -> Result<()> {
    for beta in [0.0, 0.5] {
        let data = DgpConfig::iv_system(beta, 300, 9).simulate()?;
        let spec = LpSpec::new(6).with_variance(VarianceKind::NeweyWest { lag: Some(8) });

        let irf = iv_irf_at_null(&data, &spec)?;
        let asy = significance_bands_asymptotic(&data, &spec, 0.05)?;
        let boot = significance_bands_bootstrap(&data, &spec, 0.05, 8, 1000, 77)?;
        let verdict = joint_zero_test(&irf, &asy)?;

        println!("treatment effect beta = {beta}, T = 300\n");
        println!(
            "{:>3} {:>9} {:>11} {:>11} {:>8} {:>8}",
            "h", "iv beta", "asym band", "boot band", "lm stat", "p-value"
        );
        for h in 0..=6 {
            let lm = lm_statistic(&data, &spec, h)?;
            println!(
                "{:>3} {:>9.4} {:>11.4} {:>11.4} {:>8.3} {:>8.4}",
                h, irf.beta[h], asy.upper[h], boot.upper[h], lm.statistic, lm.p_value
            );
        }
        println!(
            "\njoint zero-response test: {} horizon(s) outside the band -> {}\n",
            verdict.statistic,
            if verdict.reject { "reject" } else { "no rejection" }
        );
    }
    Ok(())
}
