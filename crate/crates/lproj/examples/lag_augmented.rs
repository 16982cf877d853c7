//! Lag-augmented local projections on highly persistent data.
//!
//! Adding one lag of the treatment makes the effective regressor
//! stationary, so plain HC3 errors are valid uniformly in the
//! autoregressive root — including the unit-root case simulated here.

use lproj::*;

fn main() -> Result<()> {
    for rho in [0.95, 1.0] {
        let dgp = DgpConfig::ar1(rho, 0.0, 240, 5).with_burn_in(if rho < 1.0 { 500 } else { 0 });
        let data = dgp.simulate()?;
        let cap_h = 6;

        let nw = lp_ols(&data, &LpSpec::new(cap_h))?;
        let la = lp_lag_augmented(
            &data,
            &LpSpec::new(cap_h).with_estimator(EstimatorKind::LagAugmented),
        )?;

        println!("AR(1) rho = {rho}, T = 240\n");
        println!(
            "{:>3} {:>10} {:>10} {:>12} {:>10}",
            "h", "ols", "nw se", "lag-augment", "hc3 se"
        );
        for h in 0..=cap_h {
            println!(
                "{:>3} {:>10.4} {:>10.4} {:>12.4} {:>10.4}",
                h, nw.beta[h], nw.se[h], la.beta[h], la.se[h]
            );
        }
        println!();
    }
    Ok(())
}
