//! Estimate an impulse response by per-horizon OLS and draw classic
//! pointwise Newey-West bands.
//!
//! ```bash
//! cargo run --release -p lproj --example pointwise_bands
//! ```

use lproj::*;

fn main() -> Result<()> {
    // A persistent AR(1): the response of y to its own innovation is rho^h.
    let dgp = DgpConfig::ar1(0.7, 0.0, 400, 42);
    let data = dgp.simulate()?;
    let truth = dgp.true_irf(10)?;

    let spec = LpSpec::new(10);
    let irf = lp_ols(&data, &spec)?;
    let bands = pointwise_bands(&irf, 0.05)?;

    println!("AR(1) rho = 0.7, T = 400, per-horizon OLS with Newey-West errors\n");
    println!("{:>3} {:>9} {:>9} {:>9} {:>9} {:>9}", "h", "estimate", "se", "lower", "upper", "truth");
    for h in 0..=10 {
        println!(
            "{:>3} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            h, irf.beta[h], irf.se[h], bands.lower[h], bands.upper[h], truth[h]
        );
    }
    Ok(())
}
