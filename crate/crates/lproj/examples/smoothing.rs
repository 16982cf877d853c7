//! Minimum-distance smoothing of a GMM-estimated response onto a B-spline
//! basis, with the overidentification test judging the fit.

use lproj::smoothing::default_bspline;
use lproj::*;

fn main() -> Result<()> {
    let data = DgpConfig::iv_system(0.5, 500, 3).simulate()?;
    let cap_h = 10;
    let spec = LpSpec::new(cap_h)
        .with_estimator(EstimatorKind::Gmm)
        .with_variance(VarianceKind::NeweyWest { lag: Some(8) });
    let irf = lp_gmm(&data, &spec, true)?;

    let cubic = default_bspline(cap_h)?;
    let fit = fit_smooth_irf(&irf, &cubic)?;

    println!(
        "cubic B-spline smooth with {} parameters over {} horizons",
        cubic.n_params(),
        cap_h + 1
    );
    println!(
        "overidentification: Q = {:.3} on {} df, p = {:.3}\n",
        fit.q_statistic, fit.df, fit.p_value
    );
    println!("{:>3} {:>9} {:>9}", "h", "raw", "smooth");
    for h in 0..=cap_h {
        println!("{:>3} {:>9.4} {:>9.4}", h, irf.beta[h], fit.fitted[h]);
    }

    // A deliberately rigid basis (a constant) should be rejected.
    let flat = bspline_basis(cap_h, 0, &[])?;
    let bad = fit_smooth_irf(&irf, &flat)?;
    println!(
        "\nconstant-response basis for contrast: Q = {:.1} on {} df, p = {:.2e}",
        bad.q_statistic, bad.df, bad.p_value
    );
    Ok(())
}
