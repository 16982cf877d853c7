//! Normal and chi-square distribution functions used by the band
//! constructions.
//!
//! The normal quantile uses Acklam's rational approximation polished with one
//! Newton step against the gamma-function CDF, giving near machine precision.
//! The chi-square quantile inverts the regularized incomplete gamma by
//! bisection.

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_74;

/// Lanczos (g = 7) log-gamma for positive arguments.
pub fn ln_gamma(z: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(z > 0.0);
    let zm = z - 1.0;
    let mut x = 0.999_999_999_999_809_93;
    for (i, c) in COEFFS.iter().enumerate() {
        x += c / (zm + (i + 1) as f64);
    }
    let t = zm + 7.5;
    LN_SQRT_2PI + (zm + 0.5) * t.ln() - t + x.ln()
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // Series expansion converges quickly here.
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = 1.0;
        while term.abs() > sum.abs() * 1e-16 {
            term *= x / (a + n);
            sum += term;
            n += 1.0;
            if n > 10_000.0 {
                break;
            }
        }
        sum * (-x + a * x.ln() - ln_gamma(a)).exp()
    } else {
        // Continued fraction for Q(a, x), modified Lentz.
        const FPMIN: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut i = 1.0;
        loop {
            let an = -i * (i - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 || i > 10_000.0 {
                break;
            }
            i += 1.0;
        }
        1.0 - h * (-x + a * x.ln() - ln_gamma(a)).exp()
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    let p_half = gamma_p(0.5, 0.5 * x * x);
    if x >= 0.0 {
        0.5 * (1.0 + p_half)
    } else {
        0.5 * (1.0 - p_half)
    }
}

/// Standard normal density.
fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal quantile Phi^-1(p).
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "normal quantile requires p in (0, 1), got {p}"
        )));
    }
    // Acklam's rational approximation (relative error < 1.2e-9).
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_690e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // One Newton step against the gamma-based CDF.
    let err = normal_cdf(x) - p;
    let pdf = normal_pdf(x);
    if pdf > 0.0 {
        x -= err / pdf;
    }
    Ok(x)
}

/// Chi-square CDF with `df` degrees of freedom.
pub fn chi2_cdf(df: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    gamma_p(0.5 * df as f64, 0.5 * x)
}

/// Chi-square quantile with integer degrees of freedom.
pub fn chi2_quantile(df: usize, p: f64) -> Result<f64> {
    if df == 0 {
        return Err(Error::InvalidParameter(
            "chi-square quantile requires df >= 1".into(),
        ));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "chi-square quantile requires p in (0, 1), got {p}"
        )));
    }
    let mut lo = 0.0;
    let mut hi = df as f64 + 10.0;
    while chi2_cdf(df, hi) < p {
        hi *= 2.0;
        if hi > 1e12 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi2_cdf(df, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
