//! Registered data-generating processes and closed-form truth oracles.

use rand_distr::{Distribution, StandardNormal};

use crate::dataset::{Roles, TimeSeriesDataset};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Autoregressive matrix of the bivariate VAR(1) process. The off-diagonal
/// signs make the system stationary (spectral radius 0.806) while keeping
/// the oscillating cross-propagation between the two variables.
pub const VAR1_COEF: [[f64; 2]; 2] = [[0.7, -0.4], [0.4, 0.7]];

/// Which process to simulate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DgpKind {
    /// `y_t = m + rho y_{t-1} + u_t` with standard normal innovations.
    Ar1 { rho: f64, intercept: f64 },
    /// Bivariate VAR(1) with [`VAR1_COEF`]; the first innovation loads both
    /// structural shocks (`u_y = e_y + e_x`, `u_x = e_x`), so the response
    /// of `x` to a unit `e_x` shock starts from the loading `(1, 1)`.
    Var1Paper,
    /// Treatment system with an observed exogenous instrument:
    /// `y = beta s + 0.75 y_{-1} + u_y`, `s = 0.5 s_{-1} - 0.25 y_{-1} + z +
    /// u_s`, `z = u_z`.
    IvSystem { beta: f64 },
}

/// A simulation recipe: process, sample size, burn-in, and seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DgpConfig {
    pub kind: DgpKind,
    pub sample_size: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl DgpConfig {
    pub fn ar1(rho: f64, intercept: f64, sample_size: usize, seed: u64) -> Self {
        Self {
            kind: DgpKind::Ar1 { rho, intercept },
            sample_size,
            burn_in: 500,
            seed,
        }
    }

    pub fn var1_paper(sample_size: usize, seed: u64) -> Self {
        Self {
            kind: DgpKind::Var1Paper,
            sample_size,
            burn_in: 1000,
            seed,
        }
    }

    pub fn iv_system(beta: f64, sample_size: usize, seed: u64) -> Self {
        Self {
            kind: DgpKind::IvSystem { beta },
            sample_size,
            burn_in: 500,
            seed,
        }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.sample_size < 10 {
            return Err(Error::InvalidSpec(format!(
                "sample size {} is below the minimum of 10",
                self.sample_size
            )));
        }
        Ok(())
    }

    /// Generates the dataset, discarding the burn-in. Bit-reproducible for
    /// a given seed: innovations are drawn in a fixed per-period order from
    /// one seeded stream.
    pub fn simulate(&self) -> Result<TimeSeriesDataset> {
        self.validate()?;
        let total = self.burn_in + self.sample_size;
        let mut rng = rng_from_seed(self.seed);
        match self.kind {
            DgpKind::Ar1 { rho, intercept } => {
                let mut y = Vec::with_capacity(total);
                let mut prev = 0.0;
                for _ in 0..total {
                    let u: f64 = StandardNormal.sample(&mut rng);
                    prev = intercept + rho * prev + u;
                    y.push(prev);
                }
                let y = y.split_off(self.burn_in);
                TimeSeriesDataset::new(vec![("y", y)], Roles::new("y", "y"))
            }
            DgpKind::Var1Paper => {
                let a = VAR1_COEF;
                let mut y = Vec::with_capacity(total);
                let mut x = Vec::with_capacity(total);
                let mut ey = Vec::with_capacity(total);
                let mut ex = Vec::with_capacity(total);
                let (mut yp, mut xp) = (0.0, 0.0);
                for _ in 0..total {
                    let e_y: f64 = StandardNormal.sample(&mut rng);
                    let e_x: f64 = StandardNormal.sample(&mut rng);
                    let u_y = e_y + e_x;
                    let u_x = e_x;
                    let yt = a[0][0] * yp + a[0][1] * xp + u_y;
                    let xt = a[1][0] * yp + a[1][1] * xp + u_x;
                    y.push(yt);
                    x.push(xt);
                    ey.push(e_y);
                    ex.push(e_x);
                    yp = yt;
                    xp = xt;
                }
                let series = vec![
                    ("y", y.split_off(self.burn_in)),
                    ("x", x.split_off(self.burn_in)),
                    ("e_y", ey.split_off(self.burn_in)),
                    ("e_x", ex.split_off(self.burn_in)),
                ];
                // Response of x to its own innovation, holding one lag of
                // both variables: treatment x with controls {y, x} at p = 1.
                TimeSeriesDataset::new(
                    series,
                    Roles::new("x", "x").with_controls(["y", "x"]),
                )
            }
            DgpKind::IvSystem { beta } => {
                let mut y = Vec::with_capacity(total);
                let mut s = Vec::with_capacity(total);
                let mut z = Vec::with_capacity(total);
                let (mut y_prev, mut s_prev) = (0.0, 0.0);
                for _ in 0..total {
                    let u_y: f64 = StandardNormal.sample(&mut rng);
                    let u_s: f64 = StandardNormal.sample(&mut rng);
                    let u_z: f64 = StandardNormal.sample(&mut rng);
                    let zt = u_z;
                    let st = 0.5 * s_prev - 0.25 * y_prev + zt + u_s;
                    let yt = beta * st + 0.75 * y_prev + u_y;
                    z.push(zt);
                    s.push(st);
                    y.push(yt);
                    y_prev = yt;
                    s_prev = st;
                }
                TimeSeriesDataset::new(
                    vec![
                        ("y", y.split_off(self.burn_in)),
                        ("s", s.split_off(self.burn_in)),
                        ("z", z.split_off(self.burn_in)),
                    ],
                    Roles::new("y", "s").with_instrument("z"),
                )
            }
        }
    }

    /// Closed-form impulse response for the linear processes: `rho^h` for
    /// the AR(1), and the `x` entry of `A^h (1, 1)'` for the VAR (the
    /// response of `x` to a unit `e_x` shock).
    pub fn true_irf(&self, horizon_max: usize) -> Result<Vec<f64>> {
        match self.kind {
            DgpKind::Ar1 { rho, .. } => {
                Ok((0..=horizon_max).map(|h| rho.powi(h as i32)).collect())
            }
            DgpKind::Var1Paper => {
                let a = VAR1_COEF;
                let mut state = [1.0, 1.0];
                let mut irf = Vec::with_capacity(horizon_max + 1);
                irf.push(state[1]);
                for _ in 1..=horizon_max {
                    state = [
                        a[0][0] * state[0] + a[0][1] * state[1],
                        a[1][0] * state[0] + a[1][1] * state[1],
                    ];
                    irf.push(state[1]);
                }
                Ok(irf)
            }
            DgpKind::IvSystem { .. } => Err(Error::InvalidParameter(
                "no closed-form impulse response is registered for the instrument system".into(),
            )),
        }
    }

    /// Short label for run summaries and tables.
    pub fn label(&self) -> String {
        match self.kind {
            DgpKind::Ar1 { rho, .. } => format!("ar1(rho={rho})"),
            DgpKind::Var1Paper => "var1".into(),
            DgpKind::IvSystem { beta } => format!("iv_system(beta={beta})"),
        }
    }

    /// Treatment coefficient, where the process has one.
    pub fn treatment_coefficient(&self) -> Option<f64> {
        match self.kind {
            DgpKind::IvSystem { beta } => Some(beta),
            DgpKind::Ar1 { rho, .. } => Some(rho),
            DgpKind::Var1Paper => None,
        }
    }
}

/// Response implied by the quadratic-interaction projection
/// `y = a + b s + g x + phi s^2 x`: moving the intervention from `s0` to
/// `s0 + delta` at state `x` changes the conditional mean by
/// `b delta + phi (delta^2 + 2 delta s0) x`.
pub fn nonlinear_response(beta_h: f64, phi_h: f64, s0: f64, delta: f64, x: f64) -> f64 {
    beta_h * delta + phi_h * (delta * delta + 2.0 * delta * s0) * x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn ar1_without_dynamics_returns_the_innovation_stream() {
        let cfg = DgpConfig::ar1(0.0, 0.0, 50, 7).with_burn_in(20);
        let data = cfg.simulate().unwrap();
        let mut rng = rng_from_seed(7);
        let draws: Vec<f64> = (0..70).map(|_| StandardNormal.sample(&mut rng)).collect();
        for (i, v) in data.outcome().iter().enumerate() {
            assert_relative_eq!(*v, draws[20 + i], epsilon = 1e-15);
        }
    }

    #[test]
    fn simulation_is_bit_reproducible() {
        let cfg = DgpConfig::iv_system(0.5, 200, 99);
        let a = cfg.simulate().unwrap();
        let b = cfg.simulate().unwrap();
        for (x, y) in a.outcome().iter().zip(b.outcome()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn iv_system_with_zero_beta_leaves_outcome_unrelated_to_instrument() {
        let cfg = DgpConfig::iv_system(0.0, 100_000, 3);
        let data = cfg.simulate().unwrap();
        let y = data.outcome();
        let z = data.instrument();
        let n = data.len();
        let corr = |h: usize| {
            let m = n - h;
            let my = y[h..].iter().sum::<f64>() / m as f64;
            let mz = z[..m].iter().sum::<f64>() / m as f64;
            let mut num = 0.0;
            let (mut vy, mut vz) = (0.0, 0.0);
            for t in 0..m {
                num += (y[t + h] - my) * (z[t] - mz);
                vy += (y[t + h] - my).powi(2);
                vz += (z[t] - mz).powi(2);
            }
            num / (vy.sqrt() * vz.sqrt())
        };
        for h in 0..=4 {
            assert!(corr(h).abs() < 0.02, "h = {h}: corr = {}", corr(h));
        }
    }

    #[test]
    fn var1_matches_lyapunov_fixed_point() {
        let cfg = DgpConfig::var1_paper(200_000, 11);
        let data = cfg.simulate().unwrap();
        let y = data.get("y").unwrap();
        let x = data.get("x").unwrap();
        let n = data.len() as f64;
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (my, mx) = (mean(y), mean(x));
        let mut sample = [[0.0f64; 2]; 2];
        for t in 0..data.len() {
            let d = [y[t] - my, x[t] - mx];
            for i in 0..2 {
                for j in 0..2 {
                    sample[i][j] += d[i] * d[j] / n;
                }
            }
        }

        // Fixed point of S = A S A' + Q with Q the innovation covariance
        // implied by u_y = e_y + e_x, u_x = e_x.
        let a = VAR1_COEF;
        let q = [[2.0, 1.0], [1.0, 1.0]];
        let mut sigma = [[0.0f64; 2]; 2];
        for _ in 0..500 {
            let mut next = q;
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            next[i][j] += a[i][k] * sigma[k][l] * a[j][l];
                        }
                    }
                }
            }
            sigma = next;
        }
        for i in 0..2 {
            for j in 0..2 {
                let rel = (sample[i][j] - sigma[i][j]).abs() / sigma[i][j].abs();
                assert!(rel < 0.01, "({i},{j}): sample {} vs {}", sample[i][j], sigma[i][j]);
            }
        }
    }

    #[test]
    fn ar1_truth_is_rho_powers() {
        let cfg = DgpConfig::ar1(0.5, 0.0, 100, 1);
        let irf = cfg.true_irf(3).unwrap();
        assert_relative_eq!(irf[3], 0.125, epsilon = 1e-15);
        let flat = DgpConfig::ar1(0.0, 0.0, 100, 1).true_irf(4).unwrap();
        assert_relative_eq!(flat[0], 1.0);
        for h in 1..=4 {
            assert_relative_eq!(flat[h], 0.0);
        }
    }

    #[test]
    fn var1_truth_starts_at_loading_and_propagates() {
        let cfg = DgpConfig::var1_paper(100, 1);
        let irf = cfg.true_irf(2).unwrap();
        // h = 0 is the shock loading on x; h = 1 is the x row of A (1,1)'.
        assert_relative_eq!(irf[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(irf[1], 1.1, epsilon = 1e-15);
        // Companion-power oracle by explicit multiplication.
        let a = VAR1_COEF;
        let v1 = [a[0][0] + a[0][1], a[1][0] + a[1][1]];
        let v2 = [
            a[0][0] * v1[0] + a[0][1] * v1[1],
            a[1][0] * v1[0] + a[1][1] * v1[1],
        ];
        assert_relative_eq!(irf[2], v2[1], epsilon = 1e-15);
    }

    #[test]
    fn truth_is_unavailable_for_the_instrument_system() {
        assert!(DgpConfig::iv_system(0.3, 100, 1).true_irf(2).is_err());
    }

    #[test]
    fn nonlinear_response_special_cases() {
        assert_relative_eq!(nonlinear_response(2.0, 0.0, 5.0, 0.7, 3.0), 1.4);
        assert_relative_eq!(nonlinear_response(2.0, 1.5, 5.0, 0.0, 3.0), 0.0);
        assert_relative_eq!(nonlinear_response(1.0, 1.0, 1.0, 1.0, 2.0), 7.0);
    }

    #[test]
    fn nonlinear_response_curvature_in_delta() {
        // Second difference in delta should equal 2 phi x.
        let (beta, phi, s0, x) = (0.8, 0.6, 1.3, 2.1);
        let f = |d: f64| nonlinear_response(beta, phi, s0, d, x);
        let eps = 1e-4;
        let second = (f(1.0 + eps) - 2.0 * f(1.0) + f(1.0 - eps)) / (eps * eps);
        assert_relative_eq!(second, 2.0 * phi * x, epsilon = 1e-5);
        // And linearity when phi = 0.
        let g = |d: f64| nonlinear_response(beta, 0.0, s0, d, x);
        assert_relative_eq!(g(2.0), 2.0 * g(1.0), epsilon = 1e-12);
    }

    #[test]
    fn rejects_tiny_samples() {
        assert!(DgpConfig::ar1(0.5, 0.0, 5, 1).simulate().is_err());
    }
}
