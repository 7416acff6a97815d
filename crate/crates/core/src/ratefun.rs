//! Entropy, covering rate, random-matrix log-determinant rates, and the
//! source functionals that feed the bounds. Natural logarithms throughout.

use crate::distributions::{DistributionSpec, Moments};
use crate::error::{domain, Result};
use core::f64::consts::{E, PI};
use num_traits::Float;

/// Binary entropy in nats, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("p", p, "0 <= p <= 1"));
    }
    Ok(h2(p))
}

pub(crate) fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.ln() - (1.0 - p) * (-p).ln_1p()
}

fn check_sparsity(omega: f64) -> Result<()> {
    if omega > 0.0 && omega <= 0.5 {
        Ok(())
    } else {
        Err(domain("omega", omega, "0 < omega <= 1/2"))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(domain("alpha", alpha, "0 <= alpha <= 1"))
    }
}

/// Rate needed to describe a support of fractional size `omega` up to
/// distortion `alpha`; zero once `alpha >= 1 - omega`.
pub fn covering_rate(omega: f64, alpha: f64) -> Result<f64> {
    check_sparsity(omega)?;
    check_alpha(alpha)?;
    Ok(rate(omega, alpha))
}

pub(crate) fn rate(omega: f64, alpha: f64) -> f64 {
    if alpha >= 1.0 - omega {
        return 0.0;
    }
    let r = h2(omega) - omega * h2(alpha) - (1.0 - omega) * h2(omega * alpha / (1.0 - omega));
    r.max(0.0)
}

/// `H(omega) - H(alpha)`, the rate under a symmetric Hamming distortion.
/// Not used by any bound; returned unclamped.
pub fn hamming_rate(omega: f64, alpha: f64) -> Result<f64> {
    check_sparsity(omega)?;
    check_alpha(alpha)?;
    Ok(h2(omega) - h2(alpha))
}

/// `(1 - r)^(1 - 1/r)` on `(0, 1]`, rising from 1 at `r = 1` to `e` as `r -> 0`.
pub fn delta(r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(domain("r", r, "0 < r <= 1"));
    }
    Ok(delta_unchecked(r))
}

pub(crate) fn delta_unchecked(r: f64) -> f64 {
    if r >= 1.0 {
        return 1.0;
    }
    (((r - 1.0) / r) * (-r).ln_1p()).exp()
}

fn check_rg(r: f64, gamma: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain("r", r, "finite and > 0"));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(domain("gamma", gamma, "finite and >= 0"));
    }
    Ok(())
}

/// Marchenko-Pastur auxiliary term
/// `(sqrt(g (sqrt r + 1)^2 + 1) - sqrt(g (sqrt r - 1)^2 + 1))^2 / 4`.
pub fn mp_xi(r: f64, gamma: f64) -> Result<f64> {
    check_rg(r, gamma)?;
    Ok(xi(r, gamma))
}

fn roots(r: f64, gamma: f64) -> (f64, f64) {
    let s = r.sqrt();
    ((gamma * (s + 1.0) * (s + 1.0) + 1.0).sqrt(), (gamma * (s - 1.0) * (s - 1.0) + 1.0).sqrt())
}

pub(crate) fn xi(r: f64, gamma: f64) -> f64 {
    let (a, b) = roots(r, gamma);
    // (a - b) = 4 g sqrt(r) / (a + b), free of cancellation.
    4.0 * gamma * gamma * r / ((a + b) * (a + b))
}

/// Limit of `(1/2n) log det(I + (gamma/n) M M^T)` for an `rn x n` matrix
/// `M` with iid unit-variance entries.
pub fn logdet_rate(r: f64, gamma: f64) -> Result<f64> {
    check_rg(r, gamma)?;
    Ok(logdet(r, gamma))
}

pub(crate) fn logdet(r: f64, gamma: f64) -> f64 {
    if gamma == 0.0 {
        return 0.0;
    }
    let (a, b) = roots(r, gamma);
    let ab = a * b;
    // 2(1 + g - xi) = 1 + g(1 - r) + ab and 2(1 + r g - xi) = 1 + g(r - 1) + ab.
    // When the linear part is negative, use (ab)^2 - c^2 = 4g r or 4g.
    let sum = |c: f64, gap: f64| if c >= 0.0 { c + ab } else { gap / (ab - c) };
    let p = sum(1.0 + gamma * (1.0 - r), 4.0 * gamma * r);
    let q = sum(1.0 + gamma * (r - 1.0), 4.0 * gamma);
    0.5 * (r * (0.5 * p).ln() + (0.5 * q).ln() - xi(r, gamma) / gamma)
}

/// Determinant-power surrogate for the log-determinant rate:
/// `(r/2) ln(1 + g Delta(r) / e)` for `r <= 1`, `(1/2) ln(1 + r g Delta(1/r) / e)` above.
pub fn det_power_rate(r: f64, gamma: f64) -> Result<f64> {
    check_rg(r, gamma)?;
    Ok(det_power(r, gamma))
}

pub(crate) fn det_power(r: f64, gamma: f64) -> f64 {
    if r <= 1.0 {
        0.5 * r * (gamma * delta_unchecked(r) / E).ln_1p()
    } else {
        0.5 * (r * gamma * delta_unchecked(1.0 / r) / E).ln_1p()
    }
}

/// `10^(snr_db / 10)`.
pub fn snr_to_power(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

/// `omega * E[X^2]`.
pub fn power(omega: f64, m: &Moments) -> f64 {
    omega * m.second_moment()
}

/// `omega (1 - omega) mu^2 + omega sigma^2`.
pub fn variance_functional(omega: f64, m: &Moments) -> f64 {
    omega * (1.0 - omega) * m.mean * m.mean + omega * m.variance
}

/// `omega exp(2h) / (2 pi e)`, zero without a density.
pub fn entropy_power(omega: f64, m: &Moments) -> f64 {
    match m.entropy {
        Some(h) => omega * (2.0 * h).exp() / (2.0 * PI * E),
        None => 0.0,
    }
}

/// Entropy power relative to the variance functional, in `[0, 1]`; zero
/// without a density.
pub fn theta(omega: f64, m: &Moments) -> f64 {
    match m.entropy {
        Some(h) => (2.0 * h).exp() / (2.0 * PI * E) / (m.variance + (1.0 - omega) * m.mean * m.mean),
        None => 0.0,
    }
}

/// A source law at a given sparsity, with its scalar functionals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceParams {
    pub omega: f64,
    pub dist: DistributionSpec,
    pub power: f64,
    pub variance: f64,
    pub entropy_power: f64,
    pub theta: f64,
}

impl SourceParams {
    pub fn new(omega: f64, dist: DistributionSpec) -> Result<Self> {
        check_sparsity(omega)?;
        let m = dist.moments();
        Ok(SourceParams {
            omega,
            dist,
            power: power(omega, &m),
            variance: variance_functional(omega, &m),
            entropy_power: entropy_power(omega, &m),
            theta: theta(omega, &m),
        })
    }

    /// Shape of `dist` rescaled to the power implied by `snr_db`.
    pub fn at_snr(omega: f64, shape: DistributionSpec, snr_db: f64) -> Result<Self> {
        Self::new(omega, shape.scale_to_power(omega, snr_to_power(snr_db))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Frozen with mpmath at 40 digits.
    const H_01: f64 = 0.325_082_973_391_448_24;
    const DELTA_09: f64 = 1.291_549_665_014_883_9;
    const R_01_01: f64 = 0.237_632_341_816_669_3;
    const XI_4_1: f64 = 0.763_932_022_500_210_3;
    const G_TABLE: [(f64, f64, f64); 9] = [
        (0.5, 1.0, 0.158_383_797_120_075_86),
        (0.5, 10.0, 0.541_577_909_283_245_1),
        (0.5, 100.0, 1.079_483_135_062_599_2),
        (1.0, 1.0, 0.290_228_819_434_550_87),
        (1.0, 10.0, 0.943_833_030_734_768),
        (1.0, 100.0, 1.900_126_744_049_646_3),
        (2.0, 1.0, 0.494_367_164_976_291_7),
        (2.0, 10.0, 1.390_231_046_831_297),
        (2.0, 100.0, 2.500_683_246_922_396_4),
    ];

    #[test]
    fn closed_forms() {
        assert!((covering_rate(0.1, 0.45).unwrap() - 0.077_605_373_008_804_09).abs() <= 1e-14);
        assert!((delta(0.5).unwrap() - 2.0).abs() <= 1e-12);
        assert!((mp_xi(1.0, 1.0).unwrap() - (3.0 - 5f64.sqrt()) / 2.0).abs() <= 1e-12);
        assert!((binary_entropy(0.1).unwrap() - H_01).abs() <= 1e-15);
        assert!((delta(0.9).unwrap() - DELTA_09).abs() <= 1e-14);
        assert!((covering_rate(0.1, 0.1).unwrap() - R_01_01).abs() <= 1e-14);
        assert!((mp_xi(4.0, 1.0).unwrap() - XI_4_1).abs() <= 1e-14);
    }

    #[test]
    fn logdet_rate_table() {
        for &(r, g, want) in &G_TABLE {
            let got = logdet_rate(r, g).unwrap();
            assert!((got - want).abs() <= 1e-13 * want, "r={r} g={g}: {got} vs {want}");
        }
    }

    #[test]
    fn edge_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(covering_rate(0.3, 0.7).unwrap(), 0.0);
        assert_eq!(logdet_rate(0.7, 0.0).unwrap(), 0.0);
        assert!((delta(1e-12).unwrap() - E).abs() < 1e-9);
        assert_eq!(delta(1.0).unwrap(), 1.0);
        assert!(delta(0.0).is_err());
        assert!(covering_rate(0.6, 0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn rate_at_zero_distortion_is_entropy() {
        assert!((covering_rate(0.2, 0.0).unwrap() - h2(0.2)).abs() < 1e-15);
    }

    #[test]
    fn uniform_theta() {
        let s = SourceParams::new(0.1, DistributionSpec::uniform(0.0, 3.0).unwrap()).unwrap();
        assert!((s.theta - 0.702_597_978_291_829_9).abs() < 1e-14);
        let g = SourceParams::new(0.1, DistributionSpec::gaussian(0.0, 3.0).unwrap()).unwrap();
        assert!((g.theta - 1.0).abs() < 1e-14);
    }

    #[test]
    fn large_gamma_ratio_tends_to_one() {
        for &r in &[0.3, 1.0, 3.0] {
            let ratio = logdet(r, 1e12) / det_power(r, 1e12);
            assert!((ratio - 1.0).abs() < 2e-2, "r={r} ratio={ratio}");
        }
    }

    proptest! {
        #[test]
        fn rate_bounded_by_entropy(omega in 1e-6..0.5f64, alpha in 0.0..1.0f64) {
            let r = covering_rate(omega, alpha).unwrap();
            prop_assert!(r >= 0.0);
            prop_assert!(r <= h2(omega) + 1e-15);
        }

        #[test]
        fn rate_non_increasing_in_alpha(omega in 1e-4..0.5f64, a in 0.0..1.0f64, b in 0.0..1.0f64) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(rate(omega, hi) <= rate(omega, lo) + 1e-14);
        }

        #[test]
        fn log_delta_in_unit_interval(r in 1e-9..1.0f64) {
            let l = delta(r).unwrap().ln();
            prop_assert!(l > 0.0 && l <= 1.0 + 1e-15);
        }

        #[test]
        fn logdet_rate_bounds(r in 0.01..10.0f64, g in 1e-6..1e8f64) {
            let v = logdet(r, g);
            let cap = r * g.ln_1p();
            prop_assert!(v >= 0.0);
            prop_assert!(v <= cap);
            // Jensen gives the sharper half.
            prop_assert!(v <= 0.5 * cap * (1.0 + 1e-12));
            prop_assert!(v <= 0.5 * (r * g).ln_1p() * (1.0 + 1e-12));
        }

        #[test]
        fn logdet_rate_monotone(r in 0.05..5.0f64, g1 in 0.0..1e4f64, g2 in 0.0..1e4f64) {
            let (lo, hi) = if g1 < g2 { (g1, g2) } else { (g2, g1) };
            prop_assert!(logdet(r, lo) <= logdet(r, hi) * (1.0 + 1e-13) + 1e-300);
            prop_assert!(logdet(r, hi) <= logdet(r * 1.1, hi) * (1.0 + 1e-13));
        }

        #[test]
        fn det_power_surrogate_dominates(r in 0.05..5.0f64, g in 1e-3..1e6f64) {
            prop_assert!(logdet(r, g) >= det_power(r, g) * (1.0 - 1e-12));
        }

        #[test]
        fn theta_in_unit_interval(mu in -3.0..3.0f64, v in 0.1..5.0f64, omega in 1e-3..0.5f64) {
            let t = SourceParams::new(omega, DistributionSpec::gaussian(mu, v).unwrap()).unwrap().theta;
            prop_assert!(t > 0.0 && t <= 1.0 + 1e-12);
            let u = SourceParams::new(omega, DistributionSpec::uniform(mu.abs(), v).unwrap()).unwrap().theta;
            prop_assert!(u > 0.0 && u <= 1.0 + 1e-12);
        }
    }
}
