//! Gaussian tail function, its inverse, and truncated-normal moment ratios.

use crate::error::{domain, Result};
use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use num_traits::Float;

/// 1 / sqrt(2 pi)
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * libm::exp(-0.5 * x * x)
}

/// Standard normal CDF, accurate in both tails.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Gaussian tail `Q(x) = Pr{Z > x}`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Inverse of [`q_function`] on `(0, 1)`.
///
/// Bisection on `[-10, 10]` followed by Newton polishing. Probabilities whose
/// quantile lies beyond the bracket return the bracket end, which is within
/// `1e-23` of the target in absolute terms.
pub fn q_inverse(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("p", p, "0 < p < 1"));
    }
    let (mut lo, mut hi) = (-10.0_f64, 10.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if q_function(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = normal_pdf(x);
        if d <= 0.0 {
            break;
        }
        let next = x + (q_function(x) - p) / d;
        if !(-10.0..=10.0).contains(&next) {
            break;
        }
        if (q_function(next) - p).abs() < (q_function(x) - p).abs() {
            x = next;
        } else {
            break;
        }
    }
    Ok(x)
}

/// Half-width `t` with `Pr{|Z| <= t} = beta` for a standard normal `Z`,
/// i.e. `Q^{-1}((1 - beta) / 2)`, solved with relative accuracy at both ends.
///
/// Returns infinity for `beta = 1`.
pub fn gaussian_half_width(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain("beta", beta, "0 < beta <= 1"));
    }
    if beta == 1.0 {
        return Ok(f64::INFINITY);
    }
    let small = beta <= 0.5;
    let tail = 1.0 - beta;
    // Increasing in t: mass(t) - beta, evaluated on the well-conditioned side.
    let excess = |t: f64| {
        if small {
            libm::erf(t * FRAC_1_SQRT_2) - beta
        } else {
            tail - libm::erfc(t * FRAC_1_SQRT_2)
        }
    };
    let (mut lo, mut hi) = (0.0_f64, 40.0_f64);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `E[Z^2 | |Z| <= t]` for a standard normal, stable as `t -> 0`.
///
/// Equals `P(3/2, t^2/2) / P(1/2, t^2/2)` in regularized incomplete gamma
/// terms; below `t = 1` both are summed as series to avoid cancellation.
pub fn truncated_second_moment(t: f64) -> f64 {
    if t.is_infinite() {
        return 1.0;
    }
    if t <= 0.0 {
        return 0.0;
    }
    if t < 1.0 {
        let t2 = t * t;
        let mut num = 0.0;
        let mut den = 0.0;
        // term_n = (-t^2/2)^n / n!
        let mut term = 1.0;
        let mut n = 0u32;
        loop {
            let k = f64::from(n);
            num += term / (2.0 * k + 3.0);
            den += term / (2.0 * k + 1.0);
            n += 1;
            term *= -0.5 * t2 / f64::from(n);
            if term.abs() < 1e-20 || n > 60 {
                break;
            }
        }
        t2 * num / den
    } else {
        let beta = libm::erf(t * FRAC_1_SQRT_2);
        1.0 - 2.0 * t * normal_pdf(t) / beta
    }
}

/// `E[|Z| | |Z| <= t]` for a standard normal: `sqrt(2/pi) (1 - e^{-t^2/2}) / beta`.
pub fn truncated_abs_moment(t: f64, beta: f64) -> f64 {
    if t.is_infinite() {
        return (2.0 / PI).sqrt();
    }
    (2.0 / PI).sqrt() * -libm::expm1(-0.5 * t * t) / beta
}

/// `Pr{|Z| <= t}`.
pub fn central_mass(t: f64) -> f64 {
    libm::erf(t / SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_of_one_matches_high_precision() {
        // mpmath, 40 digits
        assert!((q_function(1.0) - 0.158_655_253_931_457_05).abs() < 1e-16);
    }

    #[test]
    fn q_inverse_round_trips() {
        for &p in &[1e-20, 1e-10, 1e-3, 0.1, 0.3, 0.5, 0.7, 0.999, 1.0 - 1e-12] {
            let x = q_inverse(p).unwrap();
            assert!((q_function(x) - p).abs() <= 1e-13, "p={p}");
        }
        assert!(q_inverse(0.0).is_err());
        assert!(q_inverse(1.0).is_err());
    }

    #[test]
    fn half_width_agrees_with_q_inverse() {
        for &b in &[1e-6, 1e-3, 0.2, 0.5, 0.9, 0.999_999] {
            let t = gaussian_half_width(b).unwrap();
            let t2 = q_inverse((1.0 - b) / 2.0).unwrap();
            assert!((t - t2).abs() <= 1e-12 * (1.0 + t), "beta={b}");
            assert!((central_mass(t) - b).abs() <= 1e-15 + 1e-13 * b);
        }
    }

    #[test]
    fn second_moment_branches_meet() {
        let a = truncated_second_moment(1.0 - 1e-12);
        let b = truncated_second_moment(1.0);
        assert!((a - b).abs() < 1e-11);
        // small t: Z uniform-like on [-t, t], second moment t^2/3
        let t = 1e-4;
        assert!((truncated_second_moment(t) / (t * t / 3.0) - 1.0).abs() < 1e-8);
    }
}
