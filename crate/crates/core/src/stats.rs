//! Order-stable reductions shared by the Monte-Carlo and simulation drivers.

use num_traits::Float;

/// Pairwise summation, so the result depends only on the slice order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Standard error of the sample mean (unbiased variance). Zero for one sample.
pub fn std_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let mut dev = alloc::vec::Vec::with_capacity(n);
    for &x in xs {
        dev.push((x - m) * (x - m));
    }
    (pairwise_sum(&dev) / (n - 1) as f64 / n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: alloc::vec::Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500500.0);
    }

    #[test]
    fn std_error_of_constant_is_zero() {
        assert_eq!(std_error(&[2.0; 10]), 0.0);
        assert_eq!(std_error(&[1.0]), 0.0);
    }
}
