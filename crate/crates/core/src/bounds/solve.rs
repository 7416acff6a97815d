//! Sign-scan root location for the implicit bounds, and the beta search used
//! by the genie bounds.

use crate::error::{Error, Result};
use num_traits::Float;

pub const SCAN_POINTS: usize = 2000;
pub const SCAN_FLOOR: f64 = 1e-8;
pub const BISECTION_STEPS: usize = 80;
pub const BETA_POINTS: usize = 200;
pub const BETA_TOL: f64 = 1e-6;
/// Stride of the coarse pass in [`Scan::Descend`].
const COARSE_STRIDE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImplicitSolveReport {
    /// Supremum of the rates that violate the inequality.
    pub rho_lower: f64,
    /// Negative-to-nonnegative sign changes seen on the grid.
    pub crossings_found: usize,
    pub bracket: (f64, f64),
    /// Value of `lhs - rhs` at `rho_lower`.
    pub residual: f64,
}

impl ImplicitSolveReport {
    pub fn zero() -> Self {
        ImplicitSolveReport { rho_lower: 0.0, crossings_found: 0, bracket: (0.0, 0.0), residual: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scan {
    /// Evaluate every grid point and count crossings.
    Full,
    /// Walk down from the top of the grid to the first violated point. Finds
    /// the same largest crossing unless a violated pocket is narrower than
    /// the coarse stride; crossings are not counted.
    Descend,
}

/// Largest rate the scan will extend to before reporting no crossing.
pub const SCAN_LIMIT: f64 = 1e12;

/// Upper end of the scan range for a source of sparsity `omega`.
pub fn scan_ceiling(omega: f64) -> f64 {
    (40.0 * omega).max(8.0)
}

/// Finds the supremum of `{rho >= lo : gap(rho) < 0}`, where achievable
/// rates must satisfy `gap(rho) >= 0`.
///
/// The grid covers `[lo, hi]`. If `hi` itself violates the inequality the
/// window moves up to `[hi, 64 hi]`, repeatedly, until it does not or
/// [`SCAN_LIMIT`] is passed. Crossings are only counted in the final window.
pub fn largest_violation<G: Fn(f64) -> f64>(
    gap: G,
    lo: f64,
    hi: f64,
    scan: Scan,
    what: &'static str,
) -> Result<ImplicitSolveReport> {
    let (mut lo, mut hi) = (lo, hi);
    while gap(hi) < 0.0 {
        if hi > SCAN_LIMIT {
            return Err(Error::NoCrossing { what, lo, hi });
        }
        lo = hi;
        hi *= 64.0;
    }
    scan_window(gap, lo, hi, scan)
}

fn scan_window<G: Fn(f64) -> f64>(gap: G, lo: f64, hi: f64, scan: Scan) -> Result<ImplicitSolveReport> {
    let n = SCAN_POINTS;
    let ratio = (hi / lo).ln();
    let grid = |i: usize| {
        if i + 1 == n {
            hi
        } else {
            lo * (ratio * i as f64 / (n - 1) as f64).exp()
        }
    };
    let (last_neg, crossings) = match scan {
        Scan::Full => {
            let mut last = None;
            let mut crossings = 0;
            let mut prev_neg = false;
            for i in 0..n {
                let neg = gap(grid(i)) < 0.0;
                if neg {
                    last = Some(i);
                } else if prev_neg {
                    crossings += 1;
                }
                prev_neg = neg;
            }
            (last, crossings)
        }
        Scan::Descend => {
            let mut found = None;
            let mut upper = n - 1;
            loop {
                let probe = upper.saturating_sub(COARSE_STRIDE);
                if gap(grid(probe)) < 0.0 {
                    let mut i = upper - 1;
                    while i > probe && gap(grid(i)) >= 0.0 {
                        i -= 1;
                    }
                    found = Some(i);
                    break;
                }
                if probe == 0 {
                    break;
                }
                upper = probe;
            }
            (found, usize::from(found.is_some()))
        }
    };
    let Some(i) = last_neg else {
        // Even the smallest grid rate satisfies the inequality.
        return Ok(ImplicitSolveReport {
            rho_lower: 0.0,
            crossings_found: 0,
            bracket: (0.0, lo),
            residual: 0.0,
        });
    };
    let (mut a, mut b) = (grid(i), grid(i + 1));
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if gap(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(ImplicitSolveReport { rho_lower: a, crossings_found: crossings, bracket: (a, b), residual: gap(a) })
}

/// Maximizes `f` over `beta in [alpha, 1]`: a grid log-spaced in
/// `beta - alpha` (always containing `beta = 1`), then golden-section
/// refinement around the best grid point. Points where `f` is `None` are
/// skipped. Returns `(value, beta, skipped)`.
pub fn maximize_over_beta<F: FnMut(f64) -> Option<f64>>(alpha: f64, mut f: F) -> (f64, f64, usize) {
    let span = 1.0 - alpha;
    let mut betas = [0.0; BETA_POINTS];
    for (i, b) in betas.iter_mut().enumerate() {
        let e = -6.0 + 6.0 * i as f64 / (BETA_POINTS - 1) as f64;
        *b = if i + 1 == BETA_POINTS { 1.0 } else { (alpha + span * 10f64.powf(e)).min(1.0) };
    }
    let mut best = (f64::NEG_INFINITY, 1.0, 0usize);
    let mut skipped = 0;
    for (i, &b) in betas.iter().enumerate() {
        match f(b) {
            Some(v) if v > best.0 => best = (v, b, i),
            Some(_) => {}
            None => skipped += 1,
        }
    }
    if best.0 == f64::NEG_INFINITY {
        return (0.0, 1.0, skipped);
    }
    let (mut a, mut c) = (betas[best.2.saturating_sub(1)], betas[(best.2 + 1).min(BETA_POINTS - 1)]);
    let inv_phi = 0.618_033_988_749_894_9;
    let mut x1 = c - inv_phi * (c - a);
    let mut x2 = a + inv_phi * (c - a);
    let mut f1 = f(x1).unwrap_or(f64::NEG_INFINITY);
    let mut f2 = f(x2).unwrap_or(f64::NEG_INFINITY);
    let mut top = (best.0, best.1);
    for _ in 0..200 {
        if c - a <= BETA_TOL * c {
            break;
        }
        if f1 >= f2 {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - inv_phi * (c - a);
            f1 = f(x1).unwrap_or(f64::NEG_INFINITY);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (c - a);
            f2 = f(x2).unwrap_or(f64::NEG_INFINITY);
        }
        if f1 > top.0 {
            top = (f1, x1);
        }
        if f2 > top.0 {
            top = (f2, x2);
        }
    }
    (top.0, top.1, skipped)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_crossing_is_located() {
        let r = largest_violation(|x| x - 0.3, 1e-8, 8.0, Scan::Full, "test").unwrap();
        assert!((r.rho_lower - 0.3).abs() < 1e-14);
        assert_eq!(r.crossings_found, 1);
        assert!(r.residual.abs() <= 1e-9);
    }

    #[test]
    fn largest_of_several_crossings_is_taken() {
        let g = |x: f64| (x - 0.01) * (x - 0.1) * (x - 1.0);
        let full = largest_violation(g, 1e-8, 8.0, Scan::Full, "test").unwrap();
        assert!((full.rho_lower - 1.0).abs() < 1e-12);
        assert_eq!(full.crossings_found, 2);
        let fast = largest_violation(g, 1e-8, 8.0, Scan::Descend, "test").unwrap();
        assert_eq!(fast.rho_lower, full.rho_lower);
    }

    #[test]
    fn missing_crossing_is_reported() {
        assert!(largest_violation(|_| -1.0, 1e-8, 8.0, Scan::Full, "test").is_err());
        let far = largest_violation(|x| x - 1234.5, 1e-8, 8.0, Scan::Full, "test").unwrap();
        assert!((far.rho_lower - 1234.5).abs() < 1e-9);
        let r = largest_violation(|_| 1.0, 1e-8, 8.0, Scan::Descend, "test").unwrap();
        assert_eq!(r.rho_lower, 0.0);
    }

    #[test]
    fn beta_search_finds_interior_peak() {
        let (v, b, _) = maximize_over_beta(0.01, |b| Some(-(b - 0.37) * (b - 0.37)));
        assert!(v.abs() < 1e-10);
        assert!((b - 0.37).abs() < 1e-5);
        let (_, b1, _) = maximize_over_beta(0.2, Some);
        assert_eq!(b1, 1.0);
    }
}
