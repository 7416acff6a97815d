use super::solve::{largest_violation, Scan, SCAN_FLOOR};
use crate::error::{domain, Result};
use crate::ratefun::{delta_unchecked, rate, SourceParams};
use num_traits::Float;

fn check(omega: f64, alpha: f64) -> Result<()> {
    if !(omega > 0.0 && omega <= 0.5) {
        return Err(domain("omega", omega, "0 < omega <= 1/2"));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(domain("alpha", alpha, "0 <= alpha <= 1"));
    }
    Ok(())
}

/// Noiseless rate with rate sharing across a general matrix:
/// `omega - omega alpha / (1 - omega)`, zero once `alpha >= 1 - omega`.
pub fn t1_noiseless(omega: f64, alpha: f64) -> Result<f64> {
    check(omega, alpha)?;
    Ok(if alpha < 1.0 - omega { omega - omega * alpha / (1.0 - omega) } else { 0.0 })
}

/// Noiseless rate achievable with an iid matrix for any law: `omega`,
/// zero once `alpha >= 1 - omega`.
pub fn p2_noiseless_iid(omega: f64, alpha: f64) -> Result<f64> {
    check(omega, alpha)?;
    Ok(if alpha < 1.0 - omega { omega } else { 0.0 })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiselessReport {
    pub rho: f64,
    /// `min{omega, 2R / (1 + ln(1/theta))}`, never above `rho`.
    pub simplified: f64,
    /// Set when the law has no density and the bound collapses to zero.
    pub degenerate: bool,
}

fn entropy_slack(source: &SourceParams, rho: f64) -> f64 {
    let omega = source.omega;
    let ratio = (rho / omega).min(1.0);
    0.5 * rho * (-source.theta.ln() + delta_unchecked(rho).ln() - delta_unchecked(ratio).ln())
}

/// Noiseless iid lower bound for a law with a density: the largest
/// `rho < omega` with `(rho/2) ln(Delta(rho) / (theta Delta(rho/omega))) < R`,
/// or `omega` itself when the inequality still holds at `omega`.
pub fn t3_noiseless_iid(source: &SourceParams, alpha: f64) -> Result<NoiselessReport> {
    let omega = source.omega;
    check(omega, alpha)?;
    let r = rate(omega, alpha);
    if source.theta <= 0.0 {
        return Ok(NoiselessReport { rho: 0.0, simplified: 0.0, degenerate: true });
    }
    let simplified = noiseless_simple(source, alpha)?;
    if r == 0.0 {
        return Ok(NoiselessReport { rho: 0.0, simplified, degenerate: false });
    }
    let rho = if noiseless_rate_saturates(source, alpha)? {
        omega
    } else {
        let lo = SCAN_FLOOR.min(omega * 1e-3);
        largest_violation(|p| entropy_slack(source, p) - r, lo, omega, Scan::Full, "noiseless iid bound")?
            .rho_lower
    };
    Ok(NoiselessReport { rho, simplified, degenerate: false })
}

/// The exact-rate test: true when `theta > Delta(omega) exp(-2R/omega)`,
/// in which case the noiseless iid rate is exactly `omega`.
pub fn noiseless_rate_saturates(source: &SourceParams, alpha: f64) -> Result<bool> {
    let omega = source.omega;
    check(omega, alpha)?;
    let r = rate(omega, alpha);
    if r == 0.0 || source.theta <= 0.0 {
        return Ok(false);
    }
    Ok(source.theta.ln() > delta_unchecked(omega).ln() - 2.0 * r / omega)
}

/// `min{omega, 2R / (1 + ln(1/theta))}`; zero without a density.
pub fn noiseless_simple(source: &SourceParams, alpha: f64) -> Result<f64> {
    let omega = source.omega;
    check(omega, alpha)?;
    if source.theta <= 0.0 {
        return Ok(0.0);
    }
    let r = rate(omega, alpha);
    Ok(omega.min(2.0 * r / (1.0 - source.theta.ln())))
}
