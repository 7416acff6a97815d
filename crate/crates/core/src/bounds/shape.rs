use crate::error::{domain, Result};
use crate::ratefun::{rate, SourceParams};
use num_traits::Float;

fn check(alpha: f64, power: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 0.25) {
        return Err(domain("alpha", alpha, "0 < alpha < 1/4"));
    }
    if power.is_nan() || power <= 0.0 {
        return Err(domain("power", power, "> 0"));
    }
    Ok(())
}

/// Small-distortion shape `alpha omega ln(1/(alpha omega)) / ln(1 + alpha^(2L+1) P)`
/// with the unknown law-dependent constant set to one.
pub fn p7_shape(source: &SourceParams, alpha: f64, power: f64) -> Result<f64> {
    check(alpha, power)?;
    let l = source.dist.decay_rate() as i32;
    let ao = alpha * source.omega;
    Ok(ao * (1.0 / ao).ln() / (alpha.powi(2 * l + 1) * power).ln_1p())
}

/// High-SNR shape `omega + omega ln(1/omega) / ln(1 + P)` with unit constant,
/// and whether `theta > exp(1 - R/omega)` holds so that the shape applies.
pub fn p8_shape(source: &SourceParams, alpha: f64, power: f64) -> Result<(f64, bool)> {
    check(alpha, power)?;
    let omega = source.omega;
    let value = omega + omega * (1.0 / omega).ln() / power.ln_1p();
    let holds = source.theta > (1.0 - rate(omega, alpha) / omega).exp();
    Ok((value, holds))
}
