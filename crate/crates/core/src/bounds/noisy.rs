use super::solve::{
    largest_violation, maximize_over_beta, scan_ceiling, ImplicitSolveReport, Scan, SCAN_FLOOR,
};
use crate::error::{domain, Error, Result};
use crate::ratefun::{det_power, entropy_power, logdet, rate, variance_functional, SourceParams};
use num_traits::Float;

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(domain("alpha", alpha, "0 <= alpha <= 1"))
    }
}

fn check_open_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain("alpha", alpha, "0 < alpha < 1"))
    }
}

fn check_variance(source: &SourceParams) -> Result<()> {
    if source.variance > 0.0 {
        Ok(())
    } else {
        Err(domain("variance", source.variance, "> 0"))
    }
}

/// Bound valid for every sampling matrix: `2R / ln(1 + V)`.
pub fn p3_general(source: &SourceParams, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_variance(source)?;
    Ok(2.0 * rate(source.omega, alpha) / source.variance.ln_1p())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenieBound {
    pub rho: f64,
    pub beta_star: f64,
    /// Beta grid points dropped because the truncation failed.
    pub skipped: usize,
}

/// Parameters of the reduced problem a genie leaves after revealing every
/// nonzero above the beta-quantile of magnitude.
struct Slice {
    /// `1 - (1 - beta) omega`
    scale: f64,
    /// `beta omega / scale`
    omega: f64,
    rate: f64,
    variance: f64,
    entropy_power: f64,
}

fn slice(source: &SourceParams, alpha: f64, beta: f64) -> Result<Slice> {
    let t = source.dist.truncate(beta)?;
    let m = t.moments();
    let kept = beta * source.omega;
    let scale = 1.0 - (1.0 - beta) * source.omega;
    let omega = kept / scale;
    Ok(Slice {
        scale,
        omega,
        rate: rate(omega, (alpha / beta).min(1.0)),
        variance: variance_functional(kept, &m),
        entropy_power: entropy_power(kept, &m),
    })
}

/// Genie bound for general matrices: maximum over `beta in [alpha, 1]` of
/// `2 scale R(omega', alpha/beta) / ln(1 + V(beta omega, F_beta))`.
pub fn t2_genie(source: &SourceParams, alpha: f64) -> Result<GenieBound> {
    check_open_alpha(alpha)?;
    check_variance(source)?;
    if rate(source.omega, alpha) == 0.0 {
        return Ok(GenieBound { rho: 0.0, beta_star: 1.0, skipped: 0 });
    }
    let (rho, beta_star, skipped) = maximize_over_beta(alpha, |b| {
        let s = slice(source, alpha, b).ok()?;
        if s.variance <= 0.0 {
            return None;
        }
        Some(2.0 * s.scale * s.rate / s.variance.ln_1p())
    });
    Ok(GenieBound { rho: rho.max(0.0), beta_star, skipped })
}

fn solve(
    gap: impl Fn(f64) -> f64,
    omega: f64,
    scan: Scan,
    what: &'static str,
) -> Result<ImplicitSolveReport> {
    largest_violation(gap, SCAN_FLOOR, scan_ceiling(omega), scan, what)
}

/// iid bound from the random-matrix log-determinant: `G(rho, V) >= R`.
pub fn p4_iid(source: &SourceParams, alpha: f64) -> Result<ImplicitSolveReport> {
    check_alpha(alpha)?;
    check_variance(source)?;
    let r = rate(source.omega, alpha);
    if r == 0.0 {
        return Ok(ImplicitSolveReport::zero());
    }
    let v = source.variance;
    solve(|p| logdet(p, v) - r, source.omega, Scan::Full, "log-determinant bound")
}

/// Gaussian-law iid bound: `G(rho, V) >= R + omega G(rho/omega, omega sigma^2)`.
pub fn p5_gaussian(source: &SourceParams, alpha: f64) -> Result<ImplicitSolveReport> {
    check_alpha(alpha)?;
    check_variance(source)?;
    let crate::distributions::Family::Gaussian { variance: sigma2, .. } = *source.dist.family() else {
        return Err(Error::Unsupported("Gaussian-law bound on a non-Gaussian law"));
    };
    let r = rate(source.omega, alpha);
    if r == 0.0 {
        return Ok(ImplicitSolveReport::zero());
    }
    let (v, omega) = (source.variance, source.omega);
    let inner = omega * sigma2;
    solve(|p| logdet(p, v) - r - omega * logdet(p / omega, inner), omega, Scan::Full, "Gaussian-law bound")
}

fn no_density() -> Error {
    Error::MissingDensity { hint: "use the log-determinant bound (p4) instead" }
}

/// Entropy-power iid bound: `G(rho, V) >= R + omega V(rho/omega, V_h)`.
pub fn p6_entropy(source: &SourceParams, alpha: f64) -> Result<ImplicitSolveReport> {
    check_alpha(alpha)?;
    check_variance(source)?;
    if source.entropy_power <= 0.0 {
        return Err(no_density());
    }
    let r = rate(source.omega, alpha);
    if r == 0.0 {
        return Ok(ImplicitSolveReport::zero());
    }
    let (v, vh, omega) = (source.variance, source.entropy_power, source.omega);
    let report = solve(
        |p| logdet(p, v) - r - omega * det_power(p / omega, vh),
        omega,
        Scan::Full,
        "entropy-power bound",
    )?;
    let simple = simplified_entropy_bound(source, alpha)?;
    if simple > report.rho_lower * (1.0 + 1e-9) + 1e-15 {
        return Err(Error::Accuracy {
            what: "simplified entropy-power bound exceeds the solved bound",
            achieved: simple - report.rho_lower,
            requested: 0.0,
        });
    }
    Ok(report)
}

/// Closed-form relaxation of the entropy-power bound:
/// `rho >= (2R + min{rho, omega} ln(1 + V_h/e)) / ln(1 + V)`.
pub fn simplified_entropy_bound(source: &SourceParams, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_variance(source)?;
    if source.entropy_power <= 0.0 {
        return Err(no_density());
    }
    let r = rate(source.omega, alpha);
    let lv = source.variance.ln_1p();
    let lh = (source.entropy_power / core::f64::consts::E).ln_1p();
    // rho lv - min{rho, omega} lh is increasing, so the threshold is unique.
    let below = 2.0 * r / (lv - lh);
    Ok(if below <= source.omega { below } else { (2.0 * r + source.omega * lh) / lv })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenieSolve {
    pub report: ImplicitSolveReport,
    pub beta_star: f64,
    pub skipped: usize,
}

fn genie_gap(s: &Slice, kept: f64) -> impl Fn(f64) -> f64 + '_ {
    move |p| logdet(p / s.scale, s.variance) - s.rate - s.omega * det_power(p / kept, s.entropy_power)
}

/// Genie bound for iid matrices: the entropy-power bound applied to every
/// beta-reduced problem, maximized over `beta in [alpha, 1]`. Laws without a
/// density contribute no entropy term.
pub fn t4_genie_iid(source: &SourceParams, alpha: f64) -> Result<GenieSolve> {
    check_open_alpha(alpha)?;
    check_variance(source)?;
    if rate(source.omega, alpha) == 0.0 {
        return Ok(GenieSolve { report: ImplicitSolveReport::zero(), beta_star: 1.0, skipped: 0 });
    }
    let omega = source.omega;
    let mut first_err = None;
    let (_, beta_star, skipped) = maximize_over_beta(alpha, |b| {
        let s = slice(source, alpha, b).ok()?;
        if s.rate == 0.0 {
            return Some(0.0);
        }
        if s.variance <= 0.0 {
            return None;
        }
        match solve(genie_gap(&s, b * omega), omega, Scan::Descend, "genie iid bound") {
            Ok(r) => Some(r.rho_lower),
            Err(e) => {
                first_err.get_or_insert(e);
                None
            }
        }
    });
    if let Some(e) = first_err {
        return Err(e);
    }
    let s = slice(source, alpha, beta_star)?;
    let report = if s.rate == 0.0 {
        ImplicitSolveReport::zero()
    } else {
        solve(genie_gap(&s, beta_star * omega), omega, Scan::Full, "genie iid bound")?
    };
    Ok(GenieSolve { report, beta_star, skipped })
}
