//! Source families, their moments, and beta-truncation.
//!
//! `truncate(beta)` keeps the fraction `beta` of the law with the smallest
//! magnitude and renormalizes. All four families are symmetric or have
//! nonnegative mean, so the kept set is `{|x| <= threshold}` (randomized on
//! atoms for the point-mass family).

mod oracle;
mod quadrature;

pub use oracle::{truncate_oracle, OracleEstimate, OracleMethod};
pub use quadrature::{integrate, Quadrature};

use crate::error::{domain, Error, Result};
use crate::special;
use core::f64::consts::{E, PI};
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Mass placed on the outer atoms of the point-mass family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailMass {
    /// The limit of vanishing outer mass: every truncation below `beta = 1`
    /// sees only the inner atoms.
    Vanishing,
    Finite(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Gaussian {
        mean: f64,
        variance: f64,
    },
    /// Uniform with nonnegative mean.
    Uniform {
        mean: f64,
        variance: f64,
    },
    /// Atoms at `+-sqrt(floor_sq)` and at the magnitude that brings the
    /// second moment to `power`.
    PointMass {
        floor_sq: f64,
        power: f64,
        tail: TailMass,
    },
    /// `Z + sgn(Z) * floor` with `Z ~ N(0, slice_variance)`.
    SlicedGaussian {
        floor: f64,
        slice_variance: f64,
    },
}

/// A validated source law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistributionSpec(Family);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    /// Differential entropy in nats, `None` when the law has no density.
    pub entropy: Option<f64>,
}

impl Moments {
    pub fn second_moment(&self) -> f64 {
        self.variance + self.mean * self.mean
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationResult {
    pub beta: f64,
    /// Magnitude cut: the kept set is `{|x| <= threshold}`, in the units of `x`.
    pub threshold: f64,
    pub mean: f64,
    pub variance: f64,
    pub entropy: Option<f64>,
}

impl TruncationResult {
    pub fn second_moment(&self) -> f64 {
        self.variance + self.mean * self.mean
    }

    pub fn moments(&self) -> Moments {
        Moments { mean: self.mean, variance: self.variance, entropy: self.entropy }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(name, v, "finite and > 0"))
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(name, v, "finite"))
    }
}

impl DistributionSpec {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::Gaussian { mean, variance } => {
                finite("mean", mean)?;
                positive("variance", variance)?;
            }
            Family::Uniform { mean, variance } => {
                positive("variance", variance)?;
                if !(mean >= 0.0 && mean.is_finite()) {
                    return Err(domain("mean", mean, "finite and >= 0"));
                }
            }
            Family::PointMass { floor_sq, power, tail } => {
                positive("power", power)?;
                // A zero floor would put an atom at the origin.
                if !(floor_sq > 0.0 && floor_sq <= power) {
                    return Err(domain("floor_sq", floor_sq, "0 < floor_sq <= power"));
                }
                if let TailMass::Finite(eps) = tail {
                    if !(eps > 0.0 && eps < 1.0) {
                        return Err(domain("tail_mass", eps, "0 < eps < 1"));
                    }
                }
            }
            Family::SlicedGaussian { floor, slice_variance } => {
                positive("floor", floor)?;
                positive("slice_variance", slice_variance)?;
            }
        }
        Ok(DistributionSpec(family))
    }

    pub fn gaussian(mean: f64, variance: f64) -> Result<Self> {
        Self::new(Family::Gaussian { mean, variance })
    }

    pub fn uniform(mean: f64, variance: f64) -> Result<Self> {
        Self::new(Family::Uniform { mean, variance })
    }

    pub fn point_mass(floor_sq: f64, power: f64, tail: TailMass) -> Result<Self> {
        Self::new(Family::PointMass { floor_sq, power, tail })
    }

    pub fn sliced_gaussian(floor: f64, slice_variance: f64) -> Result<Self> {
        Self::new(Family::SlicedGaussian { floor, slice_variance })
    }

    /// Sliced Gaussian with floor `sqrt(floor_sq)` and second moment `power`:
    /// the slice scale solves `b^2 + 2 b s sqrt(2/pi) + s^2 = power`.
    pub fn sliced_at_power(floor_sq: f64, power: f64) -> Result<Self> {
        positive("power", power)?;
        if !(floor_sq > 0.0 && floor_sq < power) {
            return Err(domain("floor_sq", floor_sq, "in (0, power)"));
        }
        let b = floor_sq.sqrt();
        let c = (2.0 / PI).sqrt();
        // Positive root written without cancellation.
        let s = (power - floor_sq) / (b * c + (b * b * c * c + power - floor_sq).sqrt());
        Self::sliced_gaussian(b, s * s)
    }

    pub fn family(&self) -> &Family {
        &self.0
    }

    pub fn name(&self) -> &'static str {
        match self.0 {
            Family::Gaussian { .. } => "gaussian",
            Family::Uniform { .. } => "uniform",
            Family::PointMass { .. } => "pointmass",
            Family::SlicedGaussian { .. } => "sliced",
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.0, Family::Gaussian { .. })
    }

    pub fn has_density(&self) -> bool {
        !matches!(self.0, Family::PointMass { .. })
    }

    pub fn moments(&self) -> Moments {
        match self.0 {
            Family::Gaussian { mean, variance } => {
                Moments { mean, variance, entropy: Some(0.5 * (2.0 * PI * E * variance).ln()) }
            }
            Family::Uniform { mean, variance } => {
                Moments { mean, variance, entropy: Some(0.5 * (12.0 * variance).ln()) }
            }
            Family::PointMass { power, .. } => Moments { mean: 0.0, variance: power, entropy: None },
            Family::SlicedGaussian { floor, slice_variance } => {
                let sz = slice_variance.sqrt();
                Moments {
                    mean: 0.0,
                    variance: floor * floor + 2.0 * floor * sz * (2.0 / PI).sqrt() + slice_variance,
                    entropy: Some(0.5 * (2.0 * PI * E * slice_variance).ln()),
                }
            }
        }
    }

    /// Exponent of the small-beta power decay: `sigma_beta^2 ~ beta^(2L)`.
    pub fn decay_rate(&self) -> u32 {
        match self.0 {
            Family::Gaussian { .. } => 1,
            Family::Uniform { mean, variance } => {
                if mean * mean <= 3.0 * variance {
                    1
                } else {
                    0
                }
            }
            Family::PointMass { .. } | Family::SlicedGaussian { .. } => 0,
        }
    }

    /// Rescales so that `omega * E[X^2] = power`.
    pub fn scale_to_power(&self, omega: f64, power: f64) -> Result<Self> {
        positive("omega", omega)?;
        positive("power", power)?;
        let c2 = power / (omega * self.moments().second_moment());
        let c = c2.sqrt();
        let family = match self.0 {
            Family::Gaussian { mean, variance } => {
                Family::Gaussian { mean: mean * c, variance: variance * c2 }
            }
            Family::Uniform { mean, variance } => Family::Uniform { mean: mean * c, variance: variance * c2 },
            Family::PointMass { floor_sq, power: g, tail } => {
                Family::PointMass { floor_sq: floor_sq * c2, power: g * c2, tail }
            }
            Family::SlicedGaussian { floor, slice_variance } => {
                Family::SlicedGaussian { floor: floor * c, slice_variance: slice_variance * c2 }
            }
        };
        Self::new(family)
    }

    /// Closed-form beta-truncation.
    pub fn truncate(&self, beta: f64) -> Result<TruncationResult> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(domain("beta", beta, "0 < beta <= 1"));
        }
        let r = match self.0 {
            Family::Gaussian { mean, variance } => truncate_gaussian(mean, variance, beta)?,
            Family::Uniform { mean, variance } => {
                let sigma = variance.sqrt();
                let lower = mean - SQRT_3 * sigma;
                let half = beta * SQRT_3 * sigma;
                TruncationResult {
                    beta,
                    threshold: half.max(lower + 2.0 * half),
                    mean: (mean - (1.0 - beta) * SQRT_3 * sigma).max(0.0),
                    variance: beta * beta * variance,
                    entropy: Some(0.5 * (12.0 * beta * beta * variance).ln()),
                }
            }
            Family::PointMass { floor_sq, power, tail } => {
                let (threshold, variance) = match tail {
                    TailMass::Vanishing if beta < 1.0 => (floor_sq.sqrt(), floor_sq),
                    TailMass::Vanishing => (f64::INFINITY, power),
                    TailMass::Finite(eps) => {
                        let inner = 1.0 - eps;
                        if beta <= inner {
                            (floor_sq.sqrt(), floor_sq)
                        } else {
                            let outer_sq = (power - inner * floor_sq) / eps;
                            let v = (inner * floor_sq + (beta - inner) * outer_sq) / beta;
                            (outer_sq.sqrt(), v)
                        }
                    }
                };
                TruncationResult { beta, threshold, mean: 0.0, variance, entropy: None }
            }
            Family::SlicedGaussian { floor, slice_variance } => {
                let sz = slice_variance.sqrt();
                let t = special::gaussian_half_width(beta)?;
                let r = special::truncated_second_moment(t);
                let r_abs = special::truncated_abs_moment(t, beta);
                TruncationResult {
                    beta,
                    threshold: floor + sz * t,
                    mean: 0.0,
                    variance: floor * floor + r * slice_variance + 2.0 * floor * sz * r_abs,
                    entropy: Some(0.5 * ((2.0 * PI * beta * beta * slice_variance).ln() + r)),
                }
            }
        };
        Ok(r)
    }

    /// A sampler for this law. The vanishing-tail point mass has no sampler.
    pub fn sampler(&self) -> Result<Sampler> {
        if let Family::PointMass { tail: TailMass::Vanishing, .. } = self.0 {
            return Err(Error::Unsupported("sampling the vanishing-tail point-mass limit"));
        }
        Ok(Sampler(self.0))
    }
}

fn truncate_gaussian(mean: f64, variance: f64, beta: f64) -> Result<TruncationResult> {
    let sigma = variance.sqrt();
    if beta == 1.0 {
        return Ok(TruncationResult {
            beta,
            threshold: f64::INFINITY,
            mean,
            variance,
            entropy: Some(0.5 * (2.0 * PI * E * variance).ln()),
        });
    }
    if mean == 0.0 {
        let t = special::gaussian_half_width(beta)?;
        let r = special::truncated_second_moment(t);
        return Ok(TruncationResult {
            beta,
            threshold: sigma * t,
            mean: 0.0,
            variance: variance * r,
            entropy: Some(0.5 * ((2.0 * PI * beta * beta * variance).ln() + r)),
        });
    }
    // Off-centre: truncated normal on [-t, t] with t solved from the mass.
    let interval_mass = |t: f64| {
        let a = (-t - mean) / sigma;
        let b = (t - mean) / sigma;
        normal_interval(a, b)
    };
    let (mut lo, mut hi) = (0.0_f64, mean.abs() + 40.0 * sigma);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if interval_mass(mid) < beta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let a = (-t - mean) / sigma;
    let b = (t - mean) / sigma;
    let z = normal_interval(a, b);
    let (pa, pb) = (special::normal_pdf(a), special::normal_pdf(b));
    let shift = (pa - pb) / z;
    let spread = (a * pa - b * pb) / z;
    Ok(TruncationResult {
        beta,
        threshold: t,
        mean: mean + sigma * shift,
        variance: variance * (1.0 + spread - shift * shift),
        entropy: Some(((2.0 * PI * E).sqrt() * sigma * z).ln() + 0.5 * spread),
    })
}

/// `Phi(b) - Phi(a)` computed on the side that avoids cancellation.
fn normal_interval(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        special::q_function(a) - special::q_function(b)
    } else if b <= 0.0 {
        special::normal_cdf(b) - special::normal_cdf(a)
    } else {
        1.0 - special::q_function(b) - special::normal_cdf(a)
    }
}

/// Draws from a [`DistributionSpec`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sampler(Family);

impl Sampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.0 {
            Family::Gaussian { mean, variance } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + variance.sqrt() * z
            }
            Family::Uniform { mean, variance } => {
                let u: f64 = rng.random();
                mean + SQRT_3 * variance.sqrt() * (2.0 * u - 1.0)
            }
            Family::PointMass { floor_sq, power, tail } => {
                let eps = match tail {
                    TailMass::Finite(e) => e,
                    TailMass::Vanishing => 0.0,
                };
                let u: f64 = rng.random();
                let mag =
                    if u < eps { ((power - (1.0 - eps) * floor_sq) / eps).sqrt() } else { floor_sq.sqrt() };
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            }
            Family::SlicedGaussian { floor, slice_variance } => {
                let z: f64 = StandardNormal.sample(rng);
                let z = slice_variance.sqrt() * z;
                if z >= 0.0 {
                    z + floor
                } else {
                    z - floor
                }
            }
        }
    }

    /// Log-density at `x`, `None` for laws without a density.
    pub fn log_density(&self, x: f64) -> Option<f64> {
        log_density(&self.0, x)
    }
}

pub(crate) fn log_density(family: &Family, x: f64) -> Option<f64> {
    match *family {
        Family::Gaussian { mean, variance } => {
            let d = x - mean;
            Some(-0.5 * (2.0 * PI * variance).ln() - 0.5 * d * d / variance)
        }
        Family::Uniform { mean, variance } => {
            let half = SQRT_3 * variance.sqrt();
            if (x - mean).abs() <= half {
                Some(-(2.0 * half).ln())
            } else {
                Some(f64::NEG_INFINITY)
            }
        }
        Family::PointMass { .. } => None,
        Family::SlicedGaussian { floor, slice_variance } => {
            if x.abs() < floor {
                return Some(f64::NEG_INFINITY);
            }
            let d = x.abs() - floor;
            Some(-0.5 * (2.0 * PI * slice_variance).ln() - 0.5 * d * d / slice_variance)
        }
    }
}
