//! Lower bounds on the sampling rate needed to recover a sparsity pattern
//! to within a given fraction of errors.
//!
//! Every bound returns zero when the covering rate vanishes, i.e. once
//! `alpha >= 1 - omega`. The implicit bounds return the supremum of the rates
//! that violate their defining inequality; see [`solve`].

mod noiseless;
mod noisy;
mod shape;
pub mod solve;

pub use noiseless::{
    noiseless_rate_saturates, noiseless_simple, p2_noiseless_iid, t1_noiseless, t3_noiseless_iid,
    NoiselessReport,
};
pub use noisy::{
    p3_general, p4_iid, p5_gaussian, p6_entropy, simplified_entropy_bound, t2_genie, t4_genie_iid,
    GenieBound, GenieSolve,
};
pub use shape::{p7_shape, p8_shape};
pub use solve::ImplicitSolveReport;

use crate::error::{Error, Result};
use crate::ratefun::SourceParams;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use num_traits::Float;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    T1Noiseless,
    P2NoiselessIid,
    T3NoiselessIid,
    C1Test,
    P3General,
    T2Genie,
    P4Iid,
    P5IidGaussian,
    P6IidEntropy,
    T4IidGenie,
    SEntropySimple,
    SNoiselessSimple,
    P7Shape,
    P8Shape,
}

impl BoundId {
    pub const ALL: [BoundId; 14] = [
        BoundId::T1Noiseless,
        BoundId::P2NoiselessIid,
        BoundId::T3NoiselessIid,
        BoundId::C1Test,
        BoundId::P3General,
        BoundId::T2Genie,
        BoundId::P4Iid,
        BoundId::P5IidGaussian,
        BoundId::P6IidEntropy,
        BoundId::T4IidGenie,
        BoundId::SEntropySimple,
        BoundId::SNoiselessSimple,
        BoundId::P7Shape,
        BoundId::P8Shape,
    ];

    pub fn code(self) -> &'static str {
        match self {
            BoundId::T1Noiseless => "t1",
            BoundId::P2NoiselessIid => "p2",
            BoundId::T3NoiselessIid => "t3",
            BoundId::C1Test => "c1",
            BoundId::P3General => "p3",
            BoundId::T2Genie => "t2",
            BoundId::P4Iid => "p4",
            BoundId::P5IidGaussian => "p5",
            BoundId::P6IidEntropy => "p6",
            BoundId::T4IidGenie => "t4",
            BoundId::SEntropySimple => "s6",
            BoundId::SNoiselessSimple => "s3",
            BoundId::P7Shape => "p7",
            BoundId::P8Shape => "p8",
        }
    }

    /// Bounds that account for measurement noise.
    pub fn is_noisy(self) -> bool {
        matches!(
            self,
            BoundId::P3General
                | BoundId::T2Genie
                | BoundId::P4Iid
                | BoundId::P5IidGaussian
                | BoundId::P6IidEntropy
                | BoundId::T4IidGenie
                | BoundId::SEntropySimple
        )
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        BoundId::ALL
            .iter()
            .copied()
            .find(|b| b.code().eq_ignore_ascii_case(s))
            .ok_or(Error::Unsupported("unknown bound code"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundValue {
    pub rho: f64,
    pub beta_star: Option<f64>,
    pub solve: Option<ImplicitSolveReport>,
}

impl BoundValue {
    fn plain(rho: f64) -> Self {
        BoundValue { rho, beta_star: None, solve: None }
    }
}

/// Evaluates one bound. Shapes use the source's own power.
pub fn evaluate(bound: BoundId, source: &SourceParams, alpha: f64) -> Result<BoundValue> {
    let v = match bound {
        BoundId::T1Noiseless => BoundValue::plain(t1_noiseless(source.omega, alpha)?),
        BoundId::P2NoiselessIid => BoundValue::plain(p2_noiseless_iid(source.omega, alpha)?),
        BoundId::T3NoiselessIid => BoundValue::plain(t3_noiseless_iid(source, alpha)?.rho),
        BoundId::C1Test => return Err(Error::Unsupported("c1 is a test, not a rate")),
        BoundId::P3General => BoundValue::plain(p3_general(source, alpha)?),
        BoundId::T2Genie => {
            let g = t2_genie(source, alpha)?;
            BoundValue { rho: g.rho, beta_star: Some(g.beta_star), solve: None }
        }
        BoundId::P4Iid => solved(p4_iid(source, alpha)?),
        BoundId::P5IidGaussian => solved(p5_gaussian(source, alpha)?),
        BoundId::P6IidEntropy => solved(p6_entropy(source, alpha)?),
        BoundId::T4IidGenie => {
            let g = t4_genie_iid(source, alpha)?;
            BoundValue { rho: g.report.rho_lower, beta_star: Some(g.beta_star), solve: Some(g.report) }
        }
        BoundId::SEntropySimple => BoundValue::plain(simplified_entropy_bound(source, alpha)?),
        BoundId::SNoiselessSimple => BoundValue::plain(noiseless_simple(source, alpha)?),
        BoundId::P7Shape => BoundValue::plain(p7_shape(source, alpha, source.power)?),
        BoundId::P8Shape => BoundValue::plain(p8_shape(source, alpha, source.power)?.0),
    };
    Ok(v)
}

fn solved(r: ImplicitSolveReport) -> BoundValue {
    BoundValue { rho: r.rho_lower, beta_star: None, solve: Some(r) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixClass {
    /// Any sampling matrix.
    Any,
    /// Matrices with iid zero-mean entries.
    Iid,
}

/// The largest applicable bound and which one attained it. Bounds that need
/// a density or a Gaussian law are skipped when they do not apply.
pub fn best_lower(source: &SourceParams, alpha: f64, class: MatrixClass) -> Result<(f64, BoundId)> {
    // Earlier entries win ties.
    let mut order: Vec<BoundId> = Vec::with_capacity(7);
    if class == MatrixClass::Iid {
        order.push(BoundId::T4IidGenie);
        if source.dist.is_gaussian() {
            order.push(BoundId::P5IidGaussian);
        }
    }
    order.push(BoundId::T2Genie);
    if class == MatrixClass::Iid {
        if source.entropy_power > 0.0 {
            order.push(BoundId::P6IidEntropy);
        }
        order.push(BoundId::P4Iid);
    }
    order.push(BoundId::P3General);
    if class == MatrixClass::Iid && source.theta > 0.0 {
        order.push(BoundId::T3NoiselessIid);
    }
    let mut best = (f64::NEG_INFINITY, BoundId::P3General);
    for b in order {
        let v = evaluate(b, source, alpha)?.rho;
        if v > best.0 {
            best = (v, b);
        }
    }
    Ok(best)
}

/// Smallest distortion reported on a curve; stands in for `alpha -> 0`.
pub const ALPHA_FLOOR: f64 = 1e-6;
const CURVE_STEPS: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveAxis {
    AlphaVsRho,
    RhoVsSnr,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub beta_star: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveDiagnostic {
    /// The bound was not monotone in alpha near this rate; point omitted.
    NonMonotone { rho: f64, alpha: f64 },
    /// Evaluating the bound failed; point omitted.
    Failed { rho: f64, error: Error },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCurve {
    pub bound: BoundId,
    pub source: SourceParams,
    pub axis: CurveAxis,
    /// Sorted by `x`.
    pub points: Vec<CurvePoint>,
    pub diagnostics: Vec<CurveDiagnostic>,
}

/// Smallest `alpha` whose bound is at most `rho`, by bisection on `ln alpha`
/// over `[ALPHA_FLOOR, 1 - omega]`. Returns the point and the beta maximizer
/// there, if the bound has one.
pub fn alpha_for_rho(
    bound: BoundId,
    source: &SourceParams,
    rho: f64,
) -> core::result::Result<CurvePoint, CurveDiagnostic> {
    let eval = |a: f64| evaluate(bound, source, a).map_err(|error| CurveDiagnostic::Failed { rho, error });
    let point = |alpha: f64, v: BoundValue| CurvePoint { x: rho, y: alpha, beta_star: v.beta_star };
    let lo_v = eval(ALPHA_FLOOR)?;
    if lo_v.rho <= rho {
        return Ok(point(ALPHA_FLOOR, lo_v));
    }
    let (mut lo, mut hi) = (ALPHA_FLOOR, 1.0 - source.omega);
    let mut hi_v = eval(hi)?;
    let mut lo_rho = lo_v.rho;
    for _ in 0..CURVE_STEPS {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        let v = eval(mid)?;
        let slack = 1e-9 * lo_rho.abs() + 1e-15;
        if v.rho > lo_rho + slack || v.rho + slack < hi_v.rho {
            return Err(CurveDiagnostic::NonMonotone { rho, alpha: mid });
        }
        if v.rho <= rho {
            hi = mid;
            hi_v = v;
        } else {
            lo = mid;
            lo_rho = v.rho;
        }
    }
    Ok(point(hi, hi_v))
}

/// Distortion-versus-rate curve obtained by inverting `bound` at each rate.
pub fn alpha_curve(bound: BoundId, source: &SourceParams, rho_grid: &[f64]) -> BoundCurve {
    let mut grid: Vec<f64> = rho_grid.to_vec();
    grid.sort_by(|a, b| a.total_cmp(b));
    let results: Vec<_> = grid.iter().map(|&r| alpha_for_rho(bound, source, r)).collect();
    assemble_curve(bound, *source, results)
}

/// Collects per-rate results, in grid order, into a curve.
pub fn assemble_curve(
    bound: BoundId,
    source: SourceParams,
    results: Vec<core::result::Result<CurvePoint, CurveDiagnostic>>,
) -> BoundCurve {
    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    for r in results {
        match r {
            Ok(p) => points.push(p),
            Err(d) => diagnostics.push(d),
        }
    }
    points.sort_by(|a, b| a.x.total_cmp(&b.x));
    BoundCurve { bound, source, axis: CurveAxis::AlphaVsRho, points, diagnostics }
}
