//! Independent checks on the closed-form truncations.
//!
//! Quadrature integrates the density directly and finds the threshold by
//! bisection on the integrated mass. Monte Carlo draws from the law and keeps
//! the smallest-magnitude fraction of each batch.

use super::quadrature::integrate;
use super::{log_density, DistributionSpec, Family, TruncationResult};
use crate::error::{domain, Error, Result};
use crate::rng::trial_rng;
use crate::stats;
use alloc::vec::Vec;
use num_traits::Float;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    Quadrature,
    MonteCarlo { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleEstimate {
    pub result: TruncationResult,
    pub mean_error: f64,
    pub variance_error: f64,
    pub entropy_error: Option<f64>,
}

const MC_BATCHES: usize = 40;
const QUAD_ABS: f64 = 1e-15;
const QUAD_REL: f64 = 1e-13;
const QUAD_ACCEPT: f64 = 1e-10;

/// Estimates the beta-truncation of `dist` without the closed forms.
///
/// `budget` is the maximum number of subintervals per integral for
/// quadrature, and the total sample count for Monte Carlo.
pub fn truncate_oracle(
    dist: &DistributionSpec,
    beta: f64,
    method: OracleMethod,
    budget: usize,
) -> Result<OracleEstimate> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(domain("beta", beta, "0 < beta <= 1"));
    }
    match method {
        OracleMethod::Quadrature => by_quadrature(dist, beta, budget),
        OracleMethod::MonteCarlo { seed } => by_sampling(dist, beta, seed, budget),
    }
}

fn by_quadrature(dist: &DistributionSpec, beta: f64, budget: usize) -> Result<OracleEstimate> {
    let fam = *dist.family();
    let (lo, hi, breaks, unbounded): (f64, f64, [f64; 3], bool) = match fam {
        Family::Gaussian { mean, variance } => {
            let s = variance.sqrt();
            (mean - 40.0 * s, mean + 40.0 * s, [mean, 0.0, 0.0], true)
        }
        Family::Uniform { mean, variance } => {
            let h = 3.0_f64.sqrt() * variance.sqrt();
            (mean - h, mean + h, [0.0, 0.0, 0.0], false)
        }
        Family::SlicedGaussian { floor, slice_variance } => {
            let w = floor + 40.0 * slice_variance.sqrt();
            (-w, w, [-floor, 0.0, floor], true)
        }
        Family::PointMass { .. } => return Err(Error::Unsupported("quadrature on a law without a density")),
    };
    let density = move |x: f64| match log_density(&fam, x) {
        Some(l) if l > f64::NEG_INFINITY => l.exp(),
        _ => 0.0,
    };
    let over = |t: f64, g: &dyn Fn(f64) -> f64| {
        let a = lo.max(-t);
        let b = hi.min(t);
        if b <= a {
            return super::Quadrature { value: 0.0, error: 0.0, intervals: 0 };
        }
        integrate(g, a, b, &breaks, QUAD_ABS, QUAD_REL, budget)
    };
    let t_max = lo.abs().max(hi.abs());
    let t = if beta == 1.0 {
        t_max
    } else {
        let (mut a, mut b) = (0.0_f64, t_max);
        for _ in 0..2000 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if over(mid, &density).value < beta {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    };
    let m1 = over(t, &|x| x * density(x));
    let mean = m1.value / beta;
    let m2 = over(t, &|x| (x - mean) * (x - mean) * density(x));
    let ent = over(t, &|x| match log_density(&fam, x) {
        Some(l) if l > f64::NEG_INFINITY => -l * l.exp(),
        _ => 0.0,
    });
    let worst = m1.error.max(m2.error).max(ent.error) / beta;
    if worst > QUAD_ACCEPT {
        return Err(Error::Accuracy {
            what: "truncation quadrature",
            achieved: worst,
            requested: QUAD_ACCEPT,
        });
    }
    let threshold = if beta == 1.0 && unbounded { f64::INFINITY } else { t };
    Ok(OracleEstimate {
        result: TruncationResult {
            beta,
            threshold,
            mean,
            variance: m2.value / beta,
            entropy: Some(ent.value / beta + beta.ln()),
        },
        mean_error: m1.error / beta,
        variance_error: m2.error / beta,
        entropy_error: Some(ent.error / beta),
    })
}

fn by_sampling(dist: &DistributionSpec, beta: f64, seed: u64, budget: usize) -> Result<OracleEstimate> {
    let per_batch = budget / MC_BATCHES;
    if per_batch < 10 {
        return Err(domain("budget", budget as f64, ">= 400 samples"));
    }
    let sampler = dist.sampler()?;
    let keep = ((beta * per_batch as f64).round() as usize).clamp(1, per_batch);
    let mut thresholds = Vec::with_capacity(MC_BATCHES);
    let mut means = Vec::with_capacity(MC_BATCHES);
    let mut vars = Vec::with_capacity(MC_BATCHES);
    let mut ents = Vec::with_capacity(MC_BATCHES);
    let mut xs: Vec<f64> = Vec::with_capacity(per_batch);
    for batch in 0..MC_BATCHES {
        let mut rng = trial_rng(seed, batch as u64);
        xs.clear();
        for _ in 0..per_batch {
            xs.push(sampler.draw(&mut rng));
        }
        if keep < per_batch {
            xs.select_nth_unstable_by(keep - 1, |a, b| a.abs().total_cmp(&b.abs()));
        }
        let kept = &xs[..keep];
        let cut = kept.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let m = stats::mean(kept);
        let sq: Vec<f64> = kept.iter().map(|x| (x - m) * (x - m)).collect();
        thresholds.push(cut);
        means.push(m);
        vars.push(stats::pairwise_sum(&sq) / keep as f64);
        if dist.has_density() {
            let nl: Vec<f64> = kept.iter().map(|&x| -sampler.log_density(x).unwrap()).collect();
            ents.push(stats::mean(&nl) + beta.ln());
        }
    }
    let entropy = if dist.has_density() { Some(stats::mean(&ents)) } else { None };
    Ok(OracleEstimate {
        result: TruncationResult {
            beta,
            threshold: stats::mean(&thresholds),
            mean: stats::mean(&means),
            variance: stats::mean(&vars),
            entropy,
        },
        mean_error: stats::std_error(&means),
        variance_error: stats::std_error(&vars),
        entropy_error: entropy.map(|_| stats::std_error(&ents)),
    })
}
