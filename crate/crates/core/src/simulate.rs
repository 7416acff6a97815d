//! Small-scale support-recovery experiments.
//!
//! A trial draws a `k`-sparse source, samples it through a random matrix,
//! and recovers the support either by exhaustive maximum likelihood over all
//! `C(n,k)` supports or, for the rate-sharing matrix, by the two-stage
//! noiseless estimator.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Float, ToPrimitive};
use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::distributions::{DistributionSpec, Sampler};
use crate::error::{domain, Error, Result};
use crate::linalg::{dot, span_residual, Matrix};
use crate::montecarlo::binomial;
use crate::ratefun::snr_to_power;
use crate::rng::trial_rng;
use crate::runner::{Serial, TrialRunner};
use crate::stats::{mean, std_error};

pub const MIN_N: usize = 8;
pub const MAX_N: usize = 28;
/// Largest `C(n,k)` exhaustive search will take on.
pub const SUPPORT_BUDGET: f64 = 1e6;
/// Relative residual below which `y` counts as lying in a span.
pub const SPAN_TOL: f64 = 1e-9;
/// Residual ties within this fraction of `|y|^2` go to the earlier support.
/// Squared, so it corresponds to a residual norm of `1e-12 |y|`.
pub const TIE_TOL: f64 = 1e-24;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Noise {
    Noiseless,
    /// Unit-variance noise; the source is rescaled to this SNR.
    SnrDb(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatrixKind {
    IidGaussian,
    /// Zero a random column subset so the remaining columns carry rate
    /// `(1 - epsilon) rho / omega` of the dimension.
    RateSharing {
        epsilon: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub omega: f64,
    /// The law of the nonzero entries, already scaled to the SNR if noisy.
    pub source: DistributionSpec,
    pub noise: Noise,
    pub rho: f64,
    pub matrix: MatrixKind,
    pub trials: u64,
    pub seed: u64,
    sampler: Sampler,
}

impl SimConfig {
    /// Validates the configuration. In the noisy case `shape` is rescaled so
    /// the sample SNR `omega * E[X^2]` matches the requested level.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        omega: f64,
        shape: DistributionSpec,
        noise: Noise,
        rho: f64,
        matrix: MatrixKind,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        if !(MIN_N..=MAX_N).contains(&n) {
            return Err(domain("n", n as f64, "in [8, 28]"));
        }
        if !(omega > 0.0 && omega < 1.0) {
            return Err(domain("omega", omega, "in (0, 1)"));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(domain("rho", rho, "> 0"));
        }
        let source = match noise {
            Noise::Noiseless => shape,
            Noise::SnrDb(db) => {
                if !db.is_finite() {
                    return Err(domain("snr_db", db, "finite"));
                }
                shape.scale_to_power(omega, snr_to_power(db))?
            }
        };
        let sampler = source.sampler()?;
        let c = SimConfig { n, omega, source, noise, rho, matrix, trials, seed, sampler };
        if c.k() == 0 {
            return Err(domain("omega", omega, "floor(omega * n) >= 1"));
        }
        if let MatrixKind::RateSharing { epsilon } = matrix {
            if !(0.0..1.0).contains(&epsilon) {
                return Err(domain("epsilon", epsilon, "in [0, 1)"));
            }
            if rho >= omega {
                return Err(domain("rho", rho, "< omega for rate sharing"));
            }
        }
        let count = c.support_count();
        if count > SUPPORT_BUDGET {
            return Err(Error::Budget { required: count, limit: SUPPORT_BUDGET });
        }
        Ok(c)
    }

    pub fn k(&self) -> usize {
        (self.omega * self.n as f64 + 1e-9).floor() as usize
    }

    pub fn m(&self) -> usize {
        ((self.rho * self.n as f64 - 1e-9).ceil() as usize).max(1)
    }

    /// `C(n,k)`.
    pub fn support_count(&self) -> f64 {
        binomial(self.n, self.k()).to_f64().unwrap_or(f64::INFINITY)
    }

    /// Number of zeroed columns under rate sharing.
    pub fn zeroed_columns(&self) -> usize {
        match self.matrix {
            MatrixKind::IidGaussian => 0,
            MatrixKind::RateSharing { epsilon } => {
                let frac = 1.0 - (1.0 - epsilon) * self.rho / self.omega;
                ((frac * self.n as f64 - 1e-9).ceil().max(0.0) as usize).min(self.n)
            }
        }
    }
}

/// A `k`-sparse vector with its support in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSource {
    pub support: Vec<usize>,
    pub x: Vec<f64>,
}

pub fn draw_source<R: Rng + ?Sized>(config: &SimConfig, rng: &mut R) -> SparseSource {
    let mut support = index::sample(rng, config.n, config.k()).into_vec();
    support.sort_unstable();
    let mut x = vec![0.0; config.n];
    for &i in &support {
        x[i] = config.sampler.draw(rng);
    }
    SparseSource { support, x }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    pub y: Vec<f64>,
    pub a: Matrix,
    /// Columns zeroed by rate sharing, in increasing order.
    pub zeroed: Vec<usize>,
}

/// `y = A x + w` with `A` of iid `N(0, 1/n)` entries, so `E tr(A A^T) = m`.
pub fn sample<R: Rng + ?Sized>(x: &[f64], config: &SimConfig, rng: &mut R) -> Samples {
    let (n, m) = (config.n, config.m());
    let scale = 1.0 / (n as f64).sqrt();
    let mut a = Matrix::from_fn(m, n, |_, _| scale * rng.sample::<f64, _>(StandardNormal));
    let mut zeroed = Vec::new();
    if let MatrixKind::RateSharing { .. } = config.matrix {
        zeroed = index::sample(rng, n, config.zeroed_columns()).into_vec();
        zeroed.sort_unstable();
        for &j in &zeroed {
            for i in 0..m {
                a.set(i, j, 0.0);
            }
        }
    }
    let mut y = a.mul_vec(x);
    if let Noise::SnrDb(_) = config.noise {
        for v in y.iter_mut() {
            *v += rng.sample::<f64, _>(StandardNormal);
        }
    }
    Samples { y, a, zeroed }
}

/// `1 - |truth & estimate| / |truth|`.
pub fn distortion(truth: &[usize], estimate: &[usize]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let hit = estimate.iter().filter(|i| truth.contains(i)).count();
    1.0 - hit as f64 / truth.len() as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct MlEstimate {
    pub support: Vec<usize>,
    /// Squared residual of `y` off the chosen span.
    pub residual_min: f64,
    /// Next-smallest squared residual minus the smallest.
    pub runner_up_gap: f64,
}

struct Search<'a> {
    a: &'a Matrix,
    cols: Vec<Vec<f64>>,
    k: usize,
    tie: f64,
    path: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
    second: f64,
}

impl Search<'_> {
    fn visit(&mut self, start: usize, basis: &mut Vec<Vec<f64>>, r: &[f64]) {
        if self.path.len() == self.k {
            let res = dot(r, r);
            match &self.best {
                Some((b, _)) if res >= *b - self.tie => self.second = self.second.min(res),
                _ => {
                    if let Some((b, _)) = &self.best {
                        self.second = self.second.min(*b);
                    }
                    self.best = Some((res, self.path.clone()));
                }
            }
            return;
        }
        let n = self.a.cols();
        let left = self.k - self.path.len();
        for j in start..=n - left {
            let mut v = self.cols[j].clone();
            let size = dot(&v, &v).sqrt();
            for _ in 0..2 {
                for q in basis.iter() {
                    let s = dot(q, &v);
                    v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= s * qi);
                }
            }
            let norm = dot(&v, &v).sqrt();
            self.path.push(j);
            // A column already in the span leaves both basis and residual as
            // they are, which is the projection onto the actual span.
            if norm > 1e-10 * size && norm > 0.0 {
                v.iter_mut().for_each(|x| *x /= norm);
                let s = dot(&v, r);
                let next: Vec<f64> = r.iter().zip(&v).map(|(ri, qi)| ri - s * qi).collect();
                basis.push(v);
                self.visit(j + 1, basis, &next);
                basis.pop();
            } else {
                self.visit(j + 1, basis, r);
            }
            self.path.pop();
        }
    }
}

/// Maximum-likelihood support under Gaussian noise: the size-`k` support
/// whose column span leaves the smallest residual. Supports are visited in
/// lexicographic order and a later one wins only if it beats the current
/// best by more than `TIE_TOL * |y|^2`; with `y = 0` the answer is
/// `{0, .., k-1}`.
pub fn exhaustive_ml(y: &[f64], a: &Matrix, k: usize) -> Result<MlEstimate> {
    if k == 0 || k > a.cols() {
        return Err(domain("k", k as f64, "in [1, n]"));
    }
    if y.len() != a.rows() {
        return Err(domain("y length", y.len() as f64, "number of matrix rows"));
    }
    let count = binomial(a.cols(), k).to_f64().unwrap_or(f64::INFINITY);
    if count > SUPPORT_BUDGET {
        return Err(Error::Budget { required: count, limit: SUPPORT_BUDGET });
    }
    let cols = (0..a.cols()).map(|j| a.column(j)).collect();
    let mut search = Search {
        a,
        cols,
        k,
        tie: TIE_TOL * dot(y, y),
        path: Vec::with_capacity(k),
        best: None,
        second: f64::INFINITY,
    };
    search.visit(0, &mut Vec::with_capacity(k), y);
    let (res, support) = search.best.expect("at least one support");
    Ok(MlEstimate { support, residual_min: res, runner_up_gap: search.second - res })
}

fn for_each_subset(items: &[usize], size: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if size == 0 {
        f(acc);
        return;
    }
    for i in 0..items.len() {
        if items.len() - i < size {
            break;
        }
        acc.push(items[i]);
        for_each_subset(&items[i + 1..], size - 1, acc, f);
        acc.pop();
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateSharingEstimate {
    pub support: Vec<usize>,
    /// The stage-one support, found among the live columns.
    pub recovered: Vec<usize>,
    pub residual: f64,
}

/// Two-stage noiseless recovery for a rate-sharing matrix. Stage one finds
/// the smallest set of live columns whose span contains `y`; stage two fills
/// the remaining `k - |s0|` indices uniformly from the zeroed columns.
/// Several minimal sets is a declared error.
pub fn rate_sharing_recover<R: Rng + ?Sized>(
    y: &[f64],
    a: &Matrix,
    k: usize,
    zeroed: &[usize],
    rng: &mut R,
) -> Result<RateSharingEstimate> {
    let live: Vec<usize> = (0..a.cols()).filter(|j| !zeroed.contains(j)).collect();
    let tol = SPAN_TOL * dot(y, y).sqrt();
    let mut found: Option<(Vec<usize>, f64)> = None;
    for size in 0..=k.min(live.len()) {
        let mut hits = 0;
        for_each_subset(&live, size, &mut Vec::new(), &mut |s| {
            let res = span_residual(a, s, y);
            if res <= tol {
                hits += 1;
                if hits == 1 {
                    found = Some((s.to_vec(), res));
                }
            }
        });
        if hits > 1 {
            return Err(Error::AmbiguousSupport { size, count: hits });
        }
        if hits == 1 {
            break;
        }
    }
    let Some((recovered, residual)) = found else {
        return Err(Error::NoCrossing { what: "rate-sharing span search", lo: 0.0, hi: k as f64 });
    };
    let mut pool: Vec<usize> = zeroed.to_vec();
    pool.shuffle(rng);
    let mut rest: Vec<usize> = live.iter().copied().filter(|j| !recovered.contains(j)).collect();
    rest.shuffle(rng);
    pool.extend(rest);
    let mut support = recovered.clone();
    support.extend(pool.into_iter().take(k - recovered.len()));
    support.sort_unstable();
    Ok(RateSharingEstimate { support, recovered, residual })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimOutcome {
    pub trial: u64,
    pub distortion: f64,
    pub exact: bool,
    pub residual_min: f64,
    /// `NaN` for rate-sharing trials.
    pub runner_up_gap: f64,
    /// Rate-sharing stage one was ambiguous; scored as distortion 1.
    pub declared_error: bool,
    pub support: Vec<usize>,
    pub estimate: Vec<usize>,
}

pub fn run_trial(config: &SimConfig, trial: u64) -> Result<SimOutcome> {
    let mut rng = trial_rng(config.seed, trial);
    let src = draw_source(config, &mut rng);
    let s = sample(&src.x, config, &mut rng);
    let k = config.k();
    let (estimate, residual_min, runner_up_gap, declared_error) = match config.matrix {
        MatrixKind::IidGaussian => {
            let ml = exhaustive_ml(&s.y, &s.a, k)?;
            (ml.support, ml.residual_min, ml.runner_up_gap, false)
        }
        MatrixKind::RateSharing { .. } => match rate_sharing_recover(&s.y, &s.a, k, &s.zeroed, &mut rng) {
            Ok(est) => (est.support, est.residual * est.residual, f64::NAN, false),
            Err(Error::AmbiguousSupport { .. }) => (Vec::new(), f64::NAN, f64::NAN, true),
            Err(e) => return Err(e),
        },
    };
    let d = if declared_error { 1.0 } else { distortion(&src.support, &estimate) };
    Ok(SimOutcome {
        trial,
        distortion: d,
        exact: d == 0.0,
        residual_min,
        runner_up_gap,
        declared_error,
        support: src.support,
        estimate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimSummary {
    pub trials: u64,
    pub mean_distortion: f64,
    pub distortion_std_error: f64,
    pub exact_rate: f64,
    pub exact_std_error: f64,
    pub declared_errors: u64,
    /// Fewer trials ran than requested because of the work budget.
    pub truncated: bool,
}

impl SimSummary {
    pub fn from_outcomes(outcomes: &[SimOutcome], truncated: bool) -> Self {
        let d: Vec<f64> = outcomes.iter().map(|o| o.distortion).collect();
        let e: Vec<f64> = outcomes.iter().map(|o| if o.exact { 1.0 } else { 0.0 }).collect();
        SimSummary {
            trials: outcomes.len() as u64,
            mean_distortion: mean(&d),
            distortion_std_error: std_error(&d),
            exact_rate: mean(&e),
            exact_std_error: std_error(&e),
            declared_errors: outcomes.iter().filter(|o| o.declared_error).count() as u64,
            truncated,
        }
    }
}

/// Fraction of trials with distortion at most `alpha`, and its standard error.
pub fn success_rate(outcomes: &[SimOutcome], alpha: f64) -> (f64, f64) {
    let s: Vec<f64> =
        outcomes.iter().map(|o| if o.distortion <= alpha + 1e-12 { 1.0 } else { 0.0 }).collect();
    (mean(&s), std_error(&s))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub outcomes: Vec<SimOutcome>,
    pub summary: SimSummary,
}

/// Runs the configured trials. With `work_budget` set (in supports
/// examined), only as many trials as fit are run and the summary is flagged.
pub fn run_experiment_with<R: TrialRunner>(
    runner: &R,
    config: &SimConfig,
    work_budget: Option<f64>,
) -> Result<Experiment> {
    let per_trial = config.support_count();
    let mut trials = config.trials;
    let mut truncated = false;
    if let Some(limit) = work_budget {
        let fit = (limit / per_trial).floor().max(0.0) as u64;
        if fit < trials {
            trials = fit;
            truncated = true;
        }
    }
    let outcomes: Vec<SimOutcome> =
        runner.run(trials, |t| run_trial(config, t)).into_iter().collect::<Result<_>>()?;
    let summary = SimSummary::from_outcomes(&outcomes, truncated);
    Ok(Experiment { outcomes, summary })
}

pub fn run_experiment(config: &SimConfig) -> Result<Experiment> {
    run_experiment_with(&Serial, config, None)
}

/// One Gaussian sample of a `+-1` vector, inverted by trying all `2^n`
/// sign patterns.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDemo {
    pub x: Vec<i8>,
    pub recovered: Vec<i8>,
    /// Smallest distance between the sample and any other pattern's image.
    pub margin: f64,
}

pub fn discrete_single_sample(n: usize, seed: u64) -> Result<DiscreteDemo> {
    if !(1..=12).contains(&n) {
        return Err(domain("n", n as f64, "in [1, 12]"));
    }
    let mut rng = trial_rng(seed, 0);
    let x: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    let a: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let image = |bits: u32| -> f64 { (0..n).map(|i| if bits >> i & 1 == 1 { a[i] } else { -a[i] }).sum() };
    let y: f64 = x.iter().zip(&a).map(|(&xi, ai)| f64::from(xi) * ai).sum();
    let mut best = (f64::INFINITY, 0u32);
    let mut margin = f64::INFINITY;
    for bits in 0..1u32 << n {
        let d = (image(bits) - y).abs();
        if d < best.0 {
            margin = margin.min(best.0);
            best = (d, bits);
        } else {
            margin = margin.min(d);
        }
    }
    let recovered = (0..n).map(|i| if best.1 >> i & 1 == 1 { 1 } else { -1 }).collect();
    Ok(DiscreteDemo { x, recovered, margin })
}
