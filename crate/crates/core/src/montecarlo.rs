//! Monte-Carlo checks of the random-matrix limits and support counts the
//! bounds rest on.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{Float, One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::distributions::DistributionSpec;
use crate::error::{domain, Error, Result};
use crate::linalg::{cholesky_logdet, exact_rank, float_rank, lu_det, qr_log_abs_diag, Matrix};
use crate::rng::trial_rng;
use crate::runner::{Serial, TrialRunner};
use crate::stats::{mean, std_error};

/// Redraws allowed per trial before a factorization failure is reported.
const MAX_REDRAWS: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McConfig {
    pub n: usize,
    pub aspect: f64,
    pub gamma: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McConfig {
    pub fn new(n: usize, aspect: f64, gamma: f64, trials: u64, seed: u64) -> Result<Self> {
        if n < 8 {
            return Err(domain("n", n as f64, ">= 8"));
        }
        if !(aspect > 0.0 && aspect.is_finite()) {
            return Err(domain("aspect", aspect, "> 0"));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(domain("gamma", gamma, ">= 0"));
        }
        if trials == 0 {
            return Err(domain("trials", 0.0, ">= 1"));
        }
        let c = McConfig { n, aspect, gamma, trials, seed };
        if c.rows() == 0 {
            return Err(domain("aspect", aspect, "round(aspect * n) >= 1"));
        }
        Ok(c)
    }

    /// `m = round(aspect * n)`.
    pub fn rows(&self) -> usize {
        (self.aspect * self.n as f64).round() as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub target: f64,
    pub relative_gap: f64,
    /// Trials whose matrix had to be redrawn after a failed factorization.
    pub resampled: u64,
}

impl McEstimate {
    pub fn from_samples(values: &[f64], target: f64, resampled: u64) -> Self {
        let m = mean(values);
        McEstimate {
            mean: m,
            std_error: std_error(values),
            trials: values.len() as u64,
            target,
            relative_gap: (m - target).abs() / target.abs().max(1e-12),
            resampled,
        }
    }
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// One trial of `(1/2n) ln det(I + (gamma/n) M M^T)` for each `gamma`, all
/// sharing the same `m x n` matrix. Returns the values and the redraw count.
pub fn mp_logdet_trial(n: usize, m: usize, gammas: &[f64], seed: u64, trial: u64) -> Result<(Vec<f64>, u32)> {
    let mut rng = trial_rng(seed, trial);
    // det(I_m + c M M^T) = det(I_n + c M^T M): factor the smaller side.
    let (short, long) = if m <= n { (m, n) } else { (n, m) };
    for redraw in 0..MAX_REDRAWS {
        let g = gaussian_matrix(short, long, &mut rng).row_gram();
        if !g.is_finite() {
            continue;
        }
        let mut out = Vec::with_capacity(gammas.len());
        for &gamma in gammas {
            let c = gamma / n as f64;
            let a = Matrix::from_fn(short, short, |i, j| c * g.get(i, j) + if i == j { 1.0 } else { 0.0 });
            match cholesky_logdet(&a) {
                Some(ld) => out.push(ld / (2.0 * n as f64)),
                None => break,
            }
        }
        if out.len() == gammas.len() {
            return Ok((out, redraw));
        }
    }
    Err(Error::Accuracy { what: "Gram factorization", achieved: f64::NAN, requested: 0.0 })
}

/// Log-determinant estimates for several `gamma` from one set of matrices.
pub fn mp_logdet_sweep<R: TrialRunner>(
    runner: &R,
    n: usize,
    aspect: f64,
    gammas: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    for &g in gammas {
        McConfig::new(n, aspect, g, trials, seed)?;
    }
    let m = McConfig::new(n, aspect, 0.0, trials, seed)?.rows();
    let runs = runner.run(trials, |t| mp_logdet_trial(n, m, gammas, seed, t));
    let runs: Vec<(Vec<f64>, u32)> = runs.into_iter().collect::<Result<_>>()?;
    let resampled = runs.iter().filter(|r| r.1 > 0).count() as u64;
    let mut out = Vec::with_capacity(gammas.len());
    for (i, &g) in gammas.iter().enumerate() {
        let values: Vec<f64> = runs.iter().map(|r| r.0[i]).collect();
        let target = crate::ratefun::logdet_rate(aspect, g)?;
        out.push(McEstimate::from_samples(&values, target, resampled));
    }
    Ok(out)
}

pub fn mp_logdet_with<R: TrialRunner>(runner: &R, config: &McConfig) -> Result<McEstimate> {
    let c = config;
    Ok(mp_logdet_sweep(runner, c.n, c.aspect, &[c.gamma], c.trials, c.seed)?[0])
}

pub fn mp_logdet(config: &McConfig) -> Result<McEstimate> {
    mp_logdet_with(&Serial, config)
}

/// Limit of `|(1/m) M^T M|^{1/n}`: `(r/(r-1))^(r-1) / e`, or `1/e` at `r = 1`.
pub fn det_power_target(r: f64) -> Result<f64> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(domain("aspect", r, ">= 1"));
    }
    if r == 1.0 {
        return Ok((-1.0f64).exp());
    }
    Ok(((r - 1.0) * (r / (r - 1.0)).ln() - 1.0).exp())
}

/// `ln |(1/m) M^T M|^{1/n}` from the QR diagonal of an `m x n` matrix.
fn log_det_power(mat: &Matrix) -> f64 {
    let (m, n) = (mat.rows() as f64, mat.cols() as f64);
    (2.0 * qr_log_abs_diag(mat) - n * m.ln()) / n
}

pub fn det_power_trial(n: usize, m: usize, seed: u64, trial: u64) -> f64 {
    let mut rng = trial_rng(seed, trial);
    log_det_power(&gaussian_matrix(m, n, &mut rng)).exp()
}

pub fn det_power_with<R: TrialRunner>(runner: &R, config: &McConfig) -> Result<McEstimate> {
    let target = det_power_target(config.aspect)?;
    let (n, m, seed) = (config.n, config.rows(), config.seed);
    if m < n {
        return Err(domain("aspect", config.aspect, "round(aspect * n) >= n"));
    }
    let values = runner.run(config.trials, |t| det_power_trial(n, m, seed, t));
    Ok(McEstimate::from_samples(&values, target, 0))
}

pub fn det_power(config: &McConfig) -> Result<McEstimate> {
    det_power_with(&Serial, config)
}

/// The log-domain value and the direct `det(M^T M / m)^{1/n}` on one matrix.
pub fn det_power_paths(n: usize, m: usize, seed: u64) -> (f64, f64) {
    let mut rng = trial_rng(seed, 0);
    let mat = gaussian_matrix(m, n, &mut rng);
    let log_path = log_det_power(&mat).exp();
    let g = mat.transpose().row_gram();
    let scaled = Matrix::from_fn(n, n, |i, j| g.get(i, j) / m as f64);
    (log_path, lu_det(&scaled).powf(1.0 / n as f64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryLaw {
    Gaussian,
    Rademacher,
}

/// Fraction of trials whose `k x k` iid matrix, `k = floor(omega n)`, is
/// rank deficient.
pub fn rank_deficiency_with<R: TrialRunner>(
    runner: &R,
    n: usize,
    omega: f64,
    law: EntryLaw,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(domain("omega", omega, "in [0, 1]"));
    }
    if trials == 0 {
        return Err(domain("trials", 0.0, ">= 1"));
    }
    let k = (omega * n as f64 + 1e-9).floor() as usize;
    if k == 0 {
        return Ok(0.0);
    }
    let hits = runner.run(trials, |t| {
        let mut rng = trial_rng(seed, t);
        let rank = match law {
            EntryLaw::Gaussian => float_rank(&gaussian_matrix(k, k, &mut rng), 1e-12),
            EntryLaw::Rademacher => {
                let e: Vec<i64> = (0..k * k).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
                exact_rank(&e, k, k)
            }
        };
        rank < k
    });
    Ok(hits.iter().filter(|&&h| h).count() as f64 / trials as f64)
}

pub fn rank_deficiency(n: usize, omega: f64, law: EntryLaw, trials: u64, seed: u64) -> Result<f64> {
    rank_deficiency_with(&Serial, n, omega, law, trials, seed)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

/// Largest number of swapped indices whose distortion stays within `alpha`.
pub fn max_swaps(k: usize, alpha: f64) -> usize {
    ((alpha * k as f64 + 1e-9).floor() as usize).min(k)
}

fn check_counting(n: usize, k: usize, alpha: f64) -> Result<()> {
    if 2 * k > n {
        return Err(domain("k", k as f64, "<= n / 2"));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(domain("alpha", alpha, "in [0, 1]"));
    }
    Ok(())
}

/// Number of size-`k` supports within distortion `alpha` of a fixed one.
pub fn n_tilde(n: usize, k: usize, alpha: f64) -> Result<BigUint> {
    check_counting(n, k, alpha)?;
    let mut total = BigUint::zero();
    for a in 0..=max_swaps(k, alpha) {
        total += binomial(k, a) * binomial(n - k, a);
    }
    Ok(total)
}

/// Natural log of a count; `exact` is false when it came from log-gamma sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogCount {
    pub ln: f64,
    pub exact: bool,
}

/// Largest `n` for which counts are formed exactly before taking logs.
pub const EXACT_COUNT_LIMIT: usize = 64;

fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * core::f64::consts::LN_2
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let lg = |x: usize| libm::lgamma(x as f64 + 1.0);
    lg(n) - lg(k) - lg(n - k)
}

pub fn log_n_tilde(n: usize, k: usize, alpha: f64) -> Result<LogCount> {
    if n <= EXACT_COUNT_LIMIT {
        return Ok(LogCount { ln: big_ln(&n_tilde(n, k, alpha)?), exact: true });
    }
    check_counting(n, k, alpha)?;
    let terms: Vec<f64> =
        (0..=max_swaps(k, alpha)).map(|a| ln_binomial(k, a) + ln_binomial(n - k, a)).collect();
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = terms.iter().map(|t| (t - top).exp()).sum();
    Ok(LogCount { ln: top + s.ln(), exact: false })
}

pub fn log_binomial(n: usize, k: usize) -> LogCount {
    if n <= EXACT_COUNT_LIMIT {
        LogCount { ln: big_ln(&binomial(n, k)), exact: true }
    } else {
        LogCount { ln: ln_binomial(n, k), exact: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringBracket {
    /// `ceil(C(n,k) / ball)`.
    pub lower: u64,
    /// Size of the greedy cover.
    pub upper: u64,
    pub supports: u64,
    pub ball: u64,
    /// The greedy cover, as bit masks over `0..n`.
    pub centers: Vec<u32>,
}

impl CoveringBracket {
    /// `(1/n) ln` of the lower and upper ends.
    pub fn rates(&self, n: usize) -> (f64, f64) {
        ((self.lower as f64).ln() / n as f64, (self.upper as f64).ln() / n as f64)
    }
}

pub const COVERING_MAX_N: usize = 24;
/// Cap on `C(n,k) * ball`, the work of one greedy pass.
pub const COVERING_BUDGET: f64 = 2e8;

/// Index sets of size `k` in lexicographic order, as bit masks.
fn lex_supports(n: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u32, |m, &i| m | 1 << i));
        let Some(p) = (0..k).rev().find(|&p| idx[p] < n - k + p) else { return out };
        idx[p] += 1;
        for q in p + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

struct Colex {
    table: Vec<Vec<u64>>,
}

impl Colex {
    fn new(n: usize) -> Self {
        let mut table = vec![vec![0u64; n + 2]; n + 1];
        for i in 0..=n {
            table[i][0] = 1;
            for j in 1..=i {
                table[i][j] = table[i - 1][j - 1] + if j < i { table[i - 1][j] } else { 0 };
            }
        }
        Colex { table }
    }

    fn rank(&self, mut mask: u32) -> usize {
        let mut r = 0u64;
        let mut i = 0;
        while mask != 0 {
            let p = mask.trailing_zeros() as usize;
            i += 1;
            r += self.table[p][i];
            mask &= mask - 1;
        }
        r as usize
    }
}

fn for_each_subset(items: &[u32], size: usize, acc: u32, f: &mut impl FnMut(u32)) {
    if size == 0 {
        f(acc);
        return;
    }
    for i in 0..items.len() {
        if items.len() - i < size {
            break;
        }
        for_each_subset(&items[i + 1..], size - 1, acc | items[i], f);
    }
}

fn for_each_neighbor(mask: u32, n: usize, swaps: usize, f: &mut impl FnMut(u32)) {
    let inside: Vec<u32> = (0..n).map(|i| 1u32 << i).filter(|b| mask & b != 0).collect();
    let outside: Vec<u32> = (0..n).map(|i| 1u32 << i).filter(|b| mask & b == 0).collect();
    for a in 0..=swaps.min(inside.len()).min(outside.len()) {
        for_each_subset(&inside, a, 0, &mut |rem| {
            for_each_subset(&outside, a, 0, &mut |add| f(mask ^ rem ^ add));
        });
    }
}

/// Brackets the minimum number of size-`k` supports whose distortion-`alpha`
/// balls cover every size-`k` support of `0..n`. The upper end is a greedy
/// cover; ties go to the lexicographically smallest support, so the result
/// is deterministic.
pub fn covering_bracket(n: usize, k: usize, alpha: f64) -> Result<CoveringBracket> {
    if n > COVERING_MAX_N {
        return Err(domain("n", n as f64, "<= 24"));
    }
    if k == 0 {
        return Err(domain("k", 0.0, ">= 1"));
    }
    let total = binomial(n, k).to_u64().unwrap();
    let ball = n_tilde(n, k, alpha)?.to_u64().unwrap();
    let work = total as f64 * ball as f64;
    if work > COVERING_BUDGET {
        return Err(Error::Budget { required: work, limit: COVERING_BUDGET });
    }
    let swaps = max_swaps(k, alpha);
    let supports = lex_supports(n, k);
    let colex = Colex::new(n);
    let mut lex_of = vec![0usize; supports.len()];
    for (i, &s) in supports.iter().enumerate() {
        lex_of[colex.rank(s)] = i;
    }
    let index = |m: u32| lex_of[colex.rank(m)];

    let mut gain = vec![ball; supports.len()];
    let mut covered = vec![false; supports.len()];
    let mut remaining = supports.len();
    let mut centers = Vec::new();
    while remaining > 0 {
        let mut best = 0;
        for i in 1..gain.len() {
            if gain[i] > gain[best] {
                best = i;
            }
        }
        centers.push(supports[best]);
        let mut fresh = Vec::new();
        for_each_neighbor(supports[best], n, swaps, &mut |v| {
            let vi = index(v);
            if !covered[vi] {
                covered[vi] = true;
                fresh.push(v);
            }
        });
        remaining -= fresh.len();
        for v in fresh {
            for_each_neighbor(v, n, swaps, &mut |w| gain[index(w)] -= 1);
        }
    }
    let lower = total.div_ceil(ball);
    Ok(CoveringBracket { lower, upper: centers.len() as u64, supports: total, ball, centers })
}

/// `[P(F_beta) / P(F)] / beta^(2L)` for each `beta`, with `L` the decay rate.
pub fn power_ratio_scan(dist: &DistributionSpec, omega: f64, betas: &[f64]) -> Result<Vec<(f64, f64)>> {
    if !(omega > 0.0 && omega <= 1.0) {
        return Err(domain("omega", omega, "in (0, 1]"));
    }
    let full = omega * dist.moments().second_moment();
    let l = dist.decay_rate() as i32;
    betas
        .iter()
        .map(|&b| {
            if !(b > 0.0 && b <= 1.0) {
                return Err(domain("beta", b, "in (0, 1]"));
            }
            let p = omega * dist.truncate(b)?.second_moment();
            Ok((b, p / full / b.powi(2 * l)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::TailMass;
    use crate::ratefun::covering_rate;
    use proptest::prelude::*;

    #[test]
    fn zero_gamma_is_exactly_zero() {
        let c = McConfig::new(16, 0.5, 0.0, 3, 1).unwrap();
        let e = mp_logdet(&c).unwrap();
        assert_eq!(e.mean, 0.0);
        assert_eq!(e.target, 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(McConfig::new(7, 1.0, 1.0, 1, 0).is_err());
        assert!(McConfig::new(8, 0.01, 1.0, 1, 0).is_err());
        assert!(McConfig::new(8, 1.0, -1.0, 1, 0).is_err());
        assert!(McConfig::new(8, 1.0, 1.0, 0, 0).is_err());
        assert!(det_power(&McConfig::new(16, 0.5, 0.0, 1, 0).unwrap()).is_err());
    }

    #[test]
    fn orientation_does_not_change_the_estimator_target() {
        // Small-n sanity: both orientations land near the limit.
        for r in [0.5, 2.0] {
            let c = McConfig::new(64, r, 4.0, 40, 3).unwrap();
            let e = mp_logdet(&c).unwrap();
            assert!(e.relative_gap < 0.05, "r = {r}: {e:?}");
        }
    }

    #[test]
    fn det_power_paths_agree() {
        let (a, b) = det_power_paths(12, 12, 5);
        assert!((a - b).abs() < 1e-10 * a.abs(), "{a} vs {b}");
        let (a, b) = det_power_paths(12, 24, 6);
        assert!((a - b).abs() < 1e-10 * a.abs(), "{a} vs {b}");
    }

    #[test]
    fn det_power_targets() {
        assert!((det_power_target(1.0).unwrap() - 0.367_879_441_171_442_3).abs() < 1e-15);
        assert!((det_power_target(2.0).unwrap() - 0.735_758_882_342_884_7).abs() < 1e-15);
        assert!(det_power_target(0.9).is_err());
    }

    #[test]
    fn counting_examples() {
        assert_eq!(n_tilde(10, 2, 0.0).unwrap(), BigUint::one());
        assert_eq!(n_tilde(10, 2, 0.5).unwrap(), BigUint::from(17u32));
        assert_eq!(binomial(10, 2), BigUint::from(45u32));
        assert!(n_tilde(10, 6, 0.5).is_err());
        assert!(n_tilde(10, 2, 1.5).is_err());
    }

    #[test]
    fn n_tilde_matches_brute_force_neighborhoods() {
        let supports = lex_supports(10, 2);
        assert_eq!(supports.len(), 45);
        for &s in &supports {
            let near = supports.iter().filter(|&&t| (s & t).count_ones() >= 1).count();
            assert_eq!(near, 17);
        }
    }

    #[test]
    fn log_counts_switch_to_lgamma_past_the_limit() {
        let exact = log_n_tilde(60, 12, 0.25).unwrap();
        assert!(exact.exact);
        let big = n_tilde(60, 12, 0.25).unwrap();
        assert!((exact.ln - big.to_f64().unwrap().ln()).abs() < 1e-12);
        let approx = log_n_tilde(80, 16, 0.25).unwrap();
        assert!(!approx.exact);
        let direct = n_tilde(80, 16, 0.25).unwrap().to_f64().unwrap().ln();
        assert!((approx.ln - direct).abs() < 1e-9 * direct);
        assert!(!log_binomial(100, 3).exact);
    }

    #[test]
    fn small_bracket() {
        let b = covering_bracket(10, 2, 0.5).unwrap();
        assert_eq!(b.lower, 3);
        assert!(b.upper >= 3);
        assert_eq!(b.supports, 45);
        assert_eq!(b.ball, 17);
        // Every support lies within one swap of some center.
        for s in lex_supports(10, 2) {
            assert!(b.centers.iter().any(|&c| (c & s).count_ones() >= 1));
        }
        // First pick is the lexicographically smallest support {0, 1}.
        assert_eq!(b.centers[0], 0b11);
    }

    #[test]
    fn full_radius_needs_one_ball() {
        let b = covering_bracket(10, 2, 1.0).unwrap();
        assert_eq!((b.lower, b.upper), (1, 1));
    }

    #[test]
    fn covering_budget_is_enforced() {
        assert!(matches!(covering_bracket(24, 12, 0.5), Err(Error::Budget { .. })));
        assert!(covering_bracket(25, 2, 0.5).is_err());
    }

    #[test]
    fn bracket_rates_near_covering_rate() {
        let b = covering_bracket(16, 3, 0.5).unwrap();
        let (lo, hi) = b.rates(16);
        let r = covering_rate(3.0 / 16.0, 0.5).unwrap();
        assert!(lo <= hi);
        assert!((lo - r).abs() < 0.2 && (hi - r).abs() < 0.2, "{lo} {hi} {r}");
    }

    #[test]
    fn rank_deficiency_laws() {
        assert_eq!(rank_deficiency(16, 0.5, EntryLaw::Gaussian, 50, 1).unwrap(), 0.0);
        assert_eq!(rank_deficiency(8, 0.125, EntryLaw::Rademacher, 50, 1).unwrap(), 0.0);
        let p8 = rank_deficiency(8, 0.5, EntryLaw::Rademacher, 2000, 2).unwrap();
        let p16 = rank_deficiency(16, 0.5, EntryLaw::Rademacher, 2000, 2).unwrap();
        assert!(p8 > p16, "{p8} {p16}");
    }

    #[test]
    fn power_ratio_examples() {
        let g = DistributionSpec::gaussian(0.0, 1.0).unwrap();
        let r = power_ratio_scan(&g, 0.1, &[1.0, 1e-3]).unwrap();
        assert!((r[0].1 - 1.0).abs() < 1e-12);
        assert!((r[1].1 / (core::f64::consts::PI / 6.0) - 1.0).abs() < 0.01);
        let pm = DistributionSpec::point_mass(0.5, 2.0, TailMass::Finite(0.2)).unwrap();
        let pm_power = pm.moments().second_moment();
        for (_, ratio) in power_ratio_scan(&pm, 0.1, &[0.01, 0.3, 0.79, 0.8, 0.95]).unwrap() {
            assert!(ratio <= 1.0 + 1e-12 && ratio >= 0.5 / pm_power - 1e-12, "{ratio}");
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let c = McConfig::new(20, 1.5, 3.0, 5, 99).unwrap();
        assert_eq!(mp_logdet(&c).unwrap(), mp_logdet(&c).unwrap());
        assert_eq!(det_power(&c).unwrap(), det_power(&c).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bracket_is_ordered(n in 8usize..=14, kf in 0.1f64..0.5, alpha in 0.0f64..=1.0) {
            let k = ((kf * n as f64) as usize).max(1);
            let b = covering_bracket(n, k, alpha).unwrap();
            prop_assert!(b.lower <= b.upper);
            prop_assert!(BigUint::from(b.ball) <= binomial(n, k));
        }

        #[test]
        fn n_tilde_never_exceeds_total(n in 2usize..60, kf in 0.0f64..=0.5, alpha in 0.0f64..=1.0) {
            let k = (kf * n as f64) as usize;
            prop_assert!(n_tilde(n, k, alpha).unwrap() <= binomial(n, k));
        }
    }
}
