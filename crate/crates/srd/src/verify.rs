//! Verification suites: Monte-Carlo and oracle checks of the limit laws,
//! counting arguments and truncation formulas.

use std::f64::consts::PI;
use std::str::FromStr;

use srd_core::distributions::{truncate_oracle, DistributionSpec, OracleMethod, TailMass};
use srd_core::montecarlo::{
    covering_bracket, det_power_paths, det_power_with, mp_logdet_sweep, n_tilde, power_ratio_scan,
    rank_deficiency_with, EntryLaw, McConfig,
};
use srd_core::ratefun::covering_rate;
use srd_core::runner::TrialRunner;

use crate::error::{CliError, Result};
use crate::output::{num, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    MpLogdet,
    DetPower,
    Covering,
    Truncation,
    PowerRatio,
    Rank,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::MpLogdet,
        Suite::DetPower,
        Suite::Covering,
        Suite::Truncation,
        Suite::PowerRatio,
        Suite::Rank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::MpLogdet => "mp_logdet",
            Suite::DetPower => "det_power",
            Suite::Covering => "covering",
            Suite::Truncation => "truncation",
            Suite::PowerRatio => "power_ratio",
            Suite::Rank => "rank",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown suite `{s}`")))
    }
}

pub fn parse_suites(list: &str) -> Result<Vec<Suite>> {
    if list.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    list.split(',').map(str::parse).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub target: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `gap <= tolerance`.
    fn within(suite: Suite, name: String, measured: f64, target: f64, gap: f64, tolerance: f64) -> Check {
        Check { suite: suite.name(), name, measured, target, gap, tolerance, pass: gap <= tolerance }
    }
}

pub fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new(&["suite", "check", "measured", "target", "gap", "tolerance", "pass"]);
    for c in checks {
        t.push(vec![
            c.suite.to_string(),
            c.name.clone(),
            num(c.measured),
            num(c.target),
            num(c.gap),
            num(c.tolerance),
            c.pass.to_string(),
        ]);
    }
    t
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct VerifyOptions {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub trials: Option<u64>,
    pub seed: u64,
}

pub fn run_suite<R: TrialRunner>(suite: Suite, opts: &VerifyOptions, runner: &R) -> Result<Vec<Check>> {
    match suite {
        Suite::MpLogdet => mp_logdet(opts, runner),
        Suite::DetPower => det_power(opts, runner),
        Suite::Covering => covering(opts),
        Suite::Truncation => truncation(opts),
        Suite::PowerRatio => power_ratio(),
        Suite::Rank => rank(opts, runner),
    }
}

pub const MP_TOLERANCE: f64 = 0.02;
pub const DET_POWER_TOLERANCE: f64 = 0.03;

fn mp_logdet<R: TrialRunner>(opts: &VerifyOptions, runner: &R) -> Result<Vec<Check>> {
    let n = opts.n.unwrap_or(400);
    let trials = opts.trials.unwrap_or(50);
    let gammas = [1.0, 10.0, 100.0];
    let mut out = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        let est = mp_logdet_sweep(runner, n, r, &gammas, trials, opts.seed)?;
        for (g, e) in gammas.iter().zip(est) {
            out.push(Check::within(
                Suite::MpLogdet,
                format!("n={n} r={r} gamma={g}"),
                e.mean,
                e.target,
                e.relative_gap,
                MP_TOLERANCE,
            ));
        }
    }
    let zero = mp_logdet_sweep(runner, n.min(64), 1.0, &[0.0], 2, opts.seed)?[0];
    out.push(Check::within(Suite::MpLogdet, "gamma=0".into(), zero.mean, 0.0, zero.mean.abs(), 0.0));
    Ok(out)
}

fn det_power<R: TrialRunner>(opts: &VerifyOptions, runner: &R) -> Result<Vec<Check>> {
    let n = opts.n.unwrap_or(400);
    let trials = opts.trials.unwrap_or(20);
    let mut out = Vec::new();
    for r in [1.0, 2.0] {
        let e = det_power_with(runner, &McConfig::new(n, r, 0.0, trials, opts.seed)?)?;
        out.push(Check::within(
            Suite::DetPower,
            format!("n={n} r={r}"),
            e.mean,
            e.target,
            e.relative_gap,
            DET_POWER_TOLERANCE,
        ));
    }
    for m in [12, 24] {
        let (log_path, direct) = det_power_paths(12, m, opts.seed);
        out.push(Check::within(
            Suite::DetPower,
            format!("log-domain vs direct n=12 m={m}"),
            log_path,
            direct,
            (log_path - direct).abs() / direct.abs(),
            1e-10,
        ));
    }
    Ok(out)
}

pub const COVERING_RATE_TOLERANCE: f64 = 0.15;

fn covering(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let n = opts.n.unwrap_or(10);
    let k = opts.k.unwrap_or(2);
    let alpha = opts.alpha.unwrap_or(0.5);
    let b = covering_bracket(n, k, alpha)?;
    let s = Suite::Covering;
    let tag = format!("n={n} k={k} alpha={alpha}");
    let mut out = Vec::new();

    // Direct count of supports sharing at least k - floor(alpha k) indices.
    let supports: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() as usize == k).collect();
    let ball = n_tilde(n, k, alpha)?;
    let ball = ball.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    let within = |a: u32, c: u32| 1.0 - (a & c).count_ones() as f64 / k as f64 <= alpha + 1e-12;
    let first = supports[0];
    let brute = supports.iter().filter(|&&t| within(first, t)).count() as f64;
    out.push(Check::within(s, format!("{tag} ball size"), brute, ball, (brute - ball).abs(), 0.0));
    let uncovered = supports.iter().filter(|&&t| !b.centers.iter().any(|&c| within(c, t))).count() as f64;
    out.push(Check::within(s, format!("{tag} cover complete"), uncovered, 0.0, uncovered, 0.0));
    out.push(Check::within(
        s,
        format!("{tag} lower <= upper"),
        b.lower as f64,
        b.upper as f64,
        b.lower as f64 - b.upper as f64,
        0.0,
    ));
    let r = covering_rate(k as f64 / n as f64, alpha)?;
    let (lo, hi) = b.rates(n);
    for (end, v) in [("lower", lo), ("upper", hi)] {
        out.push(Check::within(
            s,
            format!("{tag} {end} end rate"),
            v,
            r,
            (v - r).abs(),
            COVERING_RATE_TOLERANCE,
        ));
    }
    Ok(out)
}

pub const ORACLE_BETAS: [f64; 8] = [0.05, 0.1, 0.2, 0.35, 0.5, 0.7, 0.85, 0.99];
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;
/// Relative rounding level added to Monte Carlo standard errors.
pub const ROUNDING_FLOOR: f64 = 1e-12;
pub const MC_SIGMAS: f64 = 3.0;
pub const MC_SAMPLES: usize = 4_000_000;

/// The five continuous laws of the truncation grid, at unit variance.
pub fn oracle_laws() -> Vec<(String, DistributionSpec)> {
    let ok = |d: srd_core::Result<DistributionSpec>| d.expect("valid law");
    vec![
        ("gaussian mu2/s2=0".into(), ok(DistributionSpec::gaussian(0.0, 1.0))),
        ("gaussian mu2/s2=1".into(), ok(DistributionSpec::gaussian(1.0, 1.0))),
        ("uniform mu2/s2=0".into(), ok(DistributionSpec::uniform(0.0, 1.0))),
        ("uniform mu2/s2=12".into(), ok(DistributionSpec::uniform(12f64.sqrt(), 1.0))),
        ("sliced eta=0.2".into(), ok(DistributionSpec::sliced_at_power(0.2, 1.0))),
    ]
}

/// Truncation of a two-atom magnitude law computed from the atoms directly:
/// keep all inner mass first, then the part of the outer atom needed to
/// reach `beta`.
pub fn atom_truncated_power(floor_sq: f64, power: f64, tail: f64, beta: f64) -> f64 {
    let outer_sq = (power - (1.0 - tail) * floor_sq) / tail;
    let inner = (1.0 - tail).min(beta);
    let outer = beta - inner;
    (inner * floor_sq + outer * outer_sq) / beta
}

fn truncation(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let s = Suite::Truncation;
    let samples = opts.trials.map(|t| t as usize).unwrap_or(MC_SAMPLES);
    let mut out = Vec::new();
    let mix = |a: f64, b: f64| (a - b).abs() / (1.0 + b.abs());
    for (i, (label, d)) in oracle_laws().into_iter().enumerate() {
        for (j, &beta) in ORACLE_BETAS.iter().enumerate() {
            let c = d.truncate(beta)?;
            let q = truncate_oracle(&d, beta, OracleMethod::Quadrature, 4000)?.result;
            let tag = format!("{label} beta={beta}");
            let quad = QUADRATURE_TOLERANCE;
            out.push(Check::within(
                s,
                format!("{tag} quadrature mean"),
                c.mean,
                q.mean,
                mix(c.mean, q.mean),
                quad,
            ));
            out.push(Check::within(
                s,
                format!("{tag} quadrature variance"),
                c.variance,
                q.variance,
                (c.variance - q.variance).abs() / q.variance,
                quad,
            ));
            let (ch, qh) = (c.entropy.unwrap_or(f64::NAN), q.entropy.unwrap_or(f64::NAN));
            out.push(Check::within(s, format!("{tag} quadrature entropy"), ch, qh, mix(ch, qh), quad));

            let seed = opts.seed.wrapping_add((i * ORACLE_BETAS.len() + j) as u64);
            let m = truncate_oracle(&d, beta, OracleMethod::MonteCarlo { seed }, samples)?;
            // A constant log-density gives a zero-variance entropy estimate, so the
            // error is floored at rounding level.
            let z = |a: f64, b: f64, se: f64| (a - b).abs() / se.hypot(ROUNDING_FLOOR * (1.0 + b.abs()));
            if c.mean != 0.0 {
                out.push(Check::within(
                    s,
                    format!("{tag} monte-carlo mean (sigmas)"),
                    c.mean,
                    m.result.mean,
                    z(c.mean, m.result.mean, m.mean_error),
                    MC_SIGMAS,
                ));
            }
            out.push(Check::within(
                s,
                format!("{tag} monte-carlo variance (sigmas)"),
                c.variance,
                m.result.variance,
                z(c.variance, m.result.variance, m.variance_error),
                MC_SIGMAS,
            ));
            let mh = m.result.entropy.unwrap_or(f64::NAN);
            out.push(Check::within(
                s,
                format!("{tag} monte-carlo entropy (sigmas)"),
                ch,
                mh,
                z(ch, mh, m.entropy_error.unwrap_or(f64::NAN)),
                MC_SIGMAS,
            ));
        }
    }
    for (b2, g, eps) in [(0.3, 2.0, 0.1), (0.5, 1.0, 0.25)] {
        let d = DistributionSpec::point_mass(b2, g, TailMass::Finite(eps))?;
        for &beta in ORACLE_BETAS.iter().chain(&[1.0]) {
            let c = d.truncate(beta)?.second_moment();
            let a = atom_truncated_power(b2, g, eps, beta);
            out.push(Check::within(
                s,
                format!("point-mass b2={b2} power={g} tail={eps} beta={beta} atoms"),
                c,
                a,
                (c - a).abs() / a,
                4.0 * f64::EPSILON,
            ));
        }
    }
    Ok(out)
}

pub const PI_OVER_6_TOLERANCE: f64 = 0.01;

fn power_ratio() -> Result<Vec<Check>> {
    let s = Suite::PowerRatio;
    let mut out = Vec::new();
    let g = DistributionSpec::gaussian(0.0, 1.0)?;
    let r = power_ratio_scan(&g, 0.1, &[1.0, 1e-3])?;
    out.push(Check::within(s, "gaussian beta=1".into(), r[0].1, 1.0, (r[0].1 - 1.0).abs(), 1e-12));
    let six = PI / 6.0;
    out.push(Check::within(
        s,
        "gaussian beta=1e-3 vs pi/6".into(),
        r[1].1,
        six,
        (r[1].1 - six).abs() / six,
        PI_OVER_6_TOLERANCE,
    ));
    let u = DistributionSpec::uniform(0.0, 1.0)?;
    let betas = [1e-4, 1e-2, 0.3, 0.9];
    let worst = power_ratio_scan(&u, 0.1, &betas)?.iter().map(|p| (p.1 - 1.0).abs()).fold(0.0, f64::max);
    out.push(Check::within(s, "zero-mean uniform ratio is 1".into(), worst, 0.0, worst, 1e-12));
    let (b2, gamma) = (0.3, 1.0);
    let pm = DistributionSpec::point_mass(b2, gamma, TailMass::Finite(0.1))?;
    let ratios: Vec<f64> =
        power_ratio_scan(&pm, 0.1, &[1e-3, 0.1, 0.5, 0.9, 0.95, 0.99])?.iter().map(|p| p.1).collect();
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(Check::within(s, "point-mass ratio <= 1".into(), hi, 1.0, hi - 1.0, 1e-12));
    out.push(Check::within(
        s,
        "point-mass ratio >= floor/power".into(),
        lo,
        b2 / gamma,
        b2 / gamma - lo,
        1e-12,
    ));
    Ok(out)
}

fn rank<R: TrialRunner>(opts: &VerifyOptions, runner: &R) -> Result<Vec<Check>> {
    let s = Suite::Rank;
    let trials = opts.trials.unwrap_or(2000);
    let mut out = Vec::new();
    for n in [8, 16, 32] {
        let p = rank_deficiency_with(runner, n, 0.5, EntryLaw::Gaussian, trials.min(500), opts.seed)?;
        out.push(Check::within(s, format!("gaussian n={n}"), p, 0.0, p, 0.0));
    }
    let p1 = rank_deficiency_with(runner, 8, 0.125, EntryLaw::Rademacher, trials, opts.seed)?;
    out.push(Check::within(s, "rademacher k=1".into(), p1, 0.0, p1, 0.0));
    let probs: Vec<f64> = [8, 16, 32]
        .iter()
        .map(|&n| rank_deficiency_with(runner, n, 0.5, EntryLaw::Rademacher, trials, opts.seed))
        .collect::<srd_core::Result<_>>()?;
    for (w, n) in probs.windows(2).zip([16, 32]) {
        out.push(Check {
            suite: s.name(),
            name: format!("rademacher n={n} below n={}", n / 2),
            measured: w[1],
            target: w[0],
            gap: w[1] - w[0],
            tolerance: 0.0,
            pass: w[1] < w[0],
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use srd_core::runner::Serial;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(parse_suites("all").unwrap().len(), 6);
        assert!(parse_suites("rank,nope").is_err());
    }

    #[test]
    fn atom_formula() {
        assert_eq!(atom_truncated_power(0.3, 2.0, 0.1, 0.5), 0.3);
        assert!((atom_truncated_power(0.3, 2.0, 0.1, 1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn small_suites_pass() {
        let opts = VerifyOptions { seed: 1, ..Default::default() };
        for suite in [Suite::Covering, Suite::PowerRatio] {
            for c in run_suite(suite, &opts, &Serial).unwrap() {
                assert!(c.pass, "{c:?}");
            }
        }
    }
}
