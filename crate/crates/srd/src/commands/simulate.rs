use srd_core::simulate::{run_experiment_with, success_rate, MatrixKind, Noise, SimConfig};

use super::Output;
use crate::error::{CliError, Result};
use crate::output::{num, Table};
use crate::parallel::Pool;
use crate::params::{MatrixArg, Params};
use crate::source::{complete_shape, shape};

const KEYS: &[&str] = &[
    "dist",
    "omega",
    "snr_db",
    "noiseless",
    "eta",
    "mu2_over_sigma2",
    "tail_mass",
    "rho",
    "matrix",
    "epsilon",
    "n",
    "trials",
    "seed",
    "alpha",
    "budget",
];

pub fn resolve(mut p: Params) -> Result<Params> {
    p.check_keys("simulate", KEYS)?;
    complete_shape(&mut p)?;
    p.n.get_or_insert(20);
    p.omega.get_or_insert(0.1);
    p.rho.get_or_insert(0.15);
    p.trials.get_or_insert(100);
    p.seed.get_or_insert(0);
    p.alpha.get_or_insert(0.1);
    let matrix = *p.matrix.get_or_insert(MatrixArg::Iid);
    match matrix {
        MatrixArg::RateSharing => {
            p.epsilon.get_or_insert(0.1);
        }
        MatrixArg::Iid if p.epsilon.is_some() => {
            return Err(CliError::Usage("`--epsilon` applies only to `--matrix rate-sharing`".into()));
        }
        MatrixArg::Iid => {}
    }
    match (p.noiseless, p.snr_db) {
        (Some(true), Some(_)) => {
            return Err(CliError::Usage("`--noiseless` conflicts with `--snr-db`".into()));
        }
        (Some(false), None) => return Err(CliError::Usage("noisy runs need `--snr-db`".into())),
        (_, None) => p.noiseless = Some(true),
        (_, Some(_)) => p.noiseless = Some(false),
    }
    Ok(p)
}

fn join(s: &[usize]) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn config(p: &Params) -> Result<SimConfig> {
    let noise = match p.snr_db {
        Some(db) if p.noiseless != Some(true) => Noise::SnrDb(db),
        _ => Noise::Noiseless,
    };
    let matrix = match p.matrix.unwrap_or(MatrixArg::Iid) {
        MatrixArg::Iid => MatrixKind::IidGaussian,
        MatrixArg::RateSharing => MatrixKind::RateSharing { epsilon: p.epsilon.unwrap_or(0.1) },
    };
    let c = SimConfig::new(
        p.n.unwrap_or(20),
        p.omega.unwrap_or(0.1),
        shape(p)?,
        noise,
        p.rho.unwrap_or(0.15),
        matrix,
        p.trials.unwrap_or(100),
        p.seed.unwrap_or(0),
    );
    match c {
        Err(srd_core::Error::Budget { required, limit }) => Err(CliError::Budget(format!(
            "exhaustive search over C(n,k) = {required} supports exceeds the limit of {limit}"
        ))),
        other => Ok(other?),
    }
}

pub fn run(p: &Params, pool: &Pool) -> Result<Output> {
    let cfg = config(p)?;
    let exp = run_experiment_with(pool, &cfg, p.budget)?;
    let alpha = p.alpha.unwrap_or(0.1);
    let mut table = Table::new(&[
        "trial",
        "distortion",
        "exact",
        "declared_error",
        "residual_min",
        "runner_up_gap",
        "support",
        "estimate",
    ]);
    for o in &exp.outcomes {
        table.push(vec![
            o.trial.to_string(),
            num(o.distortion),
            o.exact.to_string(),
            o.declared_error.to_string(),
            num(o.residual_min),
            num(o.runner_up_gap),
            join(&o.support),
            join(&o.estimate),
        ]);
    }
    let s = exp.summary;
    let (succ, succ_se) = success_rate(&exp.outcomes, alpha);
    let mut summary = Table::new(&[
        "trials",
        "n",
        "k",
        "m",
        "mean_distortion",
        "distortion_std_error",
        "exact_rate",
        "exact_std_error",
        "alpha",
        "success_rate",
        "success_std_error",
        "declared_errors",
        "truncated",
    ]);
    summary.push(vec![
        s.trials.to_string(),
        cfg.n.to_string(),
        cfg.k().to_string(),
        cfg.m().to_string(),
        num(s.mean_distortion),
        num(s.distortion_std_error),
        num(s.exact_rate),
        num(s.exact_std_error),
        num(alpha),
        num(succ),
        num(succ_se),
        s.declared_errors.to_string(),
        s.truncated.to_string(),
    ]);
    let mut report = format!(
        "trials = {}\nn = {}, k = {}, m = {}\nmean_distortion = {:.6} +- {:.6}\nexact_rate = {:.6} +- {:.6}\n\
         success_rate(alpha={alpha}) = {:.6} +- {:.6}\nsuccess_rate_below_0.9 = {}\ndeclared_errors = {}\n",
        s.trials,
        cfg.n,
        cfg.k(),
        cfg.m(),
        s.mean_distortion,
        s.distortion_std_error,
        s.exact_rate,
        s.exact_std_error,
        succ,
        succ_se,
        succ < 0.9,
        s.declared_errors,
    );
    if s.truncated {
        report.push_str(&format!("truncated: budget allowed {} of {} trials\n", s.trials, cfg.trials));
    }
    let mut out = Output::table(table);
    out.extra.push((".summary.csv", summary));
    out.report = report;
    Ok(out)
}
