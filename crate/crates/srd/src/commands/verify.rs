use super::Output;
use crate::error::{CliError, Result};
use crate::parallel::Pool;
use crate::params::Params;
use crate::verify::{checks_table, parse_suites, run_suite, VerifyOptions};

const KEYS: &[&str] = &["suite", "n", "k", "alpha", "trials", "seed"];

pub fn resolve(mut p: Params) -> Result<Params> {
    p.check_keys("verify", KEYS)?;
    p.suite.get_or_insert_with(|| "all".into());
    p.seed.get_or_insert(0);
    Ok(p)
}

pub fn run(p: &Params, pool: &Pool) -> Result<Output> {
    let suites = parse_suites(p.suite.as_deref().unwrap_or("all"))?;
    let opts = VerifyOptions { n: p.n, k: p.k, alpha: p.alpha, trials: p.trials, seed: p.seed.unwrap_or(0) };
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(run_suite(s, &opts, pool)?);
    }
    let mut report = String::new();
    for c in &checks {
        report.push_str(&format!(
            "{} {} / {}: gap {:.3e} (tolerance {:.3e})\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            c.gap,
            c.tolerance
        ));
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    report.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    let mut out = Output::table(checks_table(&checks));
    out.report = report;
    if failed > 0 {
        out.failure = Some(CliError::Verification(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(out)
}
