use srd_core::bounds::{evaluate, BoundId};
use srd_core::Error;

use super::{grid, Output};
use crate::error::{CliError, Result};
use crate::output::{num, opt_num, Table};
use crate::parallel::Pool;
use crate::params::{DistKind, Params};
use crate::source::{complete_shape, source_at_snr};
use crate::svg::{Plot, Series};

const KEYS: &[&str] = &["dist", "omega", "snr_db", "eta", "mu2_over_sigma2", "tail_mass", "bounds", "grid"];

fn default_bounds(dist: DistKind) -> &'static str {
    match dist {
        DistKind::Gaussian => "p3,t2,p4,p5,p6,t4",
        DistKind::Uniform | DistKind::Sliced => "p3,t2,p4,p6,t4",
        DistKind::Pointmass => "p3,t2,p4,t4",
    }
}

pub fn resolve(mut p: Params) -> Result<Params> {
    p.check_keys("bounds", KEYS)?;
    complete_shape(&mut p)?;
    p.omega.get_or_insert(1e-4);
    p.snr_db.get_or_insert(50.0);
    let dist = p.dist.unwrap_or(DistKind::Gaussian);
    p.bounds.get_or_insert_with(|| default_bounds(dist).into());
    p.grid.get_or_insert_with(|| "log:1e-4:0.5:25".into());
    Ok(p)
}

pub fn parse_bounds(list: &str) -> Result<Vec<BoundId>> {
    let codes: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if codes.is_empty() {
        return Err(CliError::Usage("empty bound list".into()));
    }
    codes
        .into_iter()
        .map(|c| {
            let id: BoundId = c.parse().map_err(|_| CliError::Usage(format!("unknown bound `{c}`")))?;
            if id == BoundId::C1Test {
                return Err(CliError::Usage("`c1` is a test, not a rate".into()));
            }
            Ok(id)
        })
        .collect()
}

pub fn run(p: &Params, pool: &Pool) -> Result<Output> {
    let ids = parse_bounds(p.bounds.as_deref().unwrap_or_default())?;
    let source = source_at_snr(p, p.omega.unwrap_or_default(), p.snr_db.unwrap_or_default())?;
    let alphas = grid(&p.grid)?;
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
        return Err(CliError::Usage(format!("alpha grid value {a} is outside (0, 1]")));
    }
    let jobs: Vec<(BoundId, f64)> = ids.iter().flat_map(|&b| alphas.iter().map(move |&a| (b, a))).collect();
    let values = pool.map(&jobs, |&(b, a)| evaluate(b, &source, a));

    let mut table = Table::new(&["bound", "alpha", "rho", "beta_star", "status"]);
    let mut report = String::new();
    let mut series: Vec<Series> = Vec::new();
    for (&(b, a), v) in jobs.iter().zip(values) {
        if series.last().map(|s| s.name.as_str()) != Some(b.code()) {
            series.push(Series { name: b.code().into(), points: Vec::new() });
        }
        match v {
            Ok(v) => {
                table.push(vec![b.code().into(), num(a), num(v.rho), opt_num(v.beta_star), "ok".into()]);
                series.last_mut().unwrap().points.push((v.rho, a));
            }
            Err(e @ (Error::Unsupported(_) | Error::MissingDensity { .. } | Error::Domain { .. })) => {
                return Err(CliError::Usage(format!("bound {}: {e}", b.code())));
            }
            Err(e) => {
                report.push_str(&format!("warning: {} at alpha={a}: {e}\n", b.code()));
                table.push(vec![b.code().into(), num(a), num(f64::NAN), String::new(), "failed".into()]);
            }
        }
    }
    let plot = Plot {
        title: format!(
            "{:?} source, omega={}, {} dB",
            p.dist.unwrap_or(DistKind::Gaussian),
            source.omega,
            p.snr_db.unwrap_or_default()
        )
        .to_lowercase(),
        x_label: "sampling rate rho".into(),
        y_label: "distortion alpha".into(),
        log_x: true,
        log_y: true,
        series,
    };
    let mut out = Output::table(table);
    out.plot = Some(plot);
    out.report = report;
    Ok(out)
}
