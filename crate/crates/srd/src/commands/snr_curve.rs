use srd_core::bounds::{best_lower, BoundId, MatrixClass};
use srd_core::distributions::DistributionSpec;
use srd_core::ratefun::{snr_to_power, SourceParams};

use super::{grid, Output};
use crate::error::{CliError, Result};
use crate::output::{num, Table};
use crate::parallel::Pool;
use crate::params::Params;
use crate::source::floor_candidates;
use crate::svg::{Plot, Series};

const KEYS: &[&str] = &["omega", "alpha", "eta", "grid"];

pub fn resolve(mut p: Params) -> Result<Params> {
    p.check_keys("snr-curve", KEYS)?;
    p.omega.get_or_insert(1e-4);
    p.alpha.get_or_insert(0.1);
    p.eta.get_or_insert(0.2);
    p.grid.get_or_insert_with(|| "-20:60:17".into());
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnrPoint {
    pub snr_db: f64,
    pub point_mass: Option<(f64, BoundId)>,
    pub sliced: Option<(f64, BoundId)>,
}

impl SnrPoint {
    pub fn best(&self) -> Option<f64> {
        match (self.point_mass, self.sliced) {
            (Some(a), Some(b)) => Some(a.0.max(b.0)),
            (a, b) => a.or(b).map(|v| v.0),
        }
    }

    pub fn winner(&self) -> &'static str {
        match (self.point_mass, self.sliced) {
            (Some(a), Some(b)) if a.0 > b.0 => "point-mass",
            (Some(a), Some(b)) if b.0 > a.0 => "sliced",
            (Some(_), Some(_)) => "tie",
            (Some(_), None) => "point-mass",
            (None, Some(_)) => "sliced",
            (None, None) => "",
        }
    }
}

fn bound_for(omega: f64, alpha: f64, d: Option<DistributionSpec>) -> Result<Option<(f64, BoundId)>> {
    match d {
        None => Ok(None),
        Some(d) => Ok(Some(best_lower(&SourceParams::new(omega, d)?, alpha, MatrixClass::Iid)?)),
    }
}

pub fn curve(omega: f64, alpha: f64, eta: f64, snrs: &[f64], pool: &Pool) -> Result<Vec<SnrPoint>> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(CliError::Usage(format!("eta = {eta} must lie in [0, 1]")));
    }
    pool.map(snrs, |&db| {
        let gamma = snr_to_power(db) / omega;
        let (pm, sl) = floor_candidates(eta, gamma);
        Ok(SnrPoint {
            snr_db: db,
            point_mass: bound_for(omega, alpha, pm)?,
            sliced: bound_for(omega, alpha, sl)?,
        })
    })
    .into_iter()
    .collect()
}

pub fn run(p: &Params, pool: &Pool) -> Result<Output> {
    let (omega, alpha, eta) =
        (p.omega.unwrap_or_default(), p.alpha.unwrap_or_default(), p.eta.unwrap_or_default());
    let points = curve(omega, alpha, eta, &grid(&p.grid)?, pool)?;
    let mut table =
        Table::new(&["snr_db", "point_mass", "point_mass_bound", "sliced", "sliced_bound", "best", "winner"]);
    let cell = |v: Option<(f64, BoundId)>| match v {
        Some((r, b)) => (num(r), b.code().to_string()),
        None => (String::new(), String::new()),
    };
    let mut series = vec![
        Series { name: "best".into(), points: Vec::new() },
        Series { name: "point-mass".into(), points: Vec::new() },
        Series { name: "sliced".into(), points: Vec::new() },
    ];
    for pt in &points {
        let (a, ab) = cell(pt.point_mass);
        let (b, bb) = cell(pt.sliced);
        table.push(vec![
            num(pt.snr_db),
            a,
            ab,
            b,
            bb,
            pt.best().map(num).unwrap_or_default(),
            pt.winner().into(),
        ]);
        if let Some(v) = pt.best() {
            series[0].points.push((pt.snr_db, v));
        }
        if let Some(v) = pt.point_mass {
            series[1].points.push((pt.snr_db, v.0));
        }
        if let Some(v) = pt.sliced {
            series[2].points.push((pt.snr_db, v.0));
        }
    }
    let mut out = Output::table(table);
    out.plot = Some(Plot {
        title: format!("alpha={alpha}, eta={eta}, omega={omega}"),
        x_label: "SNR (dB)".into(),
        y_label: "sampling rate rho".into(),
        log_x: false,
        log_y: true,
        series,
    });
    Ok(out)
}
