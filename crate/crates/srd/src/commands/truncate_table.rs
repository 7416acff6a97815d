use srd_core::montecarlo::power_ratio_scan;

use super::{grid, Output};
use crate::error::Result;
use crate::output::{num, opt_num, Table};
use crate::params::Params;
use crate::source::{complete_shape, shape};

const KEYS: &[&str] = &["dist", "eta", "mu2_over_sigma2", "tail_mass", "grid"];

pub fn resolve(mut p: Params) -> Result<Params> {
    p.check_keys("truncate-table", KEYS)?;
    complete_shape(&mut p)?;
    p.grid.get_or_insert_with(|| "0.05:1:20".into());
    Ok(p)
}

/// Moments of the law (scaled to unit second moment) truncated at each beta.
pub fn run(p: &Params) -> Result<Output> {
    let d = shape(p)?;
    let betas = grid(&p.grid)?;
    let ratios = power_ratio_scan(&d, 1.0, &betas)?;
    let mut table =
        Table::new(&["beta", "threshold", "mean", "variance", "second_moment", "entropy", "power_ratio"]);
    for (&beta, (_, ratio)) in betas.iter().zip(ratios) {
        let t = d.truncate(beta)?;
        table.push(vec![
            num(beta),
            num(t.threshold),
            num(t.mean),
            num(t.variance),
            num(t.second_moment()),
            opt_num(t.entropy),
            num(ratio),
        ]);
    }
    Ok(Output::table(table))
}
