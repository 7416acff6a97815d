//! Source laws from command-line parameters.

use srd_core::distributions::{DistributionSpec, TailMass};
use srd_core::ratefun::SourceParams;

use crate::error::{CliError, Result};
use crate::params::{DistKind, Params};

pub const DEFAULT_ETA: f64 = 0.2;

/// Fills the shape parameter that belongs to the chosen law and rejects the
/// ones that do not.
pub fn complete_shape(p: &mut Params) -> Result<()> {
    let dist = p.dist.unwrap_or(DistKind::Gaussian);
    p.dist = Some(dist);
    let reject =
        |name: &str| Err(CliError::Usage(format!("`--{name}` does not apply to `{dist:?}`").to_lowercase()));
    match dist {
        DistKind::Gaussian | DistKind::Uniform => {
            if p.eta.is_some() {
                return reject("eta");
            }
            if p.tail_mass.is_some() {
                return reject("tail-mass");
            }
            p.mu2_over_sigma2.get_or_insert(0.0);
        }
        DistKind::Pointmass | DistKind::Sliced => {
            if p.mu2_over_sigma2.is_some() {
                return reject("mu2-over-sigma2");
            }
            if dist == DistKind::Sliced && p.tail_mass.is_some() {
                return reject("tail-mass");
            }
            p.eta.get_or_insert(DEFAULT_ETA);
        }
    }
    Ok(())
}

/// The law with unit second moment; callers rescale to their power.
pub fn shape(p: &Params) -> Result<DistributionSpec> {
    let d = match p.dist.unwrap_or(DistKind::Gaussian) {
        DistKind::Gaussian | DistKind::Uniform => {
            let r = p.mu2_over_sigma2.unwrap_or(0.0);
            if !(r >= 0.0 && r.is_finite()) {
                return Err(CliError::Usage(format!("mu2-over-sigma2 = {r} must be >= 0")));
            }
            let (mean, var) = (r.sqrt() / (1.0 + r).sqrt(), 1.0 / (1.0 + r));
            if p.dist == Some(DistKind::Uniform) {
                DistributionSpec::uniform(mean, var)?
            } else {
                DistributionSpec::gaussian(mean, var)?
            }
        }
        DistKind::Pointmass => {
            let tail = match p.tail_mass {
                Some(e) => TailMass::Finite(e),
                None => TailMass::Vanishing,
            };
            DistributionSpec::point_mass(p.eta.unwrap_or(DEFAULT_ETA), 1.0, tail)?
        }
        DistKind::Sliced => DistributionSpec::sliced_at_power(p.eta.unwrap_or(DEFAULT_ETA), 1.0)?,
    };
    Ok(d)
}

pub fn source_at_snr(p: &Params, omega: f64, snr_db: f64) -> Result<SourceParams> {
    Ok(SourceParams::at_snr(omega, shape(p)?, snr_db)?)
}

/// Point-mass and sliced-Gaussian laws with power `gamma` and floor
/// `b^2 = eta * gamma`. Either is `None` where its family does not admit the
/// floor (`eta = 0` for the point mass, `eta = 1` for the slice); at `eta = 0`
/// the slice is its floorless limit.
pub fn floor_candidates(eta: f64, gamma: f64) -> (Option<DistributionSpec>, Option<DistributionSpec>) {
    let pm = DistributionSpec::point_mass(eta * gamma, gamma, TailMass::Vanishing).ok();
    // With no floor the sliced law is a zero-mean Gaussian.
    let sl = if eta == 0.0 {
        DistributionSpec::gaussian(0.0, gamma).ok()
    } else {
        DistributionSpec::sliced_at_power(eta * gamma, gamma).ok()
    };
    (pm, sl)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_have_unit_power() {
        for (dist, extra) in [
            (DistKind::Gaussian, 0.0),
            (DistKind::Gaussian, 3.0),
            (DistKind::Uniform, 4.0),
            (DistKind::Pointmass, 0.0),
            (DistKind::Sliced, 0.0),
        ] {
            let mut p = Params { dist: Some(dist), ..Default::default() };
            if matches!(dist, DistKind::Gaussian | DistKind::Uniform) {
                p.mu2_over_sigma2 = Some(extra);
            }
            complete_shape(&mut p).unwrap();
            let m = shape(&p).unwrap().moments();
            assert!((m.second_moment() - 1.0).abs() < 1e-14, "{dist:?}");
            if extra > 0.0 {
                assert!((m.mean * m.mean / m.variance - extra).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn misplaced_shape_flags_are_rejected() {
        let mut p = Params { dist: Some(DistKind::Gaussian), eta: Some(0.2), ..Default::default() };
        assert!(complete_shape(&mut p).is_err());
        let mut p = Params { dist: Some(DistKind::Sliced), mu2_over_sigma2: Some(1.0), ..Default::default() };
        assert!(complete_shape(&mut p).is_err());
        let mut p = Params { dist: Some(DistKind::Pointmass), ..Default::default() };
        complete_shape(&mut p).unwrap();
        assert_eq!(p.eta, Some(DEFAULT_ETA));
    }

    #[test]
    fn candidate_edges() {
        let (pm, sl) = floor_candidates(0.0, 2.0);
        assert!(pm.is_none() && sl.is_some_and(|d| d.is_gaussian()));
        let (pm, sl) = floor_candidates(1.0, 2.0);
        assert!(pm.is_some() && sl.is_none());
        let (pm, sl) = floor_candidates(0.2, 2.0);
        assert!(pm.is_some() && sl.is_some());
    }
}
