//! Run parameters shared by every subcommand.
//!
//! Values come from flags, then from a TOML config file, then from the
//! command's defaults. A config file may hold the keys at top level or under
//! a `[config]` table, so a run manifest can be fed back in directly.

use std::path::Path;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistKind {
    Gaussian,
    Uniform,
    Pointmass,
    Sliced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixArg {
    Iid,
    RateSharing,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Law of the nonzero entries.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist: Option<DistKind>,
    /// Sparsity rate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Sample SNR in dB.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
    /// Omit the noise (simulate only).
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noiseless: Option<bool>,
    /// Target distortion.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Floor fraction: `b^2 = eta * E[X^2]` for the point-mass and sliced laws.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Squared mean over variance for the Gaussian and uniform laws.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu2_over_sigma2: Option<f64>,
    /// Outer-atom mass of the point-mass law; omit for the vanishing limit.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_mass: Option<f64>,
    /// Rate-sharing slack.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Comma-separated bound codes.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<String>,
    /// Grid: `a:b:n`, `log:a:b:n`, or `x,y,z`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    /// Dimension.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Support size (covering suite).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Sampling rate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixArg>,
    /// Comma-separated verification suites.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    /// Cap on supports examined across all trials.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
}

macro_rules! merge_fields {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Params { $($f: $a.$f.or($b.$f)),* }
    };
}

impl Params {
    /// Field-wise `self` over `fallback`.
    pub fn or(self, fallback: Params) -> Params {
        let (a, b) = (self, fallback);
        merge_fields!(a, b; dist, omega, snr_db, noiseless, alpha, eta, mu2_over_sigma2,
            tail_mass, epsilon, bounds, grid, seed, trials, n, k, rho, matrix, suite, budget)
    }

    pub fn from_file(path: &Path) -> Result<Params> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn from_toml(text: &str) -> std::result::Result<Params, String> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| e.to_string())?;
        let inner = match table.remove("config") {
            Some(toml::Value::Table(t)) => t,
            Some(_) => return Err("`config` must be a table".into()),
            None => table,
        };
        Params::deserialize(toml::Value::Table(inner)).map_err(|e| e.to_string())
    }

    fn keys(&self) -> Result<Vec<String>> {
        Ok(self.table()?.keys().cloned().collect())
    }

    fn table(&self) -> Result<toml::Table> {
        toml::Table::try_from(self).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    /// Rejects keys a command does not use.
    pub fn check_keys(&self, command: &str, allowed: &[&str]) -> Result<()> {
        for key in self.keys()? {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "`{}` does not apply to `{command}`",
                    key.replace('_', "-")
                )));
            }
        }
        Ok(())
    }

    /// Canonical TOML text: fixed key order, unset keys omitted.
    pub fn canonical(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    /// SHA-256 over the command name and the canonical text.
    pub fn hash(&self, command: &str) -> Result<String> {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update(b"\n");
        h.update(self.canonical()?.as_bytes());
        Ok(hex::encode(h.finalize()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let flags = Params { omega: Some(0.1), ..Default::default() };
        let file = Params { omega: Some(0.2), alpha: Some(0.3), ..Default::default() };
        let p = flags.or(file);
        assert_eq!((p.omega, p.alpha), (Some(0.1), Some(0.3)));
    }

    #[test]
    fn reads_top_level_or_config_table() {
        let a = Params::from_toml("omega = 0.1\ndist = \"sliced\"\n").unwrap();
        let b =
            Params::from_toml("command = \"bounds\"\n[config]\nomega = 0.1\ndist = \"sliced\"\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dist, Some(DistKind::Sliced));
        assert!(Params::from_toml("omegaa = 1.0").is_err());
    }

    #[test]
    fn canonical_round_trip_and_hash() {
        let p = Params {
            dist: Some(DistKind::Uniform),
            snr_db: Some(-20.0),
            matrix: Some(MatrixArg::RateSharing),
            seed: Some(7),
            ..Default::default()
        };
        let text = p.canonical().unwrap();
        assert_eq!(Params::from_toml(&text).unwrap(), p);
        assert_eq!(p.hash("bounds").unwrap(), p.hash("bounds").unwrap());
        assert_ne!(p.hash("bounds").unwrap(), p.hash("simulate").unwrap());
        assert_eq!(p.hash("x").unwrap().len(), 64);
    }

    #[test]
    fn key_check() {
        let p = Params { suite: Some("rank".into()), ..Default::default() };
        assert!(p.check_keys("bounds", &["omega"]).is_err());
        assert!(p.check_keys("verify", &["suite"]).is_ok());
    }
}
