//! CSV tables and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::params::Params;

/// Twelve significant digits in scientific notation; locale independent.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        format!("{v}")
    }
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }

    /// Writes to `out`, or to stdout when no path is given.
    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        let bytes = self.to_bytes()?;
        match out {
            Some(p) => std::fs::write(p, bytes)?,
            None => std::io::stdout().lock().write_all(&bytes)?,
        }
        Ok(())
    }
}

/// `<out>` with `suffix` appended to the file name.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config_hash: String,
    seed: u64,
    tool_version: &'static str,
    timestamp: String,
    outputs: Vec<String>,
    config: &'a Params,
}

pub fn manifest_text(command: &str, config: &Params, outputs: &[PathBuf]) -> Result<String> {
    let m = Manifest {
        command,
        config_hash: config.hash(command)?,
        seed: config.seed.unwrap_or(0),
        tool_version: env!("CARGO_PKG_VERSION"),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        outputs: outputs
            .iter()
            .map(|p| p.file_name().unwrap_or(p.as_os_str()).to_string_lossy().into_owned())
            .collect(),
        config,
    };
    toml::to_string(&m).map_err(|e| crate::CliError::Usage(format!("manifest: {e}")))
}

/// Writes `<out>.manifest.toml` describing the run.
pub fn write_manifest(out: &Path, command: &str, config: &Params, outputs: &[PathBuf]) -> Result<PathBuf> {
    let path = sibling(out, ".manifest.toml");
    std::fs::write(&path, manifest_text(command, config, outputs)?)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(0.1), "1.00000000000e-1");
        assert_eq!(num(-123456.789012345), "-1.23456789012e5");
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(opt_num(None), "");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![num(1.0), "x".into()]);
        assert_eq!(String::from_utf8(t.to_bytes().unwrap()).unwrap(), "a,b\n1.00000000000e0,x\n");
    }

    #[test]
    fn manifest_round_trips_config() {
        let p = Params { omega: Some(0.25), seed: Some(9), ..Default::default() };
        let text = manifest_text("simulate", &p, &[PathBuf::from("/tmp/out.csv")]).unwrap();
        assert!(text.contains("config_hash"));
        assert!(text.contains("outputs = [\"out.csv\"]"));
        assert_eq!(Params::from_toml(&text).unwrap(), p);
    }
}
