//! Grid specifications: `a:b:n` (linear, inclusive), `log:a:b:n`
//! (geometric), or a comma-separated list.

use crate::error::{CliError, Result};

pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| CliError::Usage(format!("grid `{spec}`: {why}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let parts: Vec<&str> = spec.split(':').collect();
    let (log, parts) = match parts.first() {
        Some(&"log") => (true, &parts[1..]),
        _ => (false, &parts[..]),
    };
    if parts.len() == 1 {
        if log {
            return Err(bad("expected log:start:stop:count"));
        }
        let v: Vec<f64> = parts[0].split(',').map(num).collect::<Result<_>>()?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(bad("values must be finite"));
        }
        return Ok(v);
    }
    if parts.len() != 3 {
        return Err(bad("expected start:stop:count"));
    }
    let (a, b) = (num(parts[0])?, num(parts[1])?);
    let n: usize = parts[2].trim().parse().map_err(|_| bad("count must be an integer"))?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad("need a positive count and finite ends"));
    }
    if log && (a <= 0.0 || b <= 0.0) {
        return Err(bad("log grid needs positive ends"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else if log {
                (a.ln() + (b.ln() - a.ln()) * step(i)).exp()
            } else {
                a + (b - a) * step(i)
            }
        })
        .collect())
}
