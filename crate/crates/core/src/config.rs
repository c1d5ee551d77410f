//! Flat `key = value` sweep configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Every simulation
//! parameter is optional and falls back to its default; `alphas` and
//! `betas` (comma-separated grids) are required. `alpha` and `beta` are
//! accepted but the grids override them.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::simlab::{SimulationParams, SweepGrid};

const KEYS: &[&str] = &[
    "pi",
    "alpha",
    "beta",
    "alpha_bar",
    "beta_bar",
    "p_true_ref",
    "p_true_test",
    "p_train_ref",
    "p_train_test",
    "n",
    "k",
    "seed",
    "alphas",
    "betas",
    "repeats",
    "level",
];

fn config_err(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_owned(),
        message: message.into(),
    }
}

/// Parses `key = value` lines, rejecting unknown and repeated keys.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            config_err(line, format!("line {}: expected `key = value`", i + 1))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(config_err(key, format!("line {}: unknown key", i + 1)));
        }
        if out.insert(key.to_owned(), value.trim().to_owned()).is_some() {
            return Err(config_err(key, format!("line {}: repeated key", i + 1)));
        }
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| config_err(key, format!("cannot parse `{value}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|v| parse_num::<f64>(key, v.trim()))
        .collect()
}

/// Builds a sweep grid from configuration text.
pub fn parse_sweep_config(text: &str) -> Result<SweepGrid> {
    let kv = parse_key_values(text)?;
    let mut base = SimulationParams::default();
    let mut level = crate::hypothesis::DEFAULT_LEVEL;
    let mut repeats = 1;
    let mut alphas = None;
    let mut betas = None;
    for (key, value) in &kv {
        let key = key.as_str();
        match key {
            "pi" => base.pi = parse_num(key, value)?,
            "alpha" => base.alpha = parse_num(key, value)?,
            "beta" => base.beta = parse_num(key, value)?,
            "alpha_bar" => base.alpha_bar = parse_num(key, value)?,
            "beta_bar" => base.beta_bar = parse_num(key, value)?,
            "p_true_ref" => base.p_true_ref = parse_num(key, value)?,
            "p_true_test" => base.p_true_test = parse_num(key, value)?,
            "p_train_ref" => base.p_train_ref = parse_num(key, value)?,
            "p_train_test" => base.p_train_test = parse_num(key, value)?,
            "n" => base.n = parse_num(key, value)?,
            "k" => base.k = parse_num(key, value)?,
            "seed" => base.seed = parse_num(key, value)?,
            "repeats" => repeats = parse_num(key, value)?,
            "level" => level = parse_num(key, value)?,
            "alphas" => alphas = Some(parse_list(key, value)?),
            "betas" => betas = Some(parse_list(key, value)?),
            _ => unreachable!("keys are checked while parsing"),
        }
    }
    let alphas = alphas.ok_or_else(|| config_err("alphas", "missing"))?;
    let betas = betas.ok_or_else(|| config_err("betas", "missing"))?;
    let mut grid = SweepGrid::new(alphas, betas, repeats, base);
    grid.level = level;
    grid.validate().map_err(|e| config_err("grid", e.to_string()))?;
    Ok(grid)
}

pub fn load_sweep_config(path: &Path) -> Result<SweepGrid> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_sweep_config(&text)
}
