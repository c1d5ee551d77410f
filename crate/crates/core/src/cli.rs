//! Command implementations behind the `markereval` binary.

use std::path::{Path, PathBuf};

use crate::error::{domain, Result};
use crate::hypothesis::{run_comparison, ComparisonOptions, DEFAULT_LEVEL};
use crate::io::{load_marker_rows, load_scores, reconcile, write_atomic, UnmatchedPolicy};
use crate::regions::RegionKind;
use crate::report::{OutputFormat, Report};
use crate::simlab::sweep_with_progress;
use crate::voting;

/// Inputs to one comparison run.
#[derive(Debug, Clone)]
pub struct ComparisonConfig {
    pub scores_path: PathBuf,
    pub markers_path: PathBuf,
    pub ks: Vec<usize>,
    pub kinds: Vec<RegionKind>,
    pub level: f64,
    pub unmatched_policy: UnmatchedPolicy,
    pub output_format: OutputFormat,
}

impl ComparisonConfig {
    pub fn new(scores_path: impl Into<PathBuf>, markers_path: impl Into<PathBuf>, ks: Vec<usize>) -> Self {
        Self {
            scores_path: scores_path.into(),
            markers_path: markers_path.into(),
            ks,
            kinds: RegionKind::ALL.to_vec(),
            level: DEFAULT_LEVEL,
            unmatched_policy: UnmatchedPolicy::Strict,
            output_format: OutputFormat::Table,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ks.is_empty() || self.ks.contains(&0) {
            return Err(domain("--k needs one or more positive integers"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(domain(format!("--level {} must lie in (0, 1)", self.level)));
        }
        Ok(())
    }
}

/// Loads both files, reconciles them and runs every requested test.
pub fn cmd_compare(config: &ComparisonConfig) -> Result<Report> {
    config.validate()?;
    let scores = load_scores(&config.scores_path)?;
    let rows = load_marker_rows(&config.markers_path)?;
    let origin = config.markers_path.display().to_string();
    let (markers, dropped) = reconcile(&scores, &rows, config.unmatched_policy, &origin)?;
    let options = ComparisonOptions::new(config.ks.clone())
        .kinds(config.kinds.clone())
        .level(config.level);
    let results = run_comparison(&scores, &markers, &options)?;
    Ok(Report {
        n_samples: scores.len(),
        markers: markers.marker_names().to_vec(),
        dropped_marker_rows: dropped,
        results,
    })
}

/// Writes `text` to `out`, or to standard output when `out` is `None`.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs the sweep described by the config file and returns its CSV.
pub fn cmd_simulate<F>(config_path: &Path, progress: F) -> Result<String>
where
    F: Fn(usize, usize) + Sync,
{
    let grid = crate::config::load_sweep_config(config_path)?;
    Ok(sweep_with_progress(&grid, progress)?.to_csv())
}

/// `voting accuracy`: equal-accuracy majority outcome as CSV.
pub fn voting_accuracy(k: usize, alpha: f64) -> Result<String> {
    let o = voting::majority_accuracy(k, alpha)?;
    Ok(format!(
        "k,alpha,p_correct,p_tie,p_wrong\n{},{},{},{},{}\n",
        k,
        crate::report::fmt_num(alpha),
        crate::report::fmt_num(o.p_correct),
        crate::report::fmt_num(o.p_tie),
        crate::report::fmt_num(o.p_wrong)
    ))
}

/// `voting accuracy --alphas`: heterogeneous majority outcome as CSV.
pub fn voting_accuracy_hetero(alphas: &[f64]) -> Result<String> {
    let o = voting::majority_accuracy_hetero(alphas)?;
    Ok(format!(
        "k,p_correct,p_tie,p_wrong\n{},{},{},{}\n",
        alphas.len(),
        crate::report::fmt_num(o.p_correct),
        crate::report::fmt_num(o.p_tie),
        crate::report::fmt_num(o.p_wrong)
    ))
}

pub fn voting_coverage(betas: &[f64]) -> Result<String> {
    let c = voting::combined_coverage(betas)?;
    Ok(format!("coverage\n{}\n", crate::report::fmt_num(c)))
}

pub fn voting_curves(ks: &[usize], alphas: &[f64]) -> Result<String> {
    Ok(voting::curves_csv(&voting::accuracy_curves(ks, alphas)?))
}

pub fn voting_marginal(base: &[f64], alphas: &[f64]) -> Result<String> {
    Ok(voting::marginal_csv(&voting::marginal_marker_impact(base, alphas)?))
}
