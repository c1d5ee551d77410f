//! Welch's two-sample t-test over region marker scores, and the mapping of
//! its two-sided p-value onto Success / Failure / Undetermined outcomes.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::markers::{Aggregation, MarkerMatrix};
use crate::regions::{Model, RegionKind, RegionPair, ScoreTable};
use crate::special::student_t_two_sided;

/// Significance level used unless configured otherwise.
pub const DEFAULT_LEVEL: f64 = 0.05;

/// Row label of the combined marker score in reports.
pub const COMBINED_LABEL: &str = "CombinedMarkerScore";

/// Welch's unequal-variance t-test between samples `a` and `b`.
///
/// `t`, `df` and `p` are `None` when both samples have zero variance and
/// equal means. With zero variances and unequal means, `t` is infinite,
/// `p` is zero and `df` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelchResult {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    pub n_a: usize,
    pub n_b: usize,
    #[serde(with = "crate::report::opt_float")]
    pub t: Option<f64>,
    #[serde(with = "crate::report::opt_float")]
    pub df: Option<f64>,
    #[serde(with = "crate::report::opt_float")]
    pub p: Option<f64>,
}

fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let first = values[0];
    if values.len() < 2 || values.iter().all(|&v| v == first) {
        return (first, 0.0);
    }
    let ss: f64 = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    (mean, ss / (n - 1.0))
}

pub fn welch_test(values_a: &[f64], values_b: &[f64]) -> Result<WelchResult> {
    if values_a.is_empty() || values_b.is_empty() {
        return Err(domain("welch test needs at least one value per sample"));
    }
    for (side, values) in [("a", values_a), ("b", values_b)] {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("{side}[{i}]")));
        }
    }
    let (mean_a, var_a) = mean_and_variance(values_a);
    let (mean_b, var_b) = mean_and_variance(values_b);
    let (n_a, n_b) = (values_a.len(), values_b.len());
    let se_a = var_a / n_a as f64;
    let se_b = var_b / n_b as f64;
    let se2 = se_a + se_b;

    let (t, df, p) = if se2 == 0.0 {
        if mean_a == mean_b {
            (None, None, None)
        } else {
            let t = if mean_a > mean_b { f64::INFINITY } else { f64::NEG_INFINITY };
            (Some(t), None, Some(0.0))
        }
    } else {
        let t = (mean_a - mean_b) / se2.sqrt();
        let term = |se: f64, n: usize| if n > 1 { se * se / (n as f64 - 1.0) } else { 0.0 };
        let df = se2 * se2 / (term(se_a, n_a) + term(se_b, n_b));
        (Some(t), Some(df), Some(student_t_two_sided(t, df)))
    };

    Ok(WelchResult {
        mean_a,
        mean_b,
        var_a,
        var_b,
        n_a,
        n_b,
        t,
        df,
        p,
    })
}

/// Outcome of one region test, from the test model's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// The test model outperforms the reference model.
    #[serde(rename = "S")]
    Success,
    /// The reference model outperforms the test model.
    #[serde(rename = "F")]
    Failure,
    /// Not significant, or no variation to test.
    #[serde(rename = "U")]
    Undetermined,
}

impl Outcome {
    pub fn letter(self) -> char {
        match self {
            Outcome::Success => 'S',
            Outcome::Failure => 'F',
            Outcome::Undetermined => 'U',
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Maps `(mean_a, mean_b, p)` to an outcome for a region kind.
///
/// For Top-K and Bottom-K, `a` is the reference region and `b` the test
/// region; for Movers, `a` holds up-movers and `b` down-movers. The test
/// model wins Top-K when its region scores higher, Bottom-K when it scores
/// lower, and Movers when up-movers score higher than down-movers.
pub fn decide(kind: RegionKind, mean_a: f64, mean_b: f64, p: Option<f64>, level: f64) -> Outcome {
    let Some(p) = p else {
        return Outcome::Undetermined;
    };
    if p.is_nan() || p > level || mean_a == mean_b {
        return Outcome::Undetermined;
    }
    let test_better = match kind {
        RegionKind::TopK => mean_b > mean_a,
        RegionKind::BottomK => mean_b < mean_a,
        RegionKind::Movers => mean_a > mean_b,
    };
    if test_better {
        Outcome::Success
    } else {
        Outcome::Failure
    }
}

pub fn verdict(kind: RegionKind, result: &WelchResult, level: f64) -> Outcome {
    decide(kind, result.mean_a, result.mean_b, result.p, level)
}

/// One marker's detail row within a region test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkerTest {
    pub marker: String,
    pub result: WelchResult,
    pub verdict: Outcome,
}

/// Outcome of one region test, with the per-marker breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub kind: RegionKind,
    pub k: usize,
    pub level: f64,
    pub combined: WelchResult,
    pub per_marker: Vec<MarkerTest>,
    pub verdict: Outcome,
}

/// Which tests to run and at what level.
#[derive(Debug, Clone)]
pub struct ComparisonOptions {
    pub ks: Vec<usize>,
    pub kinds: Vec<RegionKind>,
    pub level: f64,
    pub aggregation: Aggregation,
}

impl ComparisonOptions {
    pub fn new(ks: impl Into<Vec<usize>>) -> Self {
        Self {
            ks: ks.into(),
            kinds: RegionKind::ALL.to_vec(),
            level: DEFAULT_LEVEL,
            aggregation: Aggregation::Majority,
        }
    }

    pub fn kinds(mut self, kinds: impl Into<Vec<RegionKind>>) -> Self {
        self.kinds = kinds.into();
        self
    }

    pub fn level(mut self, level: f64) -> Self {
        self.level = level;
        self
    }

    pub fn aggregation(mut self, aggregation: Aggregation) -> Self {
        self.aggregation = aggregation;
        self
    }
}

/// Runs every requested region test on `scores` against `markers`.
///
/// Results are ordered by kind, then ascending `k`. Each result carries one
/// detail row per marker, in the matrix's marker order.
pub fn run_comparison(
    scores: &ScoreTable,
    markers: &MarkerMatrix,
    options: &ComparisonOptions,
) -> Result<Vec<TestResult>> {
    let level = options.level;
    if !(level > 0.0 && level < 1.0) {
        return Err(domain(format!("level {level} must lie in (0, 1)")));
    }
    if options.ks.is_empty() {
        return Err(domain("at least one region size k is required"));
    }
    if options.kinds.is_empty() {
        return Err(domain("at least one test kind is required"));
    }
    let mut kinds = options.kinds.clone();
    kinds.sort();
    kinds.dedup();
    let mut ks = options.ks.clone();
    ks.sort_unstable();
    ks.dedup();

    // score-table position -> marker-matrix position
    let to_matrix: Vec<usize> = scores
        .sample_ids()
        .iter()
        .map(|id| markers.sample_position(id))
        .collect::<Result<_>>()?;

    let ranks_ref = scores.ranks(Model::Reference);
    let ranks_test = scores.ranks(Model::Test);

    let jobs: Vec<(RegionKind, usize)> = kinds
        .iter()
        .flat_map(|&kind| ks.iter().map(move |&k| (kind, k)))
        .collect();
    // Validate all region sizes before doing any work.
    let regions = jobs
        .iter()
        .map(|&(kind, k)| RegionPair::from_ranks(scores.sample_ids(), &ranks_ref, &ranks_test, kind, k))
        .collect::<Result<Vec<_>>>()?;

    regions
        .into_par_iter()
        .map(|region| {
            let a: Vec<usize> = region.set_a.iter().map(|&i| to_matrix[i]).collect();
            let b: Vec<usize> = region.set_b.iter().map(|&i| to_matrix[i]).collect();
            let per_marker = (0..markers.marker_names().len())
                .map(|m| {
                    let result = welch_test(&markers.marker_values(&a, m), &markers.marker_values(&b, m))?;
                    Ok(MarkerTest {
                        marker: markers.marker_names()[m].clone(),
                        verdict: verdict(region.kind, &result, level),
                        result,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let combined = welch_test(
                &markers.combined_values(&a, options.aggregation),
                &markers.combined_values(&b, options.aggregation),
            )?;
            Ok(TestResult {
                kind: region.kind,
                k: region.k,
                level,
                verdict: verdict(region.kind, &combined, level),
                combined,
                per_marker,
            })
        })
        .collect()
}
