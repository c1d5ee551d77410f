//! Marker verdicts and their combination.
//!
//! A marker votes `+1` (malicious), `-1` (benign) or abstains with `0` on
//! each sample. The combined marker score of a sample is the majority vote
//! over all markers, abstaining on ties.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A single marker vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Verdict {
    Benign,
    #[default]
    Abstain,
    Malicious,
}

impl Verdict {
    pub fn value(self) -> i8 {
        match self {
            Verdict::Benign => -1,
            Verdict::Abstain => 0,
            Verdict::Malicious => 1,
        }
    }

    /// Sign of an integer vote total.
    pub fn from_sign(total: i64) -> Self {
        match total.signum() {
            1 => Verdict::Malicious,
            -1 => Verdict::Benign,
            _ => Verdict::Abstain,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Verdict::Benign => Verdict::Malicious,
            Verdict::Abstain => Verdict::Abstain,
            Verdict::Malicious => Verdict::Benign,
        }
    }
}

impl TryFrom<i64> for Verdict {
    type Error = Error;

    fn try_from(v: i64) -> Result<Self> {
        match v {
            -1 => Ok(Verdict::Benign),
            0 => Ok(Verdict::Abstain),
            1 => Ok(Verdict::Malicious),
            other => Err(Error::InvalidVerdict(other)),
        }
    }
}

impl From<Verdict> for f64 {
    fn from(v: Verdict) -> f64 {
        f64::from(v.value())
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// How per-marker verdicts collapse into one per-sample value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Sign of the verdict sum; ties abstain.
    #[default]
    Majority,
    /// The raw verdict sum, unbounded by 1.
    RawSum,
}

/// Sparse sample-by-marker verdict matrix. Missing entries abstain.
///
/// Immutable once built; see [`MarkerMatrixBuilder`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerMatrix {
    sample_ids: Vec<String>,
    sample_index: HashMap<String, usize>,
    marker_names: Vec<String>,
    marker_index: HashMap<String, usize>,
    // per marker: non-abstaining votes sorted by sample index
    columns: Vec<Vec<(u32, Verdict)>>,
    // per sample: sum of all verdicts
    totals: Vec<i32>,
}

impl MarkerMatrix {
    pub fn builder<S, M>(sample_ids: S, marker_names: M) -> Result<MarkerMatrixBuilder>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        M: IntoIterator,
        M::Item: Into<String>,
    {
        MarkerMatrixBuilder::new(sample_ids, marker_names)
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn marker_names(&self) -> &[String] {
        &self.marker_names
    }

    pub fn n_samples(&self) -> usize {
        self.sample_ids.len()
    }

    pub fn sample_position(&self, sample: &str) -> Result<usize> {
        self.sample_index
            .get(sample)
            .copied()
            .ok_or_else(|| Error::UnknownSample(sample.to_owned()))
    }

    pub fn marker_position(&self, marker: &str) -> Result<usize> {
        self.marker_index
            .get(marker)
            .copied()
            .ok_or_else(|| Error::UnknownMarker(marker.to_owned()))
    }

    /// Verdict of one marker on one sample.
    pub fn verdict(&self, sample: &str, marker: &str) -> Result<Verdict> {
        let s = self.sample_position(sample)?;
        let m = self.marker_position(marker)?;
        Ok(self.verdict_at(s, m))
    }

    pub(crate) fn verdict_at(&self, sample: usize, marker: usize) -> Verdict {
        let col = &self.columns[marker];
        match col.binary_search_by_key(&(sample as u32), |&(s, _)| s) {
            Ok(i) => col[i].1,
            Err(_) => Verdict::Abstain,
        }
    }

    pub(crate) fn aggregate_at(&self, sample: usize, aggregation: Aggregation) -> i32 {
        let total = self.totals[sample];
        match aggregation {
            Aggregation::Majority => total.signum(),
            Aggregation::RawSum => total,
        }
    }

    /// Majority vote of all markers on `sample`.
    pub fn combined_score(&self, sample: &str) -> Result<Verdict> {
        let s = self.sample_position(sample)?;
        Ok(Verdict::from_sign(i64::from(self.totals[s])))
    }

    /// Combined value under an explicit aggregation rule.
    pub fn aggregate(&self, sample: &str, aggregation: Aggregation) -> Result<i32> {
        let s = self.sample_position(sample)?;
        Ok(self.aggregate_at(s, aggregation))
    }

    /// Mean combined score over `samples`. Abstaining samples count in the
    /// denominator.
    pub fn average_marker_score<I, S>(&self, samples: I) -> Result<f64>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let positions = self.positions(samples)?;
        Ok(mean_i32(positions.iter().map(|&s| self.aggregate_at(s, Aggregation::Majority))))
    }

    /// Mean of one marker's raw verdicts over `samples`.
    pub fn per_marker_average<I, S>(&self, samples: I, marker: &str) -> Result<f64>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let m = self.marker_position(marker)?;
        let positions = self.positions(samples)?;
        Ok(mean_i32(
            positions.iter().map(|&s| i32::from(self.verdict_at(s, m).value())),
        ))
    }

    fn positions<I, S>(&self, samples: I) -> Result<Vec<usize>>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let positions = samples
            .into_iter()
            .map(|s| self.sample_position(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        if positions.is_empty() {
            return Err(domain("average over an empty sample set"));
        }
        Ok(positions)
    }

    /// Combined values for sample positions, as `f64` for testing.
    pub(crate) fn combined_values(&self, positions: &[usize], aggregation: Aggregation) -> Vec<f64> {
        positions
            .iter()
            .map(|&s| f64::from(self.aggregate_at(s, aggregation)))
            .collect()
    }

    pub(crate) fn marker_values(&self, positions: &[usize], marker: usize) -> Vec<f64> {
        positions
            .iter()
            .map(|&s| f64::from(self.verdict_at(s, marker)))
            .collect()
    }
}

fn mean_i32(values: impl Iterator<Item = i32>) -> f64 {
    let (sum, n) = values.fold((0i64, 0usize), |(s, n), v| (s + i64::from(v), n + 1));
    sum as f64 / n as f64
}

/// Collects verdicts for a fixed sample and marker universe.
#[derive(Debug)]
pub struct MarkerMatrixBuilder {
    sample_ids: Vec<String>,
    sample_index: HashMap<String, usize>,
    marker_names: Vec<String>,
    marker_index: HashMap<String, usize>,
    entries: HashMap<(usize, usize), Verdict>,
}

impl MarkerMatrixBuilder {
    pub fn new<S, M>(sample_ids: S, marker_names: M) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        M: IntoIterator,
        M::Item: Into<String>,
    {
        let sample_ids: Vec<String> = sample_ids.into_iter().map(Into::into).collect();
        let mut sample_index = HashMap::with_capacity(sample_ids.len());
        for (i, id) in sample_ids.iter().enumerate() {
            if sample_index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateSample(id.clone()));
            }
        }
        let marker_names: Vec<String> = marker_names.into_iter().map(Into::into).collect();
        let mut marker_index = HashMap::with_capacity(marker_names.len());
        for (i, name) in marker_names.iter().enumerate() {
            if marker_index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateMarker(name.clone()));
            }
        }
        if sample_ids.len() > u32::MAX as usize {
            return Err(domain("too many samples"));
        }
        Ok(Self {
            sample_ids,
            sample_index,
            marker_names,
            marker_index,
            entries: HashMap::new(),
        })
    }

    /// Records a verdict. Setting the same (sample, marker) twice is an error,
    /// even when one of them abstains.
    pub fn set(&mut self, sample: &str, marker: &str, verdict: Verdict) -> Result<&mut Self> {
        let s = *self
            .sample_index
            .get(sample)
            .ok_or_else(|| Error::UnknownSample(sample.to_owned()))?;
        let m = *self
            .marker_index
            .get(marker)
            .ok_or_else(|| Error::UnknownMarker(marker.to_owned()))?;
        self.set_at(s, m, verdict)
            .map_err(|_| Error::DuplicateEntry {
                sample: sample.to_owned(),
                marker: marker.to_owned(),
            })?;
        Ok(self)
    }

    pub(crate) fn set_at(&mut self, sample: usize, marker: usize, verdict: Verdict) -> Result<()> {
        if self.entries.insert((sample, marker), verdict).is_some() {
            return Err(Error::DuplicateEntry {
                sample: self.sample_ids[sample].clone(),
                marker: self.marker_names[marker].clone(),
            });
        }
        Ok(())
    }

    pub fn build(self) -> MarkerMatrix {
        let mut columns = vec![Vec::new(); self.marker_names.len()];
        let mut totals = vec![0i32; self.sample_ids.len()];
        for ((s, m), v) in self.entries {
            if v != Verdict::Abstain {
                columns[m].push((s as u32, v));
                totals[s] += i32::from(v.value());
            }
        }
        for col in &mut columns {
            col.sort_unstable_by_key(|&(s, _)| s);
        }
        MarkerMatrix {
            sample_ids: self.sample_ids,
            sample_index: self.sample_index,
            marker_names: self.marker_names,
            marker_index: self.marker_index,
            columns,
            totals,
        }
    }
}
