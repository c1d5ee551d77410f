//! Score and marker file ingestion.
//!
//! Both files may be CSV (with a header row) or JSON Lines; the format is
//! detected from the first non-blank character. Scores carry `sample_id`,
//! `score_ref` and `score_test`; markers carry `sample_id`, `marker` and
//! `verdict`.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{domain, Error, Result};
use crate::markers::{MarkerMatrix, Verdict};
use crate::regions::ScoreTable;

#[derive(Debug, Deserialize)]
struct ScoreRow {
    sample_id: String,
    score_ref: f64,
    score_test: f64,
}

/// One line of a marker file.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct MarkerRow {
    pub sample_id: String,
    pub marker: String,
    pub verdict: i64,
    #[serde(skip)]
    pub line: u64,
}

/// What to do with marker rows whose sample has no scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnmatchedPolicy {
    /// Reject the input.
    #[default]
    Strict,
    /// Drop the rows and count them.
    Abstain,
}

impl std::str::FromStr for UnmatchedPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(UnmatchedPolicy::Strict),
            "abstain" => Ok(UnmatchedPolicy::Abstain),
            other => Err(domain(format!("unknown policy `{other}` (expected strict or abstain)"))),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn is_jsonl(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn parse_rows<T: DeserializeOwned>(text: &str, origin: &str) -> Result<Vec<(u64, T)>> {
    if is_jsonl(text) {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = serde_json::from_str(line).map_err(|e| Error::Parse {
                path: origin.to_owned(),
                line: i as u64 + 1,
                message: e.to_string(),
            })?;
            rows.push((i as u64 + 1, row));
        }
        return Ok(rows);
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let parse_err = |line: u64, message: String| Error::Parse {
        path: origin.to_owned(),
        line,
        message,
    };
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let row: T = record.deserialize(Some(&headers)).map_err(|e| {
            let message = match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
                _ => e.to_string(),
            };
            parse_err(line, message)
        })?;
        rows.push((line, row));
    }
    Ok(rows)
}

/// Parses score rows; rows are reordered by sample id.
pub fn parse_scores(text: &str, origin: &str) -> Result<ScoreTable> {
    let mut rows: Vec<(u64, ScoreRow)> = parse_rows(text, origin)?;
    if rows.is_empty() {
        return Err(domain(format!("{origin}: no score rows")));
    }
    rows.sort_by(|a, b| a.1.sample_id.cmp(&b.1.sample_id));
    if let Some(w) = rows.windows(2).find(|w| w[0].1.sample_id == w[1].1.sample_id) {
        return Err(Error::Parse {
            path: origin.to_owned(),
            line: w[0].0.max(w[1].0),
            message: format!("duplicate sample id `{}`", w[0].1.sample_id),
        });
    }
    ScoreTable::from_rows(rows.into_iter().map(|(_, r)| (r.sample_id, r.score_ref, r.score_test)))
}

pub fn load_scores(path: &Path) -> Result<ScoreTable> {
    parse_scores(&read(path)?, &path.display().to_string())
}

pub fn parse_marker_rows(text: &str, origin: &str) -> Result<Vec<MarkerRow>> {
    parse_rows::<MarkerRow>(text, origin)?
        .into_iter()
        .map(|(line, mut row)| {
            Verdict::try_from(row.verdict).map_err(|e| Error::Parse {
                path: origin.to_owned(),
                line,
                message: e.to_string(),
            })?;
            row.line = line;
            Ok(row)
        })
        .collect()
}

pub fn load_marker_rows(path: &Path) -> Result<Vec<MarkerRow>> {
    parse_marker_rows(&read(path)?, &path.display().to_string())
}

/// Builds the marker matrix over the scored sample universe.
///
/// Scored samples without marker rows abstain on every marker. Marker rows
/// for unscored samples are an error under [`UnmatchedPolicy::Strict`] and
/// are dropped (and counted) under [`UnmatchedPolicy::Abstain`]. Marker
/// names are sorted so the result does not depend on row order.
pub fn reconcile(
    scores: &ScoreTable,
    rows: &[MarkerRow],
    policy: UnmatchedPolicy,
    origin: &str,
) -> Result<(MarkerMatrix, usize)> {
    let names: BTreeSet<&str> = rows.iter().map(|r| r.marker.as_str()).collect();
    let mut builder = MarkerMatrix::builder(scores.sample_ids().iter().cloned(), names)?;
    let known: HashSet<&str> = scores.sample_ids().iter().map(String::as_str).collect();
    let mut dropped = 0;
    for row in rows {
        if !known.contains(row.sample_id.as_str()) {
            match policy {
                UnmatchedPolicy::Strict => {
                    return Err(Error::Parse {
                        path: origin.to_owned(),
                        line: row.line,
                        message: format!("sample `{}` has markers but no scores", row.sample_id),
                    })
                }
                UnmatchedPolicy::Abstain => {
                    dropped += 1;
                    continue;
                }
            }
        }
        let verdict = Verdict::try_from(row.verdict)?;
        builder
            .set(&row.sample_id, &row.marker, verdict)
            .map_err(|e| Error::Parse {
                path: origin.to_owned(),
                line: row.line,
                message: e.to_string(),
            })?;
    }
    Ok((builder.build(), dropped))
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, then renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
