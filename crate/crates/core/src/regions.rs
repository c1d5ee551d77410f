//! Rank transformation and the three regions of interest.
//!
//! Ranks are ordinal: the lowest score gets rank 1 and the highest rank N.
//! Equal scores are ordered by ascending sample id, so every rank vector is
//! a permutation of `1..=N` and nothing depends on input row order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Per-sample scores from the reference and the test model.
#[derive(Debug, Clone)]
pub struct ScoreTable {
    sample_ids: Vec<String>,
    score_ref: Vec<f64>,
    score_test: Vec<f64>,
}

impl ScoreTable {
    pub fn new(sample_ids: Vec<String>, score_ref: Vec<f64>, score_test: Vec<f64>) -> Result<Self> {
        if sample_ids.len() != score_ref.len() || sample_ids.len() != score_test.len() {
            return Err(domain("score columns have different lengths"));
        }
        let mut seen = HashMap::with_capacity(sample_ids.len());
        for (i, id) in sample_ids.iter().enumerate() {
            if seen.insert(id.as_str(), i).is_some() {
                return Err(Error::DuplicateSample(id.clone()));
            }
            if !score_ref[i].is_finite() || !score_test[i].is_finite() {
                return Err(Error::NonFinite(id.clone()));
            }
        }
        Ok(Self {
            sample_ids,
            score_ref,
            score_test,
        })
    }

    pub fn from_rows<I, S>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64, f64)>,
        S: Into<String>,
    {
        let mut ids = Vec::new();
        let mut r = Vec::new();
        let mut t = Vec::new();
        for (id, a, b) in rows {
            ids.push(id.into());
            r.push(a);
            t.push(b);
        }
        Self::new(ids, r, t)
    }

    pub fn len(&self) -> usize {
        self.sample_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample_ids.is_empty()
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn score_ref(&self) -> &[f64] {
        &self.score_ref
    }

    pub fn score_test(&self) -> &[f64] {
        &self.score_test
    }

    /// The same table with the two models' roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            sample_ids: self.sample_ids.clone(),
            score_ref: self.score_test.clone(),
            score_test: self.score_ref.clone(),
        }
    }

    /// Applies `f` to the selected score column.
    pub fn map_scores(&self, model: Model, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut out = self.clone();
        let col = match model {
            Model::Reference => &mut out.score_ref,
            Model::Test => &mut out.score_test,
        };
        col.iter_mut().for_each(|x| *x = f(*x));
        Self::new(out.sample_ids, out.score_ref, out.score_test)
    }

    pub fn ranks(&self, model: Model) -> RankVector {
        let scores = match model {
            Model::Reference => &self.score_ref,
            Model::Test => &self.score_test,
        };
        RankVector::from_validated(&self.sample_ids, scores)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Reference,
    Test,
}

/// Ordinal ranks aligned with a sample-id slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVector {
    // rank[i] in 1..=N for the i-th sample
    rank: Vec<usize>,
    // sample positions in ascending rank order
    order: Vec<usize>,
}

impl RankVector {
    /// Ranks a list of `(sample id, score)` pairs.
    pub fn rank_scores<S: AsRef<str>>(scores: &[(S, f64)]) -> Result<(Vec<String>, Self)> {
        let mut seen = HashMap::with_capacity(scores.len());
        for (id, s) in scores {
            let id = id.as_ref();
            if seen.insert(id, ()).is_some() {
                return Err(Error::DuplicateSample(id.to_owned()));
            }
            if !s.is_finite() {
                return Err(Error::NonFinite(id.to_owned()));
            }
        }
        if scores.is_empty() {
            return Err(domain("cannot rank an empty score list"));
        }
        let ids: Vec<String> = scores.iter().map(|(id, _)| id.as_ref().to_owned()).collect();
        let values: Vec<f64> = scores.iter().map(|(_, s)| *s).collect();
        let ranks = Self::from_validated(&ids, &values);
        Ok((ids, ranks))
    }

    pub(crate) fn from_validated(ids: &[String], scores: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_unstable_by(|&a, &b| {
            scores[a]
                .total_cmp(&scores[b])
                .then_with(|| ids[a].cmp(&ids[b]))
        });
        let mut rank = vec![0; ids.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r + 1;
        }
        Self { rank, order }
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    /// Rank of the sample at position `i`.
    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.rank
    }

    /// Positions of the `k` highest-ranked samples.
    pub fn top_k(&self, k: usize) -> Result<Vec<usize>> {
        check_k(k, self.len())?;
        Ok(self.order[self.len() - k..].to_vec())
    }

    /// Positions of the `k` lowest-ranked samples.
    pub fn bottom_k(&self, k: usize) -> Result<Vec<usize>> {
        check_k(k, self.len())?;
        Ok(self.order[..k].to_vec())
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(domain(format!("region size k={k} must lie in 1..={n}")));
    }
    Ok(())
}

/// Up- and down-movers between two rank vectors over the same samples.
///
/// Samples are ordered by rank change `test - ref`, ties by ascending id;
/// the last `k` are up-movers and the first `k` down-movers.
pub fn movers(
    ids: &[String],
    ranks_ref: &RankVector,
    ranks_test: &RankVector,
    k: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = ids.len();
    if ranks_ref.len() != n || ranks_test.len() != n {
        return Err(domain("rank vectors do not match the sample list"));
    }
    if k == 0 || k > n / 2 {
        return Err(domain(format!(
            "movers region size k={k} must lie in 1..={} so up- and down-movers stay disjoint",
            n / 2
        )));
    }
    let delta: Vec<i64> = (0..n)
        .map(|i| ranks_test.rank(i) as i64 - ranks_ref.rank(i) as i64)
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| delta[a].cmp(&delta[b]).then_with(|| ids[a].cmp(&ids[b])));
    let down = order[..k].to_vec();
    let up = order[n - k..].to_vec();
    Ok((up, down))
}

/// Id-keyed variant of [`movers`] for two independently ranked lists.
pub fn movers_by_id(
    ref_scores: &[(String, f64)],
    test_scores: &[(String, f64)],
    k: usize,
) -> Result<(Vec<String>, Vec<String>)> {
    let test_lookup: HashMap<&str, f64> =
        test_scores.iter().map(|(id, s)| (id.as_str(), *s)).collect();
    if test_lookup.len() != ref_scores.len() || test_scores.len() != ref_scores.len() {
        let ref_ids: HashMap<&str, ()> = ref_scores.iter().map(|(id, _)| (id.as_str(), ())).collect();
        let witness = test_scores
            .iter()
            .map(|(id, _)| id.as_str())
            .find(|id| !ref_ids.contains_key(id))
            .or_else(|| {
                ref_scores
                    .iter()
                    .map(|(id, _)| id.as_str())
                    .find(|id| !test_lookup.contains_key(id))
            })
            .unwrap_or_default();
        return Err(Error::MismatchedSamples(witness.to_owned()));
    }
    let mut rows = Vec::with_capacity(ref_scores.len());
    for (id, r) in ref_scores {
        let t = *test_lookup
            .get(id.as_str())
            .ok_or_else(|| Error::MismatchedSamples(id.clone()))?;
        rows.push((id.clone(), *r, t));
    }
    let table = ScoreTable::from_rows(rows)?;
    let (up, down) = movers(
        table.sample_ids(),
        &table.ranks(Model::Reference),
        &table.ranks(Model::Test),
        k,
    )?;
    let name = |v: Vec<usize>| v.into_iter().map(|i| table.sample_ids()[i].clone()).collect();
    Ok((name(up), name(down)))
}

/// The three regions of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionKind {
    TopK,
    BottomK,
    Movers,
}

impl RegionKind {
    pub const ALL: [RegionKind; 3] = [RegionKind::TopK, RegionKind::BottomK, RegionKind::Movers];

    /// Short name used on the command line and in CSV output.
    pub fn short_name(self) -> &'static str {
        match self {
            RegionKind::TopK => "top",
            RegionKind::BottomK => "bottom",
            RegionKind::Movers => "movers",
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionKind::TopK => "TopK",
            RegionKind::BottomK => "BottomK",
            RegionKind::Movers => "Movers",
        })
    }
}

impl FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "top" | "topk" => Ok(RegionKind::TopK),
            "bottom" | "bottomk" => Ok(RegionKind::BottomK),
            "movers" => Ok(RegionKind::Movers),
            other => Err(domain(format!(
                "unknown test `{other}` (expected top, bottom or movers)"
            ))),
        }
    }
}

/// Two sample sets to compare: (reference region, test region) for
/// Top-K/Bottom-K, (up-movers, down-movers) for Movers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPair {
    pub kind: RegionKind,
    pub k: usize,
    pub set_a: Vec<usize>,
    pub set_b: Vec<usize>,
}

impl RegionPair {
    pub fn build(scores: &ScoreTable, kind: RegionKind, k: usize) -> Result<Self> {
        let ranks_ref = scores.ranks(Model::Reference);
        let ranks_test = scores.ranks(Model::Test);
        Self::from_ranks(scores.sample_ids(), &ranks_ref, &ranks_test, kind, k)
    }

    pub fn from_ranks(
        ids: &[String],
        ranks_ref: &RankVector,
        ranks_test: &RankVector,
        kind: RegionKind,
        k: usize,
    ) -> Result<Self> {
        let (set_a, set_b) = match kind {
            RegionKind::TopK => (ranks_ref.top_k(k)?, ranks_test.top_k(k)?),
            RegionKind::BottomK => (ranks_ref.bottom_k(k)?, ranks_test.bottom_k(k)?),
            RegionKind::Movers => movers(ids, ranks_ref, ranks_test, k)?,
        };
        Ok(Self {
            kind,
            k,
            set_a,
            set_b,
        })
    }
}

/// Sorted ids for a set of positions.
pub fn ids_of(ids: &[String], positions: &[usize]) -> Vec<String> {
    let mut out: Vec<String> = positions.iter().map(|&i| ids[i].clone()).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranked(pairs: &[(&str, f64)]) -> (Vec<String>, RankVector) {
        RankVector::rank_scores(pairs).unwrap()
    }

    fn rank_map(ids: &[String], r: &RankVector) -> Vec<(String, usize)> {
        let mut v: Vec<_> = ids.iter().cloned().zip(r.as_slice().iter().copied()).collect();
        v.sort();
        v
    }

    #[test]
    fn rank_examples() {
        let (ids, r) = ranked(&[("a", 0.9), ("b", 0.5), ("c", 0.1)]);
        assert_eq!(
            rank_map(&ids, &r),
            vec![("a".into(), 3), ("b".into(), 2), ("c".into(), 1)]
        );

        let (ids, r) = ranked(&[("z", 1.0), ("x", 1.0), ("y", 1.0)]);
        assert_eq!(
            rank_map(&ids, &r),
            vec![("x".into(), 1), ("y".into(), 2), ("z".into(), 3)]
        );
    }

    #[test]
    fn rank_errors() {
        assert!(matches!(
            RankVector::rank_scores(&[("a", 1.0), ("b", f64::NAN)]),
            Err(Error::NonFinite(id)) if id == "b"
        ));
        assert!(matches!(
            RankVector::rank_scores(&[("a", 1.0), ("a", 2.0)]),
            Err(Error::DuplicateSample(_))
        ));
    }

    #[test]
    fn top_and_bottom_examples() {
        let (ids, r) = ranked(&[("a", 0.9), ("b", 0.5), ("c", 0.1)]);
        assert_eq!(ids_of(&ids, &r.top_k(2).unwrap()), ["a", "b"]);
        assert_eq!(ids_of(&ids, &r.bottom_k(2).unwrap()), ["b", "c"]);
        assert_eq!(ids_of(&ids, &r.top_k(3).unwrap()), ["a", "b", "c"]);
        assert_eq!(ids_of(&ids, &r.bottom_k(3).unwrap()), ["a", "b", "c"]);
        assert_eq!(ids_of(&ids, &r.top_k(1).unwrap()), ["a"]);
        assert!(r.top_k(0).is_err());
        assert!(r.top_k(4).is_err());
        assert!(r.bottom_k(4).is_err());
    }

    #[test]
    fn top_and_bottom_partition_when_2k_is_n() {
        let (ids, r) = ranked(&[("a", 4.0), ("b", 3.0), ("c", 2.0), ("d", 1.0)]);
        let mut all = r.top_k(2).unwrap();
        all.extend(r.bottom_k(2).unwrap());
        assert_eq!(ids_of(&ids, &all), ["a", "b", "c", "d"]);
    }

    #[test]
    fn movers_full_reversal() {
        let r = vec![("a".to_string(), 3.0), ("b".into(), 2.0), ("c".into(), 1.0)];
        let t = vec![("a".to_string(), 1.0), ("b".into(), 2.0), ("c".into(), 3.0)];
        let (up, down) = movers_by_id(&r, &t, 1).unwrap();
        assert_eq!(up, ["c"]);
        assert_eq!(down, ["a"]);
    }

    #[test]
    fn movers_identical_scores_are_disjoint() {
        let r = vec![("x".to_string(), 0.3), ("y".into(), 0.2), ("z".into(), 0.1)];
        let (up, down) = movers_by_id(&r, &r, 1).unwrap();
        assert_eq!(down, ["x"]);
        assert_eq!(up, ["z"]);
    }

    #[test]
    fn movers_errors() {
        let r = vec![("a".to_string(), 1.0), ("b".into(), 2.0)];
        let t = vec![("a".to_string(), 1.0), ("c".into(), 2.0)];
        assert!(matches!(
            movers_by_id(&r, &t, 1),
            Err(Error::MismatchedSamples(id)) if id == "b"
        ));
        assert!(matches!(movers_by_id(&r, &r, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn movers_match_brute_force_on_six_samples() {
        // Reference and test orderings of six samples; delta = test - ref.
        let ids: Vec<String> = ["a", "b", "c", "d", "e", "f"].map(String::from).to_vec();
        let ref_scores = [0.6, 0.1, 0.4, 0.3, 0.5, 0.2];
        let test_scores = [0.2, 0.6, 0.1, 0.5, 0.4, 0.3];
        let table = ScoreTable::new(ids.clone(), ref_scores.to_vec(), test_scores.to_vec()).unwrap();
        let (up, down) = movers(
            &ids,
            &table.ranks(Model::Reference),
            &table.ranks(Model::Test),
            2,
        )
        .unwrap();

        // brute force: rank by counting, then pick extremes by exhaustive scan
        let rank = |s: &[f64], i: usize| 1 + s.iter().filter(|&&x| x < s[i]).count();
        let mut deltas: Vec<(i64, &str)> = (0..6)
            .map(|i| (rank(&test_scores, i) as i64 - rank(&ref_scores, i) as i64, ids[i].as_str()))
            .collect();
        deltas.sort();
        let expect_down: Vec<&str> = deltas[..2].iter().map(|d| d.1).collect();
        let expect_up: Vec<&str> = deltas[4..].iter().map(|d| d.1).collect();
        assert_eq!(ids_of(&ids, &down), {
            let mut v = expect_down.clone();
            v.sort();
            v
        });
        assert_eq!(ids_of(&ids, &up), {
            let mut v = expect_up.clone();
            v.sort();
            v
        });
        // frozen: a=-4, b=+5, c=-3, d=+2, e=-1, f=+1
        assert_eq!(ids_of(&ids, &up), ["b", "d"]);
        assert_eq!(ids_of(&ids, &down), ["a", "c"]);
    }

    #[test]
    fn region_kind_parsing() {
        assert_eq!("top".parse::<RegionKind>().unwrap(), RegionKind::TopK);
        assert_eq!("Bottom".parse::<RegionKind>().unwrap(), RegionKind::BottomK);
        assert_eq!("movers".parse::<RegionKind>().unwrap(), RegionKind::Movers);
        assert!("middle".parse::<RegionKind>().is_err());
    }
}
