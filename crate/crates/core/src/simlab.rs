//! Simulated labels, markers and model scores with known performance.
//!
//! Each sample draws a ground-truth label, a single marker vote of accuracy
//! `alpha` and coverage `beta`, an optional noisy training label of accuracy
//! `alpha_bar` and coverage `beta_bar`, and one score per model. A model's
//! score falls in the half of `(0, 1)` that agrees with the training label
//! (or the ground truth for unlabeled samples) with probability `P_train`
//! (or `P_true`), and lands uniformly inside `(0, 0.49)` or `(0.51, 1)`.
//!
//! All randomness for sample `i` comes from a ChaCha stream keyed by the
//! seed and selected by `i`, so datasets are identical however they are
//! chunked or parallelized.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::hypothesis::{run_comparison, ComparisonOptions, Outcome, TestResult, DEFAULT_LEVEL};
use crate::markers::{MarkerMatrix, Verdict};
use crate::regions::{RegionKind, ScoreTable};

/// Name of the single simulated marker.
pub const SIM_MARKER: &str = "marker";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationParams {
    /// Positive-class prevalence.
    pub pi: f64,
    /// Marker accuracy.
    pub alpha: f64,
    /// Marker coverage.
    pub beta: f64,
    /// Training-label accuracy.
    pub alpha_bar: f64,
    /// Training-label coverage.
    pub beta_bar: f64,
    pub p_true_ref: f64,
    pub p_true_test: f64,
    pub p_train_ref: f64,
    pub p_train_test: f64,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
}

impl Default for SimulationParams {
    fn default() -> Self {
        Self {
            pi: 0.5,
            alpha: 0.9,
            beta: 0.8,
            alpha_bar: 0.95,
            beta_bar: 0.10,
            p_true_ref: 0.90,
            p_true_test: 0.95,
            p_train_ref: 0.98,
            p_train_test: 0.97,
            n: 1_000_000,
            k: 10_000,
            seed: 0,
        }
    }
}

impl SimulationParams {
    /// Defaults shrunk to `n` samples with region size `k`.
    pub fn scaled(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pi > 0.0 && self.pi <= 1.0) {
            return Err(domain(format!("pi={} must lie in (0, 1]", self.pi)));
        }
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("alpha_bar", self.alpha_bar),
            ("beta_bar", self.beta_bar),
            ("p_true_ref", self.p_true_ref),
            ("p_true_test", self.p_true_test),
            ("p_train_ref", self.p_train_ref),
            ("p_train_test", self.p_train_test),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(domain(format!("{name}={v} must lie in [0, 1]")));
            }
        }
        if self.n < 2 {
            return Err(domain(format!("n={} must be at least 2", self.n)));
        }
        if self.k < 1 || self.k > self.n / 2 {
            return Err(domain(format!("k={} must lie in 1..={}", self.k, self.n / 2)));
        }
        Ok(())
    }

    /// Exchanges the reference and test model performances.
    pub fn swapped_models(&self) -> Self {
        Self {
            p_true_ref: self.p_true_test,
            p_true_test: self.p_true_ref,
            p_train_ref: self.p_train_test,
            p_train_test: self.p_train_ref,
            ..*self
        }
    }
}

/// Everything drawn for one simulated sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleDraw {
    /// Ground truth, `+1` or `-1`.
    pub y_true: i8,
    /// Training label; `0` when unlabeled.
    pub y_train: i8,
    pub marker: Verdict,
    pub score_ref: f64,
    pub score_test: f64,
    /// Coverage coin of the marker.
    pub marker_votes: bool,
    /// Accuracy coin of the marker.
    pub marker_correct: bool,
    /// Coverage coin of the training label.
    pub labeled: bool,
    /// Accuracy coin of the training label.
    pub label_correct: bool,
    /// Whether each model's score agreed with its guiding label.
    pub correct_ref: bool,
    pub correct_test: bool,
}

impl SampleDraw {
    /// The label the model scores are generated against.
    pub fn guiding_label(&self) -> i8 {
        if self.y_train != 0 {
            self.y_train
        } else {
            self.y_true
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub params: SimulationParams,
    pub draws: Vec<SampleDraw>,
}

const HALF_GAP_LOW: f64 = 0.49;

fn coin(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.gen::<f64>() < p
}

// Offset inside the lower interval (0, 0.49), kept strictly inside so that
// 1 - offset stays strictly inside (0.51, 1).
fn interval_offset(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.sample(Open01);
    (HALF_GAP_LOW * u).clamp(1e-12, HALF_GAP_LOW.next_down())
}

fn draw_score(rng: &mut ChaCha8Rng, guiding: i8, p_correct: f64) -> (f64, bool) {
    let offset = interval_offset(rng);
    let correct = coin(rng, p_correct);
    let positive = (guiding > 0) == correct;
    (if positive { 1.0 - offset } else { offset }, correct)
}

fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws sample `i` of the dataset for `params`.
pub fn draw_sample(params: &SimulationParams, i: u64) -> SampleDraw {
    let mut rng = sample_rng(params.seed, i);
    let y_true: i8 = if coin(&mut rng, params.pi) { 1 } else { -1 };

    let marker_votes = coin(&mut rng, params.beta);
    let marker_correct = coin(&mut rng, params.alpha);
    let marker = match (marker_votes, marker_correct) {
        (false, _) => Verdict::Abstain,
        (true, true) => Verdict::from_sign(i64::from(y_true)),
        (true, false) => Verdict::from_sign(-i64::from(y_true)),
    };

    let labeled = coin(&mut rng, params.beta_bar);
    let label_correct = coin(&mut rng, params.alpha_bar);
    let y_train = match (labeled, label_correct) {
        (false, _) => 0,
        (true, true) => y_true,
        (true, false) => -y_true,
    };
    let guiding = if labeled { y_train } else { y_true };

    let (p_ref, p_test) = if labeled {
        (params.p_train_ref, params.p_train_test)
    } else {
        (params.p_true_ref, params.p_true_test)
    };
    let (score_ref, correct_ref) = draw_score(&mut rng, guiding, p_ref);
    let (score_test, correct_test) = draw_score(&mut rng, guiding, p_test);

    SampleDraw {
        y_true,
        y_train,
        marker,
        score_ref,
        score_test,
        marker_votes,
        marker_correct,
        labeled,
        label_correct,
        correct_ref,
        correct_test,
    }
}

pub fn generate_dataset(params: &SimulationParams) -> Result<Dataset> {
    params.validate()?;
    let draws = (0..params.n as u64)
        .into_par_iter()
        .map(|i| draw_sample(params, i))
        .collect();
    Ok(Dataset {
        params: *params,
        draws,
    })
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Zero-padded ids so lexicographic and numeric order agree.
    pub fn sample_ids(&self) -> Vec<String> {
        let width = self.draws.len().saturating_sub(1).to_string().len();
        (0..self.draws.len()).map(|i| format!("s{i:0width$}")).collect()
    }

    pub fn score_table(&self) -> Result<ScoreTable> {
        ScoreTable::new(
            self.sample_ids(),
            self.draws.iter().map(|d| d.score_ref).collect(),
            self.draws.iter().map(|d| d.score_test).collect(),
        )
    }

    pub fn marker_matrix(&self) -> Result<MarkerMatrix> {
        let mut builder = MarkerMatrix::builder(self.sample_ids(), [SIM_MARKER])?;
        for (i, d) in self.draws.iter().enumerate() {
            if d.marker != Verdict::Abstain {
                builder.set_at(i, 0, d.marker)?;
            }
        }
        Ok(builder.build())
    }

    /// Extra independent markers with their own `(alpha, beta)`, drawn
    /// against this dataset's ground truth.
    pub fn simulate_markers(&self, specs: &[(f64, f64)], seed: u64) -> Result<MarkerMatrix> {
        let names: Vec<String> = (0..specs.len()).map(|j| format!("marker_{j}")).collect();
        let mut builder = MarkerMatrix::builder(self.sample_ids(), names)?;
        for (j, &(alpha, beta)) in specs.iter().enumerate() {
            for (name, v) in [("alpha", alpha), ("beta", beta)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(domain(format!("marker {j}: {name}={v} must lie in [0, 1]")));
                }
            }
            let marker_seed = mix_seed(&[seed, j as u64]);
            for (i, d) in self.draws.iter().enumerate() {
                let mut rng = sample_rng(marker_seed, i as u64);
                let votes = coin(&mut rng, beta);
                let correct = coin(&mut rng, alpha);
                if votes {
                    let sign = if correct { d.y_true } else { -d.y_true };
                    builder.set_at(i, j, Verdict::from_sign(i64::from(sign)))?;
                }
            }
        }
        Ok(builder.build())
    }
}

/// Runs all three region tests at region size `k` on a simulated dataset.
pub fn run_simulated(dataset: &Dataset, k: usize, level: f64) -> Result<Vec<TestResult>> {
    if dataset.is_empty() {
        return Err(domain("empty dataset"));
    }
    let scores = dataset.score_table()?;
    let markers = dataset.marker_matrix()?;
    run_comparison(&scores, &markers, &ComparisonOptions::new([k]).level(level))
}

/// Generates a dataset for `params` and tests it at `params.k`.
pub fn simulate_once(params: &SimulationParams, level: f64) -> Result<Vec<TestResult>> {
    run_simulated(&generate_dataset(params)?, params.k, level)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x5eed_u64, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Seed for repeat `repeat` of grid cell `(alpha_index, beta_index)`.
pub fn derive_seed(base: u64, alpha_index: usize, beta_index: usize, repeat: usize) -> u64 {
    mix_seed(&[base, alpha_index as u64, beta_index as u64, repeat as u64])
}

/// S/F/U counts for one grid cell and test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub success: usize,
    pub failure: usize,
    pub undetermined: usize,
}

impl Tally {
    pub fn total(&self) -> usize {
        self.success + self.failure + self.undetermined
    }

    fn add(&mut self, o: Outcome) {
        match o {
            Outcome::Success => self.success += 1,
            Outcome::Failure => self.failure += 1,
            Outcome::Undetermined => self.undetermined += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub alpha: f64,
    pub beta: f64,
    pub kind: RegionKind,
    pub tally: Tally,
}

/// An `(alpha, beta)` tiling with per-cell outcome tallies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub repeats: usize,
    pub base: SimulationParams,
    pub level: f64,
    /// Filled by [`sweep`]: alpha-major, then beta, then test kind.
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>, repeats: usize, base: SimulationParams) -> Self {
        Self {
            alphas,
            betas,
            repeats,
            base,
            level: DEFAULT_LEVEL,
            cells: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.betas.is_empty() {
            return Err(domain("alphas and betas must be non-empty"));
        }
        if self.repeats < 1 {
            return Err(domain("repeats must be at least 1"));
        }
        for (name, grid) in [("alphas", &self.alphas), ("betas", &self.betas)] {
            if grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(domain(format!("{name} must be strictly ascending")));
            }
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(domain(format!("level {} must lie in (0, 1)", self.level)));
        }
        for &a in &self.alphas {
            for &b in &self.betas {
                self.cell_params(a, b, 0).validate()?;
            }
        }
        Ok(())
    }

    fn cell_params(&self, alpha: f64, beta: f64, seed: u64) -> SimulationParams {
        SimulationParams {
            alpha,
            beta,
            seed,
            ..self.base
        }
    }

    /// Parameters of repeat `repeat` at grid indices `(ai, bi)`.
    pub fn run_params(&self, ai: usize, bi: usize, repeat: usize) -> SimulationParams {
        self.cell_params(
            self.alphas[ai],
            self.betas[bi],
            derive_seed(self.base.seed, ai, bi, repeat),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,beta,test,s_count,f_count,u_count\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                crate::report::fmt_num(c.alpha),
                crate::report::fmt_num(c.beta),
                c.kind.short_name(),
                c.tally.success,
                c.tally.failure,
                c.tally.undetermined
            ));
        }
        out
    }
}

pub fn sweep(grid: &SweepGrid) -> Result<SweepGrid> {
    sweep_with_progress(grid, |_, _| {})
}

/// Like [`sweep`], calling `progress(done, total)` as each grid cell
/// finishes. Results do not depend on scheduling.
pub fn sweep_with_progress<F>(grid: &SweepGrid, progress: F) -> Result<SweepGrid>
where
    F: Fn(usize, usize) + Sync,
{
    grid.validate()?;
    let coords: Vec<(usize, usize)> = (0..grid.alphas.len())
        .flat_map(|ai| (0..grid.betas.len()).map(move |bi| (ai, bi)))
        .collect();
    let total = coords.len();
    let done = AtomicUsize::new(0);

    let per_cell: Vec<Vec<SweepCell>> = coords
        .par_iter()
        .map(|&(ai, bi)| {
            let mut tallies = [Tally {
                success: 0,
                failure: 0,
                undetermined: 0,
            }; 3];
            let outcomes = (0..grid.repeats)
                .into_par_iter()
                .map(|r| simulate_once(&grid.run_params(ai, bi, r), grid.level))
                .collect::<Result<Vec<_>>>()?;
            for results in outcomes {
                for res in results {
                    tallies[res.kind as usize].add(res.verdict);
                }
            }
            progress(done.fetch_add(1, Ordering::SeqCst) + 1, total);
            Ok(RegionKind::ALL
                .iter()
                .map(|&kind| SweepCell {
                    alpha: grid.alphas[ai],
                    beta: grid.betas[bi],
                    kind,
                    tally: tallies[kind as usize],
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    Ok(SweepGrid {
        cells: per_cell.into_iter().flatten().collect(),
        ..grid.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: usize) -> SimulationParams {
        SimulationParams {
            seed: 42,
            ..SimulationParams::scaled(n, n / 10)
        }
    }

    #[test]
    fn prevalence_one_makes_everything_positive() {
        let d = generate_dataset(&SimulationParams { pi: 1.0, ..small(2000) }).unwrap();
        assert!(d.draws.iter().all(|s| s.y_true == 1));
    }

    #[test]
    fn perfect_marker_copies_ground_truth() {
        let d = generate_dataset(&SimulationParams {
            alpha: 1.0,
            beta: 1.0,
            ..small(2000)
        })
        .unwrap();
        assert!(d.draws.iter().all(|s| i64::from(s.marker.value()) == i64::from(s.y_true)));
    }

    #[test]
    fn scores_avoid_the_middle_band() {
        let d = generate_dataset(&small(20_000)).unwrap();
        for s in &d.draws {
            for x in [s.score_ref, s.score_test] {
                assert!((x > 0.0 && x < 0.49) || (x > 0.51 && x < 1.0), "{x}");
            }
        }
    }

    #[test]
    fn draws_are_reproducible_and_index_local() {
        let p = small(500);
        let a = generate_dataset(&p).unwrap();
        let b = generate_dataset(&p).unwrap();
        assert_eq!(a.draws, b.draws);
        // a longer dataset shares its prefix
        let longer = generate_dataset(&SimulationParams { n: 900, ..p }).unwrap();
        assert_eq!(&longer.draws[..500], &a.draws[..]);
        let other = generate_dataset(&SimulationParams { seed: 43, ..p }).unwrap();
        assert_ne!(a.draws, other.draws);
    }

    #[test]
    fn invalid_params_are_rejected() {
        let p = small(100);
        assert!(generate_dataset(&SimulationParams { pi: 0.0, ..p }).is_err());
        assert!(generate_dataset(&SimulationParams { alpha: 1.2, ..p }).is_err());
        assert!(generate_dataset(&SimulationParams { k: 51, ..p }).is_err());
        assert!(generate_dataset(&SimulationParams { k: 0, ..p }).is_err());
    }

    #[test]
    fn identical_models_are_undetermined() {
        let mut d = generate_dataset(&small(4000)).unwrap();
        for s in &mut d.draws {
            s.score_test = s.score_ref;
        }
        let results = run_simulated(&d, 400, 0.05).unwrap();
        assert_eq!(results.len(), 3);
        assert!(results.iter().all(|r| r.verdict == Outcome::Undetermined));
    }

    #[test]
    fn one_cell_sweep_matches_direct_run() {
        let base = small(3000);
        let grid = SweepGrid::new(vec![0.8], vec![0.9], 1, base);
        let out = sweep(&grid).unwrap();
        let direct = simulate_once(&grid.run_params(0, 0, 0), grid.level).unwrap();
        assert_eq!(out.cells.len(), 3);
        for (cell, res) in out.cells.iter().zip(&direct) {
            assert_eq!(cell.kind, res.kind);
            assert_eq!(cell.tally.total(), 1);
            let expect = match res.verdict {
                Outcome::Success => cell.tally.success,
                Outcome::Failure => cell.tally.failure,
                Outcome::Undetermined => cell.tally.undetermined,
            };
            assert_eq!(expect, 1);
        }
    }

    #[test]
    fn three_by_three_sweep_counts() {
        let grid = SweepGrid::new(vec![0.2, 0.5, 0.8], vec![0.3, 0.6, 0.9], 2, small(1000));
        let out = sweep(&grid).unwrap();
        assert_eq!(out.cells.len(), 27);
        assert!(out.cells.iter().all(|c| c.tally.total() == 2));
        let csv = out.to_csv();
        assert_eq!(csv.lines().count(), 28);
        assert!(csv.starts_with("alpha,beta,test,s_count,f_count,u_count\n0.2,0.3,top,"));
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let base = small(1000);
        assert!(sweep(&SweepGrid::new(vec![], vec![0.5], 1, base)).is_err());
        assert!(sweep(&SweepGrid::new(vec![0.5, 0.4], vec![0.5], 1, base)).is_err());
        assert!(sweep(&SweepGrid::new(vec![0.5], vec![0.5], 0, base)).is_err());
    }

    #[test]
    fn extra_markers_follow_their_rates() {
        let d = generate_dataset(&small(20_000)).unwrap();
        let m = d.simulate_markers(&[(1.0, 1.0), (0.0, 0.5)], 7).unwrap();
        let ids = d.sample_ids();
        for (i, id) in ids.iter().enumerate().take(500) {
            assert_eq!(
                i64::from(m.verdict(id, "marker_0").unwrap().value()),
                i64::from(d.draws[i].y_true)
            );
            let v = m.verdict(id, "marker_1").unwrap();
            assert!(v == Verdict::Abstain || i64::from(v.value()) == -i64::from(d.draws[i].y_true));
        }
    }
}
