//! Label-free comparison of two scoring models.
//!
//! Domain-expert *markers* vote on each sample (`+1` malicious, `-1` benign,
//! `0` abstain) and their majority vote gives a combined marker score. Both
//! models' scores are turned into ranks, three regions of interest are cut
//! from the ranks (Top-K, Bottom-K and the largest rank movers), and a
//! Welch t-test on the regions' marker scores decides whether the test model
//! beats the reference model, loses to it, or cannot be told apart.
//!
//! The [`simlab`] module generates labelled synthetic data with controlled
//! marker and model quality, and [`voting`] computes majority-vote accuracy
//! and coverage for independent markers.
//!
//! ```
//! use markereval::{hypothesis::{run_comparison, ComparisonOptions}, markers::{MarkerMatrix, Verdict}, regions::ScoreTable};
//!
//! let scores = ScoreTable::from_rows([
//!     ("a", 0.9, 0.1), ("b", 0.8, 0.9), ("c", 0.2, 0.8), ("d", 0.1, 0.2),
//! ])?;
//! let mut markers = MarkerMatrix::builder(["a", "b", "c", "d"], ["packed"])?;
//! markers.set("b", "packed", Verdict::Malicious)?;
//! markers.set("c", "packed", Verdict::Malicious)?;
//! let results = run_comparison(&scores, &markers.build(), &ComparisonOptions::new([2]))?;
//! assert_eq!(results.len(), 3);
//! # Ok::<(), markereval::Error>(())
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod hypothesis;
pub mod io;
pub mod markers;
pub mod regions;
pub mod report;
pub mod simlab;
pub mod special;
pub mod voting;

pub use error::{Error, Result};
pub use hypothesis::{run_comparison, welch_test, ComparisonOptions, Outcome, TestResult, WelchResult};
pub use markers::{Aggregation, MarkerMatrix, Verdict};
pub use regions::{RankVector, RegionKind, RegionPair, ScoreTable};
pub use report::{OutputFormat, Report};
pub use simlab::{generate_dataset, SimulationParams, SweepGrid};
