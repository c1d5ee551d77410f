//! Majority-vote accuracy and coverage of independent markers.
//!
//! With `k` independent markers of accuracy `alpha`, the number of correct
//! votes is binomial; with heterogeneous accuracies it is Poisson-binomial.
//! The majority is correct when more than half the votes are, and ties
//! (possible for even `k`) abstain.

use serde::Serialize;

use crate::error::{domain, Result};

/// Probabilities of a correct, tied and wrong majority vote.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VoteOutcome {
    pub p_correct: f64,
    pub p_tie: f64,
    pub p_wrong: f64,
}

impl VoteOutcome {
    fn from_pmf(pmf: &[f64]) -> Self {
        let k = pmf.len() - 1;
        let half = k / 2;
        let mut p_correct: f64 = pmf[half + 1..].iter().sum();
        let (p_tie, wrong_end) = if k.is_multiple_of(2) { (pmf[half], half) } else { (0.0, half + 1) };
        let mut p_wrong: f64 = pmf[..wrong_end].iter().sum();
        // Keep the small tail as summed and take the large side as its
        // complement, so the result has the small tail's relative precision.
        if p_wrong < p_correct {
            p_correct = 1.0 - (p_wrong + p_tie);
        } else {
            p_wrong = 1.0 - (p_correct + p_tie);
        }
        Self {
            p_correct,
            p_tie,
            p_wrong,
        }
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("{name}={p} must lie in [0, 1]")));
    }
    Ok(())
}

/// Binomial pmf of correct votes among `k` markers of accuracy `alpha`.
///
/// Built outward from the mode by the ratio recurrence
/// `pmf(n+1)/pmf(n) = (k-n)/(n+1) * alpha/(1-alpha)` and normalized, so it
/// neither overflows nor underflows at the mode for large `k`.
pub fn binomial_pmf(k: usize, alpha: f64) -> Result<Vec<f64>> {
    if k < 1 {
        return Err(domain("number of markers k must be at least 1"));
    }
    check_probability("alpha", alpha)?;
    let mut pmf = vec![0.0; k + 1];
    if alpha == 0.0 {
        pmf[0] = 1.0;
        return Ok(pmf);
    }
    if alpha == 1.0 {
        pmf[k] = 1.0;
        return Ok(pmf);
    }
    if k == 1 {
        // exact; normalization below would round alpha
        return Ok(vec![1.0 - alpha, alpha]);
    }
    let odds = alpha / (1.0 - alpha);
    let mode = (((k + 1) as f64 * alpha).floor() as usize).min(k);
    pmf[mode] = 1.0;
    for n in mode..k {
        pmf[n + 1] = pmf[n] * (k - n) as f64 / (n + 1) as f64 * odds;
    }
    for n in (0..mode).rev() {
        pmf[n] = pmf[n + 1] * (n + 1) as f64 / (k - n) as f64 / odds;
    }
    let total: f64 = pmf.iter().sum();
    pmf.iter_mut().for_each(|p| *p /= total);
    Ok(pmf)
}

/// Majority-vote outcome of `k` markers that are each correct with
/// probability `alpha`.
pub fn majority_accuracy(k: usize, alpha: f64) -> Result<VoteOutcome> {
    Ok(VoteOutcome::from_pmf(&binomial_pmf(k, alpha)?))
}

/// Poisson-binomial pmf of correct votes, by convolving one marker at a time.
pub fn poisson_binomial_pmf(alphas: &[f64]) -> Result<Vec<f64>> {
    if alphas.is_empty() {
        return Err(domain("at least one marker accuracy is required"));
    }
    let mut pmf = vec![1.0];
    for (j, &a) in alphas.iter().enumerate() {
        check_probability(&format!("alphas[{j}]"), a)?;
        let mut next = vec![0.0; pmf.len() + 1];
        for (n, &p) in pmf.iter().enumerate() {
            next[n] += p * (1.0 - a);
            next[n + 1] += p * a;
        }
        pmf = next;
    }
    Ok(pmf)
}

/// Majority-vote outcome for markers with individual accuracies.
pub fn majority_accuracy_hetero(alphas: &[f64]) -> Result<VoteOutcome> {
    Ok(VoteOutcome::from_pmf(&poisson_binomial_pmf(alphas)?))
}

/// Probability that at least one of several independent markers votes.
pub fn combined_coverage(betas: &[f64]) -> Result<f64> {
    if betas.is_empty() {
        return Err(domain("at least one marker coverage is required"));
    }
    for (j, &b) in betas.iter().enumerate() {
        check_probability(&format!("betas[{j}]"), b)?;
    }
    // 1 - prod(1 - b), accumulated as a running union from the largest
    // coverage down: every step adds a non-negative term, so the result is
    // never below max(b) even after rounding, and input order is irrelevant.
    let mut sorted = betas.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(sorted[1..].iter().fold(sorted[0], |c, &b| c + b * (1.0 - c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub k: usize,
    pub alpha: f64,
    pub p_correct: f64,
}

/// `majority_accuracy` over the product of `k_values` and `alpha_values`,
/// `k` varying slowest.
pub fn accuracy_curves(k_values: &[usize], alpha_values: &[f64]) -> Result<Vec<CurvePoint>> {
    if k_values.is_empty() || alpha_values.is_empty() {
        return Err(domain("curve grids must be non-empty"));
    }
    let mut rows = Vec::with_capacity(k_values.len() * alpha_values.len());
    for &k in k_values {
        for &alpha in alpha_values {
            rows.push(CurvePoint {
                k,
                alpha,
                p_correct: majority_accuracy(k, alpha)?.p_correct,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginalImpact {
    pub alpha_new: f64,
    pub p_correct_with: f64,
    pub p_correct_without: f64,
}

/// Effect on majority accuracy of adding one marker of accuracy `alpha_new`
/// to `base_alphas`, for each candidate accuracy.
pub fn marginal_marker_impact(base_alphas: &[f64], new_alpha_values: &[f64]) -> Result<Vec<MarginalImpact>> {
    let without = majority_accuracy_hetero(base_alphas)?.p_correct;
    new_alpha_values
        .iter()
        .map(|&a| {
            let mut all = base_alphas.to_vec();
            all.push(a);
            Ok(MarginalImpact {
                alpha_new: a,
                p_correct_with: majority_accuracy_hetero(&all)?.p_correct,
                p_correct_without: without,
            })
        })
        .collect()
}

/// CSV with a header row: `k,alpha,p_correct`.
pub fn curves_csv(rows: &[CurvePoint]) -> String {
    let mut out = String::from("k,alpha,p_correct\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            r.k,
            crate::report::fmt_num(r.alpha),
            crate::report::fmt_num(r.p_correct)
        ));
    }
    out
}

/// CSV with a header row: `alpha_new,p_correct_with,p_correct_without`.
pub fn marginal_csv(rows: &[MarginalImpact]) -> String {
    let mut out = String::from("alpha_new,p_correct_with,p_correct_without\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            crate::report::fmt_num(r.alpha_new),
            crate::report::fmt_num(r.p_correct_with),
            crate::report::fmt_num(r.p_correct_without)
        ));
    }
    out
}
