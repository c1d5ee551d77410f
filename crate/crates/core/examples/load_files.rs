// Reading score and marker files, and reconciling their sample sets.

use markereval::io::{parse_marker_rows, parse_scores, reconcile, UnmatchedPolicy};

const SCORES: &str = "sample_id,score_ref,score_test
example.com,0.10,0.05
evil.test,0.92,0.97
sinkhole.test,0.55,0.81
";

// JSON Lines is detected automatically; `ghost.test` has no scores.
const MARKERS: &str = r#"{"sample_id": "evil.test", "marker": "abused_domain", "verdict": 1}
{"sample_id": "sinkhole.test", "marker": "sinkholed", "verdict": 1}
{"sample_id": "example.com", "marker": "popular", "verdict": -1}
{"sample_id": "ghost.test", "marker": "sinkholed", "verdict": 1}
"#;

pub fn run_example() -> markereval::Result<String> {
    let scores = parse_scores(SCORES, "scores.csv")?;
    let rows = parse_marker_rows(MARKERS, "markers.jsonl")?;

    let mut out = String::new();
    match reconcile(&scores, &rows, UnmatchedPolicy::Strict, "markers.jsonl") {
        Ok(_) => unreachable!("ghost.test is unscored"),
        Err(e) => out += &format!("strict: {e}\n"),
    }
    let (markers, dropped) = reconcile(&scores, &rows, UnmatchedPolicy::Abstain, "markers.jsonl")?;
    out += &format!("abstain: dropped {dropped} row(s), markers {:?}\n", markers.marker_names());
    for id in scores.sample_ids() {
        out += &format!("{id}: combined {}\n", markers.combined_score(id)?.value());
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> markereval::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
