// Compare a reference and a test model on a handful of samples using two
// markers, and print the human-readable report.
//
// Run with `cargo run --example compare_models`.

use markereval::hypothesis::{run_comparison, ComparisonOptions};
use markereval::markers::{MarkerMatrix, Verdict};
use markereval::regions::ScoreTable;
use markereval::report::{OutputFormat, Report};

pub fn run_example() -> markereval::Result<String> {
    // (sample, reference score, test score)
    let scores = ScoreTable::from_rows([
        ("pe-0001", 0.97, 0.91),
        ("pe-0002", 0.88, 0.95),
        ("pe-0003", 0.45, 0.97),
        ("pe-0004", 0.93, 0.12),
        ("pe-0005", 0.41, 0.83),
        ("pe-0006", 0.33, 0.05),
        ("pe-0007", 0.21, 0.30),
        ("pe-0008", 0.09, 0.02),
    ])?;

    let mut markers = MarkerMatrix::builder(
        scores.sample_ids().iter().map(String::as_str),
        ["packed_sections", "signed_by_known_vendor"],
    )?;
    for id in ["pe-0002", "pe-0003", "pe-0005"] {
        markers.set(id, "packed_sections", Verdict::Malicious)?;
    }
    for id in ["pe-0004", "pe-0006", "pe-0008"] {
        markers.set(id, "signed_by_known_vendor", Verdict::Benign)?;
    }
    let markers = markers.build();

    // a generous level: eight samples cannot reach 0.05
    let options = ComparisonOptions::new([3]).level(0.25);
    let results = run_comparison(&scores, &markers, &options)?;
    let report = Report {
        n_samples: scores.len(),
        markers: markers.marker_names().to_vec(),
        dropped_marker_rows: 0,
        results,
    };
    Ok(report.render(OutputFormat::Table))
}

#[allow(dead_code)]
fn main() -> markereval::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
