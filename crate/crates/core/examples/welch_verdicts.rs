// Welch's t-test on two regions' marker scores, and how its p-value turns
// into a Success / Failure / Undetermined verdict for each test kind.

use markereval::hypothesis::{decide, verdict, welch_test};
use markereval::regions::RegionKind;

pub fn run_example() -> markereval::Result<String> {
    let reference_region = [1.0, 0.0, 1.0, -1.0, 0.0, 1.0, 0.0, 0.0];
    let test_region = [1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0];
    let r = welch_test(&reference_region, &test_region)?;
    let mut out = format!(
        "means {:.3} vs {:.3}, t = {:.4}, df = {:.3}, p = {:.5}\n",
        r.mean_a,
        r.mean_b,
        r.t.unwrap_or(f64::NAN),
        r.df.unwrap_or(f64::NAN),
        r.p.unwrap_or(f64::NAN)
    );
    for level in [0.01, 0.05, 0.10] {
        out += &format!("Top-K verdict at level {level}: {}\n", verdict(RegionKind::TopK, &r, level));
    }

    // No variation on either side: nothing to test.
    let flat = welch_test(&[0.0; 5], &[0.0; 5])?;
    out += &format!("all-abstain regions: p = {:?}, verdict {}\n", flat.p, verdict(RegionKind::TopK, &flat, 0.05));

    // The same significant difference reads differently per test kind.
    for kind in RegionKind::ALL {
        out += &format!("{kind} with means (0.2, 0.6), p = 0.001: {}\n", decide(kind, 0.2, 0.6, Some(0.001), 0.05));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> markereval::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
