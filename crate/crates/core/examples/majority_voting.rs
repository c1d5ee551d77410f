// How many weak markers make a strong one: majority accuracy, combined
// coverage, and the value of adding one more marker.

use markereval::voting::{accuracy_curves, combined_coverage, majority_accuracy, marginal_marker_impact};

pub fn run_example() -> markereval::Result<String> {
    let mut out = String::new();
    for p in accuracy_curves(&[1, 3, 7, 15], &[0.6, 0.7])? {
        out += &format!("k={:<2} alpha={} -> {:.4}\n", p.k, p.alpha, p.p_correct);
    }
    let even = majority_accuracy(4, 0.7)?;
    out += &format!(
        "k=4 alpha=0.7: correct {:.4}, tie {:.4}, wrong {:.4}\n",
        even.p_correct, even.p_tie, even.p_wrong
    );
    out += &format!("coverage of [0.3, 0.2, 0.1]: {:.3}\n", combined_coverage(&[0.3, 0.2, 0.1])?);
    for m in marginal_marker_impact(&[0.6, 0.6, 0.6, 0.6], &[0.55, 0.9])? {
        out += &format!(
            "adding alpha={} to four 0.6 markers: {:.4} -> {:.4}\n",
            m.alpha_new, m.p_correct_without, m.p_correct_with
        );
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> markereval::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
