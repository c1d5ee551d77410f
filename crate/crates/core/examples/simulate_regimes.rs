// Simulated data with known ground truth: a good marker finds the better
// model, an adversarial marker blames it, and a coin-flip marker stays
// inconclusive.

use markereval::simlab::{simulate_once, SimulationParams};

pub fn run_example() -> markereval::Result<String> {
    let mut out = String::from("alpha  TopK  BottomK  Movers\n");
    for alpha in [0.9, 0.5, 0.1] {
        let params = SimulationParams {
            alpha,
            beta: 0.8,
            seed: 1,
            ..SimulationParams::scaled(40_000, 2_000)
        };
        let results = simulate_once(&params, 0.05)?;
        let letters: Vec<String> = results.iter().map(|r| r.verdict.to_string()).collect();
        out += &format!("{alpha:<5}  {:<4}  {:<7}  {}\n", letters[0], letters[1], letters[2]);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> markereval::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
