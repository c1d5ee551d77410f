// Tally verdicts over a grid of marker accuracies and coverages, as the
// `simulate` subcommand does from a config file.

use markereval::simlab::{sweep_with_progress, SimulationParams, SweepGrid};

pub fn run_example() -> markereval::Result<String> {
    let grid = SweepGrid::new(
        vec![0.3, 0.7],
        vec![0.2, 0.9],
        2,
        SimulationParams {
            seed: 5,
            ..SimulationParams::scaled(8_000, 400)
        },
    );
    let done = sweep_with_progress(&grid, |cell, total| eprintln!("cell {cell}/{total}"))?;
    Ok(done.to_csv())
}

#[allow(dead_code)]
fn main() -> markereval::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
