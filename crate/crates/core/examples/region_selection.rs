// Regions of interest: the highest- and lowest-ranked samples of each
// model, and the samples whose rank moved the most between them.

use markereval::regions::{ids_of, Model, RegionKind, RegionPair, ScoreTable};

pub fn run_example() -> markereval::Result<String> {
    let scores = ScoreTable::from_rows([
        ("a", 0.9, 0.2),
        ("b", 0.8, 0.9),
        ("c", 0.7, 0.8),
        ("d", 0.3, 0.7),
        ("e", 0.2, 0.1),
        ("f", 0.1, 0.3),
    ])?;
    let ids = scores.sample_ids();
    let mut out = String::new();

    let ranks_ref = scores.ranks(Model::Reference);
    let ranks_test = scores.ranks(Model::Test);
    for (i, id) in ids.iter().enumerate() {
        let delta = ranks_test.rank(i) as i64 - ranks_ref.rank(i) as i64;
        out += &format!("{id}: rank {} -> {} ({delta:+})\n", ranks_ref.rank(i), ranks_test.rank(i));
    }

    for kind in RegionKind::ALL {
        let pair = RegionPair::build(&scores, kind, 2)?;
        let (a, b) = match kind {
            RegionKind::Movers => ("up", "down"),
            _ => ("reference", "test"),
        };
        out += &format!(
            "{kind}: {a} {:?}, {b} {:?}\n",
            ids_of(ids, &pair.set_a),
            ids_of(ids, &pair.set_b)
        );
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> markereval::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
