//! A small parameter sweep printed as CSV.

use tdomset::algorithms::NamedAlgorithm;
use tdomset::cli::{sweep_rows, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SweepSpec {
        n: vec![64, 128, 256],
        t: vec![2, 8, 24],
        algorithms: vec![NamedAlgorithm::ChooseSmallest, NamedAlgorithm::RulingSet],
        seeds: vec![0, 1],
    };
    let mut w = csv::Writer::from_writer(std::io::stdout());
    for row in sweep_rows(&spec)? {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
