//! Turns a T-dominating algorithm into a ring colouring with at most eight
//! colours and prints where the construction holds or breaks.
//!
//! cargo run --release --example eight_colour_reduction -- [n] [x] [T] [T']

use num_rational::Rational64;
use tdomset::algorithms::NamedAlgorithm;
use tdomset::graph::RingSpec;
use tdomset::reductions::{eight_colour_ring, BudgetOverrides};
use tdomset::verify::is_proper_colouring;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(Ok(150), |a| a.parse())?;
    let x: Rational64 = args.get(1).map_or("1/4", |a| a.as_str()).parse()?;
    let overrides = BudgetOverrides {
        t: Some(args.get(2).map_or(Ok(4), |a| a.parse())?),
        t_prime: Some(args.get(3).map_or(Ok(2), |a| a.parse())?),
    };
    let ring = RingSpec::shuffled(n, 3)?;

    for alg in [NamedAlgorithm::RulingSet, NamedAlgorithm::ChooseSmallest] {
        let res = eight_colour_ring(&alg, &ring, x, Rational64::from_integer(1), overrides)?;
        let p = &res.params;
        println!(
            "{alg}: y={} T={} T'={} rounds={}",
            p.y, p.t, p.t_prime, res.rounds_used
        );
        if res.undetermined.is_empty() {
            let proper = is_proper_colouring(&ring.to_graph(n as u64)?, &res.colors, 8)?;
            let used = res.colors.iter().flatten().max().copied().unwrap_or(0);
            println!("  proper: {} using colours up to {used}", proper.verdict);
        } else {
            println!(
                "  {} nodes cannot see a stretch boundary",
                res.undetermined.len()
            );
        }
        for v in &res.claim_violations {
            println!("  violated {:?}: {}", v.claim, v.statement);
        }
    }
    Ok(())
}
