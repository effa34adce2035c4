//! The ruling-set dominator: members pairwise more than `k` apart, every node
//! within `k` of one, for the largest `k` the round budget pays for.
//!
//! cargo run --example ruling_set -- [n] [T]

use tdomset::algorithms::{NamedAlgorithm, RulingParams};
use tdomset::graph::{Label, RingSpec};
use tdomset::sim::{execute, AlgorithmFamily};
use tdomset::verify::{is_k_spaced, is_t_dominating};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(256), |a| a.parse())?;
    let g = RingSpec::shuffled(n, 1)?.to_graph(n as Label)?;

    let budgets: Vec<u32> = match args.next() {
        Some(t) => vec![t.parse()?],
        None => (0..4)
            .map(|level| RulingParams::cost(n as Label, level) as u32)
            .collect(),
    };
    for t in budgets {
        let p = RulingParams::new(t, n as Label);
        let res = execute(
            NamedAlgorithm::RulingSet
                .instantiate(t, n as Label)
                .as_ref(),
            &g,
            t,
        )?;
        match p.k {
            Some(k) => println!(
                "T={t:4} level={} k={k:2} size={:4} rounds={:4} dominating={} spaced={}",
                p.level.unwrap(),
                res.size(),
                res.rounds_used,
                is_t_dominating(&g, &res.member_set, k)?.verdict,
                is_k_spaced(&g, &res.member_set, k)?.verdict,
            ),
            None => println!("T={t:4} below t0+3={}: every node joins", p.t0 + 3),
        }
    }
    Ok(())
}
