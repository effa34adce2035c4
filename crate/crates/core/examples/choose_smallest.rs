//! Runs choose-smallest on a shuffled ring and checks the result.
//!
//! cargo run --example choose_smallest -- [n] [T] [seed]

use tdomset::algorithms::ChooseSmallest;
use tdomset::graph::{Label, RingSpec};
use tdomset::sim::execute;
use tdomset::verify::{check_certificates, is_t_dominating};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let n = args.first().copied().unwrap_or(60) as usize;
    let t = args.get(1).copied().unwrap_or(6) as u32;
    let seed = args.get(2).copied().unwrap_or(0);

    let g = RingSpec::shuffled(n, seed)?.to_graph(n as Label)?;
    let res = execute(&ChooseSmallest::new(t), &g, t)?;
    let dom = is_t_dominating(&g, &res.member_set, t)?;

    println!("n={n} T={t} seed={seed}");
    println!("members: {:?}", res.member_labels(&g));
    println!(
        "size {} (at most {}), rounds {}",
        res.size(),
        n.saturating_sub(t as usize / 2).max(1),
        res.rounds_used
    );
    println!("dominating: {}", dom.verdict);
    println!("certificates: {}", check_certificates(&g, &res, t).verdict);
    Ok(())
}
