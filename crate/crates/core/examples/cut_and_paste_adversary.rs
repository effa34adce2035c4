//! Builds the spliced ring against an algorithm and shows it forces a set of
//! more than `λn/(2T+1)` members.
//!
//! cargo run --release --example cut_and_paste_adversary -- [n] [T] [λ] [alg]

use num_rational::Rational64;
use tdomset::adversary::{feasible, run_cut_and_paste_experiment};
use tdomset::algorithms::NamedAlgorithm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: u64 = args.first().map_or(Ok(2448), |a| a.parse())?;
    let t: u32 = args.get(1).map_or(Ok(4), |a| a.parse())?;
    let lambda: Rational64 = args.get(2).map_or("7/5", |a| a.as_str()).parse()?;
    let alg: NamedAlgorithm = args.get(3).map_or("ruling-set", |a| a.as_str()).parse()?;

    let f = feasible(n, t, lambda);
    if !f.feasible {
        println!("infeasible: {}", f.reason.unwrap_or_default());
        return Ok(());
    }
    let r = run_cut_and_paste_experiment(&alg, n, t, lambda, false)?;
    println!("{alg} on n={n} T={t} λ={lambda}");
    println!(
        "c={} bound 3c+4={} target={} (~{:.2})",
        r.c, r.bound, r.target, r.target_approx
    );
    println!(
        "members {} in {} rounds, {} of {} view pairs force a member between",
        r.member_count,
        r.rounds_used,
        r.pairs.iter().filter(|p| p.passed()).count(),
        r.pairs.len()
    );
    println!(
        "composed ring dominating: {}",
        r.composed_dominating.verdict
    );
    println!("bound exceeds target: {}", r.bound_exceeds_target);
    Ok(())
}
