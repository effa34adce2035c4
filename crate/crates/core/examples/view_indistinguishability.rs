//! Two rings that agree on a segment give the nodes deep inside it identical
//! radius-T views, so any T-round algorithm answers the same there.

use tdomset::algorithms::{ChooseSmallest, NamedAlgorithm};
use tdomset::graph::{Label, RingSpec};
use tdomset::sim::{execute, views_equal, AlgorithmFamily};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, t) = (30usize, 3u32);
    let a = RingSpec::shuffled(n, 11)?;
    let seg = 12;
    let mut labels = a.labels()[..seg].to_vec();
    labels.extend(a.labels()[seg..].iter().rev());
    let b = RingSpec::new(labels)?;
    let (ga, gb) = (a.to_graph(n as Label)?, b.to_graph(n as Label)?);

    for p in 0..seg {
        let same = views_equal(&ga.ball(p, t)?, &gb.ball(p, t)?);
        println!(
            "position {p:2} label {:2}: views equal {same}",
            a.labels()[p]
        );
    }

    let ra = execute(&ChooseSmallest::new(t), &ga, t)?;
    let rb = execute(&ChooseSmallest::new(t), &gb, t)?;
    let agree = (t as usize..seg - t as usize).all(|p| ra.is_member(p) == rb.is_member(p));
    println!("choose-smallest agrees inside the segment: {agree}");

    let alg = NamedAlgorithm::RulingSet.instantiate(t, n as Label);
    let (ra, rb) = (
        execute(alg.as_ref(), &ga, t)?,
        execute(alg.as_ref(), &gb, t)?,
    );
    let agree = (t as usize..seg - t as usize).all(|p| ra.is_member(p) == rb.is_member(p));
    println!("ruling-set agrees inside the segment: {agree}");
    Ok(())
}
