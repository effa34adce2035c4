//! Writes a labeled graph to the text format, reads it back and runs
//! choose-smallest on it.

use tdomset::algorithms::ChooseSmallest;
use tdomset::graph::{parse_graph, write_graph, LabeledGraph};
use tdomset::sim::execute;
use tdomset::verify::is_t_dominating;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a path 4-8-1-6 with a pendant 3 on 1
    let g = LabeledGraph::from_edges(vec![4, 8, 1, 6, 3], &[(0, 1), (1, 2), (2, 3), (2, 4)], 10)?;
    let text = write_graph(&g);
    print!("{text}");
    let back = parse_graph(&text)?;
    assert_eq!(back, g);

    let res = execute(&ChooseSmallest::new(2), &back, 2)?;
    println!("members {:?}", res.member_labels(&back));
    println!(
        "dominating {}",
        is_t_dominating(&back, &res.member_set, 2)?.verdict
    );

    match parse_graph("3 3\nring: 1 2 x\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("malformed input: {e}"),
    }
    Ok(())
}
