//! Exact minimum T-dominating set sizes on small rings against ⌈n/(2T+1)⌉.

use tdomset::graph::{Label, RingSpec};
use tdomset::verify::min_dominating_size_oracle;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("  n  T  min  ceil(n/(2T+1))");
    for n in [5usize, 9, 13, 16, 21] {
        let g = RingSpec::identity(n)?.to_graph(n as Label)?;
        for t in 0..=3u32 {
            let m = min_dominating_size_oracle(&g, t)?;
            println!("{n:3} {t:2} {m:4} {:6}", n.div_ceil(2 * t as usize + 1));
        }
    }
    Ok(())
}
