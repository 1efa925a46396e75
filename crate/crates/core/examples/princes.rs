//! Ranks the early citers of a queueing-theory SB as candidate princes and
//! writes its early-citer network as DOT.
//!
//!     cargo run --example princes > te.dot

use sbcite::netgraph::{early_citer_subnet, rank_princes, render_graph, GraphFormat, PrinceConfig};
use sbcite::synth::scenarios::{te, te_like};

fn main() -> sbcite::Result<()> {
    let corpus = te_like();
    let ranked = rank_princes(&corpus, te::SB, &PrinceConfig::default())?;
    eprintln!("rank  candidate      year  cites  co-cited  shared refs  score");
    for (i, c) in ranked.iter().enumerate() {
        eprintln!(
            "{:>4}  {:<13} {}  {:>5}  {:>8}  {:>11}  {:.3}{}",
            i + 1,
            c.pub_id,
            c.year,
            c.own_citations,
            c.cocite_weight,
            c.coupling,
            c.score,
            if c.early_passing_prince { "  (early)" } else { "" }
        );
    }
    let net = early_citer_subnet(&corpus, te::SB, 25)?;
    print!("{}", render_graph(&net, GraphFormat::Dot));
    Ok(())
}
