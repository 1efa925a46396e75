//! Co-citation and bibliographic coupling networks around an SB, written
//! as GraphML and as an edge list.
//!
//!     cargo run --example citation_networks -- out/

use std::path::PathBuf;

use sbcite::netgraph::{
    bibcoupling_graph, cocitation_graph, early_citers, export_graph, CocitationOptions, CouplingWeight, GraphFormat,
};
use sbcite::synth::scenarios::{te, te_like};

fn main() -> sbcite::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let corpus = te_like();
    let sb = corpus.idx(te::SB).expect("scenario contains its SB");

    // Papers citing the SB co-cite its neighbours.
    let citing: Vec<&str> = corpus.citers(sb).iter().map(|&c| corpus.publication(c).id.as_str()).collect();
    let co = cocitation_graph(
        &corpus,
        &citing,
        &CocitationOptions {
            min_edge_weight: 5,
            keep_isolates: false,
        },
    )?;
    println!("co-citation: {} nodes, {} edges with weight >= 5", co.nodes.len(), co.edges.len());
    for e in co.edges.iter().filter(|e| e.source == te::SB || e.target == te::SB) {
        println!("  {} -- {}  {}", e.source, e.target, e.weight);
    }

    let mut set: Vec<String> = vec![te::SB.to_string()];
    set.extend(early_citers(&corpus, sb, 25).into_iter().map(|i| corpus.publication(i).id.clone()));
    let refs: Vec<&str> = set.iter().map(String::as_str).collect();
    let cp = bibcoupling_graph(&corpus, &refs, 1, CouplingWeight::Cosine)?;
    println!("coupling among the SB and its early citers: {} edges", cp.edges.len());

    std::fs::create_dir_all(&out).map_err(|e| sbcite::Error::Io { path: out.clone(), source: e })?;
    export_graph(&co, GraphFormat::GraphMl, &out.join("cocitation.graphml"))?;
    export_graph(&cp, GraphFormat::EdgeList, &out.join("coupling.tsv"))?;
    println!("wrote {}", out.display());
    Ok(())
}
