//! Builds a term co-occurrence map from titles and abstracts and lists its
//! clusters.
//!
//!     cargo run --example concept_map

use std::collections::BTreeMap;

use sbcite::synth::{generate, SynthConfig};
use sbcite::textmine::{concept_graph, ConceptOptions, EdgeNormalization};

fn main() -> sbcite::Result<()> {
    let synth = generate(&SynthConfig {
        n_publications: 3_000,
        n_planted_sbs: 0,
        abstracts: true,
        ..Default::default()
    })?;
    let docs: Vec<String> = synth.publications.iter().map(|p| p.text()).collect();
    let map = concept_graph(
        &docs,
        &ConceptOptions {
            min_occurrences: 60,
            max_gram: 2,
            normalize: EdgeNormalization::Association,
            ..Default::default()
        },
    );
    println!("{} terms, {} links, {} clusters", map.terms.len(), map.graph.edges.len(), map.n_clusters());
    let mut clusters: BTreeMap<usize, Vec<(&str, usize)>> = BTreeMap::new();
    for t in &map.terms {
        clusters.entry(t.cluster).or_default().push((&t.term, t.df));
    }
    for (id, mut terms) in clusters {
        terms.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let top: Vec<&str> = terms.iter().take(6).map(|t| t.0).collect();
        println!("cluster {id:>2} ({:>3} terms): {}", terms.len(), top.join(", "));
    }
    Ok(())
}
