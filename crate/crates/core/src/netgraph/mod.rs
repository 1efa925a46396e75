//! Citation-derived networks: co-citation, bibliographic coupling and
//! early-citer subnets, plus prince ranking and graph export.

mod export;
mod princes;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

pub use export::{export_graph, parse_edgelist, render_graph, GraphFormat};
pub use princes::{rank_princes, PrinceCandidate, PrinceConfig};

use crate::corpus::{Corpus, PubIdx};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub label: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

/// A graph in canonical form: nodes ordered by id, edges by (source, target),
/// and `source < target` for undirected edges.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub directed: bool,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(directed: bool, nodes: Vec<Node>, edges: Vec<Edge>) -> Self {
        let mut g = WeightedGraph {
            directed,
            nodes,
            edges,
        };
        g.canonicalize();
        g
    }

    fn canonicalize(&mut self) {
        if !self.directed {
            for e in &mut self.edges {
                if e.source > e.target {
                    std::mem::swap(&mut e.source, &mut e.target);
                }
            }
        }
        self.nodes.sort_by(|a, b| a.id.cmp(&b.id));
        self.edges
            .sort_by(|a, b| (&a.source, &a.target).cmp(&(&b.source, &b.target)));
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes
            .binary_search_by(|n| n.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.nodes[i])
    }

    /// Weight of the edge between `u` and `v` (either order when undirected).
    pub fn edge_weight(&self, u: &str, v: &str) -> Option<f64> {
        let (a, b) = if !self.directed && u > v { (v, u) } else { (u, v) };
        self.edges
            .binary_search_by(|e| (e.source.as_str(), e.target.as_str()).cmp(&(a, b)))
            .ok()
            .map(|i| self.edges[i].weight)
    }

    /// Drops edges lighter than `min_weight`, leaving the rest untouched.
    pub fn with_min_edge_weight(mut self, min_weight: f64) -> Self {
        self.edges.retain(|e| e.weight >= min_weight);
        self
    }

    pub fn without_isolates(mut self) -> Self {
        let used: BTreeSet<&str> = self
            .edges
            .iter()
            .flat_map(|e| [e.source.as_str(), e.target.as_str()])
            .collect();
        let keep: Vec<bool> = self.nodes.iter().map(|n| used.contains(n.id.as_str())).collect();
        let mut it = keep.into_iter();
        self.nodes.retain(|_| it.next().unwrap());
        self
    }
}

fn resolve_set(corpus: &Corpus, ids: &[&str], what: &str) -> Result<Vec<PubIdx>> {
    if ids.is_empty() {
        return Err(Error::InvalidParams(format!("{what} must not be empty")));
    }
    let mut out = ids
        .iter()
        .map(|id| corpus.require(id))
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn node_for(corpus: &Corpus, idx: PubIdx, weight: f64) -> Node {
    Node {
        id: corpus.publication(idx).id.clone(),
        label: corpus.label(idx),
        weight,
    }
}

fn edge_for(corpus: &Corpus, u: PubIdx, v: PubIdx, weight: f64) -> Edge {
    Edge {
        source: corpus.publication(u).id.clone(),
        target: corpus.publication(v).id.clone(),
        weight,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CocitationOptions {
    /// Minimum number of citing papers a pair needs to become an edge.
    pub min_edge_weight: u32,
    pub keep_isolates: bool,
}

impl Default for CocitationOptions {
    fn default() -> Self {
        CocitationOptions {
            min_edge_weight: 1,
            keep_isolates: false,
        }
    }
}

/// Co-citation network of the references of `citing_set`.
///
/// Node weight is the number of citing papers referencing the node; edge
/// weight the number citing both endpoints.
pub fn cocitation_graph(
    corpus: &Corpus,
    citing_set: &[&str],
    options: &CocitationOptions,
) -> Result<WeightedGraph> {
    let citing = resolve_set(corpus, citing_set, "citing set")?;
    let mut occurrences: HashMap<PubIdx, u32> = HashMap::new();
    let mut pairs: HashMap<(PubIdx, PubIdx), u32> = HashMap::new();
    for &c in &citing {
        let refs = corpus.references(c);
        for (i, &u) in refs.iter().enumerate() {
            *occurrences.entry(u).or_default() += 1;
            for &v in &refs[i + 1..] {
                *pairs.entry((u, v)).or_default() += 1;
            }
        }
    }
    let threshold = options.min_edge_weight.max(1);
    let nodes = occurrences
        .iter()
        .map(|(&u, &w)| node_for(corpus, u, w as f64))
        .collect();
    let edges = pairs
        .into_iter()
        .filter(|&(_, w)| w >= threshold)
        .map(|((u, v), w)| edge_for(corpus, u, v, w as f64))
        .collect();
    let g = WeightedGraph::new(false, nodes, edges);
    Ok(if options.keep_isolates { g } else { g.without_isolates() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingWeight {
    /// Number of shared references.
    #[default]
    Count,
    /// Shared references over the geometric mean of the reference list lengths.
    Cosine,
}

/// Bibliographic coupling among `paper_set`. Every paper is kept as a node,
/// weighted by its reference count; pairs sharing fewer than
/// `min_shared_refs` references get no edge.
pub fn bibcoupling_graph(
    corpus: &Corpus,
    paper_set: &[&str],
    min_shared_refs: u32,
    weight: CouplingWeight,
) -> Result<WeightedGraph> {
    let papers = resolve_set(corpus, paper_set, "paper set")?;
    let mut holders: HashMap<PubIdx, Vec<PubIdx>> = HashMap::new();
    for &p in &papers {
        for &r in corpus.references(p) {
            holders.entry(r).or_default().push(p);
        }
    }
    let mut shared: HashMap<(PubIdx, PubIdx), u32> = HashMap::new();
    for list in holders.values() {
        for (i, &u) in list.iter().enumerate() {
            for &v in &list[i + 1..] {
                *shared.entry((u, v)).or_default() += 1;
            }
        }
    }
    let threshold = min_shared_refs.max(1);
    let nodes = papers
        .iter()
        .map(|&p| node_for(corpus, p, corpus.references(p).len() as f64))
        .collect();
    let edges = shared
        .into_iter()
        .filter(|&(_, s)| s >= threshold)
        .map(|((u, v), s)| {
            let w = match weight {
                CouplingWeight::Count => s as f64,
                CouplingWeight::Cosine => {
                    let (a, b) = (corpus.references(u).len(), corpus.references(v).len());
                    s as f64 / ((a * b) as f64).sqrt()
                }
            };
            edge_for(corpus, u, v, w)
        })
        .collect();
    Ok(WeightedGraph::new(false, nodes, edges))
}

/// The `k` earliest citers of a publication, ordered by (year, id).
pub fn early_citers(corpus: &Corpus, idx: PubIdx, k: usize) -> Vec<PubIdx> {
    let mut citers = corpus.citers(idx).to_vec();
    citers.sort_by_key(|&c| (corpus.publication(c).year, c));
    citers.truncate(k);
    citers
}

/// Directed citation network among an SB and its `k` earliest citers. Node
/// weight is the publication's total citation count.
pub fn early_citer_subnet(corpus: &Corpus, sb_id: &str, k: usize) -> Result<WeightedGraph> {
    let sb = corpus.require(sb_id)?;
    let mut members = early_citers(corpus, sb, k);
    members.push(sb);
    members.sort_unstable();
    let nodes = members
        .iter()
        .map(|&p| node_for(corpus, p, corpus.in_degree(p) as f64))
        .collect();
    let mut edges = Vec::new();
    for &u in &members {
        for &v in corpus.references(u) {
            if members.binary_search(&v).is_ok() {
                edges.push(edge_for(corpus, u, v, 1.0));
            }
        }
    }
    Ok(WeightedGraph::new(true, nodes, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Publication;

    fn corpus(pubs: &[(&str, i32)], edges: &[(&str, &str)]) -> Corpus {
        Corpus::from_records(
            pubs.iter().map(|&(id, y)| Publication::new(id, y)).collect(),
            edges,
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn cocitation_counts_and_threshold() {
        let c = corpus(
            &[("A", 1990), ("B", 1990), ("C", 1990), ("P", 2000), ("Q", 2000), ("R", 2000)],
            &[("P", "A"), ("P", "B"), ("Q", "A"), ("Q", "B"), ("R", "A"), ("R", "C")],
        );
        let g = cocitation_graph(&c, &["P", "Q", "R"], &CocitationOptions::default()).unwrap();
        assert_eq!(g.edge_weight("A", "B"), Some(2.0));
        assert_eq!(g.edge_weight("C", "A"), Some(1.0));
        assert_eq!(g.node("A").unwrap().weight, 3.0);
        let opts = CocitationOptions {
            min_edge_weight: 2,
            keep_isolates: false,
        };
        let g2 = cocitation_graph(&c, &["P", "Q", "R"], &opts).unwrap();
        assert_eq!(g2.edges.len(), 1);
        assert!(g2.node("C").is_none());
        let single = cocitation_graph(&c, &["P"], &opts).unwrap();
        assert!(single.edges.is_empty());
        assert!(cocitation_graph(&c, &[], &opts).is_err());
    }

    #[test]
    fn coupling_count_and_cosine() {
        let c = corpus(
            &[("A", 1990), ("B", 1990), ("C", 1990), ("D", 1990), ("X", 2000), ("Y", 2000), ("Z", 2000)],
            &[("X", "A"), ("X", "B"), ("X", "C"), ("Y", "B"), ("Y", "C"), ("Y", "D"), ("Z", "A")],
        );
        let g = bibcoupling_graph(&c, &["X", "Y", "Z"], 1, CouplingWeight::Count).unwrap();
        assert_eq!(g.edge_weight("X", "Y"), Some(2.0));
        assert_eq!(g.edge_weight("Y", "Z"), None);
        assert_eq!(g.nodes.len(), 3);
        let cos = bibcoupling_graph(&c, &["X", "Y"], 1, CouplingWeight::Cosine).unwrap();
        assert!((cos.edge_weight("X", "Y").unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let strict = bibcoupling_graph(&c, &["X", "Y", "Z"], 2, CouplingWeight::Count).unwrap();
        assert!(strict.edge_weight("X", "Z").is_none());
    }

    #[test]
    fn early_citer_subnet_edges() {
        let c = corpus(
            &[("S", 1990), ("a", 1995), ("b", 1996), ("c", 1997)],
            &[("a", "S"), ("b", "S"), ("c", "S"), ("c", "a")],
        );
        let g = early_citer_subnet(&c, "S", 25).unwrap();
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(g.edges.len(), 4);
        assert!(g.directed);
        assert_eq!(g.edge_weight("c", "a"), Some(1.0));
        assert_eq!(g.edge_weight("a", "c"), None);
        let lonely = corpus(&[("S", 1990)], &[]);
        assert_eq!(early_citer_subnet(&lonely, "S", 25).unwrap().nodes.len(), 1);
        assert!(matches!(
            early_citer_subnet(&lonely, "nope", 25),
            Err(Error::UnknownPublication(_))
        ));
    }

    #[test]
    fn early_citers_tie_break_by_id() {
        let c = corpus(
            &[("S", 1990), ("b", 1995), ("a", 1995), ("c", 1994)],
            &[("a", "S"), ("b", "S"), ("c", "S")],
        );
        let got: Vec<&str> = early_citers(&c, c.idx("S").unwrap(), 2)
            .into_iter()
            .map(|i| c.publication(i).id.as_str())
            .collect();
        assert_eq!(got, vec!["c", "a"]);
    }
}
