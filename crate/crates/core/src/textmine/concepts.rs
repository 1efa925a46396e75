use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{is_stopword, tokenize};
use crate::netgraph::{Edge, Node, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeNormalization {
    /// Number of documents containing both terms.
    #[default]
    Raw,
    /// `co(u, v) / (df(u) * df(v))`.
    Association,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConceptOptions {
    /// Minimum document frequency for a term to become a node.
    pub min_occurrences: usize,
    pub max_gram: usize,
    pub normalize: EdgeNormalization,
    /// Seed for the label propagation visiting order.
    pub seed: u64,
    /// Words excluded on top of the bundled list.
    pub extra_stopwords: Vec<String>,
}

impl Default for ConceptOptions {
    fn default() -> Self {
        ConceptOptions {
            min_occurrences: 10,
            max_gram: 3,
            normalize: EdgeNormalization::Raw,
            seed: 42,
            extra_stopwords: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermStats {
    pub term: String,
    /// Number of documents containing the term.
    pub df: usize,
    pub cluster: usize,
}

/// Concept co-occurrence network. Node weight is document frequency;
/// clusters are numbered by size, largest first.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptMap {
    pub graph: WeightedGraph,
    /// Sorted by term.
    pub terms: Vec<TermStats>,
}

impl ConceptMap {
    pub fn cluster_of(&self, term: &str) -> Option<usize> {
        self.terms
            .binary_search_by(|t| t.term.as_str().cmp(term))
            .ok()
            .map(|i| self.terms[i].cluster)
    }

    pub fn n_clusters(&self) -> usize {
        self.terms.iter().map(|t| t.cluster + 1).max().unwrap_or(0)
    }
}

fn doc_grams(text: &str, max_gram: usize, extra: &HashSet<String>) -> Vec<String> {
    let tokens = tokenize(text);
    let usable: Vec<bool> = tokens
        .iter()
        .map(|t| {
            t.chars().count() >= 2
                && !t.chars().all(|c| c.is_ascii_digit())
                && !is_stopword(t)
                && !extra.contains(t)
        })
        .collect();
    let mut grams = Vec::new();
    for i in 0..tokens.len() {
        for n in 1..=max_gram {
            if i + n > tokens.len() || !usable[i + n - 1] {
                break;
            }
            if usable[i] {
                grams.push(tokens[i..i + n].join(" "));
            }
        }
    }
    grams.sort_unstable();
    grams.dedup();
    grams
}

/// Builds the term co-occurrence map of `docs` (1- to `max_gram`-grams made
/// of non-stopwords, counted once per document).
pub fn concept_graph<S: AsRef<str>>(docs: &[S], options: &ConceptOptions) -> ConceptMap {
    let extra: HashSet<String> = options.extra_stopwords.iter().map(|w| w.to_lowercase()).collect();
    let max_gram = options.max_gram.max(1);
    let per_doc: Vec<Vec<String>> = docs
        .iter()
        .map(|d| doc_grams(d.as_ref(), max_gram, &extra))
        .collect();

    let mut df: HashMap<&str, usize> = HashMap::new();
    for grams in &per_doc {
        for g in grams {
            *df.entry(g).or_default() += 1;
        }
    }
    let threshold = options.min_occurrences.max(1);
    let mut kept: Vec<(&str, usize)> = df.into_iter().filter(|&(_, n)| n >= threshold).collect();
    kept.sort_unstable();
    let id: HashMap<&str, usize> = kept.iter().enumerate().map(|(i, &(t, _))| (t, i)).collect();

    let mut co: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for grams in &per_doc {
        let present: Vec<usize> = grams.iter().filter_map(|g| id.get(g.as_str()).copied()).collect();
        for (a, &u) in present.iter().enumerate() {
            for &v in &present[a + 1..] {
                *co.entry((u, v)).or_default() += 1;
            }
        }
    }

    let weight = |u: usize, v: usize, c: u32| match options.normalize {
        EdgeNormalization::Raw => c as f64,
        EdgeNormalization::Association => c as f64 / (kept[u].1 as f64 * kept[v].1 as f64),
    };
    let clusters = label_propagation(kept.len(), &co, options.seed);
    let nodes = kept
        .iter()
        .map(|&(t, n)| Node {
            id: t.to_string(),
            label: t.to_string(),
            weight: n as f64,
        })
        .collect();
    let edges = co
        .iter()
        .map(|(&(u, v), &c)| Edge {
            source: kept[u].0.to_string(),
            target: kept[v].0.to_string(),
            weight: weight(u, v, c),
        })
        .collect();
    let terms = kept
        .iter()
        .zip(&clusters)
        .map(|(&(t, n), &cluster)| TermStats {
            term: t.to_string(),
            df: n,
            cluster,
        })
        .collect();
    ConceptMap {
        graph: WeightedGraph::new(false, nodes, edges),
        terms,
    }
}

/// Weighted label propagation with a seeded visiting order. Clusters are
/// renumbered by size (descending), then by their smallest member.
fn label_propagation(n: usize, co: &BTreeMap<(usize, usize), u32>, seed: u64) -> Vec<usize> {
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (&(u, v), &c) in co {
        adj[u].push((v, c as f64));
        adj[v].push((u, c as f64));
    }
    let mut labels: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..100 {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &i in &order {
            if adj[i].is_empty() {
                continue;
            }
            let mut score: BTreeMap<usize, f64> = BTreeMap::new();
            for &(j, w) in &adj[i] {
                *score.entry(labels[j]).or_default() += w;
            }
            let best = score.values().copied().fold(f64::NEG_INFINITY, f64::max);
            if score.get(&labels[i]).is_some_and(|&s| s == best) {
                continue;
            }
            let pick = score.iter().find(|(_, &s)| s == best).map(|(&l, _)| l).unwrap();
            labels[i] = pick;
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        groups.entry(l).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
    groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut out = vec![0; n];
    for (c, members) in groups.iter().enumerate() {
        for &m in members {
            out[m] = c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(min: usize) -> ConceptOptions {
        ConceptOptions {
            min_occurrences: min,
            ..Default::default()
        }
    }

    #[test]
    fn grams_skip_stopwords() {
        let g = doc_grams("Queueing in the multi-hop wireless network", 3, &HashSet::new());
        assert!(g.contains(&"multi hop wireless".to_string()));
        assert!(g.contains(&"queueing".to_string()));
        assert!(!g.iter().any(|x| x.contains("the") || x.contains(" in")));
    }

    #[test]
    fn document_frequency_and_cooccurrence() {
        let docs = [
            "wireless network throughput",
            "wireless network delay",
            "wireless network throughput throughput",
            "optical fiber",
        ];
        let map = concept_graph(&docs, &opts(2));
        let df = |t: &str| map.terms.iter().find(|s| s.term == t).map(|s| s.df);
        assert_eq!(df("wireless network"), Some(3));
        assert_eq!(df("throughput"), Some(2));
        assert_eq!(df("delay"), None);
        assert_eq!(map.graph.edge_weight("throughput", "wireless network"), Some(2.0));
        for e in &map.graph.edges {
            let (a, b) = (df(&e.source).unwrap(), df(&e.target).unwrap());
            assert!(e.weight <= a.min(b) as f64);
        }
        let assoc = concept_graph(
            &docs,
            &ConceptOptions {
                min_occurrences: 2,
                normalize: EdgeNormalization::Association,
                ..Default::default()
            },
        );
        let w = assoc.graph.edge_weight("wireless network", "throughput").unwrap();
        assert!((w - 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn high_threshold_gives_empty_graph() {
        let map = concept_graph(&["a b c", "d e f"], &opts(10));
        assert!(map.graph.nodes.is_empty());
        assert_eq!(map.n_clusters(), 0);
    }

    #[test]
    fn clusters_split_disconnected_themes_deterministically() {
        let mut docs = Vec::new();
        for _ in 0..3 {
            docs.push("queue scheduling throughput");
            docs.push("fiber taper coupler");
        }
        let a = concept_graph(&docs, &opts(3));
        let b = concept_graph(&docs, &opts(3));
        assert_eq!(a, b);
        assert_eq!(a.n_clusters(), 2);
        assert_eq!(a.cluster_of("queue"), a.cluster_of("throughput"));
        assert_ne!(a.cluster_of("queue"), a.cluster_of("fiber"));
    }
}
