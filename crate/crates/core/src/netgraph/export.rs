use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{Edge, Node, WeightedGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    GraphMl,
    Dot,
    /// Tab-separated `node`/`edge` lines under a `# nodes=.. edges=..` header.
    EdgeList,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "graphml" => Ok(GraphFormat::GraphMl),
            "dot" => Ok(GraphFormat::Dot),
            "edgelist" | "tsv" => Ok(GraphFormat::EdgeList),
            other => Err(Error::InvalidParams(format!("unknown graph format `{other}`"))),
        }
    }
}

/// Serializes a graph. Output depends only on the graph, never on build or
/// insertion order.
pub fn render_graph(graph: &WeightedGraph, format: GraphFormat) -> String {
    let mut g = graph.clone();
    g.canonicalize();
    match format {
        GraphFormat::GraphMl => graphml(&g),
        GraphFormat::Dot => dot(&g),
        GraphFormat::EdgeList => edgelist(&g),
    }
}

pub fn export_graph(graph: &WeightedGraph, format: GraphFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render_graph(graph, format)).map_err(|e| Error::io(path, e))
}

fn escape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape_field(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next()? {
            '\\' => '\\',
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            _ => return None,
        });
    }
    Some(out)
}

fn edgelist(g: &WeightedGraph) -> String {
    let mut out = format!(
        "# nodes={} edges={} directed={}\n",
        g.nodes.len(),
        g.edges.len(),
        g.directed
    );
    for n in &g.nodes {
        let _ = writeln!(out, "node\t{}\t{}\t{}", escape_field(&n.id), n.weight, escape_field(&n.label));
    }
    for e in &g.edges {
        let _ = writeln!(out, "edge\t{}\t{}\t{}", escape_field(&e.source), escape_field(&e.target), e.weight);
    }
    out
}

/// Reads the edge-list format written by [`render_graph`].
pub fn parse_edgelist(text: &str) -> Result<WeightedGraph> {
    let bad = |line: usize, msg: &str| Error::Malformed {
        path: "<edgelist>".into(),
        line,
        message: msg.to_string(),
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
    let mut directed = None;
    let mut expect = (None, None);
    for part in header.trim_start_matches('#').split_whitespace() {
        match part.split_once('=') {
            Some(("nodes", v)) => expect.0 = v.parse::<usize>().ok(),
            Some(("edges", v)) => expect.1 = v.parse::<usize>().ok(),
            Some(("directed", v)) => directed = v.parse::<bool>().ok(),
            _ => return Err(bad(1, "bad header")),
        }
    }
    let directed = directed.ok_or_else(|| bad(1, "header lacks directed="))?;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let field = |j: usize| {
            cols.get(j)
                .and_then(|s| unescape_field(s))
                .ok_or_else(|| bad(i + 1, "missing or badly escaped column"))
        };
        let weight = |j: usize| {
            cols.get(j)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| bad(i + 1, "bad weight"))
        };
        match cols[0] {
            "node" if cols.len() == 4 => nodes.push(Node {
                id: field(1)?,
                weight: weight(2)?,
                label: field(3)?,
            }),
            "edge" if cols.len() == 4 => edges.push(Edge {
                source: field(1)?,
                target: field(2)?,
                weight: weight(3)?,
            }),
            _ => return Err(bad(i + 1, "expected a node or edge line with 4 columns")),
        }
    }
    if expect != (Some(nodes.len()), Some(edges.len())) {
        return Err(bad(1, "header counts do not match the body"));
    }
    Ok(WeightedGraph::new(directed, nodes, edges))
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn graphml(g: &WeightedGraph) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n  \
         <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n  \
         <key id=\"nweight\" for=\"node\" attr.name=\"weight\" attr.type=\"double\"/>\n  \
         <key id=\"eweight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n",
    );
    let kind = if g.directed { "directed" } else { "undirected" };
    let _ = writeln!(out, "  <graph id=\"G\" edgedefault=\"{kind}\">");
    for n in &g.nodes {
        let _ = writeln!(
            out,
            "    <node id=\"{}\"><data key=\"label\">{}</data><data key=\"nweight\">{}</data></node>",
            xml_escape(&n.id),
            xml_escape(&n.label),
            n.weight
        );
    }
    for e in &g.edges {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"><data key=\"eweight\">{}</data></edge>",
            xml_escape(&e.source),
            xml_escape(&e.target),
            e.weight
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n"))
}

fn dot(g: &WeightedGraph) -> String {
    let (kw, arrow) = if g.directed { ("digraph", "->") } else { ("graph", "--") };
    let mut out = format!("{kw} G {{\n");
    for n in &g.nodes {
        let _ = writeln!(
            out,
            "  {} [label={}, weight={}];",
            dot_quote(&n.id),
            dot_quote(&n.label),
            n.weight
        );
    }
    for e in &g.edges {
        let _ = writeln!(
            out,
            "  {} {arrow} {} [weight={}];",
            dot_quote(&e.source),
            dot_quote(&e.target),
            e.weight
        );
    }
    out.push_str("}\n");
    out
}
