//! JSON documents for graphs, truncations, colorings and sun reports, plus
//! DOT export for viewing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, VertexId};
use crate::sun::SunColoring;
use crate::truncation::{excise, Constituent, EdgeKind, Truncation};

/// `{"vertices": [0, 1, ...], "edges": [[u, v], ...]}`; the array index of an
/// edge is its id, and `null` marks a deleted id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<usize>,
    pub edges: Vec<Option<[usize; 2]>>,
}

impl GraphDoc {
    pub fn from_graph(g: &Multigraph) -> Self {
        let edges = (0..g.edge_bound())
            .map(|i| g.endpoints(crate::multigraph::EdgeId(i)).ok().map(|(u, v)| [u.0, v.0]))
            .collect();
        GraphDoc {
            vertices: g.vertices().map(|v| v.0).collect(),
            edges,
        }
    }

    pub fn to_graph(&self) -> Result<Multigraph> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        for &v in &self.vertices {
            if v >= n || seen[v] {
                return Err(Error::domain(format!("vertices must list 0..{n} once each; found {v}")));
            }
            seen[v] = true;
        }
        let mut g = Multigraph::new(n);
        for (index, e) in self.edges.iter().enumerate() {
            match *e {
                Some([u, v]) => {
                    if u == v {
                        return Err(Error::Loop { index, vertex: u });
                    }
                    g.add_edge(VertexId(u), VertexId(v)).map_err(|err| match err {
                        Error::UnknownVertex(w) => Error::domain(format!("edge {index} names unknown vertex {}", w.0)),
                        other => other,
                    })?;
                }
                None => g.push_vacant(),
            }
        }
        Ok(g)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::domain(format!("malformed {what}: {e}")))
}

pub fn graph_from_json(text: &str) -> Result<Multigraph> {
    parse::<GraphDoc>(text, "graph JSON")?.to_graph()
}

pub fn graph_to_json(g: &Multigraph) -> String {
    serde_json::to_string_pretty(&GraphDoc::from_graph(g)).expect("graph serializes")
}

/// Source graph plus constituent edge lists over cluster positions. The
/// flattened graph is written for convenience and ignored on reading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationDoc {
    pub source: GraphDoc,
    #[serde(default)]
    pub constituents: BTreeMap<usize, Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
}

impl TruncationDoc {
    pub fn from_truncation(tr: &Truncation) -> Self {
        let constituents = tr
            .source()
            .vertices()
            .map(|v| {
                let c = tr.constituent(v).expect("vertex of the source");
                (v.0, c.edges().iter().map(|&(a, b)| [a, b]).collect())
            })
            .collect();
        TruncationDoc {
            source: GraphDoc::from_graph(tr.source()),
            constituents,
            graph: Some(GraphDoc::from_graph(tr.graph())),
        }
    }

    pub fn to_truncation(&self) -> Result<Truncation> {
        let x = self.source.to_graph()?;
        let exc = excise(&x)?;
        let mut chosen = BTreeMap::new();
        for (&v, edges) in &self.constituents {
            let r = exc.cluster(VertexId(v))?.len();
            chosen.insert(VertexId(v), Constituent::new(r, edges.iter().map(|e| (e[0], e[1])))?);
        }
        Truncation::from_constituents(exc, chosen)
    }
}

pub fn truncation_from_json(text: &str) -> Result<Truncation> {
    parse::<TruncationDoc>(text, "truncation JSON")?.to_truncation()
}

pub fn truncation_to_json(tr: &Truncation) -> String {
    serde_json::to_string_pretty(&TruncationDoc::from_truncation(tr)).expect("truncation serializes")
}

/// `{"palette": k, "colors": [c_0, ...]}` indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDoc {
    pub palette: usize,
    pub colors: Vec<Option<Color>>,
}

impl ColoringDoc {
    pub fn from_coloring(c: &EdgeColoring) -> Self {
        ColoringDoc {
            palette: c.palette(),
            colors: c.colors().to_vec(),
        }
    }

    pub fn to_coloring(&self) -> Result<EdgeColoring> {
        EdgeColoring::from_colors(self.palette, self.colors.clone())
    }
}

pub fn coloring_from_json(text: &str) -> Result<EdgeColoring> {
    parse::<ColoringDoc>(text, "coloring JSON")?.to_coloring()
}

pub fn coloring_to_json(c: &EdgeColoring) -> String {
    serde_json::to_string_pretty(&ColoringDoc::from_coloring(c)).expect("coloring serializes")
}

/// Outcome of the sun command for one vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SunReport {
    pub vector: Vec<usize>,
    /// `ADMISSIBLE` or `TOTALLY_INADMISSIBLE`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constituent: Option<Vec<[usize; 2]>>,
    /// Sun coloring laid out like a sun view: constituent edges, then the
    /// pendant at each position.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<ColoringDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pendant_colors: Option<Vec<Color>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proper: Option<bool>,
    /// Exhaustive confirmation for inadmissible vectors, when small enough.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration_confirms: Option<bool>,
}

impl SunReport {
    pub fn built(sun: &SunColoring) -> Self {
        let (_, coloring) = sun.to_graph();
        SunReport {
            vector: sun.vector.entries().to_vec(),
            verdict: "ADMISSIBLE".into(),
            constituent: Some(sun.constituent.edges().iter().map(|&(a, b)| [a, b]).collect()),
            coloring: Some(ColoringDoc::from_coloring(&coloring)),
            pendant_colors: Some(sun.pendant_colors.clone()),
            proper: Some(sun.is_proper()),
            enumeration_confirms: None,
        }
    }

    pub fn inadmissible(vector: &[usize], confirms: Option<bool>) -> Self {
        SunReport {
            vector: vector.to_vec(),
            verdict: "TOTALLY_INADMISSIBLE".into(),
            constituent: None,
            coloring: None,
            pendant_colors: None,
            proper: None,
            enumeration_confirms: confirms,
        }
    }
}

/// Color names used only for drawing; indices past the table reuse it.
pub const COLOR_NAMES: [&str; 12] = [
    "red",
    "blue",
    "green3",
    "orange",
    "purple",
    "brown",
    "magenta",
    "cyan3",
    "gold3",
    "gray40",
    "darkgreen",
    "navy",
];

fn color_attr(coloring: Option<&EdgeColoring>, e: crate::multigraph::EdgeId) -> String {
    match coloring.and_then(|c| c.get(e)) {
        Some(c) => format!("color={}, label=\"{c}\"", COLOR_NAMES[c % COLOR_NAMES.len()]),
        None => "color=black".into(),
    }
}

pub fn graph_to_dot(g: &Multigraph, coloring: Option<&EdgeColoring>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", v.0);
    }
    for (e, u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {} [{}];", u.0, v.0, color_attr(coloring, e));
    }
    out.push_str("}\n");
    out
}

/// Each cluster becomes a subgraph; matching edges are drawn bold.
pub fn truncation_to_dot(tr: &Truncation, coloring: Option<&EdgeColoring>) -> String {
    let g = tr.graph();
    let mut out = String::from("graph TR {\n  node [shape=point];\n");
    for v in tr.source().vertices() {
        let _ = writeln!(out, "  subgraph cluster_{} {{\n    label=\"v{}\";", v.0, v.0);
        for end in tr.cluster(v).expect("source vertex") {
            let _ = writeln!(out, "    {};", end.0);
        }
        for &e in tr.constituent_edges(v).expect("source vertex") {
            let (a, b) = g.endpoints(e).expect("constituent edge");
            let _ = writeln!(out, "    {} -- {} [{}];", a.0, b.0, color_attr(coloring, e));
        }
        out.push_str("  }\n");
    }
    for (e, a, b) in g.edges() {
        if let Ok(EdgeKind::Matching(_)) = tr.kind(e) {
            let _ = writeln!(
                out,
                "  {} -- {} [style=bold, penwidth=2.5, {}];",
                a.0,
                b.0,
                color_attr(coloring, e)
            );
        }
    }
    out.push_str("}\n");
    out
}
