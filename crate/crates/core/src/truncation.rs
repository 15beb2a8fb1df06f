//! Generalized truncations: excision of every edge into a labelled matching,
//! then assemblage of a simple graph (the constituent) on each cluster.
//!
//! Clusters list their ends in ascending source-edge order, and constituents
//! are addressed by position within that order. The flattened graph puts the
//! matching edges first, in source-edge order, followed by the constituent
//! edges of each source vertex in turn.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph, VertexId};

/// Vertex of the matching; also the vertex id in the flattened graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EndId(pub usize);

impl fmt::Display for EndId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "end{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchingEnd {
    pub id: EndId,
    pub source_edge: EdgeId,
    pub source_vertex: VertexId,
    /// Index within the cluster at `source_vertex`.
    pub position: usize,
}

/// A simple graph on cluster positions `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent {
    order: usize,
    edges: Vec<(usize, usize)>,
}

impl Constituent {
    pub fn new(order: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (i, j) in edges {
            if i >= order || j >= order {
                return Err(Error::domain(format!(
                    "constituent edge [{i}, {j}] outside cluster of size {order}"
                )));
            }
            if i == j {
                return Err(Error::domain(format!("constituent loop at position {i}")));
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(Error::domain(format!(
                    "constituent repeats edge [{}, {}]",
                    key.0, key.1
                )));
            }
            out.push(key);
        }
        Ok(Constituent { order, edges: out })
    }

    pub fn empty(order: usize) -> Self {
        Constituent {
            order,
            edges: Vec::new(),
        }
    }

    pub fn complete(order: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..order {
            for j in i + 1..order {
                edges.push((i, j));
            }
        }
        Constituent { order, edges }
    }

    /// Cycle through every position in the given cyclic order.
    pub fn cycle(order: usize, sequence: &[usize]) -> Result<Self> {
        if order < 3 {
            return Err(Error::precondition(format!(
                "a cycle needs at least 3 vertices, cluster has {order}"
            )));
        }
        check_permutation(order, sequence)?;
        let n = sequence.len();
        Constituent::new(order, (0..n).map(|i| (sequence[i], sequence[(i + 1) % n])))
    }

    /// Path through every position in the given order.
    pub fn path(order: usize, sequence: &[usize]) -> Result<Self> {
        check_permutation(order, sequence)?;
        Constituent::new(order, sequence.windows(2).map(|w| (w[0], w[1])))
    }

    /// Star centred at `center`.
    pub fn star(order: usize, center: usize) -> Result<Self> {
        Constituent::new(order, (0..order).filter(|&i| i != center).map(|i| (center, i)))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn valencies(&self) -> Vec<usize> {
        let mut val = vec![0; self.order];
        for &(i, j) in &self.edges {
            val[i] += 1;
            val[j] += 1;
        }
        val
    }

    pub fn max_valency(&self) -> usize {
        self.valencies().into_iter().max().unwrap_or(0)
    }

    pub fn regular_valency(&self) -> Option<usize> {
        let val = self.valencies();
        let first = *val.first()?;
        val.iter().all(|&d| d == first).then_some(first)
    }

    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.order).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j) in &self.edges {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// True iff the edges form one cycle through every position.
    pub fn is_hamiltonian_cycle(&self) -> bool {
        if self.order < 3 || self.edges.len() != self.order || self.regular_valency() != Some(2) {
            return false;
        }
        self.to_multigraph().component_count() == 1
    }

    pub fn to_multigraph(&self) -> Multigraph {
        Multigraph::from_edges(self.order, &self.edges).expect("constituents are loopless")
    }
}

fn check_permutation(order: usize, sequence: &[usize]) -> Result<()> {
    let set: BTreeSet<usize> = sequence.iter().copied().collect();
    if sequence.len() != order || set.len() != order || set.iter().any(|&p| p >= order) {
        return Err(Error::domain(format!(
            "order {sequence:?} is not a single cycle through all {order} cluster positions"
        )));
    }
    Ok(())
}

/// Result of the excision step: the labelled matching and its clusters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Excision {
    source: Multigraph,
    ends: Vec<MatchingEnd>,
    matching: Vec<(EdgeId, [EndId; 2])>,
    clusters: Vec<Vec<EndId>>,
}

impl Excision {
    pub fn source(&self) -> &Multigraph {
        &self.source
    }

    pub fn ends(&self) -> &[MatchingEnd] {
        &self.ends
    }

    /// One entry per source edge: the edge and its two ends.
    pub fn matching(&self) -> &[(EdgeId, [EndId; 2])] {
        &self.matching
    }

    pub fn cluster(&self, v: VertexId) -> Result<&[EndId]> {
        self.source.check_vertex(v)?;
        Ok(&self.clusters[v.0])
    }
}

/// Excision step. End `2k` and `2k + 1` come from the `k`-th source edge in
/// id order, at its first and second endpoint respectively.
pub fn excise(x: &Multigraph) -> Result<Excision> {
    x.require_no_isolated()?;
    let mut ends = Vec::with_capacity(2 * x.size());
    let mut matching = Vec::with_capacity(x.size());
    let mut clusters: Vec<Vec<EndId>> = vec![Vec::new(); x.order()];
    for (e, u, v) in x.edges() {
        let pair = [EndId(ends.len()), EndId(ends.len() + 1)];
        for (id, w) in pair.into_iter().zip([u, v]) {
            ends.push(MatchingEnd {
                id,
                source_edge: e,
                source_vertex: w,
                position: clusters[w.0].len(),
            });
            clusters[w.0].push(id);
        }
        matching.push((e, pair));
    }
    Ok(Excision {
        source: x.clone(),
        ends,
        matching,
        clusters,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// Matching edge standing for this source edge.
    Matching(EdgeId),
    /// The `index`-th edge of the constituent at `vertex`.
    Constituent { vertex: VertexId, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    excision: Excision,
    constituents: Vec<Constituent>,
    graph: Multigraph,
    kinds: Vec<EdgeKind>,
    matching_ids: BTreeMap<EdgeId, EdgeId>,
    constituent_ids: Vec<Vec<EdgeId>>,
}

/// Assemblage step with constituents given on end ids. Vertices absent from
/// the map get an edgeless constituent.
pub fn assemble(excision: Excision, constituents: &BTreeMap<VertexId, Vec<(EndId, EndId)>>) -> Result<Truncation> {
    let mut by_vertex = BTreeMap::new();
    for (&v, edges) in constituents {
        excision.source.check_vertex(v)?;
        let mut local = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let mut pos = [0; 2];
            for (slot, end) in pos.iter_mut().zip([a, b]) {
                let info = excision
                    .ends
                    .get(end.0)
                    .ok_or_else(|| Error::domain(format!("unknown {end}")))?;
                if info.source_vertex != v {
                    return Err(Error::domain(format!(
                        "constituent edge [{a}, {b}] at {v} leaves its cluster"
                    )));
                }
                *slot = info.position;
            }
            local.push((pos[0], pos[1]));
        }
        let order = excision.clusters[v.0].len();
        by_vertex.insert(v, Constituent::new(order, local)?);
    }
    Truncation::from_constituents(excision, by_vertex)
}

impl Truncation {
    /// Assemblage with position-addressed constituents; vertices absent from
    /// the map get an edgeless constituent.
    pub fn from_constituents(excision: Excision, mut chosen: BTreeMap<VertexId, Constituent>) -> Result<Self> {
        let mut constituents = Vec::with_capacity(excision.source.order());
        for v in excision.source.vertices() {
            let order = excision.clusters[v.0].len();
            let c = chosen.remove(&v).unwrap_or_else(|| Constituent::empty(order));
            if c.order() != order {
                return Err(Error::domain(format!(
                    "constituent at {v} has order {}, cluster has {order} ends",
                    c.order()
                )));
            }
            constituents.push(c);
        }
        if let Some(v) = chosen.keys().next() {
            return Err(Error::UnknownVertex(*v));
        }

        let mut graph = Multigraph::new(excision.ends.len());
        let mut kinds = Vec::new();
        let mut matching_ids = BTreeMap::new();
        for &(e, [a, b]) in &excision.matching {
            let id = graph.add_edge(VertexId(a.0), VertexId(b.0))?;
            matching_ids.insert(e, id);
            kinds.push(EdgeKind::Matching(e));
        }
        let mut constituent_ids = Vec::with_capacity(constituents.len());
        for (vi, c) in constituents.iter().enumerate() {
            let cluster = &excision.clusters[vi];
            let mut ids = Vec::with_capacity(c.edges().len());
            for (index, &(i, j)) in c.edges().iter().enumerate() {
                let id = graph.add_edge(VertexId(cluster[i].0), VertexId(cluster[j].0))?;
                ids.push(id);
                kinds.push(EdgeKind::Constituent {
                    vertex: VertexId(vi),
                    index,
                });
            }
            constituent_ids.push(ids);
        }
        Ok(Truncation {
            excision,
            constituents,
            graph,
            kinds,
            matching_ids,
            constituent_ids,
        })
    }

    pub fn source(&self) -> &Multigraph {
        &self.excision.source
    }

    pub fn excision(&self) -> &Excision {
        &self.excision
    }

    pub fn ends(&self) -> &[MatchingEnd] {
        &self.excision.ends
    }

    pub fn end(&self, id: EndId) -> Result<&MatchingEnd> {
        self.excision
            .ends
            .get(id.0)
            .ok_or_else(|| Error::domain(format!("unknown {id}")))
    }

    pub fn cluster(&self, v: VertexId) -> Result<&[EndId]> {
        self.excision.cluster(v)
    }

    pub fn constituent(&self, v: VertexId) -> Result<&Constituent> {
        self.source().check_vertex(v)?;
        Ok(&self.constituents[v.0])
    }

    pub fn constituents(&self) -> &[Constituent] {
        &self.constituents
    }

    /// The flattened graph on the ends.
    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn kind(&self, e: EdgeId) -> Result<EdgeKind> {
        self.kinds.get(e.0).copied().ok_or(Error::UnknownEdge(e))
    }

    /// Flattened id of the matching edge for source edge `e`.
    pub fn matching_edge(&self, source_edge: EdgeId) -> Result<EdgeId> {
        self.matching_ids
            .get(&source_edge)
            .copied()
            .ok_or(Error::UnknownEdge(source_edge))
    }

    /// Flattened ids of the constituent edges at `v`, in constituent order.
    pub fn constituent_edges(&self, v: VertexId) -> Result<&[EdgeId]> {
        self.source().check_vertex(v)?;
        Ok(&self.constituent_ids[v.0])
    }

    pub fn max_valency(&self) -> Result<usize> {
        self.graph.max_valency()
    }

    /// Contracts every constituent to its source vertex and keeps the colors
    /// of the matching edges. Constituent colors vanish with the loops they
    /// would become.
    pub fn contract(&self, coloring: &EdgeColoring) -> Result<(Multigraph, EdgeColoring)> {
        let source = self.source().clone();
        let mut out = EdgeColoring::new(coloring.palette(), source.edge_bound());
        for (&e, &flat) in &self.matching_ids {
            out.set(e, coloring.require(flat)?)?;
        }
        Ok((source, out))
    }

    /// The sun centered at the constituent of `v`.
    pub fn sun(&self, v: VertexId) -> Result<SunView> {
        let cluster = self.cluster(v)?;
        let r = cluster.len();
        let mut graph = Multigraph::new(2 * r);
        let mut tr_edges = Vec::new();
        let mut tr_vertices: Vec<EndId> = cluster.to_vec();
        for (&(i, j), &flat) in self.constituents[v.0].edges().iter().zip(&self.constituent_ids[v.0]) {
            graph.add_edge(VertexId(i), VertexId(j))?;
            tr_edges.push(flat);
        }
        for (i, &end) in cluster.iter().enumerate() {
            let info = self.excision.ends[end.0];
            let flat = self.matching_ids[&info.source_edge];
            let (a, b) = self.graph.endpoints(flat)?;
            let far = if a.0 == end.0 { b } else { a };
            tr_vertices.push(EndId(far.0));
            graph.add_edge(VertexId(i), VertexId(r + i))?;
            tr_edges.push(flat);
        }
        Ok(SunView {
            graph,
            tr_edges,
            tr_vertices,
        })
    }
}

/// A sun as a standalone graph: vertices `0..r` are the cluster ends in
/// position order, `r + i` is the far end of the matching edge at position `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunView {
    pub graph: Multigraph,
    /// Flattened truncation edge for each sun edge id.
    pub tr_edges: Vec<EdgeId>,
    pub tr_vertices: Vec<EndId>,
}

impl SunView {
    /// Pulls a truncation coloring back onto the sun.
    pub fn restrict(&self, coloring: &EdgeColoring) -> Result<EdgeColoring> {
        let mut out = EdgeColoring::new(coloring.palette(), self.graph.edge_bound());
        for (i, &flat) in self.tr_edges.iter().enumerate() {
            out.set(EdgeId(i), coloring.require(flat)?)?;
        }
        Ok(out)
    }
}

/// Every constituent is the complete graph on its cluster.
pub fn complete_truncation(x: &Multigraph) -> Result<Truncation> {
    let exc = excise(x)?;
    let chosen = x
        .vertices()
        .map(|v| (v, Constituent::complete(exc.clusters[v.0].len())))
        .collect();
    Truncation::from_constituents(exc, chosen)
}

/// Every constituent is a cycle through its cluster. Vertices missing from
/// `orders` use ascending position order.
pub fn cyclic_truncation(x: &Multigraph, orders: &BTreeMap<VertexId, Vec<usize>>) -> Result<Truncation> {
    let exc = excise(x)?;
    for v in x.vertices() {
        let val = exc.clusters[v.0].len();
        if val < 3 {
            return Err(Error::precondition(format!(
                "cyclic truncation needs valency >= 3, {v} has {val}"
            )));
        }
    }
    if let Some(v) = orders.keys().find(|v| !x.contains_vertex(**v)) {
        return Err(Error::UnknownVertex(*v));
    }
    let mut chosen = BTreeMap::new();
    for v in x.vertices() {
        let r = exc.clusters[v.0].len();
        let c = match orders.get(&v) {
            Some(seq) => Constituent::cycle(r, seq)?,
            None => Constituent::cycle(r, &(0..r).collect::<Vec<_>>())?,
        };
        chosen.insert(v, c);
    }
    Truncation::from_constituents(exc, chosen)
}

/// Truncation whose constituents are forests; missing vertices get no edges.
pub fn arboreal_truncation(x: &Multigraph, forests: BTreeMap<VertexId, Constituent>) -> Result<Truncation> {
    for (v, f) in &forests {
        if !f.is_forest() {
            return Err(Error::domain(format!("constituent at {v} contains a cycle")));
        }
    }
    Truncation::from_constituents(excise(x)?, forests)
}
