//! Undirected loopless multigraphs with stable edge identities.
//!
//! Vertices are dense indices `0..order`. Edges are stored in slots indexed by
//! [`EdgeId`]; removing an edge empties its slot and never renumbers the
//! others, so colorings keyed by `EdgeId` survive edge deletion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    order: usize,
    slots: Vec<Option<(VertexId, VertexId)>>,
    // incidence lists hold edge ids in ascending order
    incidence: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    /// Graph with `order` vertices and no edges.
    pub fn new(order: usize) -> Self {
        Multigraph {
            order,
            slots: Vec::new(),
            incidence: vec![Vec::new(); order],
        }
    }

    /// Builds a graph from an edge list; edge `i` of the list gets `EdgeId(i)`.
    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Multigraph::new(order);
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::Loop {
                index: self.slots.len(),
                vertex: u.0,
            });
        }
        let id = EdgeId(self.slots.len());
        self.slots.push(Some((u, v)));
        self.incidence[u.0].push(id);
        self.incidence[v.0].push(id);
        Ok(id)
    }

    /// Appends an empty slot, reserving an id without creating an edge.
    pub(crate) fn push_vacant(&mut self) {
        self.slots.push(None);
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        let (u, v) = self.endpoints(e)?;
        self.slots[e.0] = None;
        self.incidence[u.0].retain(|&f| f != e);
        self.incidence[v.0].retain(|&f| f != e);
        Ok((u, v))
    }

    /// Copy of the graph without the listed edges. Surviving ids are unchanged.
    pub fn without_edges(&self, removed: &BTreeSet<EdgeId>) -> Result<Self> {
        let mut g = self.clone();
        for &e in removed {
            g.remove_edge(e)?;
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of edges currently present.
    pub fn size(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// One past the largest edge id ever assigned.
    pub fn edge_bound(&self) -> usize {
        self.slots.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.order).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|(u, v)| (EdgeId(i), u, v)))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().map(|(e, _, _)| e)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        matches!(self.slots.get(e.0), Some(Some(_)))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.0 < self.order
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        self.slots.get(e.0).copied().flatten().ok_or(Error::UnknownEdge(e))
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> Result<VertexId> {
        let (a, b) = self.endpoints(e)?;
        if a == v {
            Ok(b)
        } else if b == v {
            Ok(a)
        } else {
            Err(Error::domain(format!("{e} is not incident with {v}")))
        }
    }

    /// Edges incident with `v`, ascending by id.
    pub fn incident(&self, v: VertexId) -> Result<&[EdgeId]> {
        self.check_vertex(v)?;
        Ok(&self.incidence[v.0])
    }

    pub fn valency(&self, v: VertexId) -> Result<usize> {
        Ok(self.incident(v)?.len())
    }

    pub fn valencies(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    pub fn max_valency(&self) -> Result<usize> {
        if self.order == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(self.incidence.iter().map(Vec::len).max().unwrap_or(0))
    }

    /// Regular valency, or `None` if valencies differ.
    pub fn regular_valency(&self) -> Option<usize> {
        let first = self.incidence.first()?.len();
        self.incidence.iter().all(|inc| inc.len() == first).then_some(first)
    }

    /// Largest number of parallel edges joining one pair of vertices.
    pub fn max_multiplicity(&self) -> usize {
        let mut counts: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for (_, u, v) in self.edges() {
            *counts.entry((u.min(v), u.max(v))).or_default() += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.max_multiplicity() <= 1
    }

    pub fn isolated_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(|v| self.incidence[v.0].is_empty())
    }

    /// Fails on the first isolated vertex.
    pub fn require_no_isolated(&self) -> Result<()> {
        match self.isolated_vertices().next() {
            Some(v) => Err(Error::IsolatedVertex(v)),
            None => Ok(()),
        }
    }

    /// Component label per vertex, labels dense from 0 in order of first vertex.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.order];
        let mut next = 0;
        for s in 0..self.order {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &e in &self.incidence[u] {
                    let (a, b) = self.slots[e.0].expect("incident edge present");
                    let w = if a.0 == u { b.0 } else { a.0 };
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Edges whose removal disconnects their component. Parallel edges are
    /// never bridges, since the low-link pass skips only the tree edge itself,
    /// not every edge to the parent.
    pub fn bridges(&self) -> BTreeSet<EdgeId> {
        let n = self.order;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut out = BTreeSet::new();
        let mut time = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // frames: (vertex, edge used to enter, next incidence index)
            let mut stack: Vec<(usize, Option<EdgeId>, usize)> = vec![(root, None, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(top) = stack.last_mut() {
                let (u, via) = (top.0, top.1);
                if let Some(&e) = self.incidence[u].get(top.2) {
                    top.2 += 1;
                    if Some(e) == via {
                        continue;
                    }
                    let (a, b) = self.slots[e.0].expect("incident edge present");
                    let w = if a.0 == u { b.0 } else { a.0 };
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, Some(e), 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let (Some(e), Some(&(p, _, _))) = (via, stack.last()) {
                        low[p] = low[p].min(low[u]);
                        if low[u] > disc[p] {
                            out.insert(e);
                        }
                    }
                }
            }
        }
        out
    }

    /// Closed walk through every edge of the component containing `root`,
    /// returned as edge ids in traversal order (Hierholzer).
    pub fn euler_tour(&self, root: VertexId) -> Result<Vec<EdgeId>> {
        self.check_vertex(root)?;
        let labels = self.component_labels();
        let comp = labels[root.0];
        for v in self.vertices() {
            if labels[v.0] == comp && self.incidence[v.0].len() % 2 == 1 {
                return Err(Error::OddValency {
                    vertex: v,
                    valency: self.incidence[v.0].len(),
                });
            }
        }
        let mut used = vec![false; self.slots.len()];
        let mut cursor = vec![0usize; self.order];
        let mut tour = Vec::new();
        // stack of (vertex, edge that led here)
        let mut stack: Vec<(usize, Option<EdgeId>)> = vec![(root.0, None)];
        while let Some(&(u, via)) = stack.last() {
            let inc = &self.incidence[u];
            while cursor[u] < inc.len() && used[inc[cursor[u]].0] {
                cursor[u] += 1;
            }
            if cursor[u] < inc.len() {
                let e = inc[cursor[u]];
                used[e.0] = true;
                let (a, b) = self.slots[e.0].expect("incident edge present");
                let w = if a.0 == u { b.0 } else { a.0 };
                stack.push((w, Some(e)));
            } else {
                stack.pop();
                if let Some(e) = via {
                    tour.push(e);
                }
            }
        }
        tour.reverse();
        Ok(tour)
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.order {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }
}
