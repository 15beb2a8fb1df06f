//! Truncations whose Δ-critical constituents are class I, and arboreal
//! truncations as the special case with forest constituents.

use std::collections::{BTreeMap, VecDeque};

use crate::coloring::{self, ChromaticIndex, Color, EdgeColoring, OracleConfig};
use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, VertexId};
use crate::sun::ColoredTruncation;
use crate::truncation::{arboreal_truncation, Constituent, Truncation};

/// Proper coloring of a forest with as many colors as its maximum valency,
/// each tree colored from its root down. `None` if `c` has a cycle.
pub fn forest_edge_coloring(c: &Constituent) -> Option<Vec<Color>> {
    if !c.is_forest() {
        return None;
    }
    let n = c.order();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in c.edges().iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    let mut colors = vec![usize::MAX; c.edges().len()];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        // (vertex, color of the edge from its parent)
        let mut queue = VecDeque::from([(root, None)]);
        while let Some((u, parent)) = queue.pop_front() {
            let mut next = 0;
            for &(w, i) in &adj[u] {
                if seen[w] {
                    continue;
                }
                if Some(next) == parent {
                    next += 1;
                }
                colors[i] = next;
                next += 1;
                seen[w] = true;
                queue.push_back((w, Some(colors[i])));
            }
        }
    }
    Some(colors)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrongOutcome {
    Colored(EdgeColoring),
    /// A constituent holding a Δ-valent vertex is class II; the sufficient
    /// condition does not apply.
    NotApplicable {
        vertex: VertexId,
        chromatic_index: usize,
    },
}

/// Colors every constituent within `0..Δ-1` and all matching edges with
/// `Δ-1`, provided each constituent containing a Δ-valent vertex of the
/// truncation is class I. Non-forest constituents go to the oracle.
pub fn color_by_strong(tr: &Truncation, config: OracleConfig) -> Result<StrongOutcome> {
    let g = tr.graph();
    let delta = g.max_valency()?;
    let x = tr.source();
    let mut c = EdgeColoring::new(delta, g.edge_bound());
    for e in x.edge_ids() {
        c.set(tr.matching_edge(e)?, delta - 1)?;
    }
    for v in x.vertices() {
        let con = tr.constituent(v)?;
        if con.edges().is_empty() {
            continue;
        }
        let colors = match forest_edge_coloring(con) {
            Some(colors) => colors,
            None => {
                let h = con.to_multigraph();
                let (index, cert) = match coloring::chromatic_index(&h, config)? {
                    ChromaticIndex::Decided { index, certificate, .. } => (index, certificate),
                    ChromaticIndex::Undecided { .. } => {
                        return Err(Error::Undecided {
                            budget: config.node_budget,
                        })
                    }
                };
                if index > delta - 1 {
                    return Ok(StrongOutcome::NotApplicable {
                        vertex: v,
                        chromatic_index: index,
                    });
                }
                h.edge_ids().map(|e| cert.require(e)).collect::<Result<Vec<_>>>()?
            }
        };
        for (&flat, &col) in tr.constituent_edges(v)?.iter().zip(&colors) {
            c.set(flat, col)?;
        }
    }
    if let Some((e, f)) = coloring::find_clash(g, &c)? {
        return Err(Error::Internal(format!("strong coloring clashes at {e} and {f}")));
    }
    Ok(StrongOutcome::Colored(c))
}

/// Arboreal truncation with the given forests, colored with Δ(TR) colors.
pub fn arboreal_is_class_one(x: &Multigraph, forests: BTreeMap<VertexId, Constituent>) -> Result<ColoredTruncation> {
    let truncation = arboreal_truncation(x, forests)?;
    // forests never reach the oracle
    match color_by_strong(&truncation, OracleConfig::default())? {
        StrongOutcome::Colored(coloring) => Ok(ColoredTruncation { truncation, coloring }),
        StrongOutcome::NotApplicable { vertex, .. } => Err(Error::Internal(format!(
            "forest constituent at {vertex} was not colored"
        ))),
    }
}
