//! Edge colorings: the data model, properness checks, the exact
//! chromatic-index oracle and list edge coloring.

pub(crate) mod search;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph, VertexId};
use search::{full_mask, Outcome, Problem, MAX_COLORS};

pub type Color = usize;

/// Assignment of colors `0..palette` to edge ids. Entries for absent edges
/// (and not-yet-colored edges) are `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    palette: usize,
    colors: Vec<Option<Color>>,
}

impl EdgeColoring {
    pub fn new(palette: usize, edge_bound: usize) -> Self {
        EdgeColoring {
            palette,
            colors: vec![None; edge_bound],
        }
    }

    pub fn from_colors(palette: usize, colors: Vec<Option<Color>>) -> Result<Self> {
        if let Some(c) = colors.iter().flatten().find(|&&c| c >= palette) {
            return Err(Error::domain(format!("color {c} outside palette of size {palette}")));
        }
        Ok(EdgeColoring { palette, colors })
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn colors(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.colors.get(e.0).copied().flatten()
    }

    pub fn set(&mut self, e: EdgeId, c: Color) -> Result<()> {
        if c >= self.palette {
            return Err(Error::domain(format!(
                "color {c} outside palette of size {}",
                self.palette
            )));
        }
        if e.0 >= self.colors.len() {
            self.colors.resize(e.0 + 1, None);
        }
        self.colors[e.0] = Some(c);
        Ok(())
    }

    pub fn clear(&mut self, e: EdgeId) {
        if let Some(slot) = self.colors.get_mut(e.0) {
            *slot = None;
        }
    }

    /// Colors that appear on at least one edge.
    pub fn used_colors(&self) -> BTreeSet<Color> {
        self.colors.iter().flatten().copied().collect()
    }

    /// Color of `e`, failing if `e` is uncolored.
    pub fn require(&self, e: EdgeId) -> Result<Color> {
        self.get(e).ok_or(Error::PartialColoring(e))
    }

    /// Checks that every edge of `g` is colored.
    pub fn require_total(&self, g: &Multigraph) -> Result<()> {
        for e in g.edge_ids() {
            self.require(e)?;
        }
        Ok(())
    }

    /// Colors of the edges incident with `v`, in incidence order.
    pub fn at_vertex(&self, g: &Multigraph, v: VertexId) -> Result<Vec<Color>> {
        g.incident(v)?.iter().map(|&e| self.require(e)).collect()
    }
}

/// First pair of adjacent edges sharing a color, if any.
pub fn find_clash(g: &Multigraph, coloring: &EdgeColoring) -> Result<Option<(EdgeId, EdgeId)>> {
    coloring.require_total(g)?;
    for v in g.vertices() {
        let inc = g.incident(v)?;
        let mut seen: Vec<Option<EdgeId>> = vec![None; coloring.palette()];
        for &e in inc {
            let c = coloring.require(e)?;
            if let Some(f) = seen[c] {
                return Ok(Some((f, e)));
            }
            seen[c] = Some(e);
        }
    }
    Ok(None)
}

/// True iff no two edges sharing an endpoint share a color.
pub fn is_proper(g: &Multigraph, coloring: &EdgeColoring) -> Result<bool> {
    Ok(find_clash(g, coloring)?.is_none())
}

/// Limits on the exact search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Graphs with more edges are refused unless this is raised.
    pub max_edges: usize,
    /// Search nodes allowed across the whole run.
    pub node_budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_edges: 40,
            node_budget: 50_000_000,
        }
    }
}

impl OracleConfig {
    pub fn with_max_edges(mut self, max_edges: usize) -> Self {
        self.max_edges = max_edges;
        self
    }

    pub fn with_budget(mut self, node_budget: u64) -> Self {
        self.node_budget = node_budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChromaticIndex {
    Decided {
        index: usize,
        certificate: EdgeColoring,
        nodes: u64,
    },
    Undecided {
        /// Every palette below this size was refuted.
        lower_bound: usize,
        nodes: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeClass {
    #[serde(rename = "CLASS_I")]
    ClassOne,
    #[serde(rename = "CLASS_II")]
    ClassTwo,
}

pub(crate) struct Dense {
    pub ids: Vec<EdgeId>,
    pub edges: Vec<[usize; 2]>,
}

pub(crate) fn dense(g: &Multigraph) -> Dense {
    let mut ids = Vec::new();
    let mut edges = Vec::new();
    for (e, u, v) in g.edges() {
        ids.push(e);
        edges.push([u.0, v.0]);
    }
    Dense { ids, edges }
}

pub(crate) fn to_coloring(g: &Multigraph, ids: &[EdgeId], colors: &[usize], palette: usize) -> EdgeColoring {
    let mut out = EdgeColoring::new(palette, g.edge_bound());
    for (&e, &c) in ids.iter().zip(colors) {
        out.set(e, c).expect("search colors lie in the palette");
    }
    out
}

/// Decides whether `g` has a proper edge coloring with `palette` colors.
/// `Ok(None)` means exhaustively refuted.
pub(crate) fn colorable_with(g: &Multigraph, palette: usize, budget: u64) -> Result<(Option<EdgeColoring>, u64)> {
    if palette > MAX_COLORS {
        return Err(Error::domain(format!("palette {palette} exceeds {MAX_COLORS}")));
    }
    let d = dense(g);
    let problem = Problem {
        domains: vec![full_mask(palette); d.edges.len()],
        edges: d.edges,
        distinct: vec![true; g.order()],
        interchangeable: true,
    };
    match search::solve(&problem, budget) {
        Outcome::Found { colors, nodes } => Ok((Some(to_coloring(g, &d.ids, &colors, palette)), nodes)),
        Outcome::Exhausted { nodes } => Ok((None, nodes)),
        Outcome::OutOfBudget { .. } => Err(Error::Undecided { budget }),
    }
}

/// Exact chromatic index by backtracking over palettes `Δ..=Δ+μ`.
pub fn chromatic_index(g: &Multigraph, config: OracleConfig) -> Result<ChromaticIndex> {
    if g.size() > config.max_edges {
        return Err(Error::precondition(format!(
            "graph has {} edges, oracle cap is {}",
            g.size(),
            config.max_edges
        )));
    }
    let delta = g.max_valency()?;
    if g.size() == 0 {
        return Ok(ChromaticIndex::Decided {
            index: 0,
            certificate: EdgeColoring::new(0, g.edge_bound()),
            nodes: 0,
        });
    }
    let ceiling = delta + g.max_multiplicity();
    let mut spent = 0u64;
    for k in delta..=ceiling {
        let remaining = config.node_budget.saturating_sub(spent);
        match colorable_with(g, k, remaining) {
            Ok((Some(cert), nodes)) => {
                debug_assert!(!g.is_simple() || k <= delta + 1);
                return Ok(ChromaticIndex::Decided {
                    index: k,
                    certificate: cert,
                    nodes: spent + nodes,
                });
            }
            Ok((None, nodes)) => spent += nodes,
            Err(Error::Undecided { .. }) => {
                return Ok(ChromaticIndex::Undecided {
                    lower_bound: k,
                    nodes: config.node_budget,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Internal(format!(
        "no coloring with {ceiling} colors, contradicting the multigraph bound"
    )))
}

/// Class I iff the chromatic index equals the maximum valency.
pub fn classify(g: &Multigraph, config: OracleConfig) -> Result<EdgeClass> {
    match chromatic_index(g, config)? {
        ChromaticIndex::Decided { index, .. } => Ok(if index == g.max_valency()? {
            EdgeClass::ClassOne
        } else {
            EdgeClass::ClassTwo
        }),
        ChromaticIndex::Undecided { .. } => Err(Error::Undecided {
            budget: config.node_budget,
        }),
    }
}

/// Permitted colors per edge id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColorLists {
    lists: Vec<Option<BTreeSet<Color>>>,
}

impl ColorLists {
    pub fn new() -> Self {
        Self::default()
    }

    /// Same list on every edge of `g`.
    pub fn uniform(g: &Multigraph, list: impl IntoIterator<Item = Color>) -> Self {
        let list: BTreeSet<Color> = list.into_iter().collect();
        let mut out = ColorLists::new();
        for e in g.edge_ids() {
            out.insert(e, list.clone());
        }
        out
    }

    pub fn insert(&mut self, e: EdgeId, list: BTreeSet<Color>) {
        if e.0 >= self.lists.len() {
            self.lists.resize(e.0 + 1, None);
        }
        self.lists[e.0] = Some(list);
    }

    pub fn get(&self, e: EdgeId) -> Option<&BTreeSet<Color>> {
        self.lists.get(e.0).and_then(Option::as_ref)
    }
}

/// Proper coloring with every edge colored from its list, or `None` once the
/// search space is exhausted. Edges without a list, or with an empty one,
/// make the instance unsatisfiable.
pub fn list_edge_coloring(g: &Multigraph, lists: &ColorLists) -> Result<Option<EdgeColoring>> {
    let d = dense(g);
    let mut domains = Vec::with_capacity(d.ids.len());
    let mut palette = 0;
    for &e in &d.ids {
        let Some(list) = lists.get(e) else {
            return Ok(None);
        };
        let mut mask = 0u64;
        for &c in list {
            if c >= MAX_COLORS {
                return Err(Error::domain(format!("color {c} exceeds {MAX_COLORS}")));
            }
            mask |= 1 << c;
            palette = palette.max(c + 1);
        }
        domains.push(mask);
    }
    let problem = Problem {
        edges: d.edges,
        domains,
        distinct: vec![true; g.order()],
        interchangeable: false,
    };
    match search::solve(&problem, u64::MAX) {
        Outcome::Found { colors, .. } => Ok(Some(to_coloring(g, &d.ids, &colors, palette))),
        Outcome::Exhausted { .. } => Ok(None),
        Outcome::OutOfBudget { .. } => unreachable!("unbounded search"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn index(g: &Multigraph) -> usize {
        match chromatic_index(g, OracleConfig::default()).unwrap() {
            ChromaticIndex::Decided { index, certificate, .. } => {
                assert!(is_proper(g, &certificate).unwrap());
                assert_eq!(certificate.used_colors().len(), index);
                index
            }
            ChromaticIndex::Undecided { .. } => panic!("undecided"),
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(index(&catalog::petersen()), 4);
        assert_eq!(index(&catalog::complete(5)), 5);
        assert_eq!(index(&catalog::cycle(6)), 2);
        assert_eq!(index(&catalog::cycle(5)), 3);
        assert_eq!(index(&catalog::digon()), 2);
        // Shannon triangle with doubled edges needs 3Δ/2 colors
        let shannon = Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2)]).unwrap();
        assert_eq!(index(&shannon), 6);
    }

    #[test]
    fn classify_examples() {
        let cfg = OracleConfig::default();
        assert_eq!(classify(&catalog::complete(4), cfg).unwrap(), EdgeClass::ClassOne);
        assert_eq!(classify(&catalog::petersen(), cfg).unwrap(), EdgeClass::ClassTwo);
        assert_eq!(classify(&catalog::two_k5_bridge(), cfg).unwrap(), EdgeClass::ClassOne);
    }

    #[test]
    fn oracle_respects_caps() {
        let g = catalog::complete(10);
        assert!(matches!(
            chromatic_index(&g, OracleConfig::default()),
            Err(Error::Precondition(_))
        ));
        let tight = OracleConfig::default().with_budget(3);
        assert!(matches!(
            chromatic_index(&catalog::petersen(), tight).unwrap(),
            ChromaticIndex::Undecided { .. }
        ));
        assert!(matches!(
            classify(&catalog::petersen(), tight),
            Err(Error::Undecided { .. })
        ));
    }

    #[test]
    fn properness_examples() {
        let g = catalog::digon();
        let c = EdgeColoring::from_colors(1, vec![Some(0), Some(0)]).unwrap();
        assert!(!is_proper(&g, &c).unwrap());
        assert_eq!(find_clash(&g, &c).unwrap(), Some((EdgeId(0), EdgeId(1))));
        let partial = EdgeColoring::from_colors(2, vec![Some(0), None]).unwrap();
        assert_eq!(is_proper(&g, &partial), Err(Error::PartialColoring(EdgeId(1))));
        assert!(EdgeColoring::from_colors(2, vec![Some(2)]).is_err());
    }

    #[test]
    fn list_coloring_examples() {
        let k3 = catalog::complete(3);
        let c = list_edge_coloring(&k3, &ColorLists::uniform(&k3, 0..3))
            .unwrap()
            .unwrap();
        assert!(is_proper(&k3, &c).unwrap());
        let unsat = list_edge_coloring(&k3, &ColorLists::uniform(&k3, 0..2)).unwrap();
        assert!(unsat.is_none());
        let single = catalog::path(2);
        let mut lists = ColorLists::new();
        lists.insert(EdgeId(0), [7].into_iter().collect());
        let c = list_edge_coloring(&single, &lists).unwrap().unwrap();
        assert_eq!(c.get(EdgeId(0)), Some(7));
    }

    #[test]
    fn list_coloring_complete_graphs_with_shifted_lists() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in 2..=8 {
            let g = catalog::complete(n);
            for _ in 0..5 {
                let mut lists = ColorLists::new();
                for e in g.edge_ids() {
                    let mut pool: Vec<usize> = (0..2 * n).collect();
                    pool.shuffle(&mut rng);
                    lists.insert(e, pool[..n].iter().copied().collect());
                }
                let c = list_edge_coloring(&g, &lists)
                    .unwrap()
                    .expect("lists of size n suffice");
                assert!(is_proper(&g, &c).unwrap());
                for e in g.edge_ids() {
                    assert!(lists.get(e).unwrap().contains(&c.get(e).unwrap()));
                }
            }
        }
    }
}
