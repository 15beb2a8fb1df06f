//! Δ-colorings of complete truncations: edge-feasible colorings of the source,
//! the three constituent-order cases, and the consequences for other
//! truncations with the same maximum valency.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::canonical::CanonicalScheme;
use crate::coloring::search::{self, full_mask, Outcome, Problem, MAX_COLORS};
use crate::coloring::{self, Color, ColorLists, EdgeClass, EdgeColoring, OracleConfig};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph};
use crate::sun::ColoredTruncation;
use crate::truncation::{complete_truncation, Constituent, Truncation};

/// Every vertex of valency Δ sees Δ distinct colors; nothing is required
/// elsewhere.
pub fn is_edge_feasible(x: &Multigraph, coloring: &EdgeColoring) -> Result<bool> {
    let delta = x.max_valency()?;
    if delta % 2 == 0 {
        return Err(Error::domain(format!("edge-feasibility needs odd Δ, got {delta}")));
    }
    coloring.require_total(x)?;
    for v in x.vertices() {
        let at = coloring.at_vertex(x, v)?;
        if at.iter().any(|&c| c >= delta) {
            return Ok(false);
        }
        if at.len() == delta && at.iter().collect::<BTreeSet<_>>().len() != delta {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of the edge-feasibility search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Found(EdgeColoring),
    /// Exhaustive search found none; `nodes` is the size of the search tree.
    None {
        nodes: u64,
    },
}

/// Backtracking over Δ-colorings in which only Δ-valent vertices demand
/// distinct colors. [`Error::Undecided`] when the budget runs out.
pub fn find_edge_feasible(x: &Multigraph, budget: u64) -> Result<Feasibility> {
    let delta = x.max_valency()?;
    if delta % 2 == 0 {
        return Err(Error::domain(format!("edge-feasibility needs odd Δ, got {delta}")));
    }
    if delta > MAX_COLORS {
        return Err(Error::domain(format!("Δ = {delta} exceeds {MAX_COLORS} colors")));
    }
    let d = coloring::dense(x);
    let valencies = x.valencies();
    let problem = Problem {
        domains: vec![full_mask(delta); d.edges.len()],
        edges: d.edges,
        distinct: valencies.iter().map(|&v| v == delta).collect(),
        interchangeable: true,
    };
    match search::solve(&problem, budget) {
        Outcome::Found { colors, .. } => Ok(Feasibility::Found(coloring::to_coloring(x, &d.ids, &colors, delta))),
        Outcome::Exhausted { nodes } => Ok(Feasibility::None { nodes }),
        Outcome::OutOfBudget { .. } => Err(Error::Undecided { budget }),
    }
}

/// Pendant color pattern of a cluster of order Δ−1: `t` colors with counts
/// `s_1 <= ... <= s_t`, ties broken by color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorSequence {
    entries: Vec<(Color, usize)>,
}

impl ColorSequence {
    pub fn from_pendants(pendant: &[Color]) -> Self {
        let mut counts: BTreeMap<Color, usize> = BTreeMap::new();
        for &c in pendant {
            *counts.entry(c).or_default() += 1;
        }
        let mut entries: Vec<(Color, usize)> = counts.into_iter().collect();
        entries.sort_by_key(|&(c, s)| (s, c));
        ColorSequence { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.1).collect()
    }

    /// `c(i)` for `i = 1..=t`.
    pub fn color(&self, i: usize) -> Color {
        self.entries[i - 1].0
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// First label `v_d` of each block on `v_1..v_a`. Block `t` also owns `v_0`.
    pub fn block_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut d = 1;
        for &(_, s) in &self.entries {
            out.push(d);
            d += s;
        }
        out
    }
}

/// Constituent edges that the anchor assignment gave the color of an adjacent
/// pendant. Vertices are scheme labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictSet {
    pub isolated: Vec<(usize, usize)>,
    /// Each path as its vertex sequence.
    pub paths: Vec<Vec<usize>>,
}

impl ConflictSet {
    pub fn edge_count(&self) -> usize {
        self.isolated.len() + self.paths.iter().map(|p| p.len() - 1).sum::<usize>()
    }

    /// Splits the conflict edges into components. Fails unless they form a
    /// disjoint union of paths.
    fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); order];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        if let Some(v) = adj.iter().position(|n| n.len() > 2) {
            return Err(Error::Internal(format!("conflict edges meet three times at v{v}")));
        }
        let mut seen = vec![false; order];
        let mut out = ConflictSet::default();
        for start in 0..order {
            if seen[start] || adj[start].len() != 1 {
                continue;
            }
            let mut path = vec![start];
            seen[start] = true;
            let (mut prev, mut cur) = (start, adj[start][0]);
            loop {
                path.push(cur);
                seen[cur] = true;
                match adj[cur].iter().find(|&&w| w != prev) {
                    Some(&w) if adj[cur].len() == 2 => (prev, cur) = (cur, w),
                    _ => break,
                }
            }
            if path.len() == 2 {
                out.isolated.push((path[0], path[1]));
            } else {
                out.paths.push(path);
            }
        }
        if (0..order).any(|v| !adj[v].is_empty() && !seen[v]) {
            return Err(Error::Internal("conflict edges contain a cycle".into()));
        }
        Ok(out)
    }
}

/// Coloring of a constituent of order Δ−1 within its sun.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMinusOne {
    pub sequence: ColorSequence,
    /// `K_{Δ-1}` on cluster positions.
    pub constituent: Constituent,
    /// Aligned with `constituent.edges()`.
    pub colors: Vec<Color>,
    pub conflicts: ConflictSet,
}

/// Colors `K_{Δ-1}` so that its sun, with `pendant[p]` on position `p`, is
/// properly Δ-colored. `v_0` takes a pendant of color `c(t)` and blocks of
/// `c(1), ..., c(t)` follow on `v_1..v_a`. Colors `c(t-1)`, `c(t)` are kept out
/// of the canonical coloring and then used to repair the conflicts.
pub fn color_delta_minus_one(delta: usize, pendant: &[Color]) -> Result<DeltaMinusOne> {
    if delta % 2 == 0 || delta < 3 {
        return Err(Error::domain(format!("Δ must be odd and at least 3, got {delta}")));
    }
    if pendant.len() != delta - 1 {
        return Err(Error::domain(format!(
            "cluster has {} ends, expected Δ-1 = {}",
            pendant.len(),
            delta - 1
        )));
    }
    if let Some(&c) = pendant.iter().find(|&&c| c >= delta) {
        return Err(Error::domain(format!("pendant color {c} outside 0..{delta}")));
    }
    let seq = ColorSequence::from_pendants(pendant);
    let t = seq.len();
    let scheme = CanonicalScheme::new(delta - 1)?;

    // pendant color of each label
    let mut at_label = vec![seq.color(t)];
    for i in 1..=t {
        let s = seq.counts()[i - 1] - usize::from(i == t);
        at_label.extend(std::iter::repeat_n(seq.color(i), s));
    }

    let reserved: BTreeSet<Color> = [seq.color(t), seq.color(t.max(2) - 1)].into();
    let mut class_color: BTreeMap<usize, Color> = BTreeMap::new();
    if t >= 3 {
        for (i, &d) in seq.block_starts().iter().enumerate().take(t - 2) {
            let s = seq.counts()[i];
            let low = if s % 2 == 1 { d + (s - 1) / 2 } else { d + (s - 2) / 2 };
            let class = scheme.class_with_anchor_low(scheme.wrap(low as i64));
            if class_color.insert(class, seq.color(i + 1)).is_some() {
                return Err(Error::Internal("two blocks share an anchor class".into()));
            }
        }
    }
    let taken: BTreeSet<Color> = class_color.values().copied().chain(reserved.iter().copied()).collect();
    let mut free = (0..delta).filter(|c| !taken.contains(c));
    for class in 0..scheme.class_count() {
        if let std::collections::btree_map::Entry::Vacant(e) = class_color.entry(class) {
            let c = free.next().ok_or_else(|| Error::Internal("ran out of colors".into()))?;
            e.insert(c);
        }
    }

    let mut colored: BTreeMap<(usize, usize), Color> = BTreeMap::new();
    for (&class, &c) in &class_color {
        for e in scheme.class(class) {
            colored.insert(e, c);
        }
    }
    let conflict_edges: Vec<(usize, usize)> = colored
        .iter()
        .filter(|(&(x, y), &c)| at_label[x] == c || at_label[y] == c)
        .map(|(&e, _)| e)
        .collect();
    let conflicts = ConflictSet::from_edges(delta - 1, &conflict_edges)?;

    if !conflict_edges.is_empty() {
        let (lo, hi) = (seq.color(t - 1), seq.color(t));
        let mut walks: Vec<Vec<usize>> = conflicts.isolated.iter().map(|&(a, b)| vec![a, b]).collect();
        walks.extend(conflicts.paths.iter().cloned());
        for mut walk in walks {
            let constrained = |v: usize| at_label[v] == lo || at_label[v] == hi;
            if !constrained(walk[0]) && constrained(*walk.last().unwrap()) {
                walk.reverse();
            }
            // an edge at a c(t-1) pendant must take c(t), and vice versa
            let first = if at_label[walk[0]] == lo { hi } else { lo };
            let other = if first == lo { hi } else { lo };
            for (k, pair) in walk.windows(2).enumerate() {
                let e = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                let c = if k % 2 == 0 { first } else { other };
                if at_label[pair[0]] == c || at_label[pair[1]] == c {
                    return Err(Error::Internal(format!(
                        "recoloring [v{}, v{}] meets its own pendant color",
                        e.0, e.1
                    )));
                }
                colored.insert(e, c);
            }
        }
    }

    // labels to cluster positions, like colors matched in increasing order
    let mut slots: BTreeMap<Color, VecDeque<usize>> = BTreeMap::new();
    for (p, &c) in pendant.iter().enumerate() {
        slots.entry(c).or_default().push_back(p);
    }
    let to_cluster: Vec<usize> = at_label
        .iter()
        .map(|c| slots.get_mut(c).and_then(|q| q.pop_front()).expect("counts agree"))
        .collect();
    let mut edges = Vec::with_capacity(colored.len());
    let mut colors = Vec::with_capacity(colored.len());
    for (&(x, y), &c) in &colored {
        edges.push((to_cluster[x], to_cluster[y]));
        colors.push(c);
    }
    let out = DeltaMinusOne {
        sequence: seq,
        constituent: Constituent::new(delta - 1, edges)?,
        colors,
        conflicts,
    };
    if !sun_is_proper(&out.constituent, &out.colors, pendant) {
        return Err(Error::Internal("order Δ-1 sun is not proper".into()));
    }
    Ok(out)
}

fn sun_is_proper(c: &Constituent, colors: &[Color], pendant: &[Color]) -> bool {
    let mut seen: Vec<BTreeSet<Color>> = pendant.iter().map(|&p| [p].into()).collect();
    for (&(x, y), &col) in c.edges().iter().zip(colors) {
        if !seen[x].insert(col) || !seen[y].insert(col) {
            return false;
        }
    }
    true
}

/// `K_Δ`, Δ odd, with the class missing each vertex colored like that
/// vertex's pendant. The pendant colors must be distinct.
fn color_order_delta(delta: usize, pendant: &[Color]) -> Result<(Constituent, Vec<Color>)> {
    if delta < 2 {
        return Ok((Constituent::empty(delta), Vec::new()));
    }
    let scheme = CanonicalScheme::new(delta)?;
    let mut edges = Vec::new();
    let mut colors = Vec::new();
    for t in 0..scheme.class_count() {
        let a = scheme.anchor_low(t);
        let c = pendant[scheme.vertex_of(scheme.apex(a))];
        for (x, y) in scheme.class(t) {
            edges.push((scheme.vertex_of(x), scheme.vertex_of(y)));
            colors.push(c);
        }
    }
    Ok((Constituent::new(delta, edges)?, colors))
}

/// `K_r`, r <= Δ−2, colored from lists avoiding both pendant colors.
fn color_small(delta: usize, pendant: &[Color]) -> Result<(Constituent, Vec<Color>)> {
    let r = pendant.len();
    let k = Constituent::complete(r);
    let g = k.to_multigraph();
    let mut lists = ColorLists::new();
    for (e, a, b) in g.edges() {
        let list = (0..delta).filter(|&c| c != pendant[a.0] && c != pendant[b.0]).collect();
        lists.insert(e, list);
    }
    let c = coloring::list_edge_coloring(&g, &lists)?
        .ok_or_else(|| Error::Internal(format!("no list coloring of K_{r} with Δ = {delta}")))?;
    let colors = g.edge_ids().map(|e| c.require(e)).collect::<Result<Vec<_>>>()?;
    Ok((k, colors))
}

/// `K_r` canonically colored with colors `1..`.
fn color_shifted(r: usize) -> Result<(Constituent, Vec<Color>)> {
    if r < 2 {
        return Ok((Constituent::empty(r), Vec::new()));
    }
    let scheme = CanonicalScheme::new(r)?;
    let mut edges = Vec::new();
    let mut colors = Vec::new();
    for t in 0..scheme.class_count() {
        for (x, y) in scheme.class(t) {
            edges.push((scheme.vertex_of(x), scheme.vertex_of(y)));
            colors.push(1 + t);
        }
    }
    Ok((Constituent::new(r, edges)?, colors))
}

/// Certificate that a complete truncation is class II: Δ is odd and the
/// edge-feasibility search was exhausted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTwoWitness {
    pub delta: usize,
    /// Nodes visited by the exhausted edge-feasibility search.
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompleteOutcome {
    Colored {
        truncation: ColoredTruncation,
        /// Coloring of the source carried by the matching edges.
        source_coloring: EdgeColoring,
    },
    ClassTwo(ClassTwoWitness),
}

/// A Δ-coloring of the complete truncation, or a witness that none exists.
/// `budget` bounds the edge-feasibility search for odd Δ.
pub fn color_complete_truncation(x: &Multigraph, budget: u64) -> Result<CompleteOutcome> {
    x.require_no_isolated()?;
    let delta = x.max_valency()?;
    let source_coloring = if delta % 2 == 0 {
        let mut c = EdgeColoring::new(delta, x.edge_bound());
        for e in x.edge_ids() {
            c.set(e, 0)?;
        }
        c
    } else {
        match find_edge_feasible(x, budget)? {
            Feasibility::Found(c) => c,
            Feasibility::None { nodes } => return Ok(CompleteOutcome::ClassTwo(ClassTwoWitness { delta, nodes })),
        }
    };
    let mut parts = Vec::with_capacity(x.order());
    for v in x.vertices() {
        let pendant = source_coloring.at_vertex(x, v)?;
        let r = pendant.len();
        let part = if delta % 2 == 0 {
            color_shifted(r)?
        } else if r == delta {
            color_order_delta(delta, &pendant)?
        } else if r + 1 == delta {
            let d = color_delta_minus_one(delta, &pendant)?;
            (d.constituent, d.colors)
        } else {
            color_small(delta, &pendant)?
        };
        parts.push(part);
    }
    let truncation = ColoredTruncation::assemble(x, parts, delta, |e| source_coloring.require(e))?;
    Ok(CompleteOutcome::Colored {
        truncation,
        source_coloring,
    })
}

/// Δ-coloring of any truncation `tr` of `x` with the same maximum valency, by
/// restricting a Δ-coloring of the complete truncation.
pub fn subtruncation_coloring(x: &Multigraph, tr: &Truncation, budget: u64) -> Result<EdgeColoring> {
    if tr.source() != x {
        return Err(Error::domain("truncation was not built from this multigraph"));
    }
    let delta = x.max_valency()?;
    let tr_delta = tr.max_valency()?;
    if tr_delta != delta {
        return Err(Error::domain(format!("Δ(TR) = {tr_delta} differs from Δ(X) = {delta}")));
    }
    let CompleteOutcome::Colored { truncation: full, .. } = color_complete_truncation(x, budget)? else {
        return Err(Error::precondition(
            "the complete truncation is class II, so no Δ-coloring restricts",
        ));
    };
    let mut out = EdgeColoring::new(delta, tr.graph().edge_bound());
    for e in x.edge_ids() {
        let c = full.coloring.require(full.truncation.matching_edge(e)?)?;
        out.set(tr.matching_edge(e)?, c)?;
    }
    for v in x.vertices() {
        let mut by_pair: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
        let con = full.truncation.constituent(v)?;
        for (&pair, &flat) in con.edges().iter().zip(full.truncation.constituent_edges(v)?) {
            by_pair.insert(pair, flat);
        }
        let sub = tr.constituent(v)?;
        for (pair, &flat) in sub.edges().iter().zip(tr.constituent_edges(v)?) {
            let src = by_pair
                .get(pair)
                .ok_or_else(|| Error::Internal(format!("pair {pair:?} missing from K_r")))?;
            out.set(flat, full.coloring.require(*src)?)?;
        }
    }
    if let Some((e, f)) = coloring::find_clash(tr.graph(), &out)? {
        return Err(Error::Internal(format!("restricted coloring clashes at {e} and {f}")));
    }
    Ok(out)
}

/// `(X class I, complete truncation class I)` for a regular `X` of odd valency.
pub fn regular_odd_equivalence(x: &Multigraph, config: OracleConfig) -> Result<(bool, bool)> {
    match x.regular_valency() {
        Some(d) if d % 2 == 1 => {}
        Some(d) => return Err(Error::domain(format!("valency {d} is even"))),
        None => return Err(Error::domain("multigraph is not regular")),
    }
    let tr = complete_truncation(x)?;
    let source = coloring::classify(x, config)? == EdgeClass::ClassOne;
    let truncated = coloring::classify(tr.graph(), config)? == EdgeClass::ClassOne;
    Ok((source, truncated))
}
