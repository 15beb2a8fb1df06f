//! Class I cyclic truncations: three-color vectors, the even-valency and
//! class-I-regular constructions, enabling submultigraphs, and the bridge
//! obstruction for trivalent graphs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coloring::{self, Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph, VertexId};
use crate::sun::{self, ColorVector, ColoredTruncation, SunColoring};
use crate::truncation::{cyclic_truncation, Constituent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Admissibility {
    Admissible,
    TotallyInadmissible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vector3Verdict {
    pub verdict: Admissibility,
    /// Every cycle constituent works, not just some.
    pub universal: bool,
}

/// Admissibility of the pendant counts around a cycle constituent of a
/// vertex with valency `x1 + x2 + x3`.
pub fn vector3_admissible(x1: usize, x2: usize, x3: usize) -> Result<Vector3Verdict> {
    let d = x1 + x2 + x3;
    if d < 3 {
        return Err(Error::domain(format!("valency {d} is below 3")));
    }
    let ok = sun::admissible(&ColorVector::new(vec![x1, x2, x3])?)?;
    let nonzero = [x1, x2, x3].iter().filter(|&&x| x > 0).count();
    Ok(Vector3Verdict {
        verdict: if ok {
            Admissibility::Admissible
        } else {
            Admissibility::TotallyInadmissible
        },
        universal: ok && nonzero == 1 && d % 2 == 0,
    })
}

/// Edge colors around a cycle `w_0 w_1 ... w_{r-1} w_0` whose vertex `w_i`
/// carries pendant color `pendant[i]`, using colors `0..3`. Edge `i` joins
/// `w_i` and `w_{i+1}`.
fn color_cycle(pendant: &[Color]) -> Option<Vec<Color>> {
    let r = pendant.len();
    for first in 0..3 {
        if first == pendant[0] || first == pendant[1 % r] {
            continue;
        }
        // reach[i][c]: edge i can take color c; back pointers for recovery
        let mut prev: Vec<[Option<Color>; 3]> = vec![[None; 3]; r];
        prev[0][first] = Some(first);
        for i in 1..r {
            for c in 0..3 {
                if c == pendant[i] || c == pendant[(i + 1) % r] {
                    continue;
                }
                prev[i][c] = (0..3).find(|&b| b != c && prev[i - 1][b].is_some());
            }
        }
        if let Some(last) = (0..3).find(|&c| c != first && prev[r - 1][c].is_some()) {
            let mut out = vec![0; r];
            let mut c = last;
            for i in (0..r).rev() {
                out[i] = c;
                c = prev[i][c].expect("reachable");
            }
            return Some(out);
        }
    }
    None
}

/// Sun with a Hamiltonian cycle constituent for three-color counts. The
/// anchor construction is used when it already yields one cycle; otherwise
/// the pendants are laid out in runs and the cycle colored directly.
pub fn cyclic_sun(counts: [usize; 3]) -> Result<SunColoring> {
    let vector = ColorVector::new(counts.to_vec())?;
    if !sun::admissible(&vector)? {
        return Err(Error::domain(format!("{vector} is not admissible")));
    }
    let built = sun::build_sun(&vector)?;
    if built.constituent.is_hamiltonian_cycle() {
        return Ok(built);
    }
    let [a, b, c] = counts;
    let run = |color: Color, n: usize| std::iter::repeat_n(color, n);
    let layout: Vec<Color> = if a % 2 == 1 {
        run(0, a).chain(run(1, b)).chain(run(2, c)).collect()
    } else if a > 0 && b > 0 && c > 0 {
        run(0, 1)
            .chain(run(2, c))
            .chain(run(0, a - 1))
            .chain(run(1, b))
            .collect()
    } else {
        vector.block_layout()
    };
    let r = layout.len();
    let colors = color_cycle(&layout).ok_or_else(|| Error::Internal(format!("no cycle coloring for {vector}")))?;
    let constituent = Constituent::cycle(r, &(0..r).collect::<Vec<_>>())?;
    let by_pair: BTreeMap<(usize, usize), Color> = (0..r)
        .map(|i| {
            let j = (i + 1) % r;
            ((i.min(j), i.max(j)), colors[i])
        })
        .collect();
    let constituent_colors = constituent.edges().iter().map(|e| by_pair[e]).collect();
    let out = SunColoring {
        vector,
        palette: 3,
        pendant_colors: layout,
        constituent,
        constituent_colors,
    };
    if !out.is_proper() {
        return Err(Error::Internal(format!(
            "run-layout sun for {} is not proper",
            out.vector
        )));
    }
    Ok(out)
}

/// Glues cyclic suns realizing a three-coloring of the source.
fn assemble_cyclic(x: &Multigraph, source: &EdgeColoring) -> Result<ColoredTruncation> {
    let mut parts = Vec::with_capacity(x.order());
    for v in x.vertices() {
        let at = source.at_vertex(x, v)?;
        let mut counts = [0; 3];
        for &c in &at {
            counts[c] += 1;
        }
        let s = cyclic_sun(counts)?;
        parts.push(sun::embed(&s, &at)?);
    }
    ColoredTruncation::assemble(x, parts, 3, |e| source.require(e))
}

/// Cyclic truncation with the given cycle orders, 3-colored: matching edges
/// 0 and each (even) cycle alternately 1 and 2.
pub fn cyclic_even_valency(x: &Multigraph, orders: &BTreeMap<VertexId, Vec<usize>>) -> Result<ColoredTruncation> {
    for v in x.vertices() {
        let val = x.valency(v)?;
        if val % 2 == 1 || val < 4 {
            return Err(Error::precondition(format!(
                "{v} has valency {val}; every valency must be even and at least 4"
            )));
        }
    }
    let tr = cyclic_truncation(x, orders)?;
    let mut c = EdgeColoring::new(3, tr.graph().edge_bound());
    for e in x.edge_ids() {
        c.set(tr.matching_edge(e)?, 0)?;
    }
    for v in x.vertices() {
        let con = tr.constituent(v)?;
        let r = con.order();
        let seq = orders.get(&v).cloned().unwrap_or_else(|| (0..r).collect());
        let mut by_pair = BTreeMap::new();
        for i in 0..r {
            let (p, q) = (seq[i], seq[(i + 1) % r]);
            by_pair.insert((p.min(q), p.max(q)), 1 + i % 2);
        }
        for (pair, &flat) in con.edges().iter().zip(tr.constituent_edges(v)?) {
            c.set(flat, by_pair[pair])?;
        }
    }
    if let Some((e, f)) = coloring::find_clash(tr.graph(), &c)? {
        return Err(Error::Internal(format!("alternating coloring clashes at {e} and {f}")));
    }
    Ok(ColoredTruncation {
        truncation: tr,
        coloring: c,
    })
}

/// Cyclic truncation of a `d`-regular graph, `d` odd, from a proper
/// `d`-coloring: colors `3..d` fold into color 2, so every cluster sees
/// `(1, 1, d-2)`.
pub fn cyclic_from_class_one(x: &Multigraph, proper: &EdgeColoring) -> Result<ColoredTruncation> {
    let d = match x.regular_valency() {
        Some(d) if d % 2 == 1 && d >= 3 => d,
        _ => return Err(Error::domain("source must be regular of odd valency at least 3")),
    };
    proper.require_total(x)?;
    if x.edge_ids().any(|e| proper.get(e).is_some_and(|c| c >= d)) {
        return Err(Error::domain(format!("coloring uses more than {d} colors")));
    }
    if let Some((e, f)) = coloring::find_clash(x, proper)? {
        return Err(Error::domain(format!("coloring is not proper: {e} and {f} clash")));
    }
    let mut folded = EdgeColoring::new(3, x.edge_bound());
    for e in x.edge_ids() {
        folded.set(e, proper.require(e)?.min(2))?;
    }
    assemble_cyclic(x, &folded)
}

/// Vertices by valency modulo 4, before and after removing `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnablingPartition {
    pub before: [Vec<VertexId>; 4],
    pub after: [Vec<VertexId>; 4],
}

impl EnablingPartition {
    pub fn new(x: &Multigraph, y: &BTreeSet<EdgeId>) -> Result<Self> {
        let rest = x.without_edges(y)?;
        let mut before: [Vec<VertexId>; 4] = Default::default();
        let mut after: [Vec<VertexId>; 4] = Default::default();
        for v in x.vertices() {
            before[x.valency(v)? % 4].push(v);
            after[rest.valency(v)? % 4].push(v);
        }
        Ok(EnablingPartition { before, after })
    }
}

/// Target class modulo 4 after removing `Y`: 0 for even valency, 2 for odd.
fn enabled_target(valency: usize) -> usize {
    if valency % 2 == 0 {
        0
    } else {
        2
    }
}

/// `V_0 -> V_0'`, `V_1 -> V_2'`, `V_2 -> V_0'`, `V_3 -> V_2'`.
pub fn is_enabling(x: &Multigraph, y: &BTreeSet<EdgeId>) -> Result<bool> {
    if let Some(e) = y.iter().find(|e| !x.contains_edge(**e)) {
        return Err(Error::domain(format!("{e} is not an edge of the multigraph")));
    }
    let rest = x.without_edges(y)?;
    for v in x.vertices() {
        if rest.valency(v)? % 4 != enabled_target(x.valency(v)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Components of `X \ Y` with an odd number of edges, by smallest vertex.
fn odd_components(rest: &Multigraph) -> Vec<VertexId> {
    let labels = rest.component_labels();
    let mut sizes: BTreeMap<usize, (usize, VertexId)> = BTreeMap::new();
    for (_, u, _) in rest.edges() {
        let entry = sizes.entry(labels[u.0]).or_insert((0, u));
        entry.0 += 1;
    }
    for v in rest.vertices() {
        if let Some(entry) = sizes.get_mut(&labels[v.0]) {
            entry.1 = entry.1.min(v);
        }
    }
    sizes.values().filter(|(n, _)| n % 2 == 1).map(|&(_, v)| v).collect()
}

/// 3-colored cyclic truncation from an enabling submultigraph `Y` whose
/// complement has only even-size components: Euler tours alternate colors 0
/// and 1, and `Y` takes color 2.
pub fn color_via_enabling(x: &Multigraph, y: &BTreeSet<EdgeId>) -> Result<ColoredTruncation> {
    for v in x.vertices() {
        let val = x.valency(v)?;
        if val < 3 {
            return Err(Error::precondition(format!("{v} has valency {val} < 3")));
        }
    }
    if !is_enabling(x, y)? {
        return Err(Error::precondition("Y is not an enabling submultigraph"));
    }
    let rest = x.without_edges(y)?;
    if let Some(v) = odd_components(&rest).first() {
        return Err(Error::precondition(format!(
            "the component of X \\ Y containing {v} has an odd number of edges"
        )));
    }
    let mut source = EdgeColoring::new(3, x.edge_bound());
    for &e in y {
        source.set(e, 2)?;
    }
    let mut toured = vec![false; x.order()];
    let labels = rest.component_labels();
    for v in rest.vertices() {
        if toured[labels[v.0]] || rest.valency(v)? == 0 {
            continue;
        }
        toured[labels[v.0]] = true;
        for (i, e) in rest.euler_tour(v)?.into_iter().enumerate() {
            source.set(e, i % 2)?;
        }
    }
    for v in x.vertices() {
        let at = source.at_vertex(x, v)?;
        let count = |c| at.iter().filter(|&&a| a == c).count();
        let counts = vec![count(0), count(1), count(2)];
        if counts[0] != counts[1] {
            return Err(Error::Internal(format!("tour colors unbalanced at {v}")));
        }
        let vector = ColorVector::new(counts)?;
        if !sun::admissible(&vector)? {
            return Err(Error::Internal(format!("vector {vector} at {v} is not admissible")));
        }
    }
    assemble_cyclic(x, &source)
}

/// Smallest `Y` (by edge count) that is enabling and leaves only even-size
/// components, scanning subsets in increasing size. `Ok(None)` once every
/// subset is ruled out; [`Error::Undecided`] after `cap` search nodes.
pub fn find_enabling(x: &Multigraph, cap: u64) -> Result<Option<BTreeSet<EdgeId>>> {
    struct St<'a> {
        x: &'a Multigraph,
        edges: Vec<(EdgeId, usize, usize)>,
        /// Index of the last edge at each vertex in `edges`.
        last: Vec<Option<usize>>,
        need: Vec<usize>,
        ydeg: Vec<usize>,
        chosen: Vec<EdgeId>,
        nodes: u64,
        cap: u64,
    }

    impl St<'_> {
        fn closed_ok(&self, i: usize, v: usize) -> bool {
            self.last[v] != Some(i) || self.ydeg[v] % 4 == self.need[v]
        }

        fn dfs(&mut self, i: usize, left: usize) -> Result<Option<BTreeSet<EdgeId>>> {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::Undecided { budget: self.cap });
            }
            if i == self.edges.len() {
                if left > 0 {
                    return Ok(None);
                }
                let y: BTreeSet<EdgeId> = self.chosen.iter().copied().collect();
                let rest = self.x.without_edges(&y)?;
                return Ok(odd_components(&rest).is_empty().then_some(y));
            }
            if self.edges.len() - i < left {
                return Ok(None);
            }
            let (e, u, v) = self.edges[i];
            if left > 0 {
                self.ydeg[u] += 1;
                self.ydeg[v] += 1;
                self.chosen.push(e);
                if self.closed_ok(i, u) && self.closed_ok(i, v) {
                    if let Some(y) = self.dfs(i + 1, left - 1)? {
                        return Ok(Some(y));
                    }
                }
                self.chosen.pop();
                self.ydeg[u] -= 1;
                self.ydeg[v] -= 1;
            }
            if self.closed_ok(i, u) && self.closed_ok(i, v) {
                return self.dfs(i + 1, left);
            }
            Ok(None)
        }
    }

    let edges: Vec<(EdgeId, usize, usize)> = x.edges().map(|(e, u, v)| (e, u.0, v.0)).collect();
    let mut last = vec![None; x.order()];
    for (i, &(_, u, v)) in edges.iter().enumerate() {
        last[u] = Some(i);
        last[v] = Some(i);
    }
    let need = x
        .valencies()
        .iter()
        .map(|&val| (val + 4 - enabled_target(val)) % 4)
        .collect();
    let mut st = St {
        x,
        edges,
        last,
        need,
        ydeg: vec![0; x.order()],
        chosen: Vec::new(),
        nodes: 0,
        cap,
    };
    for k in 0..=x.size() {
        if let Some(y) = st.dfs(0, k)? {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// A trivalent graph with a bridge is class II; true iff `g` has a bridge.
pub fn cut_edge_class_two(g: &Multigraph) -> Result<bool> {
    if g.regular_valency() != Some(3) {
        return Err(Error::domain("graph is not trivalent"));
    }
    Ok(!g.bridges().is_empty())
}
