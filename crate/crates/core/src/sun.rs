//! Color vectors around a constituent, the admissibility test, and the two
//! anchor-based constructions of class I suns. Also parity-balanced colorings
//! and the semiregular and regular truncations built from them.
//!
//! Sun positions mostly follow the block layout: color 0 takes the first
//! `x_0` positions, color 1 the next `x_1`, and so on. The even construction
//! scatters the blocks when the successive layout would reuse an edge.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::canonical::{CanonicalScheme, LabelEdge};
use crate::coloring::{self, Color, ColorLists, EdgeColoring};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph, VertexId};
use crate::truncation::{excise, Constituent, Truncation};

/// Pendant color counts `(x_1, ..., x_d)` around one constituent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorVector(Vec<usize>);

impl ColorVector {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("color vector needs at least one entry"));
        }
        if entries.iter().sum::<usize>() == 0 {
            return Err(Error::domain("color vector sums to zero"));
        }
        Ok(ColorVector(entries))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// Number of pendant edges.
    pub fn r(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of colors.
    pub fn d(&self) -> usize {
        self.0.len()
    }

    /// Pendant color at each position under the block layout.
    pub fn block_layout(&self) -> Vec<Color> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(c, &x)| std::iter::repeat_n(c, x))
            .collect()
    }

    fn all_odd(&self) -> bool {
        self.0.iter().all(|x| x % 2 == 1)
    }

    fn all_even(&self) -> bool {
        self.0.iter().all(|x| x % 2 == 0)
    }
}

impl fmt::Display for ColorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for ColorVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .trim()
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::domain(format!("bad vector entry {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ColorVector::new(entries)
    }
}

/// Whether some `(d-1)`-regular constituent makes the sun class I: all
/// entries share the parity of `r`, and odd parity forces odd `d`.
pub fn admissible(v: &ColorVector) -> Result<bool> {
    let (r, d) = (v.r(), v.d());
    if r < d {
        return Err(Error::domain(format!(
            "vector {v} has r = {r} < d = {d}; admissibility is only defined for r >= d"
        )));
    }
    let parity = r % 2;
    Ok(v.entries().iter().all(|x| x % 2 == parity) && (parity == 0 || d % 2 == 1))
}

/// A properly colored sun: constituent on positions `0..r` plus one pendant
/// edge per position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunColoring {
    pub vector: ColorVector,
    pub palette: usize,
    pub pendant_colors: Vec<Color>,
    pub constituent: Constituent,
    /// Aligned with `constituent.edges()`.
    pub constituent_colors: Vec<Color>,
}

impl SunColoring {
    /// The sun as a graph laid out like [`crate::truncation::SunView`]:
    /// constituent edges first, then the pendant `i -> r + i` for each `i`.
    pub fn to_graph(&self) -> (Multigraph, EdgeColoring) {
        let r = self.pendant_colors.len();
        let mut g = Multigraph::new(2 * r);
        let mut c = EdgeColoring::new(self.palette, 0);
        for (&(i, j), &col) in self.constituent.edges().iter().zip(&self.constituent_colors) {
            let e = g.add_edge(VertexId(i), VertexId(j)).expect("constituent edge");
            c.set(e, col).expect("color within palette");
        }
        for (i, &col) in self.pendant_colors.iter().enumerate() {
            let e = g.add_edge(VertexId(i), VertexId(r + i)).expect("pendant edge");
            c.set(e, col).expect("color within palette");
        }
        (g, c)
    }

    pub fn is_proper(&self) -> bool {
        let (g, c) = self.to_graph();
        coloring::is_proper(&g, &c).unwrap_or(false)
    }

    /// Constituent edges of each color.
    pub fn color_counts(&self) -> BTreeMap<Color, usize> {
        let mut out = BTreeMap::new();
        for &c in &self.constituent_colors {
            *out.entry(c).or_default() += 1;
        }
        out
    }
}

/// Partial assignment of colors to edges of `K_r`, in scheme labels.
struct Assignment {
    scheme: CanonicalScheme,
    colored: BTreeMap<LabelEdge, Color>,
}

impl Assignment {
    fn new(scheme: CanonicalScheme) -> Self {
        Assignment {
            scheme,
            colored: BTreeMap::new(),
        }
    }

    fn put(&mut self, e: LabelEdge, c: Color) -> Result<()> {
        if let Some(prev) = self.colored.insert(e, c) {
            return Err(Error::Internal(format!(
                "edge [u{}, u{}] colored twice ({prev} and {c})",
                e.0, e.1
            )));
        }
        Ok(())
    }

    /// Classes with no colored edge, ascending.
    fn untouched_classes(&self) -> Vec<usize> {
        let touched: BTreeSet<usize> = self.colored.keys().map(|&(x, y)| self.scheme.class_of(x, y)).collect();
        (0..self.scheme.class_count())
            .filter(|t| !touched.contains(t))
            .collect()
    }

    /// Uncolored edges of touched classes, if together they form a perfect
    /// matching of `K_r`.
    fn leftover_matching(&self) -> Option<Vec<LabelEdge>> {
        let touched: BTreeSet<usize> = self.colored.keys().map(|&(x, y)| self.scheme.class_of(x, y)).collect();
        let mut out = Vec::new();
        for &t in &touched {
            out.extend(
                self.scheme
                    .class(t)
                    .into_iter()
                    .filter(|e| !self.colored.contains_key(e)),
            );
        }
        let n = self.scheme.order();
        let mut seen = vec![false; n];
        for &(x, y) in &out {
            for l in [x, y] {
                let v = self.scheme.vertex_of(l);
                if seen[v] {
                    return None;
                }
                seen[v] = true;
            }
        }
        (!out.is_empty() && seen.iter().all(|&s| s)).then_some(out)
    }

    /// Adds one further perfect matching of `K_r` in color `c`: an untouched
    /// class if any remains, else the leftovers of the touched classes.
    fn add_unit(&mut self, c: Color) -> Result<()> {
        let edges = match self.untouched_classes().first() {
            Some(&t) => self.scheme.class(t),
            None => self
                .leftover_matching()
                .ok_or_else(|| Error::Internal("no perfect matching of the scheme left to add".into()))?,
        };
        for e in edges {
            self.put(e, c)?;
        }
        Ok(())
    }

    fn finish(self, vector: ColorVector, pendant_colors: Vec<Color>, palette: usize) -> Result<SunColoring> {
        let scheme = self.scheme;
        let mut edges = Vec::new();
        let mut colors = Vec::new();
        for (&(x, y), &c) in &self.colored {
            edges.push((scheme.vertex_of(x), scheme.vertex_of(y)));
            colors.push(c);
        }
        let constituent = Constituent::new(pendant_colors.len(), edges)?;
        let sun = SunColoring {
            vector,
            palette,
            pendant_colors,
            constituent,
            constituent_colors: colors,
        };
        if !sun.is_proper() {
            return Err(Error::Internal(format!("sun for {} is not proper", sun.vector)));
        }
        Ok(sun)
    }
}

/// Sun for an admissible vector whose entries are all odd.
///
/// Positions are labels `u_1..u_r` taken modulo `r`. For color `i` with
/// central pendant at `u_a` and `α = (x_i - 1) / 2`, the class anchored at
/// `[u_{a+(r-1)/2}, u_{a+(r+1)/2}]` is colored from the anchor outwards up to
/// `[u_{a-α-1}, u_{a+α+1}]`, which covers exactly the vertices outside the
/// block of color `i`.
pub fn build_sun_odd(v: &ColorVector) -> Result<SunColoring> {
    if !v.all_odd() || !admissible(v)? {
        return Err(Error::domain(format!("{v} is not an admissible all-odd vector")));
    }
    let r = v.r();
    let pendant = v.block_layout();
    if r == 1 {
        return Assignment::new(CanonicalScheme::new(2)?).finish(v.clone(), pendant, v.d());
    }
    let scheme = CanonicalScheme::new(r)?;
    let mut asg = Assignment::new(scheme);
    let mut start = 1;
    for (color, &x) in v.entries().iter().enumerate() {
        let alpha = (x - 1) / 2;
        let center = start + alpha;
        let anchor = scheme.wrap((center + (r - 1) / 2) as i64);
        let take = (r - 1) / 2 - alpha;
        for e in scheme.layers(anchor).into_iter().take(take) {
            asg.put(e, color)?;
        }
        start += x;
    }
    asg.finish(v.clone(), pendant, v.d())
}

/// Colors the nonzero entries of an all-even vector, leaving the zero colors
/// for the caller. Returns the assignment and the pendant color at each
/// position (position = label).
fn even_core(r: usize, nonzero: &[(Color, usize)]) -> Result<(Assignment, Vec<Color>)> {
    let scheme = CanonicalScheme::new(r)?;
    let mut asg = Assignment::new(scheme);
    let (plan, pendant) = match contiguous_plan(&scheme, nonzero) {
        Some(plan) => {
            let mut pendant = Vec::with_capacity(r);
            for &(c, x) in nonzero {
                pendant.extend(std::iter::repeat_n(c, x));
            }
            (plan, pendant)
        }
        None => scattered_plan(&scheme, nonzero)
            .ok_or_else(|| Error::Internal("no block placement found for an admissible vector".into()))?,
    };
    for (c, edges) in plan {
        for e in edges {
            asg.put(e, c)?;
        }
    }
    Ok((asg, pendant))
}

type Plan = Vec<(Color, Vec<LabelEdge>)>;

/// Blocks on successive labels, the first one containing the hub. Each block
/// takes the part of its class outside the block. `None` when two blocks
/// would claim the same edge.
fn contiguous_plan(scheme: &CanonicalScheme, nonzero: &[(Color, usize)]) -> Option<Plan> {
    let r = scheme.order();
    let mut blocks = nonzero.iter();
    let &(c1, x1) = blocks.next()?;
    let mut plan: Plan = Vec::with_capacity(nonzero.len());
    // hub block u_0..u_{x1-1}: color c1 covers u_{x1}..u_{r-1}, anchored at
    // their centre and ending with [u_{x1}, u_{r-1}]
    let a1 = (x1 + r - 2) / 2;
    plan.push((c1, scheme.layers(a1).into_iter().take((r - x1) / 2).collect()));
    let mut start = x1;
    for &(c, s) in blocks {
        // block u_start..u_{start+s-1}; skip the layers inside the block
        let anchor = start + s / 2 - 1;
        plan.push((c, scheme.layers(anchor).into_iter().skip(s / 2).collect()));
        start += s;
    }
    let mut seen: BTreeSet<LabelEdge> = BTreeSet::new();
    plan.iter()
        .flat_map(|(_, es)| es)
        .all(|e| seen.insert(*e))
        .then_some(plan)
}

/// Partner of label `v` in the class anchored at `a`.
fn partner(scheme: &CanonicalScheme, a: usize, v: usize) -> usize {
    let apex = scheme.apex(a);
    if scheme.has_hub() && v == 0 {
        apex
    } else if scheme.has_hub() && v == apex {
        0
    } else {
        scheme.wrap(2 * a as i64 + 1 - v as i64)
    }
}

/// Fallback placement: every nonzero color gets its own class and a block
/// made of `x / 2` edges of that class, the blocks partitioning the labels.
fn scattered_plan(scheme: &CanonicalScheme, nonzero: &[(Color, usize)]) -> Option<(Plan, Vec<Color>)> {
    struct St<'a> {
        scheme: &'a CanonicalScheme,
        need: Vec<usize>,
        anchor: Vec<Option<usize>>,
        taken: Vec<bool>,
        owner: Vec<Option<usize>>,
    }

    fn dfs(st: &mut St<'_>) -> bool {
        let Some(v) = st.owner.iter().position(|o| o.is_none()) else {
            return true;
        };
        for i in 0..st.need.len() {
            if st.need[i] == 0 {
                continue;
            }
            let anchors: Vec<usize> = match st.anchor[i] {
                Some(a) => vec![a],
                None => (0..st.scheme.class_count())
                    .filter(|&t| !st.taken[t])
                    .map(|t| st.scheme.anchor_low(t))
                    .collect(),
            };
            let fresh = st.anchor[i].is_none();
            for a in anchors {
                let w = partner(st.scheme, a, v);
                if st.owner[w].is_some() {
                    continue;
                }
                let t = st.scheme.class_with_anchor_low(a);
                if fresh {
                    st.anchor[i] = Some(a);
                    st.taken[t] = true;
                }
                st.owner[v] = Some(i);
                st.owner[w] = Some(i);
                st.need[i] -= 1;
                if dfs(st) {
                    return true;
                }
                st.need[i] += 1;
                st.owner[v] = None;
                st.owner[w] = None;
                if fresh {
                    st.anchor[i] = None;
                    st.taken[t] = false;
                }
            }
        }
        false
    }

    let r = scheme.order();
    let mut st = St {
        scheme,
        need: nonzero.iter().map(|&(_, x)| x / 2).collect(),
        anchor: vec![None; nonzero.len()],
        taken: vec![false; scheme.class_count()],
        owner: vec![None; r],
    };
    if !dfs(&mut st) {
        return None;
    }
    let mut plan = Vec::with_capacity(nonzero.len());
    for (i, &(c, _)) in nonzero.iter().enumerate() {
        let a = st.anchor[i].expect("every block is placed");
        let outside = scheme
            .layers(a)
            .into_iter()
            .filter(|&(x, y)| st.owner[x] != Some(i) && st.owner[y] != Some(i))
            .collect();
        plan.push((c, outside));
    }
    let pendant = st.owner.iter().map(|o| nonzero[o.expect("covered")].0).collect();
    Some((plan, pendant))
}

fn nonzero_entries(v: &ColorVector) -> Vec<(Color, usize)> {
    v.entries()
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .map(|(c, &x)| (c, x))
        .collect()
}

/// Sun for an admissible vector whose entries are all even (zeros allowed).
///
/// Labels are `u_0` (hub) and `u_1..u_{r-1}`. The first nonzero color sits on
/// `u_0..u_{x-1}`; its class covers the rest. Every later block takes the part
/// of the class centred on it lying outside the block. Each zero entry takes
/// an unused class whole, and once those run out the leftover edges of the
/// used classes, which form one more perfect matching.
///
/// Successive blocks can collide: with `(2,2,2,2)` the block centred opposite
/// the hub block needs the hub block's class. The blocks are then placed by a
/// search instead, each color owning a distinct class.
pub fn build_sun_even(v: &ColorVector) -> Result<SunColoring> {
    if !v.all_even() || !admissible(v)? {
        return Err(Error::domain(format!("{v} is not an admissible all-even vector")));
    }
    let r = v.r();
    let nonzero = nonzero_entries(v);
    let (mut asg, pendant) = even_core(r, &nonzero)?;
    for (c, &x) in v.entries().iter().enumerate() {
        if x == 0 {
            asg.add_unit(c)?;
        }
    }
    asg.finish(v.clone(), pendant, v.d())
}

/// Sun for an all-even vector whose constituent is regular of any valency `k`
/// with `d' <= k <= r - 1`, `d'` the number of nonzero entries. Starts from the
/// even construction on the nonzero entries and adds whole classes. Extra
/// colors reuse the zero entries' indices first, then `d, d + 1, ...`.
pub fn build_sun_valency(v: &ColorVector, k: usize) -> Result<SunColoring> {
    if !v.all_even() {
        return Err(Error::domain(format!("{v} has an odd entry")));
    }
    let r = v.r();
    let nonzero = nonzero_entries(v);
    let dp = nonzero.len();
    if k < dp || k + 1 > r {
        return Err(Error::domain(format!("valency {k} outside {dp}..={} for {v}", r - 1)));
    }
    let (mut asg, pendant) = even_core(r, &nonzero)?;
    let spare = v
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == 0)
        .map(|(c, _)| c)
        .chain(v.d()..);
    let extra: Vec<Color> = spare.take(k + 1 - dp).collect();
    for &c in &extra {
        asg.add_unit(c)?;
    }
    let palette = extra
        .iter()
        .copied()
        .chain(nonzero.iter().map(|p| p.0))
        .max()
        .unwrap_or(0)
        + 1;
    asg.finish(v.clone(), pendant, palette.max(v.d()))
}

/// Sun for any admissible vector.
pub fn build_sun(v: &ColorVector) -> Result<SunColoring> {
    if v.all_odd() {
        build_sun_odd(v)
    } else {
        build_sun_even(v)
    }
}

/// Calls `visit` on every `k`-regular simple graph on `n` labelled vertices.
pub fn for_each_regular_graph<B>(
    n: usize,
    k: usize,
    visit: &mut impl FnMut(&[(usize, usize)]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    fn go<B>(
        i: usize,
        need: &mut Vec<usize>,
        edges: &mut Vec<(usize, usize)>,
        visit: &mut impl FnMut(&[(usize, usize)]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let n = need.len();
        if i == n {
            return visit(edges);
        }
        if need[i] == 0 {
            return go(i + 1, need, edges, visit);
        }
        let candidates: Vec<usize> = (i + 1..n).filter(|&j| need[j] > 0).collect();
        if candidates.len() < need[i] {
            return ControlFlow::Continue(());
        }
        choose(i, &candidates, 0, need, edges, visit)
    }

    fn choose<B>(
        i: usize,
        candidates: &[usize],
        from: usize,
        need: &mut Vec<usize>,
        edges: &mut Vec<(usize, usize)>,
        visit: &mut impl FnMut(&[(usize, usize)]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if need[i] == 0 {
            return go(i + 1, need, edges, visit);
        }
        for idx in from..candidates.len() {
            if candidates.len() - idx < need[i] {
                break;
            }
            let j = candidates[idx];
            need[i] -= 1;
            need[j] -= 1;
            edges.push((i, j));
            choose(i, candidates, idx + 1, need, edges, visit)?;
            edges.pop();
            need[i] += 1;
            need[j] += 1;
        }
        ControlFlow::Continue(())
    }

    if k >= n.max(1) && n > 0 || (n * k) % 2 == 1 {
        return ControlFlow::Continue(());
    }
    let mut need = vec![k; n];
    go(0, &mut need, &mut Vec::new(), visit)
}

/// Largest `r` accepted by [`verify_totally_inadmissible`].
pub const ENUMERATION_LIMIT: usize = 10;

/// Exhaustive check that no `(d-1)`-regular constituent admits a proper
/// `d`-coloring of the sun extending the pendant colors.
pub fn verify_totally_inadmissible(v: &ColorVector) -> Result<bool> {
    let (r, d) = (v.r(), v.d());
    if r > ENUMERATION_LIMIT {
        return Err(Error::precondition(format!(
            "enumeration limited to r <= {ENUMERATION_LIMIT}, got {r}"
        )));
    }
    let pendant = v.block_layout();
    let mut failure = None;
    let flow = for_each_regular_graph(r, d - 1, &mut |edges| {
        let g = match Multigraph::from_edges(r, edges) {
            Ok(g) => g,
            Err(e) => return ControlFlow::Break(Err(e)),
        };
        let mut lists = ColorLists::new();
        for (e, a, b) in g.edges() {
            let list = (0..d).filter(|&c| c != pendant[a.0] && c != pendant[b.0]).collect();
            lists.insert(e, list);
        }
        match coloring::list_edge_coloring(&g, &lists) {
            Ok(Some(_)) => ControlFlow::Break(Ok(())),
            Ok(None) => ControlFlow::Continue(()),
            Err(e) => ControlFlow::Break(Err(e)),
        }
    });
    if let ControlFlow::Break(res) = flow {
        res?;
        failure = Some(());
    }
    Ok(failure.is_none())
}

/// Every color of the coloring meets each vertex a number of times with the
/// parity of that vertex's valency.
pub fn is_parity_balanced(x: &Multigraph, coloring: &EdgeColoring) -> Result<bool> {
    coloring.require_total(x)?;
    let used: Vec<Color> = x
        .edge_ids()
        .filter_map(|e| coloring.get(e))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for v in x.vertices() {
        let parity = x.valency(v)? % 2;
        let at = coloring.at_vertex(x, v)?;
        for &c in &used {
            if at.iter().filter(|&&a| a == c).count() % 2 != parity {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Places a sun onto a cluster whose pendant at position `p` has vector
/// index `classes[p]`. Sun positions are matched to cluster positions of the
/// same color in increasing order. Returns the constituent on cluster
/// positions and its edge colors.
pub(crate) fn embed(sun: &SunColoring, classes: &[usize]) -> Result<(Constituent, Vec<Color>)> {
    let mut slots: BTreeMap<usize, std::collections::VecDeque<usize>> = BTreeMap::new();
    for (p, &c) in classes.iter().enumerate() {
        slots.entry(c).or_default().push_back(p);
    }
    let mut to_cluster = Vec::with_capacity(classes.len());
    for c in &sun.pendant_colors {
        let p = slots
            .get_mut(c)
            .and_then(|q| q.pop_front())
            .ok_or_else(|| Error::Internal("sun pendants do not match the cluster".into()))?;
        to_cluster.push(p);
    }
    if to_cluster.len() != classes.len() {
        return Err(Error::Internal("sun and cluster differ in size".into()));
    }
    let edges = sun
        .constituent
        .edges()
        .iter()
        .map(|&(a, b)| (to_cluster[a], to_cluster[b]));
    Ok((Constituent::new(classes.len(), edges)?, sun.constituent_colors.clone()))
}

/// A truncation together with a proper coloring of its flattened graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredTruncation {
    pub truncation: Truncation,
    pub coloring: EdgeColoring,
}

impl ColoredTruncation {
    /// Assembles the truncation from per-vertex constituents with their
    /// colors; matching edges take `matching_color(source edge)`.
    pub(crate) fn assemble(
        x: &Multigraph,
        parts: Vec<(Constituent, Vec<Color>)>,
        palette: usize,
        matching_color: impl Fn(EdgeId) -> Result<Color>,
    ) -> Result<Self> {
        let exc = excise(x)?;
        let mut chosen = BTreeMap::new();
        let mut colors = Vec::with_capacity(parts.len());
        for (v, (c, col)) in x.vertices().zip(parts) {
            chosen.insert(v, c);
            colors.push(col);
        }
        let truncation = Truncation::from_constituents(exc, chosen)?;
        let mut coloring = EdgeColoring::new(palette, truncation.graph().edge_bound());
        for e in x.edge_ids() {
            coloring.set(truncation.matching_edge(e)?, matching_color(e)?)?;
        }
        for v in x.vertices() {
            for (&flat, &c) in truncation.constituent_edges(v)?.iter().zip(&colors[v.0]) {
                coloring.set(flat, c)?;
            }
        }
        if let Some((e, f)) = coloring::find_clash(truncation.graph(), &coloring)? {
            return Err(Error::Internal(format!("assembled coloring clashes at {e} and {f}")));
        }
        Ok(ColoredTruncation { truncation, coloring })
    }

    pub fn palette(&self) -> usize {
        self.coloring.palette()
    }
}

/// Class I semiregular truncation realizing a parity-balanced coloring: every
/// sun is class I, every constituent regular, and matching edges keep the
/// input colors.
pub fn semiregular_truncation(x: &Multigraph, coloring: &EdgeColoring) -> Result<ColoredTruncation> {
    x.require_no_isolated()?;
    if !is_parity_balanced(x, coloring)? {
        return Err(Error::precondition("coloring is not parity-balanced"));
    }
    let used: Vec<Color> = x
        .edge_ids()
        .filter_map(|e| coloring.get(e))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = used.len();
    let mut parts = Vec::with_capacity(x.order());
    for v in x.vertices() {
        let at = coloring.at_vertex(x, v)?;
        let r = at.len();
        let counts: Vec<usize> = used.iter().map(|c| at.iter().filter(|&a| a == c).count()).collect();
        // vector entries, each tagged with the real color it stands for
        let kept: Vec<(Color, usize)> = if r % 2 == 1 || r >= k {
            used.iter().copied().zip(counts).collect()
        } else {
            used.iter().copied().zip(counts).filter(|&(_, n)| n > 0).collect()
        };
        let vector = ColorVector::new(kept.iter().map(|p| p.1).collect())?;
        let sun = build_sun(&vector)?;
        let index_of: BTreeMap<Color, usize> = kept.iter().enumerate().map(|(i, p)| (p.0, i)).collect();
        let classes: Vec<usize> = at.iter().map(|c| index_of[c]).collect();
        let (constituent, local) = embed(&sun, &classes)?;
        let real = local.into_iter().map(|i| kept[i].0).collect();
        parts.push((constituent, real));
    }
    let palette = coloring.palette().max(used.last().map_or(0, |c| c + 1));
    ColoredTruncation::assemble(x, parts, palette, |e| coloring.require(e))
}

/// Which condition of the regular-truncation characterization failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegularClause {
    /// Odd valency of regularity.
    #[serde(rename = "i")]
    OddValency,
    /// Even valency of regularity.
    #[serde(rename = "ii")]
    EvenValency,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularOutcome {
    Built {
        truncation: ColoredTruncation,
        /// Parity-balanced coloring of the source that the suns realize.
        source_coloring: EdgeColoring,
    },
    Infeasible {
        clause: RegularClause,
        reason: String,
    },
}

/// Class I truncation regular of valency `d`, or the clause that rules it out.
pub fn regular_truncation(x: &Multigraph, d: usize, budget: u64) -> Result<RegularOutcome> {
    if d < 2 {
        return Err(Error::precondition(format!(
            "valency of regularity must be >= 2, got {d}"
        )));
    }
    x.require_no_isolated()?;
    let infeasible = |clause, reason: String| Ok(RegularOutcome::Infeasible { clause, reason });
    let source_coloring = if d % 2 == 0 {
        for v in x.vertices() {
            let val = x.valency(v)?;
            if val % 2 == 1 || val < d {
                return infeasible(
                    RegularClause::EvenValency,
                    format!("{v} has valency {val}; every valency must be even and at least {d}"),
                );
            }
        }
        let mut c = EdgeColoring::new(d, x.edge_bound());
        for e in x.edge_ids() {
            c.set(e, 0)?;
        }
        c
    } else {
        for v in x.vertices() {
            let val = x.valency(v)?;
            if val % 2 == 0 && val < d + 1 {
                return infeasible(
                    RegularClause::OddValency,
                    format!("{v} has even valency {val} < {}", d + 1),
                );
            }
            if val % 2 == 1 && val < d {
                return infeasible(
                    RegularClause::OddValency,
                    format!("{v} has odd valency {val} and cannot see {d} colors"),
                );
            }
        }
        match find_parity_coloring(x, d, budget)? {
            Some(c) => c,
            None => {
                return infeasible(
                    RegularClause::OddValency,
                    format!(
                        "no parity-balanced coloring with {d} colors gives every odd-valency vertex all {d} colors"
                    ),
                )
            }
        }
    };
    let mut parts = Vec::with_capacity(x.order());
    for v in x.vertices() {
        let at = source_coloring.at_vertex(x, v)?;
        let counts: Vec<usize> = (0..d).map(|c| at.iter().filter(|&&a| a == c).count()).collect();
        let sun = build_sun(&ColorVector::new(counts)?)?;
        parts.push(embed(&sun, &at)?);
    }
    let truncation = ColoredTruncation::assemble(x, parts, d, |e| source_coloring.require(e))?;
    Ok(RegularOutcome::Built {
        truncation,
        source_coloring,
    })
}

/// Coloring with `palette` colors in which every color meets each vertex a
/// number of times with the parity of its valency. `Ok(None)` after an
/// exhaustive search.
pub fn find_parity_coloring(x: &Multigraph, palette: usize, budget: u64) -> Result<Option<EdgeColoring>> {
    struct Search<'a> {
        x: &'a Multigraph,
        order: Vec<(EdgeId, usize, usize)>,
        palette: usize,
        target: Vec<usize>,
        counts: Vec<Vec<usize>>,
        remaining: Vec<usize>,
        colors: Vec<usize>,
        highest: Option<usize>,
        nodes: u64,
        budget: u64,
    }

    impl Search<'_> {
        fn feasible(&self, v: usize) -> bool {
            let bad = self.counts[v].iter().filter(|&&n| n % 2 != self.target[v]).count();
            bad <= self.remaining[v] && (self.remaining[v] - bad) % 2 == 0
        }

        fn dfs(&mut self, i: usize) -> std::result::Result<bool, ()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(());
            }
            if i == self.order.len() {
                return Ok(true);
            }
            let (_, u, v) = self.order[i];
            let limit = self.highest.map_or(1, |h| h + 2).min(self.palette);
            for c in 0..limit {
                let prev = self.highest;
                self.counts[u][c] += 1;
                self.counts[v][c] += 1;
                self.remaining[u] -= 1;
                self.remaining[v] -= 1;
                self.highest = Some(prev.map_or(c, |h| h.max(c)));
                self.colors.push(c);
                if self.feasible(u) && self.feasible(v) && self.dfs(i + 1)? {
                    return Ok(true);
                }
                self.colors.pop();
                self.highest = prev;
                self.counts[u][c] -= 1;
                self.counts[v][c] -= 1;
                self.remaining[u] += 1;
                self.remaining[v] += 1;
            }
            Ok(false)
        }
    }

    if palette == 0 {
        return Err(Error::domain("palette must be nonempty"));
    }
    // breadth-first edge order keeps each vertex's edges close together
    let mut order = Vec::with_capacity(x.size());
    let mut taken = vec![false; x.edge_bound()];
    let mut seen = vec![false; x.order()];
    for s in x.vertices() {
        if seen[s.0] {
            continue;
        }
        seen[s.0] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in x.incident(u)? {
                if !taken[e.0] {
                    taken[e.0] = true;
                    let (a, b) = x.endpoints(e)?;
                    order.push((e, a.0, b.0));
                }
                let w = x.other_end(e, u)?;
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let valencies = x.valencies();
    let mut search = Search {
        x,
        order,
        palette,
        target: valencies.iter().map(|v| v % 2).collect(),
        counts: vec![vec![0; palette]; x.order()],
        remaining: valencies,
        colors: Vec::new(),
        highest: None,
        nodes: 0,
        budget,
    };
    if !x.vertices().all(|v| search.feasible(v.0)) {
        return Ok(None);
    }
    match search.dfs(0) {
        Ok(true) => {
            let mut out = EdgeColoring::new(palette, search.x.edge_bound());
            for (&(e, _, _), &c) in search.order.iter().zip(&search.colors) {
                out.set(e, c)?;
            }
            Ok(Some(out))
        }
        Ok(false) => Ok(None),
        Err(()) => Err(Error::Undecided { budget }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn vec_of(xs: &[usize]) -> ColorVector {
        ColorVector::new(xs.to_vec()).unwrap()
    }

    fn check_sun(s: &SunColoring) {
        let d = s.vector.d();
        assert!(s.is_proper(), "{} not proper", s.vector);
        assert_eq!(s.constituent.regular_valency(), Some(d - 1), "{}", s.vector);
        let mut counts = vec![0; d];
        for &c in &s.pendant_colors {
            counts[c] += 1;
        }
        assert_eq!(counts, s.vector.entries());
        // each color class of the sun: pendants + 2 * constituent edges = r
        let inner = s.color_counts();
        for (c, &x) in s.vector.entries().iter().enumerate() {
            assert_eq!(x + 2 * inner.get(&c).copied().unwrap_or(0), s.vector.r());
        }
    }

    #[test]
    fn admissibility_examples() {
        assert!(admissible(&vec_of(&[1, 1, 1])).unwrap());
        assert!(!admissible(&vec_of(&[2, 1, 1])).unwrap());
        assert!(!admissible(&vec_of(&[3, 3, 3, 3])).unwrap());
        assert!(admissible(&vec_of(&[4, 0, 0])).unwrap());
        assert!(!admissible(&vec_of(&[1, 1])).unwrap());
        assert!(admissible(&vec_of(&[1, 0, 0])).is_err());
        assert!("2,1,1".parse::<ColorVector>().is_ok());
        assert!("2,x".parse::<ColorVector>().is_err());
    }

    #[test]
    fn odd_examples() {
        let s = build_sun_odd(&vec_of(&[1, 1, 1])).unwrap();
        check_sun(&s);
        assert_eq!(s.constituent.edges().len(), 3);
        let s = build_sun_odd(&vec_of(&[1, 1, 3])).unwrap();
        check_sun(&s);
        assert!(s.constituent.is_hamiltonian_cycle());
        assert!(build_sun_odd(&vec_of(&[5, 0, 0])).is_err());
        assert!(build_sun_odd(&vec_of(&[2, 1, 1])).is_err());
    }

    #[test]
    fn even_examples() {
        let s = build_sun_even(&vec_of(&[4, 0, 0])).unwrap();
        check_sun(&s);
        assert!(s.pendant_colors.iter().all(|&c| c == 0));
        check_sun(&build_sun_even(&vec_of(&[2, 2, 2])).unwrap());
        let s = build_sun_even(&vec_of(&[2, 2])).unwrap();
        check_sun(&s);
        assert_eq!(s.constituent.regular_valency(), Some(1));
        // more zero entries than untouched classes: needs the leftover matching
        check_sun(&build_sun_even(&vec_of(&[2, 2, 2, 0, 0, 0])).unwrap());
        check_sun(&build_sun_even(&vec_of(&[2, 2, 2, 2, 0, 0, 0, 0])).unwrap());
        assert!(build_sun_even(&vec_of(&[1, 1, 1])).is_err());
    }

    #[test]
    fn valency_range_examples() {
        let s = build_sun_valency(&vec_of(&[2, 2, 0]), 2).unwrap();
        assert!(s.is_proper());
        assert_eq!(s.constituent.regular_valency(), Some(2));
        assert_eq!(s.pendant_colors.iter().collect::<BTreeSet<_>>().len(), 2);
        let s = build_sun_valency(&vec_of(&[2, 2, 0]), 3).unwrap();
        assert!(s.is_proper());
        assert_eq!(s.constituent.edges().len(), 6);
        let s = build_sun_valency(&vec_of(&[4]), 1).unwrap();
        assert!(s.is_proper());
        assert_eq!(s.constituent.regular_valency(), Some(1));
        assert!(build_sun_valency(&vec_of(&[2, 2, 0]), 1).is_err());
        assert!(build_sun_valency(&vec_of(&[2, 2, 0]), 4).is_err());
    }

    #[test]
    fn valency_range_sweep() {
        for r in (2..=12).step_by(2) {
            for v in even_vectors(r, 4) {
                let dp = v.entries().iter().filter(|&&x| x > 0).count();
                for k in dp..r {
                    let s = build_sun_valency(&v, k).unwrap();
                    assert!(s.is_proper(), "{v} k={k}");
                    assert_eq!(s.constituent.regular_valency(), Some(k), "{v} k={k}");
                    assert_eq!(s.palette, (k + 1).max(v.d()).max(s.palette));
                }
            }
        }
    }

    fn even_vectors(r: usize, d: usize) -> Vec<ColorVector> {
        let mut out = Vec::new();
        fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<ColorVector>) {
            if slots == 0 {
                if left == 0 {
                    out.push(ColorVector::new(cur.clone()).unwrap());
                }
                return;
            }
            for x in (0..=left).step_by(2) {
                cur.push(x);
                rec(left - x, slots - 1, cur, out);
                cur.pop();
            }
        }
        rec(r, d, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn inadmissibility_examples() {
        assert!(verify_totally_inadmissible(&vec_of(&[2, 1, 1])).unwrap());
        assert!(!verify_totally_inadmissible(&vec_of(&[1, 1, 1])).unwrap());
        assert!(verify_totally_inadmissible(&vec_of(&[3, 3, 2])).unwrap());
    }

    #[test]
    fn regular_graph_enumeration_counts() {
        // labelled k-regular graphs: 2-regular on 5 vertices = 12, 3-regular
        // on 6 = 70, 2-regular on 6 = 70, 3-regular on 8 = 19355
        let count = |n, k| {
            let mut c = 0u64;
            let _ = for_each_regular_graph::<()>(n, k, &mut |_| {
                c += 1;
                ControlFlow::Continue(())
            });
            c
        };
        assert_eq!(count(5, 2), 12);
        assert_eq!(count(6, 3), 70);
        assert_eq!(count(6, 2), 70);
        assert_eq!(count(8, 3), 19355);
        assert_eq!(count(4, 0), 1);
        assert_eq!(count(5, 3), 0);
    }

    #[test]
    fn parity_examples() {
        let k5 = catalog::complete(5);
        let one = EdgeColoring::from_colors(1, vec![Some(0); 10]).unwrap();
        assert!(is_parity_balanced(&k5, &one).unwrap());
        let k4 = catalog::complete(4);
        let proper = coloring::chromatic_index(&k4, Default::default()).unwrap();
        let coloring::ChromaticIndex::Decided { certificate, .. } = proper else {
            panic!()
        };
        assert!(is_parity_balanced(&k4, &certificate).unwrap());
        let c4 = catalog::cycle(4);
        let alt = EdgeColoring::from_colors(2, vec![Some(0), Some(1), Some(0), Some(1)]).unwrap();
        assert!(!is_parity_balanced(&c4, &alt).unwrap());
        let three = EdgeColoring::from_colors(3, vec![Some(0), Some(1), Some(0), Some(2)]).unwrap();
        assert!(!is_parity_balanced(&c4, &three).unwrap());
    }

    #[test]
    fn semiregular_examples() {
        let k5 = catalog::complete(5);
        let one = EdgeColoring::from_colors(1, vec![Some(0); 10]).unwrap();
        let t = semiregular_truncation(&k5, &one).unwrap();
        for c in t.truncation.constituents() {
            assert!(c.regular_valency().is_some());
        }
        assert!(coloring::is_proper(t.truncation.graph(), &t.coloring).unwrap());

        let k4 = catalog::complete(4);
        let coloring::ChromaticIndex::Decided { certificate, .. } =
            coloring::chromatic_index(&k4, Default::default()).unwrap()
        else {
            panic!()
        };
        let t = semiregular_truncation(&k4, &certificate).unwrap();
        assert_eq!(t.truncation.graph().regular_valency(), Some(3));
        for c in t.truncation.constituents() {
            assert_eq!((c.order(), c.edges().len()), (3, 3));
        }
        let (_, back) = t.truncation.contract(&t.coloring).unwrap();
        for e in k4.edge_ids() {
            assert_eq!(back.get(e), certificate.get(e));
        }

        let matching = Multigraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let c = EdgeColoring::from_colors(2, vec![Some(0), Some(1)]).unwrap();
        assert!(semiregular_truncation(&matching, &c).is_err());
        let c = EdgeColoring::from_colors(1, vec![Some(0), Some(0)]).unwrap();
        let t = semiregular_truncation(&matching, &c).unwrap();
        assert_eq!(t.truncation.graph().size(), 2);

        // a digon whose ends see fewer edges than there are colors in use
        let theta = Multigraph::from_edges(4, &[(0, 1), (0, 1), (0, 1), (2, 3), (2, 3)]).unwrap();
        let c = EdgeColoring::from_colors(3, vec![Some(0), Some(1), Some(2), Some(0), Some(0)]).unwrap();
        let t = semiregular_truncation(&theta, &c).unwrap();
        assert!(coloring::is_proper(t.truncation.graph(), &t.coloring).unwrap());
        assert_eq!(t.truncation.constituent(VertexId(2)).unwrap().edges().len(), 0);
        assert_eq!(t.truncation.constituent(VertexId(0)).unwrap().edges().len(), 3);

        let c4 = catalog::cycle(4);
        let three = EdgeColoring::from_colors(3, vec![Some(0), Some(1), Some(0), Some(2)]).unwrap();
        assert!(matches!(
            semiregular_truncation(&c4, &three),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn regular_examples() {
        let budget = 1_000_000;
        let RegularOutcome::Built { truncation, .. } = regular_truncation(&catalog::complete(4), 3, budget).unwrap()
        else {
            panic!("K4 has a 3-regular class I truncation")
        };
        assert_eq!(truncation.truncation.graph().regular_valency(), Some(3));
        assert_eq!(truncation.palette(), 3);

        let odd = catalog::complete(4);
        let RegularOutcome::Infeasible { clause, .. } = regular_truncation(&odd, 4, budget).unwrap() else {
            panic!()
        };
        assert_eq!(clause, RegularClause::EvenValency);

        let RegularOutcome::Built { truncation, .. } = regular_truncation(&catalog::complete(5), 2, budget).unwrap()
        else {
            panic!()
        };
        assert_eq!(truncation.truncation.graph().regular_valency(), Some(2));
        assert!(coloring::is_proper(truncation.truncation.graph(), &truncation.coloring).unwrap());

        // Petersen has no proper 3-coloring, which is what d = 3 demands at
        // every (odd, valency-3) vertex
        let RegularOutcome::Infeasible { clause, .. } = regular_truncation(&catalog::petersen(), 3, budget).unwrap()
        else {
            panic!()
        };
        assert_eq!(clause, RegularClause::OddValency);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn semiregular_roundtrip(seed in any::<u64>()) {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let x = catalog::random_multigraph(&mut rng, 6, 10);
                // all-one-color is parity-balanced exactly when every valency is even
                let mut doubled = Multigraph::new(x.order());
                for (_, u, v) in x.edges() {
                    doubled.add_edge(u, v).unwrap();
                    doubled.add_edge(u, v).unwrap();
                }
                let mut c = EdgeColoring::new(2, doubled.edge_bound());
                for e in doubled.edge_ids() {
                    c.set(e, (e.0 / 2 + seed as usize) % 2).unwrap();
                }
                prop_assume!(is_parity_balanced(&doubled, &c).unwrap());
                let t = semiregular_truncation(&doubled, &c).unwrap();
                prop_assert!(coloring::is_proper(t.truncation.graph(), &t.coloring).unwrap());
                let (_, back) = t.truncation.contract(&t.coloring).unwrap();
                for e in doubled.edge_ids() {
                    prop_assert_eq!(back.get(e), c.get(e));
                }
                prop_assert!(is_parity_balanced(&doubled, &back).unwrap());
            }
        }
    }
}
