//! The rotational 1-factorization of complete graphs.
//!
//! Vertices carry labels `u_0..u_{n-1}` for even `n`, where `u_0` is the hub
//! fixed by the rotation and `u_1..u_{n-1}` form the rotated cycle. For odd
//! `n` the scheme is the even one on `n + 1` vertices with the hub deleted, so
//! labels run `u_1..u_n`. Either way the cycle part has odd length `m`, and
//! cycle arithmetic is 1-based modulo `m`.
//!
//! Class `t` consists of the cycle pairs `{i, j}` with `i + j ≡ 2 + 2t
//! (mod m)`, plus, when there is a hub, the edge from the hub to the single
//! cycle vertex left over. Its anchor is the unique length-1 edge of the class.

use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, VertexId};
use crate::{catalog, coloring};

/// An edge in scheme labels, smaller label first.
pub type LabelEdge = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalScheme {
    n: usize,
}

impl CanonicalScheme {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("canonical scheme needs n >= 2, got {n}")));
        }
        Ok(CanonicalScheme { n })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn has_hub(&self) -> bool {
        self.n % 2 == 0
    }

    /// Length of the rotated cycle; always odd.
    pub fn cycle_len(&self) -> usize {
        if self.has_hub() {
            self.n - 1
        } else {
            self.n
        }
    }

    /// `n - 1` classes for even `n`, `n` for odd `n`.
    pub fn class_count(&self) -> usize {
        self.cycle_len()
    }

    /// Smallest valid label.
    pub fn first_label(&self) -> usize {
        if self.has_hub() {
            0
        } else {
            1
        }
    }

    /// Vertex index `0..n` of a label.
    pub fn vertex_of(&self, label: usize) -> usize {
        label - self.first_label()
    }

    pub fn label_of(&self, vertex: usize) -> usize {
        vertex + self.first_label()
    }

    /// Reduces any integer onto the cycle labels `1..=m`.
    pub fn wrap(&self, x: i64) -> usize {
        let m = self.cycle_len() as i64;
        ((x - 1).rem_euclid(m) + 1) as usize
    }

    /// Lower end `a` of the anchor `[u_a, u_{a+1}]` of class `t`.
    pub fn anchor_low(&self, t: usize) -> usize {
        let base = if self.has_hub() { self.n / 2 } else { self.n.div_ceil(2) };
        self.wrap((base + t) as i64)
    }

    pub fn anchor(&self, t: usize) -> LabelEdge {
        let a = self.anchor_low(t);
        ordered(a, self.wrap(a as i64 + 1))
    }

    /// Class whose anchor has lower end `a`.
    pub fn class_with_anchor_low(&self, a: usize) -> usize {
        let m = self.cycle_len() as i64;
        let base = self.anchor_low(0) as i64;
        (a as i64 - base).rem_euclid(m) as usize
    }

    /// Edges of the class anchored at `[u_a, u_{a+1}]`, listed from the anchor
    /// outwards: `[u_{a-k}, u_{a+1+k}]` for `k = 0, 1, ...`, then the hub edge
    /// if there is one.
    pub fn layers(&self, a: usize) -> Vec<LabelEdge> {
        let m = self.cycle_len() as i64;
        let a = a as i64;
        let mut out = Vec::with_capacity(self.n / 2);
        for k in 0..(m - 1) / 2 {
            out.push(ordered(self.wrap(a - k), self.wrap(a + 1 + k)));
        }
        if self.has_hub() {
            out.push((0, self.wrap(a + (m + 1) / 2)));
        }
        out
    }

    /// Cycle vertex not covered by the cycle pairs of the class anchored at `a`;
    /// it meets the hub, or misses the class entirely when `n` is odd.
    pub fn apex(&self, a: usize) -> usize {
        let m = self.cycle_len() as i64;
        self.wrap(a as i64 + (m + 1) / 2)
    }

    pub fn class(&self, t: usize) -> Vec<LabelEdge> {
        self.layers(self.anchor_low(t))
    }

    /// The class containing a length-1 cycle edge `[u_i, u_{i+1}]`.
    pub fn class_by_anchor(&self, x: usize, y: usize) -> Result<Vec<LabelEdge>> {
        let m = self.cycle_len();
        let on_cycle = |l: usize| (1..=m).contains(&l);
        if !on_cycle(x) || !on_cycle(y) || m < 2 {
            return Err(Error::domain(format!("[u{x}, u{y}] is not an anchor")));
        }
        let low = if self.wrap(x as i64 + 1) == y {
            x
        } else if self.wrap(y as i64 + 1) == x {
            y
        } else {
            return Err(Error::domain(format!("[u{x}, u{y}] does not have length 1")));
        };
        Ok(self.layers(low))
    }

    /// Class index of an arbitrary edge of `K_n` given by labels.
    pub fn class_of(&self, x: usize, y: usize) -> usize {
        let (x, y) = ordered(x, y);
        let m = self.cycle_len() as i64;
        let sum = if self.has_hub() && x == 0 {
            2 * y as i64
        } else {
            (x + y) as i64
        };
        // 2a + 1 ≡ sum  =>  a ≡ (sum - 1) * 2^{-1}
        let inv2 = (m + 1) / 2;
        let a = self.wrap(((sum - 1).rem_euclid(m) * inv2) % m);
        self.class_with_anchor_low(a)
    }

    /// `K_n` on vertex indices `0..n` (edge ids in lexicographic pair order)
    /// together with the coloring giving each edge its class index.
    pub fn coloring(&self) -> (Multigraph, EdgeColoring) {
        let g = catalog::complete(self.n);
        let mut c = EdgeColoring::new(self.class_count(), g.edge_bound());
        for (e, u, v) in g.edges() {
            let t = self.class_of(self.label_of(u.0), self.label_of(v.0));
            c.set(e, t).expect("class index within palette");
        }
        (g, c)
    }
}

fn ordered(a: usize, b: usize) -> LabelEdge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The canonical coloring of `K_n`.
pub fn canonical_coloring(n: usize) -> Result<(Multigraph, EdgeColoring)> {
    Ok(CanonicalScheme::new(n)?.coloring())
}

/// The unique color absent at `v` in a proper `n`-coloring of `K_n`, `n` odd.
pub fn missing_color(g: &Multigraph, coloring: &EdgeColoring, v: VertexId) -> Result<Color> {
    let n = g.order();
    if n % 2 == 0 {
        return Err(Error::domain(format!("missing colors need odd order, got {n}")));
    }
    if !g.is_simple() || g.size() != n * (n - 1) / 2 {
        return Err(Error::domain("graph is not a complete graph"));
    }
    if coloring.palette() != n {
        return Err(Error::domain(format!(
            "expected {n} colors, palette has {}",
            coloring.palette()
        )));
    }
    if let Some((e, f)) = coloring::find_clash(g, coloring)? {
        return Err(Error::domain(format!("coloring is not proper: {e} and {f} clash")));
    }
    let present = coloring.at_vertex(g, v)?;
    let mut missing = (0..n).filter(|c| !present.contains(c));
    let c = missing.next().expect("n - 1 distinct colors among n");
    debug_assert!(missing.next().is_none());
    Ok(c)
}
