//! Backtracking engine shared by the chromatic-index oracle, list coloring and
//! the edge-feasibility search.
//!
//! Every edge carries a bitmask domain. A vertex marked `distinct` forbids two
//! incident edges from sharing a color; unmarked vertices impose nothing.
//! The next edge is the one with the fewest remaining colors, ties broken by a
//! static rank (decreasing endpoint-valency sum, then index).

pub(crate) const MAX_COLORS: usize = 64;

pub(crate) struct Problem {
    pub edges: Vec<[usize; 2]>,
    pub domains: Vec<u64>,
    pub distinct: Vec<bool>,
    /// Colors are interchangeable: every domain is the full palette and the
    /// constraints do not name colors. Enables lowest-unused-color symmetry
    /// breaking.
    pub interchangeable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Outcome {
    Found { colors: Vec<usize>, nodes: u64 },
    Exhausted { nodes: u64 },
    OutOfBudget { nodes: u64 },
}

enum Step {
    Found,
    Fail,
    Budget,
}

struct State<'p> {
    p: &'p Problem,
    rank: Vec<usize>,
    color: Vec<Option<usize>>,
    used: Vec<u64>,
    highest: Option<usize>,
    nodes: u64,
    budget: u64,
}

pub(crate) fn solve(p: &Problem, budget: u64) -> Outcome {
    let n = p.distinct.len();
    let mut valency = vec![0usize; n];
    for &[u, v] in &p.edges {
        valency[u] += 1;
        valency[v] += 1;
    }
    let mut order: Vec<usize> = (0..p.edges.len()).collect();
    order.sort_by_key(|&e| {
        let [u, v] = p.edges[e];
        (std::cmp::Reverse(valency[u] + valency[v]), e)
    });
    let mut rank = vec![0; p.edges.len()];
    for (r, &e) in order.iter().enumerate() {
        rank[e] = r;
    }
    let mut st = State {
        p,
        rank,
        color: vec![None; p.edges.len()],
        used: vec![0; n],
        highest: None,
        nodes: 0,
        budget,
    };
    match st.dfs() {
        Step::Found => Outcome::Found {
            colors: st.color.iter().map(|c| c.expect("complete assignment")).collect(),
            nodes: st.nodes,
        },
        Step::Fail => Outcome::Exhausted { nodes: st.nodes },
        Step::Budget => Outcome::OutOfBudget { nodes: st.nodes },
    }
}

impl State<'_> {
    fn available(&self, e: usize) -> u64 {
        let [u, v] = self.p.edges[e];
        let mut mask = self.p.domains[e];
        if self.p.distinct[u] {
            mask &= !self.used[u];
        }
        if self.p.distinct[v] {
            mask &= !self.used[v];
        }
        mask
    }

    fn select(&self) -> Option<(usize, u64)> {
        let mut best: Option<(u32, usize, usize, u64)> = None;
        for e in 0..self.p.edges.len() {
            if self.color[e].is_some() {
                continue;
            }
            let avail = self.available(e);
            let key = (avail.count_ones(), self.rank[e]);
            if best.is_none_or(|(c, r, _, _)| key < (c, r)) {
                best = Some((key.0, key.1, e, avail));
                if key.0 == 0 {
                    break;
                }
            }
        }
        best.map(|(_, _, e, m)| (e, m))
    }

    fn dfs(&mut self) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::Budget;
        }
        let Some((e, mut avail)) = self.select() else {
            return Step::Found;
        };
        if self.p.interchangeable {
            let limit = self.highest.map_or(1, |h| h + 2).min(MAX_COLORS);
            let cap = if limit == MAX_COLORS {
                u64::MAX
            } else {
                (1u64 << limit) - 1
            };
            avail &= cap;
        }
        let [u, v] = self.p.edges[e];
        while avail != 0 {
            let c = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            let bit = 1u64 << c;
            let prev_highest = self.highest;
            self.color[e] = Some(c);
            self.used[u] |= bit;
            self.used[v] |= bit;
            self.highest = Some(prev_highest.map_or(c, |h| h.max(c)));
            match self.dfs() {
                Step::Fail => {}
                other => return other,
            }
            self.color[e] = None;
            self.used[u] &= !bit;
            self.used[v] &= !bit;
            self.highest = prev_highest;
        }
        Step::Fail
    }
}

pub(crate) fn full_mask(palette: usize) -> u64 {
    if palette >= MAX_COLORS {
        u64::MAX
    } else {
        (1u64 << palette) - 1
    }
}
