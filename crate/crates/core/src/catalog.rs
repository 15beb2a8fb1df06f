//! Named instances and small generators.

use rand::Rng;

use crate::multigraph::Multigraph;

fn build(order: usize, edges: &[(usize, usize)]) -> Multigraph {
    Multigraph::from_edges(order, edges).expect("catalog graphs are loopless")
}

pub fn complete(n: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    build(n, &edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j));
        }
    }
    build(a + b, &edges)
}

pub fn cycle(n: usize) -> Multigraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(n, &edges)
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Multigraph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    build(n, &edges)
}

/// Star with `leaves` leaves; vertex 0 is the center.
pub fn star(leaves: usize) -> Multigraph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    build(leaves + 1, &edges)
}

/// Two parallel edges on two vertices.
pub fn digon() -> Multigraph {
    build(2, &[(0, 1), (0, 1)])
}

pub fn petersen() -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    build(10, &edges)
}

/// Two disjoint copies of K5 joined by the single edge `[0, 5]`.
pub fn two_k5_bridge() -> Multigraph {
    let mut edges = Vec::new();
    for base in [0, 5] {
        for i in 0..5 {
            for j in i + 1..5 {
                edges.push((base + i, base + j));
            }
        }
    }
    edges.push((0, 5));
    build(10, &edges)
}

/// The `dim`-dimensional hypercube.
pub fn hypercube(dim: u32) -> Multigraph {
    let n = 1usize << dim;
    let mut edges = Vec::new();
    for i in 0..n {
        for b in 0..dim {
            let j = i ^ (1 << b);
            if i < j {
                edges.push((i, j));
            }
        }
    }
    build(n, &edges)
}

/// Triangular prism: two triangles joined by a perfect matching.
pub fn prism(n: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((n + i, n + (i + 1) % n));
        edges.push((i, n + i));
    }
    build(2 * n, &edges)
}

/// Circulant graph on `n` vertices with the given jumps.
pub fn circulant(n: usize, jumps: &[usize]) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for &j in jumps {
            edges.push((i, (i + j) % n));
        }
    }
    build(n, &edges)
}

/// Random loopless multigraph with at most `max_edges` edges and no isolated
/// vertices. Vertices untouched by the sampled edges are dropped.
pub fn random_multigraph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Multigraph {
    loop {
        let n = rng.gen_range(2..=max_vertices.max(2));
        let m = rng.gen_range(1..=max_edges.max(1));
        let mut pairs = Vec::with_capacity(m);
        for _ in 0..m {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            pairs.push((u, v));
        }
        let mut relabel = vec![usize::MAX; n];
        let mut next = 0;
        for &(u, v) in &pairs {
            for w in [u, v] {
                if relabel[w] == usize::MAX {
                    relabel[w] = next;
                    next += 1;
                }
            }
        }
        let edges: Vec<_> = pairs.iter().map(|&(u, v)| (relabel[u], relabel[v])).collect();
        let g = build(next, &edges);
        if g.size() > 0 {
            return g;
        }
    }
}

/// Named catalog entries used by the command line.
pub fn by_name(name: &str) -> Option<Multigraph> {
    Some(match name {
        "petersen" => petersen(),
        "two-k5-bridge" => two_k5_bridge(),
        "k4" => complete(4),
        "k5" => complete(5),
        "k6" => complete(6),
        "k33" => complete_bipartite(3, 3),
        "q3" => hypercube(3),
        "prism" => prism(3),
        _ => return None,
    })
}

pub const NAMES: &[&str] = &["petersen", "two-k5-bridge", "k4", "k5", "k6", "k33", "q3", "prism"];
