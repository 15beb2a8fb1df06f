//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the run exits nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gtrunc::canonical::{canonical_coloring, missing_color};
use gtrunc::catalog;
use gtrunc::coloring::{self, ChromaticIndex, EdgeColoring, OracleConfig};
use gtrunc::complete::{self, CompleteOutcome};
use gtrunc::cyclic;
use gtrunc::multigraph::{EdgeId, Multigraph, VertexId};
use gtrunc::strong::{self, StrongOutcome};
use gtrunc::sun::{self, ColorVector, ColoredTruncation, RegularOutcome};
use gtrunc::truncation::{self, Constituent, Truncation};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn within(limit: Duration, start: Instant, what: &str) -> Check {
    let took = start.elapsed();
    ensure!(took <= limit, "{what} took {took:?}, limit {limit:?}");
    Ok(())
}

fn chromatic_index(g: &Multigraph, config: OracleConfig) -> Result<(usize, EdgeColoring), String> {
    match coloring::chromatic_index(g, config).map_err(err)? {
        ChromaticIndex::Decided { index, certificate, .. } => Ok((index, certificate)),
        ChromaticIndex::Undecided { lower_bound, nodes } => Err(format!(
            "oracle undecided after {nodes} nodes (lower bound {lower_bound})"
        )),
    }
}

fn oracle() -> OracleConfig {
    OracleConfig::default().with_max_edges(128)
}

fn budget() -> u64 {
    OracleConfig::default().node_budget
}

fn proper_with(g: &Multigraph, c: &EdgeColoring, colors: usize, what: &str) -> Check {
    c.require_total(g).map_err(err)?;
    ensure!(
        coloring::is_proper(g, c).map_err(err)?,
        "{what}: coloring is not proper"
    );
    let used = c.used_colors().len();
    ensure!(used == colors, "{what}: {used} colors used, expected {colors}");
    Ok(())
}

/// Matching-edge colors of the truncation, read back on the source.
fn contracted(c: &ColoredTruncation) -> Result<EdgeColoring, String> {
    Ok(c.truncation.contract(&c.coloring).map_err(err)?.1)
}

fn same_on_edges(x: &Multigraph, a: &EdgeColoring, b: &EdgeColoring) -> bool {
    x.edge_ids().all(|e| a.get(e) == b.get(e))
}

fn delta_even_multigraphs(seed: u64, count: usize) -> Vec<Multigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let g = catalog::random_multigraph(&mut rng, 6, 10);
        if g.max_valency().unwrap() % 2 == 0 {
            out.push(g);
        }
    }
    out
}

fn random_orders(x: &Multigraph, rng: &mut ChaCha8Rng) -> BTreeMap<VertexId, Vec<usize>> {
    x.vertices()
        .map(|v| {
            let mut seq: Vec<usize> = (0..x.valency(v).unwrap()).collect();
            seq.shuffle(rng);
            (v, seq)
        })
        .collect()
}

fn random_forests(x: &Multigraph, rng: &mut ChaCha8Rng) -> BTreeMap<VertexId, Constituent> {
    x.vertices()
        .map(|v| {
            let r = x.valency(v).unwrap();
            let mut seq: Vec<usize> = (0..r).collect();
            seq.shuffle(rng);
            let mut edges = Vec::new();
            for i in 1..r {
                if rng.gen_bool(0.7) {
                    edges.push((seq[rng.gen_range(0..i)], seq[i]));
                }
            }
            (v, Constituent::new(r, edges).unwrap())
        })
        .collect()
}

fn complete_coloring(x: &Multigraph) -> Result<(ColoredTruncation, EdgeColoring), String> {
    match complete::color_complete_truncation(x, budget()).map_err(err)? {
        CompleteOutcome::Colored {
            truncation,
            source_coloring,
        } => Ok((truncation, source_coloring)),
        CompleteOutcome::ClassTwo(w) => Err(format!("reported class II after {} nodes", w.nodes)),
    }
}

fn check_complete(x: &Multigraph, name: &str) -> Check {
    let delta = x.max_valency().map_err(err)?;
    let (colored, _) = complete_coloring(x).map_err(|e| format!("{name}: {e}"))?;
    ensure!(
        colored.truncation.graph().max_valency().map_err(err)? == delta,
        "{name}: truncation changed the maximum valency"
    );
    proper_with(colored.truncation.graph(), &colored.coloring, delta, name)
}

fn oracle_ground_truth() -> Check {
    let limit = Duration::from_secs(60);
    let p = catalog::petersen();
    let start = Instant::now();
    let (index, _) = chromatic_index(&p, oracle())?;
    within(limit, start, "Petersen")?;
    ensure!(index == 4, "χ′(Petersen) = {index}");
    let tr = truncation::complete_truncation(&p).map_err(err)?;
    let start = Instant::now();
    let (index, _) = chromatic_index(tr.graph(), oracle())?;
    within(limit, start, "complete truncation of Petersen")?;
    ensure!(index == 4, "χ′ of the complete truncation of Petersen = {index}");
    Ok(())
}

fn complete_even_branch() -> Check {
    let mut graphs = vec![("K5".to_string(), catalog::complete(5))];
    for (i, g) in delta_even_multigraphs(2, 2).into_iter().enumerate() {
        graphs.push((format!("random #{i} (Δ = {})", g.max_valency().unwrap()), g));
    }
    for (name, x) in &graphs {
        let start = Instant::now();
        check_complete(x, name)?;
        within(Duration::from_secs(1), start, name)?;
    }
    Ok(())
}

fn complete_odd_branch() -> Check {
    let k4 = catalog::complete(4);
    let k33 = catalog::complete_bipartite(3, 3);
    let bridge = catalog::two_k5_bridge();
    // none of the three above has a vertex of valency at most Δ-2
    let claw = catalog::star(3);
    let mut orders = BTreeSet::new();
    for (name, x) in [("K4", &k4), ("K3,3", &k33), ("two-K5-bridge", &bridge), ("K1,3", &claw)] {
        check_complete(x, name)?;
        let delta = x.max_valency().map_err(err)?;
        for v in x.vertices() {
            let r = x.valency(v).map_err(err)?;
            orders.insert(if r == delta {
                "Δ"
            } else if r + 1 == delta {
                "Δ-1"
            } else {
                "≤Δ-2"
            });
        }
    }
    ensure!(bridge.max_valency().map_err(err)? == 5, "two-K5-bridge has Δ ≠ 5");
    ensure!(orders.len() == 3, "constituent order cases covered: {orders:?}");
    Ok(())
}

fn sun_vectors(max_d: usize, max_r: usize) -> Vec<Vec<usize>> {
    fn compositions(parts: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            compositions(parts - 1, total - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 1..=max_d {
        for r in d..=max_r {
            compositions(d, r, &mut Vec::new(), &mut out);
        }
    }
    out
}

fn exhaustive_suns() -> Check {
    let start = Instant::now();
    let (mut admissible, mut inadmissible) = (0, 0);
    for entries in sun_vectors(4, 8) {
        let v = ColorVector::new(entries.clone()).map_err(err)?;
        let (r, d) = (v.r(), v.d());
        if sun::admissible(&v).map_err(err)? {
            admissible += 1;
            let s = sun::build_sun(&v).map_err(|e| format!("{v}: {e}"))?;
            ensure!(
                s.constituent.order() == r,
                "{v}: constituent order {}",
                s.constituent.order()
            );
            ensure!(
                s.constituent.regular_valency() == Some(d - 1) || r == 1 && d == 1,
                "{v}: constituent is not {}-regular",
                d - 1
            );
            ensure!(s.is_proper(), "{v}: sun is not properly colored");
            let counts: Vec<usize> = (0..d)
                .map(|c| s.pendant_colors.iter().filter(|&&p| p == c).count())
                .collect();
            ensure!(
                counts == entries && s.pendant_colors.len() == r,
                "{v}: pendant counts {counts:?}"
            );
        } else {
            inadmissible += 1;
            ensure!(
                sun::verify_totally_inadmissible(&v).map_err(err)?,
                "{v}: enumeration found a class I sun"
            );
        }
    }
    ensure!(admissible > 0 && inadmissible > 0, "sweep degenerate");
    println!(
        "  {admissible} admissible and {inadmissible} inadmissible vectors in {:?}",
        start.elapsed()
    );
    within(Duration::from_secs(600), start, "sun sweep")
}

fn canonical_colorings() -> Check {
    let start = Instant::now();
    for n in 2..=14 {
        let (g, c) = canonical_coloring(n).map_err(err)?;
        let colors = if n % 2 == 0 { n - 1 } else { n };
        proper_with(&g, &c, colors, &format!("K{n}"))?;
        if n % 2 == 0 {
            for color in 0..colors {
                let mut seen = vec![0; n];
                for (e, a, b) in g.edges() {
                    if c.get(e) == Some(color) {
                        seen[a.0] += 1;
                        seen[b.0] += 1;
                    }
                }
                ensure!(
                    seen.iter().all(|&k| k == 1),
                    "K{n}: class {color} is not a perfect matching"
                );
            }
        } else {
            let missing: BTreeSet<_> = g
                .vertices()
                .map(|v| missing_color(&g, &c, v))
                .collect::<Result<_, _>>()
                .map_err(err)?;
            ensure!(missing.len() == n, "K{n}: missing colors are not a bijection");
        }
    }
    within(Duration::from_secs(1), start, "canonical colorings")
}

fn bridge_obstruction() -> Check {
    let start = Instant::now();
    let tr = truncation::cyclic_truncation(&catalog::two_k5_bridge(), &BTreeMap::new()).map_err(err)?;
    let g = tr.graph();
    ensure!(g.regular_valency() == Some(3), "cyclic truncation is not cubic");
    ensure!(!g.bridges().is_empty(), "cyclic truncation has no bridge");
    ensure!(
        cyclic::cut_edge_class_two(g).map_err(err)?,
        "cut-edge test did not fire"
    );
    let (index, _) = chromatic_index(g, oracle())?;
    ensure!(index == 4, "χ′ = {index}");
    within(Duration::from_secs(300), start, "bridge obstruction")
}

fn cubic_three_coloring(c: &ColoredTruncation, what: &str) -> Check {
    let g = c.truncation.graph();
    ensure!(g.regular_valency() == Some(3), "{what}: not 3-regular");
    proper_with(g, &c.coloring, 3, what)
}

fn cyclic_constructions() -> Check {
    let limit = Duration::from_secs(1);
    let k5 = catalog::complete(5);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..20 {
        let orders = random_orders(&k5, &mut rng);
        let start = Instant::now();
        let c = cyclic::cyclic_even_valency(&k5, &orders).map_err(err)?;
        cubic_three_coloring(&c, &format!("K5 cycle orders #{i}"))?;
        within(limit, start, "cyclic_even_valency")?;
    }
    let k4 = catalog::complete(4);
    let (_, proper) = chromatic_index(&k4, oracle())?;
    let start = Instant::now();
    let c = cyclic::cyclic_from_class_one(&k4, &proper).map_err(err)?;
    cubic_three_coloring(&c, "K4 from a 3-coloring")?;
    within(limit, start, "cyclic_from_class_one")?;

    let y = perfect_matching(&k4);
    let start = Instant::now();
    let c = cyclic::color_via_enabling(&k4, &y).map_err(err)?;
    cubic_three_coloring(&c, "K4 via a perfect matching")?;
    within(limit, start, "color_via_enabling")
}

fn perfect_matching(x: &Multigraph) -> BTreeSet<EdgeId> {
    let mut covered = BTreeSet::new();
    let mut out = BTreeSet::new();
    for (e, a, b) in x.edges() {
        if !covered.contains(&a) && !covered.contains(&b) {
            covered.extend([a, b]);
            out.insert(e);
        }
    }
    assert_eq!(covered.len(), x.order(), "greedy matching is not perfect");
    out
}

fn equivalence() -> Check {
    let cases = [
        ("K4", catalog::complete(4), true),
        ("K3,3", catalog::complete_bipartite(3, 3), true),
        ("Petersen", catalog::petersen(), false),
        ("3-prism", catalog::prism(3), true),
    ];
    for (name, x, class_one) in cases {
        let (a, b) = complete::regular_odd_equivalence(&x, oracle()).map_err(err)?;
        ensure!(a == b, "{name}: source class I = {a}, truncation class I = {b}");
        ensure!(a == class_one, "{name}: class I = {a}");
    }
    Ok(())
}

fn arboreal() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..25 {
        let x = catalog::random_multigraph(&mut rng, 6, 10);
        let forests = random_forests(&x, &mut rng);
        let tr = truncation::arboreal_truncation(&x, forests).map_err(err)?;
        let delta = tr.graph().max_valency().map_err(err)?;
        match strong::color_by_strong(&tr, oracle()).map_err(err)? {
            StrongOutcome::Colored(c) => proper_with(tr.graph(), &c, delta, &format!("arboreal #{i}"))?,
            StrongOutcome::NotApplicable { vertex, .. } => {
                return Err(format!("arboreal #{i}: forest at {vertex} refused"))
            }
        }
    }
    Ok(())
}

fn round_trips() -> Check {
    // complete truncations: the source coloring survives contraction
    let mut graphs = vec![
        catalog::complete(5),
        catalog::complete(4),
        catalog::complete_bipartite(3, 3),
        catalog::two_k5_bridge(),
        catalog::star(3),
    ];
    graphs.extend(delta_even_multigraphs(2, 2));
    for x in &graphs {
        let (colored, source) = complete_coloring(x)?;
        let back = contracted(&colored)?;
        ensure!(
            same_on_edges(x, &back, &source),
            "complete truncation changed the source coloring"
        );
        if x.max_valency().map_err(err)? % 2 == 0 {
            ensure!(
                sun::is_parity_balanced(x, &back).map_err(err)?,
                "even branch: not parity-balanced"
            );
        } else {
            ensure!(
                complete::is_edge_feasible(x, &back).map_err(err)?,
                "odd branch: not edge-feasible"
            );
        }
    }

    // semiregular and regular truncations realize their parity-balanced input
    for x in [
        catalog::complete(5),
        catalog::complete(3),
        catalog::circulant(8, &[1, 2]),
    ] {
        let input = sun::find_parity_coloring(&x, 2, budget())
            .map_err(err)?
            .ok_or("no parity-balanced 2-coloring")?;
        let c = sun::semiregular_truncation(&x, &input).map_err(err)?;
        let back = contracted(&c)?;
        ensure!(
            same_on_edges(&x, &back, &input),
            "semiregular truncation changed its input"
        );
        ensure!(
            sun::is_parity_balanced(&x, &back).map_err(err)?,
            "semiregular: not parity-balanced"
        );
    }
    for (x, d) in [(catalog::complete(4), 3), (catalog::complete(5), 4)] {
        match sun::regular_truncation(&x, d, budget()).map_err(err)? {
            RegularOutcome::Built {
                truncation,
                source_coloring,
            } => {
                let back = contracted(&truncation)?;
                ensure!(
                    same_on_edges(&x, &back, &source_coloring),
                    "regular truncation changed its input"
                );
                ensure!(
                    sun::is_parity_balanced(&x, &back).map_err(err)?,
                    "regular: not parity-balanced"
                );
            }
            RegularOutcome::Infeasible { reason, .. } => return Err(format!("regular truncation refused: {reason}")),
        }
    }

    // cyclic truncations
    let k5 = catalog::complete(5);
    let c = cyclic::cyclic_even_valency(&k5, &BTreeMap::new()).map_err(err)?;
    let back = contracted(&c)?;
    ensure!(
        k5.edge_ids().all(|e| back.get(e) == Some(0)),
        "even cyclic: matching not colored 0"
    );

    let k4 = catalog::complete(4);
    let (_, proper) = chromatic_index(&k4, oracle())?;
    let back = contracted(&cyclic::cyclic_from_class_one(&k4, &proper).map_err(err)?)?;
    ensure!(
        k4.edge_ids().all(|e| back.get(e) == proper.get(e).map(|c| c.min(2))),
        "class I cyclic: matching colors are not the folded input"
    );

    let y = perfect_matching(&k4);
    let back = contracted(&cyclic::color_via_enabling(&k4, &y).map_err(err)?)?;
    for e in k4.edge_ids() {
        let c = back.get(e).ok_or("uncolored matching edge")?;
        ensure!((c == 2) == y.contains(&e), "enabling: edge {e} has color {c}");
    }

    // arboreal truncations put every matching edge in the top color
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..25 {
        let x = catalog::random_multigraph(&mut rng, 6, 10);
        let tr: Truncation = truncation::arboreal_truncation(&x, random_forests(&x, &mut rng)).map_err(err)?;
        let delta = tr.graph().max_valency().map_err(err)?;
        let StrongOutcome::Colored(c) = strong::color_by_strong(&tr, oracle()).map_err(err)? else {
            return Err("arboreal truncation refused".into());
        };
        let back = tr.contract(&c).map_err(err)?.1;
        ensure!(
            x.edge_ids().all(|e| back.get(e) == Some(delta - 1)),
            "arboreal: matching not colored Δ-1"
        );
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 oracle ground truth", oracle_ground_truth),
        ("2 complete truncation, even Δ", complete_even_branch),
        ("3 complete truncation, odd Δ", complete_odd_branch),
        ("4 exhaustive sun vectors", exhaustive_suns),
        ("5 canonical colorings", canonical_colorings),
        ("6 bridge obstruction", bridge_obstruction),
        ("7 cyclic constructions", cyclic_constructions),
        ("8 regular odd equivalence", equivalence),
        ("9 arboreal truncations", arboreal),
        ("10 contraction round trips", round_trips),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(()) => println!("PASS {name} ({:?})", start.elapsed()),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
