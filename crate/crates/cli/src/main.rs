use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{Read as _, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use gtrunc::coloring::{self, ChromaticIndex, EdgeColoring, OracleConfig};
use gtrunc::complete::{self, CompleteOutcome};
use gtrunc::cyclic;
use gtrunc::io::{self, ColoringDoc, GraphDoc, SunReport, TruncationDoc};
use gtrunc::multigraph::{EdgeId, Multigraph, VertexId};
use gtrunc::strong::{self, StrongOutcome};
use gtrunc::sun::{self, ColorVector, ColoredTruncation};
use gtrunc::truncation::{self, Constituent, Truncation};
use gtrunc::{catalog, Error};

#[derive(Parser)]
#[command(name = "gtrunc", version, about = "Generalized truncations and their edge colorings")]
struct Cli {
    /// Node budget for exact searches.
    #[arg(long, global = true, default_value_t = OracleConfig::default().node_budget)]
    budget: u64,
    /// Seed for randomized choices such as shuffled cycle orders.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write a DOT drawing of the result here.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a truncation of a graph.
    Truncate {
        /// Graph JSON file, `-` for stdin, or `catalog:NAME`.
        graph: String,
        #[arg(long, value_enum, default_value_t = Kind::Complete)]
        kind: Kind,
        /// Shuffle cycle orders (cyclic) or pick random trees (arboreal).
        #[arg(long)]
        shuffle: bool,
    },
    /// Δ-color the complete truncation, or report that it is class II.
    ColorComplete {
        graph: String,
        /// Include the class II certificate when there is one.
        #[arg(long)]
        witness: bool,
    },
    /// 3-color a cyclic truncation.
    CyclicColor {
        graph: String,
        #[arg(long, value_enum)]
        strategy: Strategy,
        /// Edge ids of the enabling submultigraph, comma separated.
        #[arg(long, value_delimiter = ',')]
        enabling_edges: Option<Vec<usize>>,
        /// Shuffle cycle orders (even strategy).
        #[arg(long)]
        shuffle: bool,
    },
    /// Color a truncation whose Δ-critical constituents are class I.
    ColorStrong {
        /// Truncation JSON file or `-`.
        truncation: String,
    },
    /// Build or refute a class I sun for a pendant color vector.
    Sun {
        #[arg(long)]
        vector: String,
        /// Constituent valency for all-even vectors (default d-1).
        #[arg(long)]
        valency: Option<usize>,
    },
    /// Exact chromatic index.
    Oracle {
        graph: String,
        /// Largest graph the oracle accepts.
        #[arg(long, default_value_t = OracleConfig::default().max_edges)]
        max_edges: usize,
    },
    /// Check a coloring against a graph.
    Verify { graph: String, coloring: String },
    /// Worked examples.
    Demo {
        #[arg(value_enum)]
        name: Demo,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Complete,
    Cyclic,
    Arboreal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Even,
    Classone,
    Enabling,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Petersen,
    TwoK5Bridge,
    K4,
    Q3Ccc,
    TruncatedTetrahedron,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Undecided { .. }) { 2 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// What a command prints, plus an optional drawing.
struct Report {
    json: Value,
    dot: Option<String>,
    code: u8,
}

impl Report {
    fn new(json: Value) -> Self {
        Report {
            json,
            dot: None,
            code: 0,
        }
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report.json).expect("json");
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout(), "{text}");
            if let (Some(path), Some(dot)) = (&cli.dot, &report.dot) {
                if let Err(e) = fs::write(path, dot) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match &cli.command {
        Command::Truncate { graph, kind, shuffle } => {
            let x = load_graph(graph)?;
            let tr = match kind {
                Kind::Complete => truncation::complete_truncation(&x)?,
                Kind::Cyclic => {
                    let orders = if *shuffle {
                        random_orders(&x, &mut rng)?
                    } else {
                        BTreeMap::new()
                    };
                    truncation::cyclic_truncation(&x, &orders)?
                }
                Kind::Arboreal => truncation::arboreal_truncation(&x, forests(&x, *shuffle, &mut rng)?)?,
            };
            let dot = io::truncation_to_dot(&tr, None);
            Ok(Report::new(to_value(&TruncationDoc::from_truncation(&tr))).with_dot(dot))
        }
        Command::ColorComplete { graph, witness } => {
            let x = load_graph(graph)?;
            match complete::color_complete_truncation(&x, cli.budget)? {
                CompleteOutcome::Colored {
                    truncation,
                    source_coloring,
                } => {
                    let mut out = colored_json(&truncation);
                    out["class"] = json!("CLASS_I");
                    out["delta"] = json!(x.max_valency()?);
                    out["source_coloring"] = to_value(&ColoringDoc::from_coloring(&source_coloring));
                    Ok(Report::new(out).with_dot(io::truncation_to_dot(
                        &truncation.truncation,
                        Some(&truncation.coloring),
                    )))
                }
                CompleteOutcome::ClassTwo(w) => {
                    let mut out = json!({ "class": "CLASS_II", "delta": w.delta });
                    if *witness {
                        out["witness"] = json!({
                            "reason": "no edge-feasible coloring of the source exists",
                            "delta": w.delta,
                            "search_nodes": w.nodes,
                        });
                    }
                    let tr = truncation::complete_truncation(&x)?;
                    Ok(Report::new(out).with_dot(io::truncation_to_dot(&tr, None)))
                }
            }
        }
        Command::CyclicColor {
            graph,
            strategy,
            enabling_edges,
            shuffle,
        } => {
            let x = load_graph(graph)?;
            let colored = match strategy {
                Strategy::Even => {
                    let orders = if *shuffle {
                        random_orders(&x, &mut rng)?
                    } else {
                        BTreeMap::new()
                    };
                    cyclic::cyclic_even_valency(&x, &orders)?
                }
                Strategy::Classone => {
                    let cfg = OracleConfig::default().with_budget(cli.budget);
                    match coloring::chromatic_index(&x, cfg)? {
                        ChromaticIndex::Decided { index, certificate, .. } if index == x.max_valency()? => {
                            cyclic::cyclic_from_class_one(&x, &certificate)?
                        }
                        ChromaticIndex::Decided { index, .. } => {
                            return Err(fail(format!("source is class II (chromatic index {index})")))
                        }
                        ChromaticIndex::Undecided { .. } => return Err(Error::Undecided { budget: cli.budget }.into()),
                    }
                }
                Strategy::Enabling => {
                    let y: BTreeSet<EdgeId> = match enabling_edges {
                        Some(ids) => ids.iter().map(|&i| EdgeId(i)).collect(),
                        None => cyclic::find_enabling(&x, cli.budget)?
                            .ok_or_else(|| fail("no enabling submultigraph leaves even components"))?,
                    };
                    let c = cyclic::color_via_enabling(&x, &y)?;
                    let mut out = colored_json(&c);
                    out["enabling_edges"] = json!(y.iter().map(|e| e.0).collect::<Vec<_>>());
                    let dot = io::truncation_to_dot(&c.truncation, Some(&c.coloring));
                    return Ok(Report::new(out).with_dot(dot));
                }
            };
            let dot = io::truncation_to_dot(&colored.truncation, Some(&colored.coloring));
            Ok(Report::new(colored_json(&colored)).with_dot(dot))
        }
        Command::ColorStrong { truncation } => {
            let tr = load_truncation(truncation)?;
            let cfg = OracleConfig::default().with_budget(cli.budget);
            match strong::color_by_strong(&tr, cfg)? {
                StrongOutcome::Colored(c) => {
                    let dot = io::truncation_to_dot(&tr, Some(&c));
                    let colored = ColoredTruncation {
                        truncation: tr,
                        coloring: c,
                    };
                    let mut out = colored_json(&colored);
                    out["status"] = json!("COLORED");
                    Ok(Report::new(out).with_dot(dot))
                }
                StrongOutcome::NotApplicable {
                    vertex,
                    chromatic_index,
                } => Ok(Report::new(json!({
                    "status": "NOT_APPLICABLE",
                    "vertex": vertex.0,
                    "constituent_chromatic_index": chromatic_index,
                }))),
            }
        }
        Command::Sun { vector, valency } => {
            let v: ColorVector = vector.parse()?;
            let ok = sun::admissible(&v)?;
            let report = if let Some(k) = valency {
                SunReport::built(&sun::build_sun_valency(&v, *k)?)
            } else if ok {
                SunReport::built(&sun::build_sun(&v)?)
            } else {
                let confirms = (v.r() <= 8).then(|| sun::verify_totally_inadmissible(&v)).transpose()?;
                SunReport::inadmissible(v.entries(), confirms)
            };
            let dot = report.constituent.as_ref().map(|_| {
                let s = if let Some(k) = valency {
                    sun::build_sun_valency(&v, *k)
                } else {
                    sun::build_sun(&v)
                }
                .expect("built above");
                let (g, c) = s.to_graph();
                io::graph_to_dot(&g, Some(&c))
            });
            let mut r = Report::new(to_value(&report));
            r.dot = dot;
            Ok(r)
        }
        Command::Oracle { graph, max_edges } => {
            let g = load_graph_or_flattened(graph)?;
            let cfg = OracleConfig::default()
                .with_budget(cli.budget)
                .with_max_edges(*max_edges);
            match coloring::chromatic_index(&g, cfg)? {
                ChromaticIndex::Decided {
                    index,
                    certificate,
                    nodes,
                } => {
                    let delta = g.max_valency()?;
                    let class = if index == delta { "CLASS_I" } else { "CLASS_II" };
                    let dot = io::graph_to_dot(&g, Some(&certificate));
                    Ok(Report::new(json!({
                        "chromatic_index": index,
                        "max_valency": delta,
                        "class": class,
                        "nodes": nodes,
                        "coloring": to_value(&ColoringDoc::from_coloring(&certificate)),
                    }))
                    .with_dot(dot))
                }
                ChromaticIndex::Undecided { lower_bound, nodes } => {
                    let mut r = Report::new(json!({
                        "status": "UNDECIDED",
                        "lower_bound": lower_bound,
                        "nodes": nodes,
                    }));
                    r.code = 2;
                    Ok(r)
                }
            }
        }
        Command::Verify { graph, coloring: path } => {
            let g = load_graph_or_flattened(graph)?;
            let c = load_coloring(path)?;
            if let Some(e) = g.edge_ids().find(|&e| c.get(e).is_none()) {
                return Err(fail(format!("{e} has no color")));
            }
            match coloring::find_clash(&g, &c)? {
                None => Ok(Report::new(json!({
                    "proper": true,
                    "colors_used": c.used_colors().len(),
                    "max_valency": g.max_valency()?,
                }))),
                Some((e, f)) => {
                    let (a, b) = g.endpoints(e)?;
                    let shared = if [a, b].contains(&g.endpoints(f)?.0) {
                        g.endpoints(f)?.0
                    } else {
                        g.endpoints(f)?.1
                    };
                    Err(fail(format!(
                        "edges {} and {} share color {} at vertex {}",
                        e.0,
                        f.0,
                        c.get(e).expect("colored"),
                        shared.0
                    )))
                }
            }
        }
        Command::Demo { name } => demo(*name, cli),
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn colored_json(c: &ColoredTruncation) -> Value {
    json!({
        "truncation": to_value(&TruncationDoc::from_truncation(&c.truncation)),
        "coloring": to_value(&ColoringDoc::from_coloring(&c.coloring)),
        "colors_used": c.coloring.used_colors().len(),
        "proper": coloring::is_proper(c.truncation.graph(), &c.coloring).unwrap_or(false),
    })
}

fn random_orders(x: &Multigraph, rng: &mut ChaCha8Rng) -> Outcome<BTreeMap<VertexId, Vec<usize>>> {
    let mut out = BTreeMap::new();
    for v in x.vertices() {
        let mut seq: Vec<usize> = (0..x.valency(v)?).collect();
        seq.shuffle(rng);
        out.insert(v, seq);
    }
    Ok(out)
}

/// Spanning paths through each cluster, or random spanning trees.
fn forests(x: &Multigraph, random: bool, rng: &mut ChaCha8Rng) -> Outcome<BTreeMap<VertexId, Constituent>> {
    use rand::Rng;
    let mut out = BTreeMap::new();
    for v in x.vertices() {
        let r = x.valency(v)?;
        let mut seq: Vec<usize> = (0..r).collect();
        let c = if random {
            seq.shuffle(rng);
            let edges = (1..r).map(|i| (seq[rng.gen_range(0..i)], seq[i]));
            Constituent::new(r, edges)?
        } else {
            Constituent::path(r, &seq)?
        };
        out.insert(v, c);
    }
    Ok(out)
}

fn read_source(input: &str) -> Outcome<(String, String)> {
    if input == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| fail(format!("stdin: {e}")))?;
        return Ok(("stdin".into(), text));
    }
    let text = fs::read_to_string(Path::new(input)).map_err(|e| fail(format!("{input}: {e}")))?;
    Ok((input.to_string(), text))
}

fn parse_json(name: &str, text: &str) -> Outcome<Value> {
    serde_json::from_str(text).map_err(|e| fail(format!("{name}: malformed JSON: {e}")))
}

fn located<T>(name: &str, r: gtrunc::Result<T>) -> Outcome<T> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{name}: {}", f.message);
        f
    })
}

fn from_value<T: serde::de::DeserializeOwned>(name: &str, v: Value) -> Outcome<T> {
    serde_json::from_value(v).map_err(|e| fail(format!("{name}: {e}")))
}

/// A graph: `catalog:NAME`, a graph document, or the `graph`/`source` part of
/// a larger document.
fn load_graph(input: &str) -> Outcome<Multigraph> {
    if let Some(name) = input.strip_prefix("catalog:") {
        return catalog::by_name(name).ok_or_else(|| {
            fail(format!(
                "unknown catalog graph {name:?}; known: {}",
                catalog::NAMES.join(", ")
            ))
        });
    }
    let (name, text) = read_source(input)?;
    let v = parse_json(&name, &text)?;
    let doc = if v.get("vertices").is_some() {
        v
    } else if let Some(g) = v.get("graph").or_else(|| v.get("source")) {
        g.clone()
    } else {
        return Err(fail(format!(
            "{name}: expected a graph with \"vertices\" and \"edges\""
        )));
    };
    let doc: GraphDoc = from_value(&name, doc)?;
    located(&name, doc.to_graph())
}

fn load_truncation(input: &str) -> Outcome<Truncation> {
    let (name, text) = read_source(input)?;
    let v = parse_json(&name, &text)?;
    let doc = if v.get("source").is_some() {
        v
    } else if let Some(t) = v.get("truncation") {
        t.clone()
    } else {
        return Err(fail(format!(
            "{name}: expected a truncation with \"source\" and \"constituents\""
        )));
    };
    let doc: TruncationDoc = from_value(&name, doc)?;
    located(&name, doc.to_truncation())
}

/// A plain graph, or the flattened graph of a truncation document.
fn load_graph_or_flattened(input: &str) -> Outcome<Multigraph> {
    if input.starts_with("catalog:") {
        return load_graph(input);
    }
    let (name, text) = read_source(input)?;
    let v = parse_json(&name, &text)?;
    if v.get("vertices").is_some() {
        let doc: GraphDoc = from_value(&name, v)?;
        return located(&name, doc.to_graph());
    }
    let tr_doc = if v.get("source").is_some() {
        Some(v.clone())
    } else if v.get("graph").is_some() {
        let doc: GraphDoc = from_value(&name, v["graph"].clone())?;
        return located(&name, doc.to_graph());
    } else {
        v.get("truncation").cloned()
    };
    match tr_doc {
        Some(t) => {
            let doc: TruncationDoc = from_value(&name, t)?;
            Ok(located(&name, doc.to_truncation())?.graph().clone())
        }
        None => Err(fail(format!("{name}: no graph or truncation found"))),
    }
}

fn load_coloring(input: &str) -> Outcome<EdgeColoring> {
    let (name, text) = read_source(input)?;
    let v = parse_json(&name, &text)?;
    let doc = if v.get("palette").is_some() {
        v
    } else {
        v.get("coloring").cloned().unwrap_or(v)
    };
    let doc: ColoringDoc = from_value(&name, doc)?;
    located(&name, doc.to_coloring())
}

fn demo(name: Demo, cli: &Cli) -> Outcome<Report> {
    let cfg = OracleConfig::default().with_budget(cli.budget).with_max_edges(128);
    let index_of = |g: &Multigraph| -> Outcome<usize> {
        match coloring::chromatic_index(g, cfg)? {
            ChromaticIndex::Decided { index, .. } => Ok(index),
            ChromaticIndex::Undecided { .. } => Err(Error::Undecided { budget: cli.budget }.into()),
        }
    };
    match name {
        Demo::Petersen => {
            let x = catalog::petersen();
            let tr = truncation::complete_truncation(&x)?;
            let witness = match complete::color_complete_truncation(&x, cli.budget)? {
                CompleteOutcome::ClassTwo(w) => json!({ "delta": w.delta, "search_nodes": w.nodes }),
                CompleteOutcome::Colored { .. } => json!(null),
            };
            let out = json!({
                "name": "petersen",
                "graph": to_value(&GraphDoc::from_graph(&x)),
                "chromatic_index": index_of(&x)?,
                "class": "CLASS_II",
                "complete_truncation": to_value(&TruncationDoc::from_truncation(&tr)),
                "complete_truncation_chromatic_index": index_of(tr.graph())?,
                "edge_feasibility_witness": witness,
            });
            Ok(Report::new(out).with_dot(io::truncation_to_dot(&tr, None)))
        }
        Demo::TwoK5Bridge => {
            let x = catalog::two_k5_bridge();
            let tr = truncation::cyclic_truncation(&x, &BTreeMap::new())?;
            let bridges: Vec<usize> = tr.graph().bridges().iter().map(|e| e.0).collect();
            let mut out = json!({
                "name": "two-k5-bridge",
                "graph": to_value(&GraphDoc::from_graph(&x)),
                "cyclic_truncation": to_value(&TruncationDoc::from_truncation(&tr)),
                "cyclic_bridges": bridges,
                "cyclic_has_cut_edge": cyclic::cut_edge_class_two(tr.graph())?,
                "cyclic_chromatic_index": index_of(tr.graph())?,
            });
            if let CompleteOutcome::Colored { truncation, .. } = complete::color_complete_truncation(&x, cli.budget)? {
                out["complete_truncation"] = colored_json(&truncation);
            }
            Ok(Report::new(out).with_dot(io::truncation_to_dot(&tr, None)))
        }
        Demo::K4 => {
            let x = catalog::complete(4);
            let CompleteOutcome::Colored { truncation, .. } = complete::color_complete_truncation(&x, cli.budget)?
            else {
                return Err(fail("K4 complete truncation unexpectedly class II"));
            };
            let y: BTreeSet<EdgeId> = [EdgeId(0), EdgeId(5)].into();
            let enabled = cyclic::color_via_enabling(&x, &y)?;
            let out = json!({
                "name": "k4",
                "graph": to_value(&GraphDoc::from_graph(&x)),
                "complete_truncation": colored_json(&truncation),
                "enabling_edges": [0, 5],
                "cyclic_via_enabling": colored_json(&enabled),
            });
            let dot = io::truncation_to_dot(&truncation.truncation, Some(&truncation.coloring));
            Ok(Report::new(out).with_dot(dot))
        }
        Demo::Q3Ccc => {
            let x = catalog::hypercube(3);
            let proper = match coloring::chromatic_index(&x, cfg)? {
                ChromaticIndex::Decided { certificate, .. } => certificate,
                ChromaticIndex::Undecided { .. } => return Err(Error::Undecided { budget: cli.budget }.into()),
            };
            let ccc = cyclic::cyclic_from_class_one(&x, &proper)?;
            let out = json!({
                "name": "q3-ccc",
                "graph": to_value(&GraphDoc::from_graph(&x)),
                "cube_connected_cycles": colored_json(&ccc),
                "chromatic_index": index_of(ccc.truncation.graph())?,
            });
            let dot = io::truncation_to_dot(&ccc.truncation, Some(&ccc.coloring));
            Ok(Report::new(out).with_dot(dot))
        }
        Demo::TruncatedTetrahedron => {
            let x = catalog::complete(4);
            let CompleteOutcome::Colored { truncation, .. } = complete::color_complete_truncation(&x, cli.budget)?
            else {
                return Err(fail("K4 complete truncation unexpectedly class II"));
            };
            let g = truncation.truncation.graph();
            let out = json!({
                "name": "truncated-tetrahedron",
                "graph": to_value(&GraphDoc::from_graph(&x)),
                "order": g.order(),
                "size": g.size(),
                "truncation": colored_json(&truncation),
                "coloring": to_value(&ColoringDoc::from_coloring(&truncation.coloring)),
            });
            let dot = io::truncation_to_dot(&truncation.truncation, Some(&truncation.coloring));
            Ok(Report::new(out).with_dot(dot))
        }
    }
}
