//! `strimm`: JSON in, JSON out front end for strimm-core.
//!
//! Exit status: 0 when the answer was computed (and is positive, for
//! yes/no questions), 1 when the verdict is negative or nothing was found,
//! 2 for unreadable or invalid input, 3 when a size guard stopped the search.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use strimm_core::altpath::{
    classify, has_alt_path, is_path_or_cycle_duplication, max_pivots, unsheltered_alt_paths, AltPathQuery, Class, Item,
};
use strimm_core::blocks::is_two_connected;
use strimm_core::decomp::{gadget_contract, hypothesis_witness, min_hitting_set, sp2seps, SepMode};
use strimm_core::harness::{
    labelled_antichain, leafed, random_ear_no_k_alt, random_no_k_alt, wqo_scan, zigzag, RandomSpec,
};
use strimm_core::immersion::{check_embedding, find_embedding, EmbeddingConstraints, SearchGuard};
use strimm_core::io::{
    contracted_to_json, digraph_to_json, embedding_to_json, labelled_to_json, parse_embedding, parse_labelled,
    portrait_to_json, sp2sep_to_json, sp_tree_to_json,
};
use strimm_core::separation::Separation;
use strimm_core::sp::{recognize, separator};
use strimm_core::sptree::{build_portrait, canonical_separators, is_sp_tree};
use strimm_core::{Error, LabelledDigraph, MultiDigraph, VertexId};

#[derive(Parser)]
#[command(name = "strimm", version, about = "Strong immersion and series-parallel structure of digraphs")]
struct Cli {
    /// Where to write the JSON result (default: stdout).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Output format. Only JSON is supported.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args)]
struct Input {
    /// Digraph document (`-` or absent: stdin).
    #[arg(short, long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Pivot count, alternating-path verdict and class memberships.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Ask whether there is no K-alternating path.
        #[arg(long)]
        k: Option<usize>,
        /// Terminals for the triple classes.
        #[arg(long, requires = "sink")]
        source: Option<String>,
        #[arg(long, requires = "source")]
        sink: Option<String>,
    },
    /// Search for a strong immersion of GUEST into HOST.
    Embed {
        #[arg(long)]
        guest: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[command(flatten)]
        opts: EmbedOpts,
    },
    /// Series-parallel decomposition of the triple (D, SOURCE, SINK).
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        source: String,
        #[arg(long)]
        sink: String,
    },
    /// Labelled tree encoding of a rooted block tree.
    Portrait {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        root: String,
    },
    /// Series-parallel 2-separations.
    Separations {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Mode::CrossFree)]
        mode: Mode,
    },
    /// Minimum vertex set meeting every unsheltered T-alternating path.
    HittingSet {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        t: usize,
    },
    /// Replace each separation A-side by its directed gadget.
    Contract {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Mode::CrossFree)]
        mode: Mode,
    },
    /// Emit a generated digraph.
    Generate {
        #[arg(value_enum)]
        kind: Kind,
        /// Pivot count for the zigzag families.
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Vertex count for the random families.
        #[arg(long, default_value_t = 6)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Find the first embeddable pair in a sequence of digraphs.
    Scan {
        /// JSON array of digraph documents.
        #[command(flatten)]
        input: Input,
        /// Members with a K-alternating path violate the hypothesis.
        #[arg(long)]
        k: usize,
        /// Stop at the first hypothesis violation instead of skipping it.
        #[arg(long)]
        abort: bool,
        #[arg(long)]
        guard: Option<usize>,
    },
    /// Re-verify a certificate produced by another command.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
}

#[derive(Args)]
struct EmbedOpts {
    /// Pin a guest vertex to a host vertex, as `guest=host`. Repeatable.
    #[arg(long = "pin")]
    pins: Vec<String>,
    /// Ignore vertex labels.
    #[arg(long)]
    no_labels: bool,
    /// Largest host edge count the exact search accepts.
    #[arg(long)]
    guard: Option<usize>,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Check an embedding certificate against its guest and host.
    Embedding {
        #[arg(long)]
        guest: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        #[command(flatten)]
        opts: EmbedOpts,
    },
    /// Check that a separation certificate is a valid series-parallel
    /// 2-separation.
    Separation {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Check that a vertex set meets every unsheltered T-alternating path.
    HittingSet {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    All,
    Maximal,
    CrossFree,
}

impl From<Mode> for SepMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::All => SepMode::All,
            Mode::Maximal => SepMode::Maximal,
            Mode::CrossFree => SepMode::CrossFree,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Zigzag,
    LabelledAntichain,
    Leafed,
    RandomNoKAlt,
    /// Random 2-connected digraph grown by ears.
    RandomEar,
}

/// Why a command stopped without a positive answer.
enum Failure {
    /// Negative verdict; the value is still printed.
    Negative(Value),
    Input(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource(_) => Failure::Guard(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn read_text(path: Option<&PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn read_digraph(path: Option<&PathBuf>) -> Result<LabelledDigraph, Failure> {
    let text = read_text(path)?;
    parse_labelled(&text).map_err(|e| Failure::Input(format!("{}: {e}", name_of(path))))
}

fn name_of(path: Option<&PathBuf>) -> String {
    path.map_or_else(|| "stdin".into(), |p| p.display().to_string())
}

fn vertex(d: &MultiDigraph, name: &str) -> Result<VertexId, Failure> {
    d.vertex_by_name(name)
        .ok_or_else(|| Failure::Input(format!("unknown vertex {name:?}")))
}

fn guard(limit: Option<usize>) -> SearchGuard {
    let mut g = SearchGuard::default();
    if let Some(n) = limit {
        g.max_host_edges = n;
    }
    g
}

fn constraints(opts: &EmbedOpts, guest: &MultiDigraph, host: &MultiDigraph) -> Result<EmbeddingConstraints, Failure> {
    let mut pins = Vec::new();
    for p in &opts.pins {
        let (a, b) = p
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("pin {p:?} is not of the form guest=host")))?;
        pins.push((vertex(guest, a)?, vertex(host, b)?));
    }
    let c = if opts.no_labels {
        EmbeddingConstraints::default()
    } else {
        EmbeddingConstraints::labelled()
    };
    Ok(c.pinned(&pins))
}

fn analyze(input: &Input, k: Option<usize>, terminals: Option<(&str, &str)>) -> Outcome {
    let ld = read_digraph(input.input.as_ref())?;
    let d = &ld.digraph;
    let pivots = max_pivots(d, &AltPathQuery::default());
    let mut out = json!({
        "vertices": d.vertex_count(),
        "edges": d.edge_count(),
        "max_pivots": pivots,
        "connected": d.is_connected(),
        "two_connected": is_two_connected(d),
        "path_or_cycle_duplication": is_path_or_cycle_duplication(d),
    });
    let mut verdict = true;
    if let Some(k) = k {
        let none = !has_alt_path(d, &AltPathQuery::new(k));
        out["k"] = json!(k);
        out["no_k_alternating_path"] = json!(none);
        out["verdict"] = json!(format!("no {k}-alternating path: {none}"));
        let classes = json!({
            "F": classify(Item::Rooted(d, 0), Class::F { t: k }).ok(),
            "F_prime": classify(Item::Rooted(d, 0), Class::FPrime { t: k }).ok(),
            "F_star": classify(Item::Rooted(d, 0), Class::FStar { t: k }).ok(),
        });
        out["classes"] = classes;
        verdict = none;
        if let Some((s, t)) = terminals {
            let (s, t) = (vertex(d, s)?, vertex(d, t)?);
            let triple = Item::Triple(d, s, t);
            out["triple_classes"] = json!({
                "A": classify(triple, Class::A { k })?,
                "A0": classify(triple, Class::A0 { k })?,
            });
        }
    }
    if verdict {
        Ok(out)
    } else {
        Err(Failure::Negative(out))
    }
}

fn embed(guest: &PathBuf, host: &PathBuf, opts: &EmbedOpts) -> Outcome {
    let h = read_digraph(Some(guest))?;
    let g = read_digraph(Some(host))?;
    let c = constraints(opts, &h.digraph, &g.digraph)?;
    match find_embedding(&h, &g, &c, &guard(opts.guard))? {
        Some(emb) => Ok(embedding_to_json(&h.digraph, &g.digraph, &emb)),
        None => Err(Failure::Negative(json!({ "embedding": null }))),
    }
}

fn decompose(input: &Input, s: &str, t: &str) -> Outcome {
    let ld = read_digraph(input.input.as_ref())?;
    let d = &ld.digraph;
    let (s, t) = (vertex(d, s)?, vertex(d, t)?);
    match recognize(d, s, t)? {
        Some(tr) => {
            let cut = separator(&tr);
            let x: Vec<&str> = cut.x_side().into_iter().map(|v| d.vertex_name(v)).collect();
            let cut_edges: Vec<&str> = cut.cut_edges.iter().map(|&e| d.edge_name(e)).collect();
            Ok(json!({
                "direction": format!("{:?}", tr.direction).to_lowercase(),
                "shape": tr.code(),
                "tree": sp_tree_to_json(d, &tr.tree),
                "separator": { "x_side": x, "cut_edges": cut_edges, "size": cut.size() },
            }))
        }
        None => Err(Failure::Negative(json!({ "series_parallel": false }))),
    }
}

fn portrait(input: &Input, root: &str) -> Outcome {
    let ld = read_digraph(input.input.as_ref())?;
    let r = vertex(&ld.digraph, root)?;
    if let Err(v) = is_sp_tree(&ld.digraph, r, |_, _| true)? {
        return Err(Failure::Negative(json!({ "block_tree": false, "reason": v.to_string() })));
    }
    let p = build_portrait(&ld, r, canonical_separators)?;
    Ok(portrait_to_json(&p))
}

fn separations(input: &Input, mode: Mode) -> Outcome {
    let ld = read_digraph(input.input.as_ref())?;
    let d = &ld.digraph;
    match sp2seps(d, mode.into()) {
        Ok(list) => Ok(Value::Array(list.iter().map(|s| sp2sep_to_json(d, s)).collect())),
        Err(Error::CoverHypothesis(w)) => Err(Failure::Negative(cover_json(d, w.s, w.t, &w.x_edges, &w.y_edges))),
        Err(e) => Err(e.into()),
    }
}

fn cover_json(d: &MultiDigraph, s: VertexId, t: VertexId, x: &[usize], y: &[usize]) -> Value {
    let names = |es: &[usize]| es.iter().map(|&e| d.edge_name(e).to_string()).collect::<Vec<_>>();
    json!({
        "cover": {
            "s": d.vertex_name(s),
            "t": d.vertex_name(t),
            "x_edges": names(x),
            "y_edges": names(y),
        }
    })
}

fn hitting_set(input: &Input, t: usize) -> Outcome {
    let ld = read_digraph(input.input.as_ref())?;
    let d = &ld.digraph;
    let z = min_hitting_set(d, t)?;
    let names: Vec<&str> = z.vertices.iter().map(|&v| d.vertex_name(v)).collect();
    Ok(json!({ "t": t, "vertices": names, "size": names.len(), "paths": z.paths }))
}

fn contract(input: &Input, mode: Mode) -> Outcome {
    let ld = read_digraph(input.input.as_ref())?;
    let d = &ld.digraph;
    if matches!(mode, Mode::CrossFree) {
        if let Some(w) = hypothesis_witness(d) {
            return Err(Failure::Negative(cover_json(d, w.s, w.t, &w.x_edges, &w.y_edges)));
        }
    }
    let family = sp2seps(d, mode.into())?;
    let c = gadget_contract(d, &family)?;
    Ok(contracted_to_json(&c))
}

fn generate(kind: Kind, i: usize, vertices: usize, k: usize, seed: u64) -> Outcome {
    Ok(match kind {
        Kind::Zigzag => digraph_to_json(&zigzag(i)),
        Kind::LabelledAntichain => labelled_to_json(&labelled_antichain(i)),
        Kind::Leafed => digraph_to_json(&leafed(i)),
        Kind::RandomNoKAlt | Kind::RandomEar => {
            let r = match kind {
                Kind::RandomNoKAlt => random_no_k_alt(&RandomSpec::new(vertices, k, seed))?,
                _ => random_ear_no_k_alt(vertices, k, seed, 0.8)?,
            };
            let mut doc = digraph_to_json(&r.digraph);
            doc["generator"] = serde_json::to_value(&r).expect("plain data");
            doc["generator"]["k"] = json!(k);
            doc
        }
    })
}

fn scan(input: &Input, k: usize, abort: bool, limit: Option<usize>) -> Outcome {
    let text = read_text(input.input.as_ref())?;
    let docs: Vec<Value> = serde_json::from_str(&text).map_err(|e| {
        Failure::Input(format!(
            "{}: line {} column {}: {e}",
            name_of(input.input.as_ref()),
            e.line(),
            e.column()
        ))
    })?;
    let seq = docs
        .iter()
        .enumerate()
        .map(|(i, doc)| parse_labelled(&doc.to_string()).map_err(|e| Failure::Input(format!("member {}: {e}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    let report = wqo_scan(&seq, k, &guard(limit), abort)?;
    let mut out = json!({
        "pair": report.pair,
        "checks": report.checks,
        "aborted": report.aborted,
    });
    match (report.pair, &report.certificate) {
        (Some((i, j)), Some(emb)) => {
            out["certificate"] = embedding_to_json(&seq[i - 1].digraph, &seq[j - 1].digraph, emb);
            Ok(out)
        }
        _ => Err(Failure::Negative(out)),
    }
}

fn check(what: &CheckCommand) -> Outcome {
    match what {
        CheckCommand::Embedding { guest, host, certificate, opts } => {
            let h = read_digraph(Some(guest))?;
            let g = read_digraph(Some(host))?;
            let text = read_text(Some(certificate))?;
            let emb = parse_embedding(&text, &h.digraph, &g.digraph).map_err(Failure::from)?;
            let c = constraints(opts, &h.digraph, &g.digraph)?;
            match check_embedding(&h, &g, &emb, &c)? {
                Ok(()) => Ok(json!({ "valid": true })),
                Err(v) => Err(Failure::Negative(json!({ "valid": false, "reason": v.to_string() }))),
            }
        }
        CheckCommand::Separation { input, certificate } => {
            let ld = read_digraph(input.input.as_ref())?;
            let d = &ld.digraph;
            let doc: Value = serde_json::from_str(&read_text(Some(certificate))?)
                .map_err(|e| Failure::Input(format!("line {} column {}: {e}", e.line(), e.column())))?;
            let names = doc["a_edges"]
                .as_array()
                .ok_or_else(|| Failure::Input("certificate has no a_edges list".into()))?;
            let edges = names
                .iter()
                .map(|n| {
                    n.as_str()
                        .and_then(|n| d.edge_by_name(n))
                        .ok_or_else(|| Failure::Input(format!("unknown edge {n}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(check_separation(d, edges)?)
        }
        CheckCommand::HittingSet { input, t, certificate } => {
            let ld = read_digraph(input.input.as_ref())?;
            let d = &ld.digraph;
            let doc: Value = serde_json::from_str(&read_text(Some(certificate))?)
                .map_err(|e| Failure::Input(format!("line {} column {}: {e}", e.line(), e.column())))?;
            let names = doc["vertices"]
                .as_array()
                .ok_or_else(|| Failure::Input("certificate has no vertices list".into()))?;
            let mut z = vec![false; d.vertex_count()];
            for n in names {
                z[vertex(d, n.as_str().unwrap_or_default())?] = true;
            }
            let paths = unsheltered_alt_paths(d, *t)?;
            let missed = paths.iter().filter(|p| !p.vertices().iter().any(|&v| z[v])).count();
            let out = json!({ "valid": missed == 0, "paths": paths.len(), "missed": missed });
            if missed == 0 {
                Ok(out)
            } else {
                Err(Failure::Negative(out))
            }
        }
    }
}

/// Valid order-2 separation whose A-side is a one-way series-parallel triple
/// on the boundary.
fn check_separation(d: &MultiDigraph, edges_a: Vec<usize>) -> Outcome {
    let sep = Separation::from_side_a(d, edges_a)?;
    let reject = |reason: &str| Err(Failure::Negative(json!({ "valid": false, "reason": reason })));
    if sep.validate(d).is_err() {
        return reject("not a separation");
    }
    let boundary = sep.boundary(d);
    if boundary.len() != 2 {
        return reject("boundary does not have two vertices");
    }
    let (sub, map) = d.edge_subgraph(&sep.edges_a, &[]);
    let local = |v| map.vertices.iter().position(|&x| x == v).expect("boundary lies in A");
    match recognize(&sub, local(boundary[0]), local(boundary[1]))? {
        Some(tr) if tr.direction.is_one_way() => Ok(json!({ "valid": true })),
        _ => reject("A-side is not a one-way series-parallel triple"),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Analyze { input, k, source, sink } => {
            analyze(input, *k, source.as_deref().zip(sink.as_deref()))
        }
        Command::Embed { guest, host, opts } => embed(guest, host, opts),
        Command::Decompose { input, source, sink } => decompose(input, source, sink),
        Command::Portrait { input, root } => portrait(input, root),
        Command::Separations { input, mode } => separations(input, *mode),
        Command::HittingSet { input, t } => hitting_set(input, *t),
        Command::Contract { input, mode } => contract(input, *mode),
        Command::Generate { kind, i, vertices, k, seed } => generate(*kind, *i, *vertices, *k, *seed),
        Command::Scan { input, k, abort, guard } => scan(input, *k, *abort, *guard),
        Command::Check { what } => check(what),
    }
}

fn emit(cli: &Cli, value: &Value) -> io::Result<()> {
    let Format::Json = cli.format;
    let mut text = serde_json::to_string_pretty(value).expect("serialisable");
    text.push('\n');
    match &cli.output {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, code) = match run(&cli) {
        Ok(v) => (Some(v), 0),
        Err(Failure::Negative(v)) => (Some(v), 1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            (None, 2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            (None, 3)
        }
    };
    if let Some(v) = value {
        if let Err(e) = emit(&cli, &v) {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
