//! Generators for test families and the pairwise embedding scan.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::altpath::{has_alt_path, max_pivots, AltPathQuery};
use crate::blocks::is_two_connected;
use crate::digraph::{MultiDigraph, VertexId};
use crate::error::{Error, Result};
use crate::immersion::{find_embedding, Embedding, EmbeddingConstraints, SearchGuard};
use crate::labelled::LabelledDigraph;
use crate::qo::QuasiOrder;

/// The thread `v0 ... v(i+1)` with exactly `i` pivots: edge `j` joins `vj`
/// and `v(j+1)` and points forward when `j` is even.
pub fn zigzag(i: usize) -> MultiDigraph {
    let mut d = MultiDigraph::new();
    for j in 0..i + 2 {
        d.add_vertex(format!("v{j}")).expect("fresh name");
    }
    for j in 0..=i {
        if j % 2 == 0 {
            d.add_edge(j, j + 1).expect("valid edge");
        } else {
            d.add_edge(j + 1, j).expect("valid edge");
        }
    }
    d
}

/// `zigzag(i)` with both ends labelled `x` and every other vertex `y`, over
/// the two-element antichain.
pub fn labelled_antichain(i: usize) -> LabelledDigraph {
    let d = zigzag(i);
    let n = d.vertex_count();
    let qo = QuasiOrder::equality(vec!["x".into(), "y".into()]).expect("valid order");
    let labels = (0..n).map(|v| usize::from(v != 0 && v != n - 1)).collect();
    LabelledDigraph::new(d, Arc::new(qo), labels).expect("valid labels")
}

/// `zigzag(i)` with two leaves at each end. At an end that is a source of
/// the spine both leaf edges point into it; at a sink end both point out.
pub fn leafed(i: usize) -> MultiDigraph {
    let mut d = zigzag(i);
    let last = i + 1;
    for (end, tag) in [(0, "a"), (last, "b")] {
        let is_source = d.in_edges(end).is_empty();
        for k in 0..2 {
            let leaf = d.add_vertex(format!("{tag}{k}")).expect("fresh name");
            if is_source {
                d.add_edge(leaf, end).expect("valid edge");
            } else {
                d.add_edge(end, leaf).expect("valid edge");
            }
        }
    }
    d
}

/// Parameters of [`random_no_k_alt`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub vertices: usize,
    pub k: usize,
    pub seed: u64,
    /// Starting probability of each ordered pair being an edge.
    pub edge_probability: f64,
    /// Also require a 2-connected underlying graph (otherwise connected).
    pub two_connected: bool,
}

impl RandomSpec {
    pub fn new(vertices: usize, k: usize, seed: u64) -> Self {
        Self {
            vertices,
            k,
            seed,
            edge_probability: 0.5,
            two_connected: false,
        }
    }
}

/// Output of [`random_no_k_alt`], with what is needed to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct RandomInstance {
    #[serde(skip)]
    pub digraph: MultiDigraph,
    pub seed: u64,
    pub edge_probability: f64,
    pub max_pivots: usize,
    pub attempts: usize,
}

/// Rejection sampler for connected digraphs without a `k`-alternating path.
/// Samples come in rounds of [`ROUND`]; the edge probability shrinks by a
/// factor 0.8 until a round accepts at least 5% of its samples, and the
/// first accepted sample of that round is returned.
pub fn random_no_k_alt(spec: &RandomSpec) -> Result<RandomInstance> {
    if spec.k == 0 {
        return Err(Error::Domain("every nonempty digraph has a 0-alternating path".into()));
    }
    if spec.vertices == 0 {
        return Err(Error::Domain("need at least one vertex".into()));
    }
    if !(spec.edge_probability > 0.0 && spec.edge_probability <= 1.0) {
        return Err(Error::Domain("edge probability must lie in (0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut p = spec.edge_probability;
    let mut attempts = 0;
    while p >= MIN_PROBABILITY {
        let mut first = None;
        let mut accepted = 0;
        for _ in 0..ROUND {
            attempts += 1;
            let d = sample(&mut rng, spec.vertices, p);
            let shape_ok = if spec.two_connected { is_two_connected(&d) } else { d.is_connected() };
            if shape_ok && !has_alt_path(&d, &AltPathQuery::new(spec.k)) {
                accepted += 1;
                first.get_or_insert(d);
            }
        }
        if accepted * 20 >= ROUND {
            let digraph = first.expect("accepted sample");
            let max_pivots = max_pivots(&digraph, &AltPathQuery::default()).unwrap_or(0);
            return Ok(RandomInstance {
                digraph,
                seed: spec.seed,
                edge_probability: p,
                max_pivots,
                attempts,
            });
        }
        p *= 0.8;
    }
    Err(Error::Domain(format!(
        "no edge probability gives 5% acceptance for {} vertices and k = {}",
        spec.vertices, spec.k
    )))
}

const ROUND: usize = 40;
const MIN_PROBABILITY: f64 = 0.01;

fn sample(rng: &mut ChaCha8Rng, n: usize, p: f64) -> MultiDigraph {
    let mut d = MultiDigraph::new();
    for v in 0..n {
        d.add_vertex(format!("v{v}")).expect("fresh name");
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                d.add_edge(a, b).expect("valid edge");
            }
        }
    }
    d
}

/// Rejection sampler for 2-connected digraphs on exactly `vertices`
/// vertices without a `k`-alternating path, grown from a cycle by ears.
/// Each ear joins two existing vertices through fresh ones, and each edge
/// follows the ear's direction with probability `bias`. Dense random
/// digraphs almost always carry long alternating paths, so this reaches
/// sizes the edge-probability sampler cannot.
pub fn random_ear_no_k_alt(vertices: usize, k: usize, seed: u64, bias: f64) -> Result<RandomInstance> {
    if k == 0 || vertices < 3 {
        return Err(Error::Domain("need k >= 1 and at least three vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempts in 1..=MAX_EAR_ATTEMPTS {
        let d = sample_ears(&mut rng, vertices, bias);
        if !has_alt_path(&d, &AltPathQuery::new(k)) {
            let max_pivots = max_pivots(&d, &AltPathQuery::default()).unwrap_or(0);
            return Ok(RandomInstance {
                digraph: d,
                seed,
                edge_probability: bias,
                max_pivots,
                attempts,
            });
        }
    }
    Err(Error::Domain(format!(
        "no sample without a {k}-alternating path in {MAX_EAR_ATTEMPTS} attempts"
    )))
}

const MAX_EAR_ATTEMPTS: usize = 10_000;

fn sample_ears(rng: &mut ChaCha8Rng, n: usize, bias: f64) -> MultiDigraph {
    let mut d = MultiDigraph::new();
    let orient = |d: &mut MultiDigraph, rng: &mut ChaCha8Rng, a: VertexId, b: VertexId| {
        if rng.gen_bool(bias) {
            d.add_edge(a, b).expect("valid edge");
        } else {
            d.add_edge(b, a).expect("valid edge");
        }
    };
    let first = rng.gen_range(2..=n);
    for v in 0..first {
        d.add_vertex(format!("v{v}")).expect("fresh name");
    }
    for v in 0..first {
        orient(&mut d, rng, v, (v + 1) % first);
    }
    while d.vertex_count() < n {
        // open ears only: a closed ear would make its end a cut vertex
        let a = rng.gen_range(0..d.vertex_count());
        let b = (a + rng.gen_range(1..d.vertex_count())) % d.vertex_count();
        let fresh = rng.gen_range(1..=(n - d.vertex_count()).min(3));
        let mut cur = a;
        for _ in 0..fresh {
            let v = d.add_fresh_vertex(&format!("v{}", d.vertex_count()));
            orient(&mut d, rng, cur, v);
            cur = v;
        }
        orient(&mut d, rng, cur, b);
    }
    // a few chords between existing vertices
    for _ in 0..rng.gen_range(0..=2) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            orient(&mut d, rng, a, b);
        }
    }
    d
}

/// A random subdigraph: each edge kept with probability `keep`, then
/// vertices left isolated removed unless `keep_isolated`.
pub fn random_subdigraph(d: &MultiDigraph, keep: f64, seed: u64, keep_isolated: bool) -> MultiDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drop: Vec<_> = d.edge_ids().filter(|_| !rng.gen_bool(keep)).collect();
    let (sub, _) = d.delete_edges(&drop);
    if keep_isolated {
        return sub;
    }
    let isolated: Vec<VertexId> = sub.vertices().filter(|&v| sub.degree(v) == 0).collect();
    sub.delete_vertices(&isolated).0
}

/// Hypothesis check for one sequence member.
#[derive(Debug, Clone, Serialize)]
pub struct IndexCheck {
    /// 1-based position in the sequence.
    pub index: usize,
    pub max_pivots: Option<usize>,
    /// Whether the member has no `k`-alternating path.
    pub ok: bool,
}

/// Result of [`wqo_scan`].
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    /// 1-based `(j, j')` with `j < j'`.
    pub pair: Option<(usize, usize)>,
    pub certificate: Option<Embedding>,
    pub checks: Vec<IndexCheck>,
    /// True when a hypothesis violation stopped the scan.
    pub aborted: bool,
    pub elapsed_ms: u128,
}

/// Looks for the first pair `j < j'` (ordered by `j'`, then `j`) such that
/// member `j` embeds into member `j'` with labels respected. Members with a
/// `k`-alternating path are skipped, or stop the scan when `abort` is set.
/// Candidates for one `j'` are tried in parallel; the reported pair does not
/// depend on completion order.
pub fn wqo_scan(seq: &[LabelledDigraph], k: usize, guard: &SearchGuard, abort: bool) -> Result<ScanReport> {
    let start = Instant::now();
    let checks: Vec<IndexCheck> = seq
        .iter()
        .enumerate()
        .map(|(i, d)| IndexCheck {
            index: i + 1,
            max_pivots: max_pivots(&d.digraph, &AltPathQuery::default()),
            ok: !has_alt_path(&d.digraph, &AltPathQuery::new(k)),
        })
        .collect();
    let mut report = ScanReport {
        pair: None,
        certificate: None,
        aborted: false,
        checks,
        elapsed_ms: 0,
    };
    if abort && report.checks.iter().any(|c| !c.ok) {
        report.aborted = true;
        report.elapsed_ms = start.elapsed().as_millis();
        return Ok(report);
    }
    let c = EmbeddingConstraints::labelled();
    for hi in 1..seq.len() {
        if !report.checks[hi].ok {
            continue;
        }
        let found: Vec<Result<Option<Embedding>>> = (0..hi)
            .into_par_iter()
            .map(|lo| {
                if !report.checks[lo].ok || seq[lo].qo != seq[hi].qo {
                    return Ok(None);
                }
                find_embedding(&seq[lo], &seq[hi], &c, guard)
            })
            .collect();
        for (lo, r) in found.into_iter().enumerate() {
            if let Some(emb) = r? {
                report.pair = Some((lo + 1, hi + 1));
                report.certificate = Some(emb);
                report.elapsed_ms = start.elapsed().as_millis();
                return Ok(report);
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zigzag_pivots() {
        for i in 0..5 {
            let d = zigzag(i);
            assert_eq!(d.vertex_count(), i + 2);
            assert_eq!(max_pivots(&d, &AltPathQuery::default()), Some(i));
        }
    }

    #[test]
    fn leafed_orientation() {
        // zigzag(1) is v0 -> v1 <- v2: both ends are sources
        let d = leafed(1);
        assert_eq!(d.vertex_count(), 7);
        for v in [0, 2] {
            assert_eq!(d.in_edges(v).len(), 2);
        }
        // zigzag(2) ends at a sink
        let d = leafed(2);
        assert_eq!(d.out_edges(3).len(), 2);
    }

    #[test]
    fn random_instances_are_certified() {
        for seed in 0..5 {
            let r = random_no_k_alt(&RandomSpec::new(5, 2, seed)).unwrap();
            assert!(r.digraph.is_connected());
            assert!(r.max_pivots < 2);
            let again = random_no_k_alt(&RandomSpec::new(5, 2, seed)).unwrap();
            assert_eq!(r.digraph, again.digraph);
        }
        assert!(random_no_k_alt(&RandomSpec::new(5, 0, 1)).is_err());
    }

    #[test]
    fn ear_samples_are_two_connected() {
        for seed in 0..10 {
            let r = random_ear_no_k_alt(6, 3, seed, 0.8).unwrap();
            assert_eq!(r.digraph.vertex_count(), 6);
            assert!(is_two_connected(&r.digraph));
            assert!(r.max_pivots < 3);
        }
    }

    #[test]
    fn scan_finds_duplicates_and_chains() {
        let g = SearchGuard::default();
        let a = labelled_antichain(2);
        let seq = vec![labelled_antichain(1), a.clone(), labelled_antichain(3), a];
        let r = wqo_scan(&seq, 5, &g, false).unwrap();
        assert_eq!(r.pair, Some((2, 4)));
        let chain: Vec<_> = [&[(0, 1)][..], &[(0, 1), (1, 2)], &[(0, 1), (1, 2), (2, 0)]]
            .iter()
            .map(|e| LabelledDigraph::unlabelled(MultiDigraph::from_edges(3, e).unwrap()))
            .collect();
        assert_eq!(wqo_scan(&chain, 3, &g, false).unwrap().pair, Some((1, 2)));
        let anti: Vec<_> = (1..=5).map(labelled_antichain).collect();
        assert_eq!(wqo_scan(&anti, 6, &g, false).unwrap().pair, None);
    }
}
