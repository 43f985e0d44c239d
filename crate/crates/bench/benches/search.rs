use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use strimm_core::altpath::{max_pivots, AltPathQuery};
use strimm_core::corpus::{digraphs, CorpusSpec};
use strimm_core::decomp::{hypothesis_witness, min_hitting_set, sp2seps, SepMode};
use strimm_core::harness::{labelled_antichain, random_ear_no_k_alt, zigzag};
use strimm_core::immersion::{find_embedding, EmbeddingConstraints, SearchGuard};
use strimm_core::LabelledDigraph;

fn embedding(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_embedding");
    let guard = SearchGuard::default();
    for i in [2, 3, 4] {
        let guest = LabelledDigraph::unlabelled(zigzag(i));
        let host = LabelledDigraph::unlabelled(zigzag(2 * i + 1));
        let free = EmbeddingConstraints::default();
        group.bench_with_input(BenchmarkId::new("zigzag", i), &i, |b, _| {
            b.iter(|| find_embedding(black_box(&guest), black_box(&host), &free, &guard).unwrap())
        });
        // antichain pairs never embed, so the whole space is searched
        let (small, large) = (labelled_antichain(i), labelled_antichain(i + 1));
        let labelled = EmbeddingConstraints::labelled();
        group.bench_with_input(BenchmarkId::new("antichain", i), &i, |b, _| {
            b.iter(|| find_embedding(black_box(&small), black_box(&large), &labelled, &guard).unwrap())
        });
    }
    group.finish();
}

fn pivots(c: &mut Criterion) {
    let corpus = digraphs(&CorpusSpec::connected(5, 6));
    c.bench_function("max_pivots/connected(5,6)", |b| {
        b.iter(|| {
            corpus
                .iter()
                .map(|d| max_pivots(black_box(d), &AltPathQuery::default()).unwrap_or(0))
                .sum::<usize>()
        })
    });
}

fn decomposition(c: &mut Criterion) {
    let corpus = digraphs(&CorpusSpec::two_connected(5, 7));
    c.bench_function("hypothesis_witness/two_connected(5,7)", |b| {
        b.iter(|| corpus.iter().filter(|d| hypothesis_witness(black_box(d)).is_none()).count())
    });
    c.bench_function("sp2seps_all/two_connected(5,7)", |b| {
        b.iter(|| {
            corpus
                .iter()
                .map(|d| sp2seps(black_box(d), SepMode::All).map_or(0, |l| l.len()))
                .sum::<usize>()
        })
    });
    let samples: Vec<_> = (0..20)
        .map(|seed| random_ear_no_k_alt(8, 3, seed, 0.8).unwrap().digraph)
        .collect();
    c.bench_function("min_hitting_set/ear(8)", |b| {
        b.iter(|| samples.iter().map(|d| min_hitting_set(black_box(d), 2).unwrap().vertices.len()).sum::<usize>())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = embedding, pivots, decomposition
}
criterion_main!(benches);
