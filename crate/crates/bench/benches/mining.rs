use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use gdpm_bench::{clustered_context, random_context};
use gdpm_core::context::contranominal;
use gdpm_core::{mine, FormalContext, MineOptions, SetTrie, Variant};

fn variants(c: &mut Criterion, group: &str, inputs: &[(String, FormalContext)]) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    for (label, ctx) in inputs {
        for variant in [Variant::Int, Variant::Ext] {
            let opts = MineOptions::new(variant);
            g.bench_with_input(
                BenchmarkId::new(variant.to_string(), label),
                ctx,
                |b, ctx| b.iter(|| mine(black_box(ctx), &opts)),
            );
        }
        let opts = MineOptions::new(Variant::Int).parallel(true);
        g.bench_with_input(BenchmarkId::new("int-parallel", label), ctx, |b, ctx| {
            b.iter(|| mine(black_box(ctx), &opts))
        });
    }
    g.finish();
}

fn contranominal_scales(c: &mut Criterion) {
    let inputs: Vec<_> = [8, 10, 12]
        .into_iter()
        .map(|n| (format!("n={n}"), contranominal(n).unwrap()))
        .collect();
    variants(c, "contranominal", &inputs);
}

fn random_contexts(c: &mut Criterion) {
    let inputs = vec![
        ("200x20 d=0.3".to_string(), random_context(1, 200, 20, 0.3)),
        (
            "1000x30 d=0.2".to_string(),
            random_context(2, 1000, 30, 0.2),
        ),
        (
            "400x20 clustered".to_string(),
            clustered_context(3, 400, 20),
        ),
    ];
    variants(c, "random", &inputs);
}

fn trie_insertion(c: &mut Criterion) {
    let ctx = random_context(4, 300, 24, 0.35);
    let s = mine(&ctx, &MineOptions::default());
    let seqs: Vec<Vec<u32>> = s
        .entries()
        .map(|(_, e)| e.closed.clone().into_vec())
        .collect();
    c.bench_function("settrie/insert closed itemsets", |b| {
        b.iter(|| {
            let mut t = SetTrie::new();
            for seq in &seqs {
                t.insert(black_box(seq)).unwrap();
            }
            t.node_count()
        })
    });
}

criterion_group!(
    benches,
    contranominal_scales,
    random_contexts,
    trie_insertion
);
criterion_main!(benches);
