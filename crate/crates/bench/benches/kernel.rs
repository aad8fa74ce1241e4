use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use sztwist::cobar::{baues_letter, diagonal, differential};
use sztwist::homology::augmentation::{fibre_filtered, twisted_complex};
use sztwist::homology::snf::smith_normal_form;
use sztwist::homology::Field;
use sztwist::szczarba::{psi, szczarba_t};
use sztwist::twisted_tensor::TwistedTensor;
use sztwist::models;
use sztwist_bench::{collapsed_twist, cobar_words, top_cell};

fn szczarba(c: &mut Criterion) {
    let mut g = c.benchmark_group("szczarba_t");
    for n in 2..=5 {
        let tw = collapsed_twist(n);
        let x = top_cell(tw.base(), n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| b.iter(|| szczarba_t(&tw, black_box(x))));
    }
    g.finish();
}

fn cobar(c: &mut Criterion) {
    let mut g = c.benchmark_group("cobar");
    for n in 3..=5 {
        let x = models::collapsed_simplex(n, 1);
        let top = top_cell(&x, n);
        g.bench_with_input(BenchmarkId::new("baues_letter", n), &top, |b, s| b.iter(|| baues_letter(&x, black_box(s)).unwrap()));
    }
    let (x, ws) = cobar_words(4, 4, 3);
    g.bench_function("diagonal_words_delta4", |b| {
        b.iter(|| ws.iter().map(|w| diagonal(&x, w).len()).sum::<usize>())
    });
    g.bench_function("differential_words_delta4", |b| {
        b.iter(|| ws.iter().map(|w| differential(&x, w).len()).sum::<usize>())
    });
    g.finish();
}

fn twisted(c: &mut Criterion) {
    let mut g = c.benchmark_group("twisted");
    let tp = models::simplex_cover(3, 3);
    let tt = TwistedTensor::new(&tp);
    let basis: Vec<_> = (0..=3).flat_map(|d| tt.basis(d).unwrap()).collect();
    g.bench_function("psi_cover3", |b| b.iter(|| basis.iter().map(|(x, y)| psi(&tp, x, y).len()).sum::<usize>()));
    let cover = models::double_cover();
    g.bench_function("twisted_complex_cover", |b| b.iter(|| twisted_complex(&TwistedTensor::new(&cover), 6).unwrap()));
    g.bench_function("fibre_ss_cover_f2", |b| b.iter(|| fibre_filtered(&cover, Field::Prime(2), 5).unwrap()));
    g.finish();
}

fn snf(c: &mut Criterion) {
    let x = models::standard_simplex(5);
    let mut g = c.benchmark_group("snf");
    for d in 1..=3 {
        let (rows, cols) = (x.nondegenerate(d - 1), x.nondegenerate(d));
        let m: Vec<Vec<num_bigint::BigInt>> = rows
            .iter()
            .map(|r| cols.iter().map(|s| sztwist::chainmaps::boundary_cell(&x, s).coeff(r)).collect())
            .collect();
        g.bench_with_input(BenchmarkId::new("simplex5_boundary", d), &m, |b, m| b.iter(|| smith_normal_form(black_box(m), cols.len())));
    }
    g.finish();
}

criterion_group!(benches, szczarba, cobar, twisted, snf);
criterion_main!(benches);
