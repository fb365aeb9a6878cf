use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use itsub::bcd::bcd_search;
use itsub::harness::{enumerate_universe, UniverseSpec};
use itsub::{check_sub, parse, trans_compose};

fn ty(s: &str) -> itsub::Ty {
    parse(s).unwrap()
}

fn bench_check_sub(c: &mut Criterion) {
    let universe = enumerate_universe(UniverseSpec {
        atom_count: 2,
        max_size: 2,
    });
    c.bench_function("check_sub/universe_2_2_pairs", |b| {
        b.iter(|| {
            let mut hits = 0usize;
            for x in &universe {
                for y in &universe {
                    hits += check_sub(x, y).is_some() as usize;
                }
            }
            black_box(hits)
        })
    });
    let a = ty("(c0 -> c1) & (c0 -> c2) & (c3 -> c4)");
    let goal = ty("c0 -> c1 & c2");
    c.bench_function("check_sub/distributive", |b| {
        b.iter(|| check_sub(black_box(&a), black_box(&goal)))
    });
}

fn bench_trans(c: &mut Criterion) {
    let a = ty("(c0 -> c1) & (c0 -> c2) & c3");
    let mid = ty("c0 -> c1 & c2");
    let top = ty("(c0 & c4) -> c2");
    let d1 = check_sub(&a, &mid).unwrap();
    let d2 = check_sub(&mid, &top).unwrap();
    c.bench_function("trans_compose/arrow", |b| {
        b.iter(|| trans_compose(black_box(&d1), black_box(&d2)).unwrap())
    });
}

fn bench_bcd(c: &mut Criterion) {
    let a = ty("(c0 -> c1) & (c0 -> c2)");
    let goal = ty("c0 -> c1 & c2");
    c.bench_function("bcd_search/distributive", |b| {
        b.iter(|| bcd_search(black_box(&a), black_box(&goal), 8))
    });
}

criterion_group!(benches, bench_check_sub, bench_trans, bench_bcd);
criterion_main!(benches);
