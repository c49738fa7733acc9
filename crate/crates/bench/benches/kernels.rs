use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use effects_lab::corpus::Corpus;
use effects_lab::kleisli::{classify, kleisli_compose};
use effects_lab::monads::laws::{law_suite, LawConfig};
use effects_lab::namegen::{ng_observationality_experiment, NameGen, Staged};
use effects_lab::observe::{observe_n, sampled_observationality};
use effects_lab::sobrify::sobrify;
use effects_lab::space::enumerate::{set_space, topologies};
use effects_lab::{Monad, Obj};
use effects_lab_bench::{corpus_space, kernels};

fn classifier(c: &mut Criterion) {
    let x = corpus_space("three");
    for m in [Monad::Distribution, Monad::Reader, Monad::Maybe] {
        let ks = kernels(m, &x, 32, 1);
        c.bench_function(&format!("classify/{m}/three"), |b| {
            b.iter(|| ks.iter().map(|k| classify(black_box(k)).unwrap().thunkable as usize).sum::<usize>())
        });
    }
    let ks = kernels(Monad::Giry, &corpus_space("pairs4"), 16, 2);
    c.bench_function("compose/giry/pairs4", |b| {
        b.iter(|| ks.windows(2).map(|w| kleisli_compose(&w[0], &w[1]).unwrap()).count())
    });
}

fn sobrification(c: &mut Criterion) {
    let tops = topologies(4).unwrap();
    c.bench_function("sobrify/lower/all-4-point-topologies", |b| {
        b.iter(|| tops.iter().map(|x| sobrify(Monad::Lower, x).unwrap().dx().len()).sum::<usize>())
    });
}

fn observation(c: &mut Criterion) {
    let corpus = Corpus::shipped();
    let o = corpus.outer("lopsided").unwrap();
    let ob = Obj::space(&o.space);
    c.bench_function("observe_n/giry/n=4", |b| b.iter(|| observe_n(Monad::Giry, &ob, black_box(&o.elem), 4).unwrap()));
    let spaces: Vec<_> = (1..=4).map(set_space).collect();
    c.bench_function("observationality/distribution/200-pairs", |b| {
        b.iter(|| sampled_observationality(Monad::Distribution, &spaces, 200, 0).unwrap())
    });
}

fn laws(c: &mut Criterion) {
    let x = corpus_space("coin");
    let cfg = LawConfig::default();
    c.bench_function("law_suite/giry/coin", |b| b.iter(|| law_suite(&Monad::Giry, &x, &cfg).unwrap()));
    let ng = NameGen::new(5);
    c.bench_function("namegen/experiment/N", |b| {
        b.iter(|| ng_observationality_experiment(&ng, &Staged::Names, 3).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = classifier, sobrification, observation, laws
}
criterion_main!(benches);
