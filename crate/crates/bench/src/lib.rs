//! Fixtures shared by the benchmarks.

use effects_lab::corpus::Corpus;
use effects_lab::kleisli::random_kernel;
use effects_lab::sample::seeded;
use effects_lab::{FinSpace, KleisliMorphism, Monad};

/// `count` seeded random kernels `x ⇝ x`.
pub fn kernels(m: Monad, x: &FinSpace, count: usize, seed: u64) -> Vec<KleisliMorphism> {
    let mut rng = seeded(seed);
    (0..count).map(|_| random_kernel(m, x, x, &mut rng, 3).expect("kernel")).collect()
}

pub fn corpus_space(name: &str) -> FinSpace {
    Corpus::shipped().space(name).expect("shipped space").clone()
}
