//! Shared corpus builders for the integration suites.

use framelab::constructions::{dual_parameterization, random_frame, SplitMix64};
use framelab::frame::DualPair;
use framelab::linalg::CMatrix;

/// Random dual pair: a seeded random frame paired with the dual generated
/// by a random parameter block. Deterministic in the seed.
pub fn random_dual_pair(n_vectors: usize, dim: usize, seed: u64) -> DualPair {
    let frame = random_frame(n_vectors, dim, seed).expect("random frame generation");
    let param = dual_parameterization(&frame).expect("dual parameterization");
    let mut rng = SplitMix64::new(seed ^ 0xD1AB_0715_C0FF_EE11);
    let v = CMatrix::from_fn(dim, n_vectors, |_, _| rng.next_complex_normal() * 0.5);
    param.dual_from_parameters(&v).expect("parameterized dual")
}

/// The (N, n) corpus shapes used by several criteria: n in 2..=6 and
/// N in n..=2n, cycled deterministically.
pub fn corpus_shape(index: usize) -> (usize, usize) {
    let dims = [2usize, 3, 4, 5, 6];
    let dim = dims[index % dims.len()];
    let spread = (index / dims.len()) % (dim + 1);
    (dim + spread, dim)
}

/// `count` random dual pairs over the corpus shapes.
pub fn random_corpus(count: usize, base_seed: u64) -> Vec<DualPair> {
    (0..count)
        .map(|i| {
            let (n_vectors, dim) = corpus_shape(i);
            random_dual_pair(n_vectors, dim, base_seed.wrapping_add(i as u64))
        })
        .collect()
}
