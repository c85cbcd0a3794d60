//! Shared inputs for the benchmarks. Everything is seeded so runs compare.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use css_ldpc::catalog::{Catalog, CssSystem};
use css_ldpc::{BinMatrix, BinVector, ChannelObservation, ColumnSelection};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A catalog code with its CSS pair, lightest column selection.
pub fn system(id: &str) -> CssSystem {
    Catalog::embedded()
        .entry(id)
        .and_then(|e| e.build_system(ColumnSelection::Lightest))
        .unwrap_or_else(|e| panic!("catalog code {id}: {e}"))
}

/// `count` BSC observations of random codewords of `null(h)`.
pub fn observations(
    system: &CssSystem,
    epsilon: f64,
    count: usize,
    seed: u64,
) -> Vec<(BinVector, ChannelObservation)> {
    let mut rng = rng(seed);
    let n = system.pair.n();
    (0..count)
        .map(|_| {
            let x = system.pair.random_c1(&mut rng);
            let e = BinVector::bernoulli(n, epsilon, &mut rng);
            let y = &x ^ &e;
            let obs = ChannelObservation::bsc(&y, epsilon).expect("crossover in range");
            (x, obs)
        })
        .collect()
}

pub fn random_matrix(rows: usize, cols: usize, density: f64, seed: u64) -> BinMatrix {
    BinMatrix::random(rows, cols, density, &mut rng(seed))
}
