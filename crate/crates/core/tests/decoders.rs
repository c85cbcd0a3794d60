//! Properties shared by every decoder, checked on random small codes.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use css_ldpc::decode::{
    bec_ml, bec_peeling, equivalent_matrices, is_stopping_set, transform_for_erasures, BpDecoder,
    GeneralizedDecoder, OsdDecoder,
};
use css_ldpc::stats::{wilson, Z95};
use css_ldpc::{
    BinMatrix, BinVector, ChannelObservation, CombinedConfig, CombinedDecoder, Schedule,
    WordDecoder,
};

fn sparse_code(seed: u64, rows: usize, cols: usize) -> BinMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = BinMatrix::random(rows, cols, 0.25, &mut rng);
    // No all-zero columns: every bit takes part in some check.
    for c in 0..cols {
        if h.col_weight(c) == 0 {
            h.set(rng.gen_range(0..rows), c, true);
        }
    }
    h
}

fn random_codeword(h: &BinMatrix, rng: &mut ChaCha8Rng) -> BinVector {
    let mut x = BinVector::zeros(h.cols());
    for b in h.nullspace_basis() {
        if rng.gen() {
            x ^= &b;
        }
    }
    x
}

fn decoders(h: &BinMatrix) -> Vec<Box<dyn WordDecoder>> {
    vec![
        Box::new(BpDecoder::new(h, Schedule::Flooding, 30)),
        Box::new(BpDecoder::new(h, Schedule::Serial, 30)),
        Box::new(CombinedDecoder::new(h, CombinedConfig::original(10, 2)).unwrap()),
        Box::new(CombinedDecoder::new(h, CombinedConfig::modified(10, 1, 3)).unwrap()),
        Box::new(OsdDecoder::new(h, 2).unwrap()),
        Box::new(GeneralizedDecoder::new(&equivalent_matrices(h, 3, 1), 30, None).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn converged_words_satisfy_the_checks(seed in any::<u64>(), rows in 3usize..10, extra in 4usize..20, eps in 0.01f64..0.3) {
        let h = sparse_code(seed, rows, rows + extra);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let x = random_codeword(&h, &mut rng);
        let y = &x ^ &BinVector::bernoulli(h.cols(), eps, &mut rng);
        let obs = ChannelObservation::bsc(&y, eps).unwrap();
        for d in decoders(&h) {
            let r = d.decode(&obs);
            if r.converged {
                prop_assert!(h.annihilates(r.word.as_ref().unwrap()), "{:?}", r.flavor);
            }
            prop_assert_eq!(d.decode(&obs), r);
        }
    }

    #[test]
    fn peeling_residue_is_a_stopping_set(seed in any::<u64>(), rows in 3usize..12, extra in 2usize..18, frac in 0.1f64..0.7) {
        let h = sparse_code(seed, rows, rows + extra);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let x = random_codeword(&h, &mut rng);
        let erasures: Vec<usize> = (0..h.cols()).filter(|_| rng.gen_bool(frac)).collect();
        let out = bec_peeling(&h, &erasures, &x).unwrap();
        prop_assert!(is_stopping_set(&h, &out.residual.variables));
        if out.result.converged {
            prop_assert_eq!(out.result.word.as_ref(), Some(&x));
        }
    }

    #[test]
    fn equivalent_matrices_have_the_same_codewords(seed in any::<u64>(), rows in 2usize..8, extra in 2usize..10) {
        let h = sparse_code(seed, rows, rows + extra);
        let list = equivalent_matrices(&h, 4, seed);
        prop_assert!(GeneralizedDecoder::new(&list, 5, None).is_ok());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        for _ in 0..16 {
            let x = random_codeword(&h, &mut rng);
            let v = BinVector::random(h.cols(), &mut rng);
            for m in &list {
                prop_assert!(m.annihilates(&x));
                prop_assert_eq!(m.annihilates(&v), h.annihilates(&v));
            }
        }
    }
}

/// Peeling on the transformed matrix agrees with ML on random erasure
/// patterns; on success both return the transmitted word.
#[test]
fn peeling_after_transform_matches_ml() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e0);
    let mut both = 0;
    for i in 0..300 {
        let rows = rng.gen_range(2..=15);
        let cols = rng.gen_range(rows + 1..=30);
        let h = sparse_code(i, rows, cols);
        let x = random_codeword(&h, &mut rng);
        let frac = rng.gen_range(0.05..0.6);
        let erasures: Vec<usize> = (0..cols).filter(|_| rng.gen_bool(frac)).collect();
        let t = transform_for_erasures(&h, &erasures);
        let peel = bec_peeling(&t, &erasures, &x).unwrap();
        let ml = bec_ml(&h, &erasures, &x).unwrap();
        assert_eq!(peel.result.converged, ml.converged, "instance {i}");
        if ml.converged {
            assert_eq!(peel.result.word, ml.word);
            assert_eq!(ml.word.as_ref(), Some(&x));
            both += 1;
        }
    }
    assert!(both > 50, "too few decodable instances: {both}");
}

/// Halving the crossover does not raise the block error rate.
#[test]
fn block_errors_fall_with_the_crossover() {
    let h = sparse_code(99, 24, 60);
    let dec = BpDecoder::new(&h, Schedule::Flooding, 40);
    let failures = |eps: f64, seed: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..600)
            .filter(|_| {
                let x = random_codeword(&h, &mut rng);
                let y = &x ^ &BinVector::bernoulli(h.cols(), eps, &mut rng);
                !dec.decode(&ChannelObservation::bsc(&y, eps).unwrap())
                    .is_exact(&x)
            })
            .count() as u64
    };
    for eps in [0.04, 0.08, 0.16] {
        let (_, upper) = wilson(failures(eps, 1), 600, Z95);
        let (lower_half, _) = wilson(failures(eps / 2.0, 2), 600, Z95);
        assert!(upper >= lower_half, "eps = {eps}");
    }
}
