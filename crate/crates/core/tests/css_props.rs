//! CSS identity, key maps and coset equality on catalog and random codes.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use css_ldpc::catalog::{Catalog, CssSystem};
use css_ldpc::construct::SystematicEncoder;
use css_ldpc::css::{build_css, coset_equal, css_rate, make_key_map, verify_css, Quotient};
use css_ldpc::{BinMatrix, BinVector, ColumnSelection, Encoder};
use num_rational::Ratio;

fn small_system(id: &str) -> CssSystem {
    Catalog::embedded()
        .entry(id)
        .unwrap()
        .build_system(ColumnSelection::Lightest)
        .unwrap()
}

#[test]
fn keys_are_constant_on_c2_cosets() {
    for id in ["toy", "mini/0.55", "mini/0.8", "mini/B-0.8", "nr480"] {
        let sys = small_system(id);
        let keymap = sys.keymap().unwrap();
        assert_eq!(keymap.key_len(), sys.pair.css_dimension());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let u = sys.pair.random_c1(&mut rng);
            let w = sys.pair.random_c2(&mut rng);
            assert_eq!(
                keymap.key(&u).unwrap(),
                keymap.key(&(&u ^ &w)).unwrap(),
                "{id}"
            );
        }
    }
}

/// A 4x16 full-rank matrix small enough to enumerate all of `C1`.
fn enumerable_pair() -> (BinMatrix, css_ldpc::CssPair) {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    loop {
        let h = BinMatrix::random(4, 16, 0.4, &mut rng);
        if h.rank() < 4 {
            continue;
        }
        let enc = SystematicEncoder::from_parity_check(&h);
        let pair = build_css(&h, &enc, ColumnSelection::Lightest).unwrap();
        if pair.h2_full_rank() {
            return (h, pair);
        }
    }
}

#[test]
fn key_map_is_onto_and_separates_cosets() {
    let (h, pair) = enumerable_pair();
    let keymap = make_key_map(&pair).unwrap();
    assert_eq!(keymap.key_len(), 16 - 2 * 4);
    let enc = SystematicEncoder::from_parity_check(&h);
    let words: Vec<BinVector> = (0u32..1 << enc.info_len())
        .map(|i| {
            let bits: Vec<u8> = (0..enc.info_len()).map(|b| (i >> b & 1) as u8).collect();
            enc.encode(&BinVector::from_bits(&bits)).unwrap()
        })
        .collect();
    let mut keys: Vec<BinVector> = words.iter().map(|u| keymap.key(u).unwrap()).collect();
    for (a, ka) in words.iter().zip(&keys).step_by(7) {
        for (b, kb) in words.iter().zip(&keys).step_by(5) {
            assert_eq!(
                coset_equal(&pair, a, b, Quotient::C1OverC2).unwrap(),
                ka == kb
            );
        }
    }
    keys.sort_by(|a, b| a.lex_cmp(b));
    keys.dedup();
    assert_eq!(keys.len(), 1 << keymap.key_len());
}

#[test]
fn toy_key_map_covers_its_single_value() {
    let sys = small_system("toy");
    assert_eq!(sys.pair.css_dimension(), 0);
    assert_eq!(sys.keymap().unwrap().key_len(), 0);
}

#[test]
fn flipped_h2_bit_breaks_the_identity() {
    let sys = small_system("mini/0.8");
    let mut h2 = sys.pair.h2().clone();
    h2.flip(3, 17);
    let broken = css_ldpc::CssPair::from_parts(sys.pair.h1().clone(), h2).unwrap();
    let report = verify_css(&broken);
    assert!(!report.product_zero);
    assert_eq!(report.bad_rows, vec![3]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_codes_satisfy_the_identity(seed in any::<u64>(), m in 2usize..10, extra in 3usize..30) {
        let n = 2 * m + extra;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = BinMatrix::random(m, n, 0.3, &mut rng);
        prop_assume!(h.rank() == m);
        let enc = SystematicEncoder::from_parity_check(&h);
        for selection in [ColumnSelection::Lightest, ColumnSelection::Heaviest] {
            let pair = build_css(&h, &enc, selection).unwrap();
            prop_assert!(pair.h1().mul_transpose(pair.h2()).unwrap().is_zero());
            if pair.h2_full_rank() {
                prop_assert_eq!(css_rate(&pair), Ratio::new(n - 2 * m, n));
                let r1 = Ratio::new(n - m, n);
                prop_assert_eq!(css_rate(&pair), r1 * 2 - 1);
            }
            let u = pair.random_c1(&mut rng);
            let w = pair.random_c2(&mut rng);
            prop_assert!(coset_equal(&pair, &u, &(&u ^ &w), Quotient::C1OverC2).unwrap());
            let v = pair.random_c2perp(&mut rng);
            let z = pair.random_c1perp(&mut rng);
            prop_assert!(coset_equal(&pair, &v, &(&v ^ &z), Quotient::C2PerpOverC1Perp).unwrap());
        }
    }
}
