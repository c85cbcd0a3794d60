use proptest::prelude::*;

use css_ldpc::bb84::{delta_for_bound, eve_bound, EveBoundInput, Protocol};
use css_ldpc::catalog::Catalog;
use css_ldpc::decode::BpDecoder;
use css_ldpc::{ColumnSelection, Schedule};

fn bound(delta: f64, k: u32) -> f64 {
    eve_bound(EveBoundInput { delta, k }).unwrap()
}

#[test]
fn runs_keep_their_bookkeeping() {
    let sys = Catalog::embedded()
        .entry("mini/0.8")
        .unwrap()
        .build_system(ColumnSelection::Lightest)
        .unwrap();
    let keymap = sys.keymap().unwrap();
    let decoder = BpDecoder::new(sys.pair.h1(), Schedule::Flooding, 50);
    let protocol = Protocol {
        pair: &sys.pair,
        keymap,
        encoder: sys.encoder.as_ref(),
        decoder: &decoder,
    };
    let mut agreed = 0;
    for seed in 0..200 {
        let eps = [0.0, 0.002, 0.005, 0.01][seed as usize % 4];
        let run = protocol.run(eps, seed, seed % 3 == 0).unwrap();
        assert_eq!(run.announced, &run.x ^ &run.u);
        assert_eq!(run.decoder_input, &run.u ^ &run.e);
        assert_eq!(run.agreed, run.bob_key.as_ref() == Some(&run.alice_key));
        agreed += run.agreed as usize;
    }
    assert!(agreed >= 150, "{agreed} of 200 runs agreed");
    assert_eq!(
        protocol.run(0.01, 7, false).unwrap(),
        protocol.run(0.01, 7, false).unwrap()
    );
}

proptest! {
    #[test]
    fn bound_is_nonnegative_and_increasing(a in 0.0f64..1.0, b in 0.0f64..1.0, k in 1u32..2000) {
        // Stay clear of the flat maximum at 1 - 2^(-2k).
        let hi = 0.95 * (1.0 - (-2.0 * k as f64).exp2());
        let (lo, up) = if a < b { (a, b) } else { (b, a) };
        let (lo, up) = (lo.min(hi), up.min(hi));
        prop_assert!(bound(lo, k) >= 0.0);
        if up - lo > 1e-9 {
            prop_assert!(bound(up, k) > bound(lo, k));
        }
        if lo > 0.0 && lo <= 1.0 - (-2.0 * (k + 1) as f64).exp2() {
            prop_assert!(bound(lo, k + 1) > bound(lo, k));
        }
    }

    #[test]
    fn inverse_round_trips(delta in 1e-6f64..0.5, k in 1u32..800) {
        let target = bound(delta, k);
        let back = delta_for_bound(target, k).unwrap();
        prop_assert!((back - delta).abs() <= 1e-9 * (1.0 + delta));
    }
}
