use proptest::prelude::*;

use css_ldpc::tanner::{count_4cycles, enumerate_4cycles, reduce_column_weights, remove_4cycles};
use css_ldpc::{BinMatrix, FourCycle};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinMatrix> {
    (2..=max_rows, 2..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::bool::weighted(0.3), r * c)
            .prop_map(move |bits| BinMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
    })
}

fn brute_force(h: &BinMatrix) -> Vec<FourCycle> {
    let mut out = Vec::new();
    for c_a in 0..h.rows() {
        for c_b in c_a + 1..h.rows() {
            for v_a in 0..h.cols() {
                for v_b in v_a + 1..h.cols() {
                    if h.get(c_a, v_a) && h.get(c_a, v_b) && h.get(c_b, v_a) && h.get(c_b, v_b) {
                        out.push(FourCycle { v_a, v_b, c_a, c_b });
                    }
                }
            }
        }
    }
    out
}

/// Same null space: each basis annihilated by the other matrix and equal ranks.
fn same_nullspace(a: &BinMatrix, b: &BinMatrix) -> bool {
    a.rank() == b.rank()
        && a.nullspace_basis().iter().all(|x| b.annihilates(x))
        && b.nullspace_basis().iter().all(|x| a.annihilates(x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enumeration_matches_brute_force(h in matrix(20, 40)) {
        let mut fast = enumerate_4cycles(&h);
        let mut slow = brute_force(&h);
        fast.sort();
        slow.sort();
        prop_assert_eq!(fast.len(), count_4cycles(&h));
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn cycle_removal_preserves_the_code(h in matrix(12, 24), passes in 1usize..8) {
        let out = remove_4cycles(&h, passes);
        prop_assert!(same_nullspace(&h, &out.matrix));
        prop_assert_eq!(out.residual_cycles, count_4cycles(&out.matrix));
        prop_assert!(out.residual_cycles <= out.initial_cycles);
    }

    #[test]
    fn cycle_free_output_is_a_fixpoint(h in matrix(12, 24)) {
        let out = remove_4cycles(&h, 50);
        if out.residual_cycles == 0 {
            let again = remove_4cycles(&out.matrix, 50);
            prop_assert_eq!(again.matrix, out.matrix);
        }
    }

    #[test]
    fn column_reduction_preserves_the_code(
        h in matrix(12, 24),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..5),
        max_weight in 1usize..4,
    ) {
        let targets: Vec<usize> = picks.iter().map(|i| i.index(h.cols())).collect();
        let out = reduce_column_weights(&h, &targets, max_weight);
        prop_assert!(same_nullspace(&h, &out.matrix));
        for &(c, w) in &out.achieved {
            prop_assert_eq!(out.matrix.col_weight(c), w);
        }
        // A lone target always reaches the bound: one pivot row is left.
        let single = reduce_column_weights(&h, &targets[..1], max_weight);
        prop_assert!(single.shortfall(max_weight).is_empty());
    }
}
