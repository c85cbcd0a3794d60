//! Tanner-graph view of a parity-check matrix and the code-preserving row
//! transformations applied before message passing.
//!
//! Every transformation here only adds rows to other rows, so the nullspace
//! (the code) is unchanged.

use crate::gf2::BinMatrix;

/// Bipartite adjacency derived from a parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    /// Checks adjacent to each variable node, ascending.
    pub var_adj: Vec<Vec<usize>>,
    /// Variables adjacent to each check node, ascending.
    pub check_adj: Vec<Vec<usize>>,
}

impl TannerGraph {
    pub fn new(h: &BinMatrix) -> Self {
        TannerGraph {
            var_adj: h.col_supports(),
            check_adj: (0..h.rows()).map(|r| h.row_support(r)).collect(),
        }
    }

    pub fn variable_nodes(&self) -> usize {
        self.var_adj.len()
    }

    pub fn check_nodes(&self) -> usize {
        self.check_adj.len()
    }

    pub fn edges(&self) -> usize {
        self.check_adj.iter().map(Vec::len).sum()
    }
}

/// A length-4 cycle `v_a - c_a - v_b - c_b - v_a`, stored canonically with
/// `v_a < v_b` and `c_a < c_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FourCycle {
    pub v_a: usize,
    pub v_b: usize,
    pub c_a: usize,
    pub c_b: usize,
}

/// All 4-cycles, ordered by `(c_a, c_b, v_a, v_b)`.
pub fn enumerate_4cycles(h: &BinMatrix) -> Vec<FourCycle> {
    let mut out = Vec::new();
    for c_a in 0..h.rows() {
        for c_b in c_a + 1..h.rows() {
            if h.row_overlap(c_a, c_b) < 2 {
                continue;
            }
            let common = (&h.row(c_a) & &h.row(c_b)).support();
            for (i, &v_a) in common.iter().enumerate() {
                for &v_b in &common[i + 1..] {
                    out.push(FourCycle { v_a, v_b, c_a, c_b });
                }
            }
        }
    }
    out
}

#[inline]
fn pairs(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Number of 4-cycles: the sum over row pairs of `C(overlap, 2)`.
pub fn count_4cycles(h: &BinMatrix) -> usize {
    let mut total = 0;
    for a in 0..h.rows() {
        for b in a + 1..h.rows() {
            total += pairs(h.row_overlap(a, b));
        }
    }
    total
}

/// Outcome of [`remove_4cycles`].
#[derive(Clone, Debug)]
pub struct CycleRemoval {
    pub matrix: BinMatrix,
    pub initial_cycles: usize,
    pub residual_cycles: usize,
    pub passes: usize,
}

/// Greedy 4-cycle removal by row additions.
///
/// Each sweep visits row pairs with overlap at least two and replaces the
/// heavier row (the later one on ties) by the sum of both whenever that
/// strictly lowers `(4-cycle count, total weight)` lexicographically. Stops at
/// zero cycles, at a sweep without improvement, or after `max_passes` sweeps.
pub fn remove_4cycles(h: &BinMatrix, max_passes: usize) -> CycleRemoval {
    let mut m = h.clone();
    let rows = m.rows();
    let initial = count_4cycles(&m);
    let mut total = initial;
    let mut weights = m.row_weights();
    let mut passes = 0;

    while total > 0 && passes < max_passes {
        passes += 1;
        let mut improved = false;
        for a in 0..rows {
            for b in a + 1..rows {
                if m.row_overlap(a, b) < 2 {
                    continue;
                }
                let (heavy, light) = if weights[a] > weights[b] {
                    (a, b)
                } else {
                    (b, a)
                };
                let candidate = &m.row(heavy) ^ &m.row(light);
                let new_weight = candidate.weight();
                let mut delta: isize = 0;
                for r in 0..rows {
                    if r == heavy {
                        continue;
                    }
                    delta += pairs(m.row_overlap_with(r, &candidate)) as isize;
                    delta -= pairs(m.row_overlap(heavy, r)) as isize;
                }
                let better = delta < 0 || (delta == 0 && new_weight < weights[heavy]);
                if better {
                    m.set_row(heavy, &candidate);
                    weights[heavy] = new_weight;
                    total = (total as isize + delta) as usize;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }

    debug_assert_eq!(total, count_4cycles(&m));
    CycleRemoval {
        matrix: m,
        initial_cycles: initial,
        residual_cycles: total,
        passes,
    }
}

/// Outcome of [`reduce_column_weights`]; `achieved` lists
/// `(column, final weight)` for every target.
#[derive(Clone, Debug)]
pub struct ColumnReduction {
    pub matrix: BinMatrix,
    pub achieved: Vec<(usize, usize)>,
}

impl ColumnReduction {
    /// Targets still above `max_weight`.
    pub fn shortfall(&self, max_weight: usize) -> Vec<(usize, usize)> {
        self.achieved
            .iter()
            .copied()
            .filter(|&(_, w)| w > max_weight)
            .collect()
    }
}

/// Lowers the weight of each target column to at most `max_weight` by adding
/// a pivot row (lightest incident row, lowest index on ties) to other
/// incident rows in ascending order. Targets are processed in the order
/// given; later targets may disturb earlier ones, so the final weights are
/// reported rather than guaranteed.
pub fn reduce_column_weights(
    h: &BinMatrix,
    targets: &[usize],
    max_weight: usize,
) -> ColumnReduction {
    let mut m = h.clone();
    let max_weight = max_weight.max(1);
    for &t in targets {
        assert!(t < m.cols(), "target column {t} out of range");
        let incident: Vec<usize> = (0..m.rows()).filter(|&r| m.get(r, t)).collect();
        if incident.len() <= max_weight {
            continue;
        }
        let pivot = *incident
            .iter()
            .min_by_key(|&&r| (m.row_weight(r), r))
            .expect("non-empty");
        let mut remaining = incident.len();
        for &r in &incident {
            if remaining <= max_weight {
                break;
            }
            if r != pivot {
                m.add_row(pivot, r);
                remaining -= 1;
            }
        }
    }
    let achieved = targets.iter().map(|&t| (t, m.col_weight(t))).collect();
    ColumnReduction {
        matrix: m,
        achieved,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> BinMatrix {
        BinMatrix::from_strs(&["111100", "001100", "000111"]).unwrap()
    }

    #[test]
    fn graph_degrees_match_weights() {
        let h = example1();
        let g = TannerGraph::new(&h);
        assert_eq!(g.variable_nodes(), 6);
        assert_eq!(g.check_nodes(), 3);
        assert_eq!(g.edges(), h.weight());
        for (v, adj) in g.var_adj.iter().enumerate() {
            assert_eq!(adj.len(), h.col_weight(v));
        }
    }

    #[test]
    fn example1_has_the_marked_cycle() {
        assert_eq!(
            enumerate_4cycles(&example1()),
            vec![FourCycle {
                v_a: 2,
                v_b: 3,
                c_a: 0,
                c_b: 1
            }]
        );
        assert!(enumerate_4cycles(&BinMatrix::identity(5)).is_empty());
        let ones = BinMatrix::from_strs(&["11", "11"]).unwrap();
        assert_eq!(enumerate_4cycles(&ones).len(), 1);
        assert_eq!(count_4cycles(&ones), 1);
    }

    #[test]
    fn removal_fixpoint_and_small_cases() {
        let id = BinMatrix::identity(4);
        let out = remove_4cycles(&id, 50);
        assert_eq!(out.matrix, id);
        assert_eq!(out.passes, 0);

        let ones = BinMatrix::from_strs(&["11", "11"]).unwrap();
        let out = remove_4cycles(&ones, 50);
        assert_eq!(out.residual_cycles, 0);
        assert!(out.matrix.same_rowspace(&ones));
        assert_eq!(out.matrix.nullspace_basis(), vec!["11".parse().unwrap()]);

        let h = example1();
        let out = remove_4cycles(&h, 50);
        assert_eq!(out.initial_cycles, 1);
        assert_eq!(out.residual_cycles, 0);
        assert_eq!(count_4cycles(&out.matrix), 0);
        for v in h.nullspace_basis() {
            assert!(out.matrix.annihilates(&v));
        }
        for v in out.matrix.nullspace_basis() {
            assert!(h.annihilates(&v));
        }
    }

    #[test]
    fn column_reduction_examples() {
        let h = BinMatrix::from_strs(&["11", "10"]).unwrap();
        let out = reduce_column_weights(&h, &[0], 1);
        assert_eq!(out.matrix, BinMatrix::from_strs(&["01", "10"]).unwrap());
        assert_eq!(out.achieved, vec![(0, 1)]);
        assert!(out.matrix.nullspace_basis().is_empty());

        let h = example1();
        let out = reduce_column_weights(&h, &[0], 2);
        assert_eq!(out.matrix, h);
        assert!(out.shortfall(2).is_empty());
    }
}
