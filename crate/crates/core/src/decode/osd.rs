//! Ordered statistics decoding.
//!
//! Candidates are compared by soft discrepancy to the observation. Costs
//! within `TIE_TOL * (1 + best)` of each other count as equal and the
//! lexicographically smaller codeword wins, so the result is a well defined
//! function of the input even when many LLR magnitudes coincide.

use std::cmp::Ordering;

use super::channel::{hard_decision, soft_discrepancy, ChannelObservation};
use super::{DecodeResult, Flavor, WordDecoder};
use crate::error::{Error, Result};
use crate::gf2::{BinMatrix, BinVector};

pub(crate) const TIE_TOL: f64 = 1e-9;

/// Decoded codeword and its soft discrepancy.
#[derive(Clone, Debug, PartialEq)]
pub struct OsdOutput {
    pub word: BinVector,
    pub metric: f64,
}

/// OSD over the code spanned by the rows of a full-rank generator.
#[derive(Clone, Debug)]
pub struct Osd {
    generator: BinMatrix,
}

impl Osd {
    pub fn new(generator: &BinMatrix) -> Result<Osd> {
        let rank = generator.rank();
        if rank != generator.rows() {
            return Err(Error::RankDeficient {
                expected: generator.rows(),
                measured: rank,
            });
        }
        Ok(Osd {
            generator: generator.clone(),
        })
    }

    /// OSD over the nullspace of `h`.
    pub fn from_parity_check(h: &BinMatrix) -> Result<Osd> {
        let basis = h.nullspace_basis();
        Osd::new(&BinMatrix::from_rows(h.cols(), &basis)?)
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn len(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.generator.cols() == 0
    }

    pub fn generator(&self) -> &BinMatrix {
        &self.generator
    }

    /// Reprocesses every pattern of at most `order` flips on the most
    /// reliable basis.
    pub fn decode(&self, llr: &[f64], order: usize) -> OsdOutput {
        let n = self.len();
        assert_eq!(llr.len(), n, "llr length mismatch");
        let k = self.dimension();
        let hard = hard_decision(llr);
        if k == 0 {
            let word = BinVector::zeros(n);
            let metric = soft_discrepancy(&word, llr);
            return OsdOutput { word, metric };
        }

        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| llr[b].abs().total_cmp(&llr[a].abs()).then(a.cmp(&b)));
        let permuted = self.generator.select_columns(&perm);
        let ech = permuted.echelon();
        debug_assert_eq!(ech.rank(), k);
        let pivots = ech.pivots().to_vec();
        let parity: Vec<usize> = ech.free_columns();
        let reduced = ech.reduced();

        let search = Search::new(llr, &hard, &perm, &pivots, &parity, reduced);
        let pattern = search.run(order.min(k), |a, b| {
            let wa = search.codeword(a);
            let wb = search.codeword(b);
            wa.lex_cmp(&wb)
        });
        let word = search.codeword(&pattern);
        let metric = soft_discrepancy(&word, llr);
        OsdOutput { word, metric }
    }
}

/// Reprocessing state in permuted coordinates.
struct Search<'a> {
    perm: &'a [usize],
    pivots: &'a [usize],
    reduced: &'a BinMatrix,
    /// Hard decisions on the basis positions.
    info: Vec<bool>,
    info_cost: Vec<f64>,
    /// Parity part of each reduced row, packed.
    parity_rows: Vec<Vec<u64>>,
    /// Parity disagreement of the order-0 candidate.
    base: Vec<u64>,
    /// `tables[b][v]`: weight of byte value `v` at parity byte `b`.
    tables: Vec<[f64; 256]>,
}

impl<'a> Search<'a> {
    fn new(
        llr: &[f64],
        hard: &BinVector,
        perm: &'a [usize],
        pivots: &'a [usize],
        parity: &[usize],
        reduced: &'a BinMatrix,
    ) -> Self {
        let k = pivots.len();
        let info: Vec<bool> = pivots.iter().map(|&p| hard.get(perm[p])).collect();
        let info_cost: Vec<f64> = pivots.iter().map(|&p| llr[perm[p]].abs()).collect();
        let par = reduced.select_columns(parity);
        let parity_rows: Vec<Vec<u64>> = (0..k).map(|i| par.row_words(i).to_vec()).collect();
        let words = parity.len().div_ceil(64);

        let mut base = vec![0u64; words];
        for (i, row) in parity_rows.iter().enumerate() {
            if info[i] {
                for (b, r) in base.iter_mut().zip(row) {
                    *b ^= r;
                }
            }
        }
        for (j, &c) in parity.iter().enumerate() {
            if hard.get(perm[c]) {
                base[j / 64] ^= 1 << (j % 64);
            }
        }

        let bytes = parity.len().div_ceil(8);
        let mut tables = vec![[0.0; 256]; bytes];
        for (b, table) in tables.iter_mut().enumerate() {
            for v in 1..256usize {
                let low = v.trailing_zeros() as usize;
                let j = b * 8 + low;
                let w = if j < parity.len() {
                    llr[perm[parity[j]]].abs()
                } else {
                    0.0
                };
                table[v] = table[v & (v - 1)] + w;
            }
        }

        Search {
            perm,
            pivots,
            reduced,
            info,
            info_cost,
            parity_rows,
            base,
            tables,
        }
    }

    fn weighted(&self, words: &[u64]) -> f64 {
        let mut total = 0.0;
        for (w, &word) in words.iter().enumerate() {
            let mut x = word;
            let mut b = w * 8;
            while x != 0 {
                total += self.tables[b][(x & 0xff) as usize];
                x >>= 8;
                b += 1;
            }
        }
        total
    }

    /// Best flip pattern (indices into the basis, ascending).
    fn run(&self, order: usize, lex: impl Fn(&[usize], &[usize]) -> Ordering) -> Vec<usize> {
        let mut best_cost = self.weighted(&self.base);
        let mut best: Vec<usize> = Vec::new();
        let mut pattern = Vec::with_capacity(order);
        let mut acc = vec![self.base.clone(); order + 1];
        self.dfs(
            0,
            0.0,
            order,
            &mut pattern,
            &mut acc,
            &mut best,
            &mut best_cost,
            &lex,
        );
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        start: usize,
        info_cost: f64,
        order: usize,
        pattern: &mut Vec<usize>,
        acc: &mut [Vec<u64>],
        best: &mut Vec<usize>,
        best_cost: &mut f64,
        lex: &impl Fn(&[usize], &[usize]) -> Ordering,
    ) {
        let depth = pattern.len();
        if depth == order {
            return;
        }
        for i in start..self.info.len() {
            let cost_i = info_cost + self.info_cost[i];
            if cost_i > *best_cost + TIE_TOL * (1.0 + *best_cost) {
                continue;
            }
            let (lower, upper) = acc.split_at_mut(depth + 1);
            let cur = &mut upper[0];
            for ((d, s), r) in cur.iter_mut().zip(&lower[depth]).zip(&self.parity_rows[i]) {
                *d = s ^ r;
            }
            pattern.push(i);
            let cost = cost_i + self.weighted(&acc[depth + 1]);
            let tol = TIE_TOL * (1.0 + *best_cost);
            if cost < *best_cost - tol
                || (cost <= *best_cost + tol && lex(pattern, best) == Ordering::Less)
            {
                *best_cost = cost;
                *best = pattern.clone();
            }
            self.dfs(i + 1, cost_i, order, pattern, acc, best, best_cost, lex);
            pattern.pop();
        }
    }

    /// Codeword in original coordinates for a flip pattern.
    fn codeword(&self, pattern: &[usize]) -> BinVector {
        let mut u = self.info.clone();
        for &i in pattern {
            u[i] = !u[i];
        }
        let n = self.perm.len();
        let mut permuted = BinVector::zeros(n);
        for (i, &bit) in u.iter().enumerate() {
            if bit {
                permuted ^= &self.reduced.row(i);
            }
        }
        debug_assert!(self
            .pivots
            .iter()
            .zip(&u)
            .all(|(&p, &b)| permuted.get(p) == b));
        let mut out = BinVector::zeros(n);
        for t in permuted.iter_ones() {
            out.set(self.perm[t], true);
        }
        out
    }
}

/// Order-`order` OSD of `obs` over the row space of `generator`.
pub fn osd(generator: &BinMatrix, obs: &ChannelObservation, order: usize) -> Result<BinVector> {
    if obs.len() != generator.cols() {
        return Err(Error::DimensionMismatch {
            op: "osd",
            expected: generator.cols(),
            found: obs.len(),
        });
    }
    Ok(Osd::new(generator)?.decode(obs.llr(), order).word)
}

/// OSD bound to a parity-check matrix at a fixed order.
#[derive(Clone, Debug)]
pub struct OsdDecoder {
    h: BinMatrix,
    osd: Osd,
    order: usize,
}

impl OsdDecoder {
    pub fn new(h: &BinMatrix, order: usize) -> Result<Self> {
        Ok(OsdDecoder {
            h: h.clone(),
            osd: Osd::from_parity_check(h)?,
            order,
        })
    }
}

impl WordDecoder for OsdDecoder {
    fn matrix(&self) -> &BinMatrix {
        &self.h
    }

    fn decode(&self, obs: &ChannelObservation) -> DecodeResult {
        let word = self.osd.decode(obs.llr(), self.order).word;
        DecodeResult {
            postprocessed: true,
            ..DecodeResult::success(word, 0, Flavor::Osd)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive ML with the same tie rule.
    fn ml(generator: &BinMatrix, llr: &[f64]) -> BinVector {
        let k = generator.rows();
        let rows = generator.row_vectors();
        let mut best: Option<(f64, BinVector)> = None;
        for mask in 0u32..(1 << k) {
            let mut w = BinVector::zeros(generator.cols());
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    w ^= r;
                }
            }
            let cost = soft_discrepancy(&w, llr);
            best = match best {
                None => Some((cost, w)),
                Some((bc, bw)) => {
                    let tol = TIE_TOL * (1.0 + bc);
                    if cost < bc - tol || (cost <= bc + tol && w.lex_cmp(&bw) == Ordering::Less) {
                        Some((cost, w))
                    } else {
                        Some((bc, bw))
                    }
                }
            };
        }
        best.unwrap().1
    }

    #[test]
    fn rank_deficient_generator_is_rejected() {
        let g = BinMatrix::from_strs(&["1100", "1100"]).unwrap();
        assert!(matches!(Osd::new(&g), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn noiseless_codeword_is_returned_at_order_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = loop {
            let g = BinMatrix::random(5, 14, 0.5, &mut rng);
            if g.rank() == 5 {
                break g;
            }
        };
        let c = &g.row(0) ^ &g.row(3);
        let obs = ChannelObservation::bsc(&c, 0.1).unwrap();
        assert_eq!(osd(&g, &obs, 0).unwrap(), c);
    }

    #[test]
    fn full_order_matches_exhaustive_ml() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let k = rng.gen_range(1..=7);
            let n = k + rng.gen_range(1..=10);
            let g = BinMatrix::random(k, n, 0.5, &mut rng);
            let Ok(dec) = Osd::new(&g) else { continue };
            for _ in 0..20 {
                let llr: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
                assert_eq!(dec.decode(&llr, k).word, ml(&g, &llr));
            }
        }
    }

    #[test]
    fn higher_order_never_increases_the_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = loop {
            let g = BinMatrix::random(8, 20, 0.4, &mut rng);
            if g.rank() == 8 {
                break g;
            }
        };
        let dec = Osd::new(&g).unwrap();
        for _ in 0..50 {
            let llr: Vec<f64> = (0..20).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let m: Vec<f64> = (0..=3).map(|o| dec.decode(&llr, o).metric).collect();
            assert!(m.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{m:?}");
        }
    }
}
