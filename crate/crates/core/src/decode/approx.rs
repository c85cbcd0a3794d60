//! Decoding with the dense `H2` of a CSS pair.
//!
//! Approximative decoding sparsifies the columns hit by errors (a genie
//! supplies them) and removes 4-cycles before flooding sum-product.
//! Generalized decoding runs sum-product on several equivalent matrices and
//! takes a majority vote.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bp::{BpDecoder, Schedule};
use super::channel::{soft_discrepancy, ChannelObservation};
use super::{DecodeResult, Flavor, WordDecoder};
use crate::css::{coset_equal, CssPair, Quotient};
use crate::error::{Error, Result};
use crate::gf2::{BinMatrix, BinVector};
use crate::tanner::{reduce_column_weights, remove_4cycles};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApproxConfig {
    pub max_iter: usize,
    /// Column weight bound for the error columns.
    pub max_weight: usize,
    pub cycle_passes: usize,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        ApproxConfig {
            max_iter: 100,
            max_weight: 2,
            cycle_passes: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ApproxOutcome {
    pub result: DecodeResult,
    /// Errors in the dense part of `H2`.
    pub dense_errors: usize,
    /// Errors in the sparse part.
    pub sparse_errors: usize,
    /// Error columns still above `max_weight` after the reduction.
    pub shortfall: Vec<(usize, usize)>,
    pub residual_cycles: usize,
}

impl ApproxOutcome {
    /// Converged to a word in the same `C2⊥ / C1⊥` coset as `transmitted`.
    pub fn coset_success(&self, pair: &CssPair, transmitted: &BinVector) -> bool {
        match (&self.result.word, self.result.converged) {
            (Some(w), true) => {
                coset_equal(pair, transmitted, w, Quotient::C2PerpOverC1Perp).unwrap_or(false)
            }
            _ => false,
        }
    }
}

/// Genie-aided decoding in `C2⊥ = null(H2)`.
pub fn approximative_decode(
    pair: &CssPair,
    error_positions: &[usize],
    obs: &ChannelObservation,
    config: &ApproxConfig,
) -> Result<ApproxOutcome> {
    let h2 = pair.h2();
    if obs.len() != h2.cols() {
        return Err(Error::DimensionMismatch {
            op: "approximative_decode",
            expected: h2.cols(),
            found: obs.len(),
        });
    }
    let mut dense = vec![false; h2.cols()];
    for c in pair.dense_columns() {
        dense[c] = true;
    }
    let dense_errors = error_positions.iter().filter(|&&c| dense[c]).count();
    let reduction = reduce_column_weights(h2, error_positions, config.max_weight);
    let shortfall = reduction.shortfall(config.max_weight);
    let removal = remove_4cycles(&reduction.matrix, config.cycle_passes);
    let bp = BpDecoder::new(&removal.matrix, Schedule::Flooding, config.max_iter);
    let result = DecodeResult {
        flavor: Flavor::Approximative,
        ..bp.decode(obs)
    };
    Ok(ApproxOutcome {
        result,
        dense_errors,
        sparse_errors: error_positions.len() - dense_errors,
        shortfall,
        residual_cycles: removal.residual_cycles,
    })
}

/// `count` matrices with the row space of `h`: `h` itself, then random
/// sequences of row additions.
pub fn equivalent_matrices(h: &BinMatrix, count: usize, seed: u64) -> Vec<BinMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(h.clone());
    let rows = h.rows();
    for _ in 1..count {
        let mut m = h.clone();
        if rows >= 2 {
            for _ in 0..rows {
                let src = rng.gen_range(0..rows);
                let mut dst = rng.gen_range(0..rows - 1);
                if dst >= src {
                    dst += 1;
                }
                m.add_row(src, dst);
            }
        }
        out.push(m);
    }
    out
}

/// Majority vote over sum-product runs on equivalent matrices.
#[derive(Clone, Debug)]
pub struct GeneralizedDecoder {
    decoders: Vec<BpDecoder>,
}

impl GeneralizedDecoder {
    /// Rejects lists whose matrices define different codes. With
    /// `cycle_passes` set, each matrix goes through 4-cycle removal first.
    pub fn new(
        matrices: &[BinMatrix],
        max_iter: usize,
        cycle_passes: Option<usize>,
    ) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::InvalidParameter("empty matrix list".into()));
        };
        for (i, m) in matrices.iter().enumerate().skip(1) {
            if !first.same_rowspace(m) {
                return Err(Error::NotEquivalent { a: 0, b: i });
            }
        }
        let decoders = matrices
            .iter()
            .map(|m| {
                let m = match cycle_passes {
                    Some(p) => remove_4cycles(m, p).matrix,
                    None => m.clone(),
                };
                BpDecoder::new(&m, Schedule::Flooding, max_iter)
            })
            .collect();
        Ok(GeneralizedDecoder { decoders })
    }

    pub fn len(&self) -> usize {
        self.decoders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decoders.is_empty()
    }
}

impl WordDecoder for GeneralizedDecoder {
    fn matrix(&self) -> &BinMatrix {
        WordDecoder::matrix(&self.decoders[0])
    }

    fn decode(&self, obs: &ChannelObservation) -> DecodeResult {
        // (word, votes, first matrix index)
        let mut tally: Vec<(BinVector, usize, usize)> = Vec::new();
        let mut iterations = 0;
        for (i, d) in self.decoders.iter().enumerate() {
            let r = d.decode(obs);
            iterations = iterations.max(r.iterations);
            if let (true, Some(w)) = (r.converged, r.word) {
                match tally.iter_mut().find(|t| t.0 == w) {
                    Some(t) => t.1 += 1,
                    None => tally.push((w, 1, i)),
                }
            }
        }
        let winner = tally.into_iter().min_by(|a, b| {
            b.1.cmp(&a.1)
                .then(
                    soft_discrepancy(&a.0, obs.llr()).total_cmp(&soft_discrepancy(&b.0, obs.llr())),
                )
                .then(a.2.cmp(&b.2))
        });
        match winner {
            Some((w, _, _)) => DecodeResult::success(w, iterations, Flavor::Generalized),
            None => DecodeResult::failure(iterations, Flavor::Generalized),
        }
    }
}

pub fn generalized_decode(
    matrices: &[BinMatrix],
    obs: &ChannelObservation,
    max_iter: usize,
) -> Result<DecodeResult> {
    Ok(GeneralizedDecoder::new(matrices, max_iter, None)?.decode(obs))
}
