use crate::error::{Error, Result};
use crate::gf2::BinVector;

/// Magnitude bound applied to every log-likelihood ratio.
pub const LLR_CLAMP: f64 = 30.0;

/// Hard decisions plus log-likelihood ratios (positive favours 0).
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelObservation {
    hard: BinVector,
    llr: Vec<f64>,
}

impl ChannelObservation {
    /// Observation of `received` through a BSC with crossover `epsilon`.
    /// `epsilon = 0` is allowed and yields clamped LLRs.
    pub fn bsc(received: &BinVector, epsilon: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "crossover probability {epsilon} outside [0, 0.5)"
            )));
        }
        let mag = if epsilon == 0.0 {
            LLR_CLAMP
        } else {
            ((1.0 - epsilon) / epsilon).ln().min(LLR_CLAMP)
        };
        let llr = (0..received.len())
            .map(|i| if received.get(i) { -mag } else { mag })
            .collect();
        Ok(ChannelObservation {
            hard: received.clone(),
            llr,
        })
    }

    /// Observation from arbitrary LLRs (clamped).
    pub fn from_llr(llr: Vec<f64>) -> Self {
        let llr: Vec<f64> = llr
            .into_iter()
            .map(|l| l.clamp(-LLR_CLAMP, LLR_CLAMP))
            .collect();
        ChannelObservation {
            hard: hard_decision(&llr),
            llr,
        }
    }

    pub fn hard(&self) -> &BinVector {
        &self.hard
    }

    pub fn llr(&self) -> &[f64] {
        &self.llr
    }

    pub fn len(&self) -> usize {
        self.llr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llr.is_empty()
    }
}

pub fn hard_decision(llr: &[f64]) -> BinVector {
    let mut v = BinVector::zeros(llr.len());
    for (i, &l) in llr.iter().enumerate() {
        if l < 0.0 {
            v.set(i, true);
        }
    }
    v
}

/// `Σ |llr_i|` over positions where `word` disagrees with the hard decision.
pub fn soft_discrepancy(word: &BinVector, llr: &[f64]) -> f64 {
    llr.iter()
        .enumerate()
        .filter(|&(i, &l)| word.get(i) != (l < 0.0))
        .map(|(_, l)| l.abs())
        .sum()
}
