//! Sum-product decoding followed by OSD when message passing fails.

use super::bp::{BpDecoder, Schedule};
use super::channel::ChannelObservation;
use super::osd::Osd;
use super::{DecodeResult, Flavor, WordDecoder};
use crate::error::Result;
use crate::gf2::BinMatrix;
use crate::tanner::remove_4cycles;

/// Reliabilities handed to OSD after a sum-product failure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ReliabilitySource {
    /// Final a-posteriori LLRs of the sum-product run.
    #[default]
    Posterior,
    /// The channel LLRs.
    Channel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CombinedConfig {
    /// Flooding gives the original algorithm, serial the modified one.
    pub schedule: Schedule,
    pub max_iter: usize,
    pub order: usize,
    pub source: ReliabilitySource,
    /// Sweeps of 4-cycle removal applied to the matrix before decoding.
    pub cycle_removal_passes: Option<usize>,
}

impl CombinedConfig {
    pub fn original(max_iter: usize, order: usize) -> Self {
        CombinedConfig {
            schedule: Schedule::Flooding,
            max_iter,
            order,
            source: ReliabilitySource::Posterior,
            cycle_removal_passes: None,
        }
    }

    /// Serial schedule on a matrix with 4-cycles removed.
    pub fn modified(max_iter: usize, order: usize, passes: usize) -> Self {
        CombinedConfig {
            schedule: Schedule::Serial,
            max_iter,
            order,
            source: ReliabilitySource::Posterior,
            cycle_removal_passes: Some(passes),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CombinedDecoder {
    bp: BpDecoder,
    osd: Osd,
    config: CombinedConfig,
    residual_cycles: Option<usize>,
}

impl CombinedDecoder {
    pub fn new(h: &BinMatrix, config: CombinedConfig) -> Result<Self> {
        let (matrix, residual_cycles) = match config.cycle_removal_passes {
            Some(passes) => {
                let removal = remove_4cycles(h, passes);
                (removal.matrix, Some(removal.residual_cycles))
            }
            None => (h.clone(), None),
        };
        let osd = Osd::from_parity_check(&matrix)?;
        let bp = BpDecoder::new(&matrix, config.schedule, config.max_iter);
        Ok(CombinedDecoder {
            bp,
            osd,
            config,
            residual_cycles,
        })
    }

    pub fn config(&self) -> &CombinedConfig {
        &self.config
    }

    /// 4-cycles left after preprocessing, when preprocessing ran.
    pub fn residual_cycles(&self) -> Option<usize> {
        self.residual_cycles
    }
}

impl WordDecoder for CombinedDecoder {
    fn matrix(&self) -> &BinMatrix {
        WordDecoder::matrix(&self.bp)
    }

    fn decode(&self, obs: &ChannelObservation) -> DecodeResult {
        let flavor = Flavor::Combined(self.config.schedule);
        let out = self.bp.run(obs);
        if out.result.converged {
            return DecodeResult {
                flavor,
                ..out.result
            };
        }
        let reliabilities = match self.config.source {
            ReliabilitySource::Posterior => &out.posteriors[..],
            ReliabilitySource::Channel => obs.llr(),
        };
        let word = self.osd.decode(reliabilities, self.config.order).word;
        DecodeResult {
            word: Some(word),
            converged: true,
            iterations: out.result.iterations,
            flavor,
            postprocessed: true,
        }
    }
}

/// One-shot combined decoding of `obs` with the matrix `h` as given.
pub fn combined_decode(
    h: &BinMatrix,
    obs: &ChannelObservation,
    max_iter: usize,
    order: usize,
    schedule: Schedule,
) -> Result<DecodeResult> {
    let config = CombinedConfig {
        schedule,
        max_iter,
        order,
        source: ReliabilitySource::Posterior,
        cycle_removal_passes: None,
    };
    Ok(CombinedDecoder::new(h, config)?.decode(obs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decode::bp::sum_product_bsc;
    use crate::gf2::BinVector;

    fn hamming() -> BinMatrix {
        BinMatrix::from_strs(&["1010101", "0110011", "0001111"]).unwrap()
    }

    #[test]
    fn convergent_input_skips_osd() {
        let h = hamming();
        let mut rx = BinVector::zeros(7);
        rx.set(2, true);
        let obs = ChannelObservation::bsc(&rx, 0.05).unwrap();
        let sp = sum_product_bsc(&h, &obs, 20);
        let c = combined_decode(&h, &obs, 20, 2, Schedule::Flooding).unwrap();
        assert!(!c.postprocessed);
        assert_eq!(c.word, sp.word);
    }

    #[test]
    fn output_is_always_a_codeword() {
        let h = hamming();
        let rx = BinVector::from_bits(&[1, 1, 0, 1, 0, 0, 1]);
        let obs = ChannelObservation::bsc(&rx, 0.2).unwrap();
        for schedule in [Schedule::Flooding, Schedule::Serial] {
            let c = combined_decode(&h, &obs, 1, 4, schedule).unwrap();
            assert!(c.converged);
            assert!(h.annihilates(c.word.as_ref().unwrap()));
        }
    }
}
