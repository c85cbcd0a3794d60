//! Decoders for the BSC and the BEC.
//!
//! Converged results always satisfy the parity checks of the matrix they were
//! decoded with. All decoders are deterministic functions of their inputs.

mod approx;
mod bec;
mod bp;
mod channel;
mod combined;
mod osd;

pub use approx::{
    approximative_decode, equivalent_matrices, generalized_decode, ApproxConfig, ApproxOutcome,
    GeneralizedDecoder,
};
pub use bec::{
    bec_ml, bec_peeling, is_stopping_set, transform_for_erasures, ErasureOutcome, StoppingSet,
};
pub use bp::{bit_serial_sp, sum_product_bsc, BpDecoder, BpOutput, Schedule};
pub use channel::{hard_decision, soft_discrepancy, ChannelObservation, LLR_CLAMP};
pub use combined::{combined_decode, CombinedConfig, CombinedDecoder, ReliabilitySource};
pub use osd::{osd, Osd, OsdDecoder, OsdOutput};

use crate::gf2::{BinMatrix, BinVector};

/// Which algorithm produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Flooding,
    Serial,
    Osd,
    /// Sum-product with the given schedule, then OSD on failure.
    Combined(Schedule),
    BecPeeling,
    BecMl,
    Approximative,
    Generalized,
}

impl Flavor {
    pub fn name(&self) -> &'static str {
        match self {
            Flavor::Flooding => "sp-flooding",
            Flavor::Serial => "sp-serial",
            Flavor::Osd => "osd",
            Flavor::Combined(Schedule::Flooding) => "combined-original",
            Flavor::Combined(Schedule::Serial) => "combined-modified",
            Flavor::BecPeeling => "bec-peeling",
            Flavor::BecMl => "bec-ml",
            Flavor::Approximative => "approximative",
            Flavor::Generalized => "generalized",
        }
    }
}

/// Output of a decoder. `word` is `None` on failure.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub word: Option<BinVector>,
    /// All parity checks satisfied by `word`.
    pub converged: bool,
    pub iterations: usize,
    pub flavor: Flavor,
    /// OSD post-processing produced the word.
    pub postprocessed: bool,
}

impl DecodeResult {
    pub(crate) fn failure(iterations: usize, flavor: Flavor) -> Self {
        DecodeResult {
            word: None,
            converged: false,
            iterations,
            flavor,
            postprocessed: false,
        }
    }

    pub(crate) fn success(word: BinVector, iterations: usize, flavor: Flavor) -> Self {
        DecodeResult {
            word: Some(word),
            converged: true,
            iterations,
            flavor,
            postprocessed: false,
        }
    }

    /// Exact recovery of `transmitted`.
    pub fn is_exact(&self, transmitted: &BinVector) -> bool {
        self.converged && self.word.as_ref() == Some(transmitted)
    }
}

/// A decoder bound to one parity-check matrix.
pub trait WordDecoder: Send + Sync {
    /// The matrix whose checks a converged output satisfies.
    fn matrix(&self) -> &BinMatrix;
    fn decode(&self, obs: &ChannelObservation) -> DecodeResult;
}
