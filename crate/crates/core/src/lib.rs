//! Construction, verification and decoding of LDPC-based CSS code pairs for
//! the classical post-processing phase of BB84.

pub mod bb84;
pub mod catalog;
pub mod construct;
pub mod css;
pub mod decode;
pub mod error;
pub mod gf2;
pub mod seed;
pub mod stats;
pub mod tanner;

pub use bb84::{eve_bound, EveBoundInput, Protocol, ProtocolRun};
pub use catalog::{Catalog, CodeEntry, CssSystem};
pub use construct::{Encoder, LdpcCode, MaskMatrix, SystematicEncoder};
pub use css::{build_css, coset_equal, css_rate, ColumnSelection, CssPair, KeyMap, Quotient};
pub use decode::{
    ChannelObservation, CombinedConfig, CombinedDecoder, DecodeResult, Flavor, Schedule,
    WordDecoder,
};
pub use error::{Error, Result};
pub use gf2::{BinMatrix, BinVector, Echelon};
pub use stats::Proportion;
pub use tanner::{FourCycle, TannerGraph};
