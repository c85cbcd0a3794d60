//! The code catalog: named constructions with their expected dimensions, and
//! checksums of the embedded masks.

use std::sync::OnceLock;

use num_rational::Ratio;
use serde::Deserialize;

use crate::construct::{apply_mask, build_base, load_mask, near_regular_ldpc, Encoder, LdpcCode};
use crate::construct::{MaskMatrix, SystematicEncoder};
use crate::css::{build_css, make_key_map, ColumnSelection, CssPair, KeyMap};
use crate::error::{Error, Result};
use crate::gf2::BinMatrix;

const EMBEDDED: &str = include_str!("../catalog.toml");

/// How a catalog code is built.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CodeSpec {
    Base {
        p: usize,
        j: usize,
        k: usize,
    },
    Masked {
        p: usize,
        j: usize,
        k: usize,
        mask: String,
    },
    NearRegular {
        n: usize,
        col_weight: usize,
        row_weight: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct CodeEntry {
    pub id: String,
    #[serde(flatten)]
    pub spec: CodeSpec,
    pub rows: usize,
    pub cols: usize,
    /// Design rate `(N - M) / N` written as `"a/b"`.
    pub rate: String,
    /// One of the six codes whose masks are embedded.
    #[serde(default)]
    pub reference: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct MaskChecksum {
    pub id: String,
    pub rows: usize,
    pub cols: usize,
    pub row_weights: Vec<usize>,
}

impl MaskChecksum {
    /// Describes the first disagreement, if any.
    pub fn check(&self, mask: &MaskMatrix) -> std::result::Result<(), String> {
        if (mask.w.rows(), mask.w.cols()) != (self.rows, self.cols) {
            return Err(format!(
                "mask {} is {}x{}, expected {}x{}",
                self.id,
                mask.w.rows(),
                mask.w.cols(),
                self.rows,
                self.cols
            ));
        }
        let weights = mask.w.row_weights();
        match weights
            .iter()
            .zip(&self.row_weights)
            .position(|(a, b)| a != b)
        {
            Some(r) => Err(format!(
                "mask {} row {r} has weight {}, expected {}",
                self.id, weights[r], self.row_weights[r]
            )),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct Catalog {
    #[serde(rename = "code")]
    pub codes: Vec<CodeEntry>,
    #[serde(rename = "mask", default)]
    pub masks: Vec<MaskChecksum>,
}

impl Catalog {
    pub fn from_toml(text: &str) -> Result<Catalog> {
        toml::from_str(text).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }

    /// The catalog shipped with the crate.
    pub fn embedded() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_toml(EMBEDDED).expect("embedded catalog parses"))
    }

    pub fn entry(&self, id: &str) -> Result<&CodeEntry> {
        self.codes
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::UnknownCode(id.to_string()))
    }

    pub fn mask_checksum(&self, id: &str) -> Option<&MaskChecksum> {
        self.masks.iter().find(|m| m.id == id)
    }

    pub fn reference_codes(&self) -> impl Iterator<Item = &CodeEntry> {
        self.codes.iter().filter(|c| c.reference)
    }
}

/// A parity-check matrix and, for quasi-cyclic codes, its structured form.
#[derive(Clone, Debug)]
pub struct BuiltCode {
    pub h: BinMatrix,
    pub ldpc: Option<LdpcCode>,
}

impl BuiltCode {
    /// The structured encoder when available, otherwise a systematic one.
    pub fn encoder(&self) -> Box<dyn Encoder> {
        match &self.ldpc {
            Some(code) => Box::new(code.clone()),
            None => Box::new(SystematicEncoder::from_parity_check(&self.h)),
        }
    }
}

impl CodeEntry {
    pub fn expected_rate(&self) -> Result<Ratio<usize>> {
        let bad = || Error::InvalidParameter(format!("rate `{}` of code {}", self.rate, self.id));
        let (a, b) = self.rate.split_once('/').ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        Ok(Ratio::new(a, b))
    }

    /// Builds with the embedded masks.
    pub fn build(&self) -> Result<BuiltCode> {
        self.build_with(load_mask)
    }

    /// Builds with masks supplied by `masks`.
    pub fn build_with(&self, masks: impl Fn(&str) -> Result<MaskMatrix>) -> Result<BuiltCode> {
        match &self.spec {
            CodeSpec::Base { p, j, k } => {
                let code = build_base(*p, *j, *k)?;
                Ok(BuiltCode {
                    h: code.h().clone(),
                    ldpc: Some(code),
                })
            }
            CodeSpec::Masked { p, j, k, mask } => {
                let code = apply_mask(&build_base(*p, *j, *k)?, &masks(mask)?)?;
                Ok(BuiltCode {
                    h: code.h().clone(),
                    ldpc: Some(code),
                })
            }
            CodeSpec::NearRegular {
                n,
                col_weight,
                row_weight,
                seed,
            } => Ok(BuiltCode {
                h: near_regular_ldpc(*n, *col_weight, *row_weight, *seed)?,
                ldpc: None,
            }),
        }
    }

    /// Builds the code and its CSS pair.
    pub fn build_system(&self, selection: ColumnSelection) -> Result<CssSystem> {
        CssSystem::new(&self.id, self.build()?, selection)
    }
}

/// A catalog code together with everything the protocol needs.
pub struct CssSystem {
    pub id: String,
    pub code: BuiltCode,
    pub encoder: Box<dyn Encoder>,
    pub pair: CssPair,
    /// Present when `H2` has full rank.
    pub keymap: Option<KeyMap>,
}

impl CssSystem {
    pub fn new(id: &str, code: BuiltCode, selection: ColumnSelection) -> Result<CssSystem> {
        let encoder = code.encoder();
        let pair = build_css(&code.h, encoder.as_ref(), selection)?;
        let keymap = if pair.h2_full_rank() {
            Some(make_key_map(&pair)?)
        } else {
            None
        };
        Ok(CssSystem {
            id: id.to_string(),
            code,
            encoder,
            pair,
            keymap,
        })
    }

    pub fn keymap(&self) -> Result<&KeyMap> {
        self.keymap.as_ref().ok_or(Error::RankDeficient {
            expected: self.pair.h2().rows(),
            measured: self.pair.rank_h2(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::MASK_IDS;

    #[test]
    fn embedded_catalog_parses() {
        let cat = Catalog::embedded();
        assert_eq!(cat.reference_codes().count(), 6);
        assert_eq!(cat.masks.len(), 6);
        assert!(matches!(cat.entry("nope"), Err(Error::UnknownCode(_))));
    }

    #[test]
    fn embedded_masks_match_checksums() {
        let cat = Catalog::embedded();
        for id in MASK_IDS {
            let sum = cat.mask_checksum(id).expect("checksum present");
            sum.check(&load_mask(id).unwrap()).unwrap();
        }
    }

    #[test]
    fn corrupted_mask_is_named() {
        let cat = Catalog::embedded();
        let mut mask = load_mask("B/0.8").unwrap();
        mask.w.flip(3, 0);
        let err = cat
            .mask_checksum("B/0.8")
            .unwrap()
            .check(&mask)
            .unwrap_err();
        assert!(err.contains("row 3"), "{err}");
    }

    #[test]
    fn small_codes_have_expected_shapes() {
        let cat = Catalog::embedded();
        for id in ["toy", "mini/B-0.8", "mini/0.55", "mini/0.8", "nr480"] {
            let e = cat.entry(id).unwrap();
            let b = e.build().unwrap();
            assert_eq!((b.h.rows(), b.h.cols()), (e.rows, e.cols), "{id}");
            assert_eq!(b.h.rank(), e.rows, "{id} full rank");
            assert_eq!(
                Ratio::new(e.cols - e.rows, e.cols),
                e.expected_rate().unwrap(),
                "{id}"
            );
        }
    }
}
