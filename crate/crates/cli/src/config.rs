//! Sweep configuration files.
//!
//! ```toml
//! [code]
//! id = "B/0.8"
//!
//! [decoder]
//! flavor = "sp-flooding"
//! max_iter = 100
//!
//! [sweep]
//! mode = "c1-coset"
//! crossovers = [0.01, 0.02]
//! trials = 500
//! seed = 1
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use css_ldpc::decode::ReliabilitySource;
use css_ldpc::ColumnSelection;

use crate::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub code: CodeSection,
    pub decoder: DecoderSection,
    pub sweep: SweepSection,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSection {
    pub id: String,
    #[serde(default)]
    pub selection: Selection,
    /// Directory holding `<mask id>.txt` files that replace the embedded masks.
    #[serde(default)]
    pub mask_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    #[default]
    Lightest,
    Heaviest,
}

impl From<Selection> for ColumnSelection {
    fn from(s: Selection) -> Self {
        match s {
            Selection::Lightest => ColumnSelection::Lightest,
            Selection::Heaviest => ColumnSelection::Heaviest,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderFlavor {
    SpFlooding,
    SpSerial,
    CombinedOriginal,
    CombinedModified,
    /// OSD alone at `order`; full order is maximum likelihood.
    Osd,
    Approximative,
    Generalized,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OsdSource {
    #[default]
    Posterior,
    Channel,
}

impl From<OsdSource> for ReliabilitySource {
    fn from(s: OsdSource) -> Self {
        match s {
            OsdSource::Posterior => ReliabilitySource::Posterior,
            OsdSource::Channel => ReliabilitySource::Channel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderSection {
    pub flavor: DecoderFlavor,
    pub max_iter: usize,
    #[serde(default = "default_order")]
    pub order: usize,
    /// Sweeps of 4-cycle removal before decoding; none when absent.
    #[serde(default)]
    pub cycle_passes: Option<usize>,
    #[serde(default)]
    pub osd_source: OsdSource,
    /// Number of equivalent matrices for the generalized decoder.
    #[serde(default = "default_matrices")]
    pub matrices: usize,
}

fn default_order() -> usize {
    2
}

fn default_matrices() -> usize {
    3
}

/// Which code is decoded and which success notion heads the summary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    C1Plain,
    C1Coset,
    C2perpPlain,
    C2perpCoset,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::C1Plain => "c1-plain",
            Mode::C1Coset => "c1-coset",
            Mode::C2perpPlain => "c2perp-plain",
            Mode::C2perpCoset => "c2perp-coset",
        }
    }

    pub fn decodes_c2perp(&self) -> bool {
        matches!(self, Mode::C2perpPlain | Mode::C2perpCoset)
    }

    pub fn coset(&self) -> bool {
        matches!(self, Mode::C1Coset | Mode::C2perpCoset)
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub mode: Mode,
    pub crossovers: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> CliResult<SweepConfig> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> CliResult<SweepConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        SweepConfig::from_toml(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.sweep.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.sweep.crossovers.is_empty() {
            return bad("crossover grid is empty".into());
        }
        if let Some(e) = self
            .sweep
            .crossovers
            .iter()
            .find(|e| !(0.0..0.5).contains(*e))
        {
            return bad(format!("crossover {e} outside [0, 0.5)"));
        }
        if self.decoder.max_iter == 0 {
            return bad("max_iter must be at least 1".into());
        }
        if self.decoder.flavor == DecoderFlavor::Approximative && !self.sweep.mode.decodes_c2perp()
        {
            return bad("the approximative decoder only applies to c2perp modes".into());
        }
        if self.decoder.flavor == DecoderFlavor::Generalized && self.decoder.matrices == 0 {
            return bad("generalized decoding needs at least one matrix".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[code]
id = "toy"

[decoder]
flavor = "combined-modified"
max_iter = 50
cycle_passes = 4

[sweep]
mode = "c2perp-coset"
crossovers = [0.01, 0.02]
trials = 10
seed = 3
"#;

    #[test]
    fn parses_sections_and_defaults() {
        let cfg = SweepConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(cfg.code.selection, Selection::Lightest);
        assert_eq!(cfg.decoder.order, 2);
        assert_eq!(cfg.decoder.cycle_passes, Some(4));
        assert_eq!(cfg.sweep.mode, Mode::C2perpCoset);
    }

    #[test]
    fn rejects_bad_values() {
        let zero = SAMPLE.replace("trials = 10", "trials = 0");
        assert!(matches!(
            SweepConfig::from_toml(&zero),
            Err(CliError::Config(_))
        ));
        let half = SAMPLE.replace("0.02]", "0.5]");
        assert!(SweepConfig::from_toml(&half).is_err());
        let unknown = SAMPLE.replace("seed = 3", "seed = 3\nbogus = 1");
        assert!(SweepConfig::from_toml(&unknown).is_err());
        let approx_c1 = SAMPLE
            .replace("combined-modified", "approximative")
            .replace("c2perp-coset", "c1-plain");
        assert!(SweepConfig::from_toml(&approx_c1).is_err());
    }
}
