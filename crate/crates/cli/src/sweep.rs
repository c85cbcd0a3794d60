//! Monte-Carlo block error sweeps over a crossover grid.
//!
//! Trial `t` of point `i` draws everything from the seed
//! `derive_seed(master, i, t)`, so results do not depend on scheduling and
//! two runs with the same configuration write identical CSV.

use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use css_ldpc::catalog::{Catalog, CssSystem};
use css_ldpc::construct::load_mask_from_dir;
use css_ldpc::decode::{
    approximative_decode, equivalent_matrices, ApproxConfig, BpDecoder, ChannelObservation,
    CombinedConfig, CombinedDecoder, GeneralizedDecoder, OsdDecoder, Schedule, WordDecoder,
};
use css_ldpc::seed::derive_seed;
use css_ldpc::tanner::remove_4cycles;
use css_ldpc::{BinMatrix, BinVector, Proportion};

use crate::config::{DecoderFlavor, Mode, SweepConfig};
use crate::{CliError, CliResult};

pub const SCHEMA_ID: &str = "css-ldpc-sweep/1";
pub const TRIAL_SCHEMA_ID: &str = "css-ldpc-trials/1";

const SUMMARY_HEADER: [&str; 14] = [
    "schema_id",
    "code_id",
    "mode",
    "crossover",
    "trials",
    "plain_failures",
    "coset_failures",
    "coverage",
    "mean_iters",
    "seed",
    "wrong_codewords",
    "covered",
    "bler",
    "bler_upper",
];

const TRIAL_HEADER: [&str; 11] = [
    "schema_id",
    "point",
    "trial",
    "crossover",
    "error_weight",
    "dense_errors",
    "converged",
    "valid_codeword",
    "plain_success",
    "coset_success",
    "iterations",
];

/// Label mixed into the master seed for the generalized decoder's matrices.
const MATRIX_STREAM: u64 = 0x6d61_7472_6978;

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub point: usize,
    pub trial: u64,
    pub crossover: f64,
    pub error_weight: usize,
    /// Errors in the dense part of `H2`.
    pub dense_errors: usize,
    pub converged: bool,
    /// Converged to a codeword of the decoded code.
    pub valid_codeword: bool,
    pub plain_success: bool,
    pub coset_success: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSummary {
    pub code_id: String,
    pub mode: String,
    pub crossover: f64,
    pub trials: u64,
    pub plain_failures: u64,
    pub coset_failures: u64,
    /// Valid codewords other than the transmitted one.
    pub wrong_codewords: u64,
    /// Wrong codewords in the transmitted coset.
    pub covered: u64,
    pub mean_iters: f64,
    pub seed: u64,
}

impl PointSummary {
    /// `covered / wrong_codewords`, undefined without wrong codewords.
    pub fn coverage(&self) -> Option<f64> {
        (self.wrong_codewords > 0).then(|| self.covered as f64 / self.wrong_codewords as f64)
    }

    pub fn plain(&self) -> Proportion {
        Proportion::new(self.plain_failures, self.trials)
    }

    pub fn coset(&self) -> Proportion {
        Proportion::new(self.coset_failures, self.trials)
    }

    /// The failure proportion named by the mode.
    pub fn headline(&self) -> Proportion {
        if self.mode.ends_with("coset") {
            self.coset()
        } else {
            self.plain()
        }
    }

    fn from_trials(cfg: &SweepConfig, crossover: f64, trials: &[TrialRecord]) -> PointSummary {
        let count = |f: fn(&TrialRecord) -> bool| trials.iter().filter(|t| f(t)).count() as u64;
        let iters: usize = trials.iter().map(|t| t.iterations).sum();
        PointSummary {
            code_id: cfg.code.id.clone(),
            mode: cfg.sweep.mode.name().to_string(),
            crossover,
            trials: trials.len() as u64,
            plain_failures: count(|t| !t.plain_success),
            coset_failures: count(|t| !t.coset_success),
            wrong_codewords: count(|t| t.valid_codeword && !t.plain_success),
            covered: count(|t| t.coset_success && !t.plain_success),
            mean_iters: iters as f64 / trials.len().max(1) as f64,
            seed: cfg.sweep.seed,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepOutput {
    pub points: Vec<PointSummary>,
    /// Ordered by `(point, trial)`.
    pub trials: Vec<TrialRecord>,
}

enum Engine {
    Word(Box<dyn WordDecoder>),
    Approx(ApproxConfig),
}

fn engine(cfg: &SweepConfig, h: &BinMatrix) -> CliResult<Engine> {
    let d = &cfg.decoder;
    let preprocessed = || match d.cycle_passes {
        Some(p) => remove_4cycles(h, p).matrix,
        None => h.clone(),
    };
    let combined = |schedule| CombinedConfig {
        schedule,
        max_iter: d.max_iter,
        order: d.order,
        source: d.osd_source.into(),
        cycle_removal_passes: d.cycle_passes,
    };
    Ok(match d.flavor {
        DecoderFlavor::SpFlooding => Engine::Word(Box::new(BpDecoder::new(
            &preprocessed(),
            Schedule::Flooding,
            d.max_iter,
        ))),
        DecoderFlavor::SpSerial => Engine::Word(Box::new(BpDecoder::new(
            &preprocessed(),
            Schedule::Serial,
            d.max_iter,
        ))),
        DecoderFlavor::CombinedOriginal => Engine::Word(Box::new(CombinedDecoder::new(
            h,
            combined(Schedule::Flooding),
        )?)),
        DecoderFlavor::CombinedModified => Engine::Word(Box::new(CombinedDecoder::new(
            h,
            combined(Schedule::Serial),
        )?)),
        DecoderFlavor::Osd => Engine::Word(Box::new(OsdDecoder::new(&preprocessed(), d.order)?)),
        DecoderFlavor::Generalized => {
            let list =
                equivalent_matrices(h, d.matrices, derive_seed(cfg.sweep.seed, MATRIX_STREAM, 0));
            Engine::Word(Box::new(GeneralizedDecoder::new(
                &list,
                d.max_iter,
                d.cycle_passes,
            )?))
        }
        DecoderFlavor::Approximative => Engine::Approx(ApproxConfig {
            max_iter: d.max_iter,
            max_weight: 2,
            cycle_passes: d.cycle_passes.unwrap_or(4),
        }),
    })
}

/// Builds the configured code and runs the sweep.
pub fn run_sweep(cfg: &SweepConfig) -> CliResult<SweepOutput> {
    cfg.validate()?;
    let system = build_system(cfg)?;
    run_sweep_on(&system, cfg)
}

/// Builds the code named in `cfg`, honouring `mask_dir`.
pub fn build_system(cfg: &SweepConfig) -> CliResult<CssSystem> {
    let entry = Catalog::embedded()
        .entry(&cfg.code.id)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let code = match &cfg.code.mask_dir {
        Some(dir) => entry.build_with(|id| load_mask_from_dir(dir, id))?,
        None => entry.build()?,
    };
    Ok(CssSystem::new(&entry.id, code, cfg.code.selection.into())?)
}

/// Runs the sweep on an already built system.
pub fn run_sweep_on(system: &CssSystem, cfg: &SweepConfig) -> CliResult<SweepOutput> {
    cfg.validate()?;
    let pair = &system.pair;
    let on_c2perp = cfg.sweep.mode.decodes_c2perp();
    let h = if on_c2perp { pair.h2() } else { pair.h1() };
    let engine = engine(cfg, h)?;
    let n = pair.n();
    let mut dense = vec![false; n];
    for c in pair.dense_columns() {
        dense[c] = true;
    }

    let mut out = SweepOutput::default();
    for (point, &eps) in cfg.sweep.crossovers.iter().enumerate() {
        let records: CliResult<Vec<TrialRecord>> = (0..cfg.sweep.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(cfg.sweep.seed, point as u64, trial));
                let tx = if on_c2perp {
                    pair.random_c2perp(&mut rng)
                } else {
                    let info = BinVector::random(system.encoder.info_len(), &mut rng);
                    system.encoder.encode(&info)?
                };
                let e = BinVector::bernoulli(n, eps, &mut rng);
                let errors = e.support();
                let obs = ChannelObservation::bsc(&(&tx ^ &e), eps)?;
                let result = match &engine {
                    Engine::Word(d) => d.decode(&obs),
                    Engine::Approx(c) => approximative_decode(pair, &errors, &obs, c)?.result,
                };
                let valid = match (&result.word, result.converged) {
                    (Some(w), true) => h.annihilates(w),
                    _ => false,
                };
                let plain = valid && result.word.as_ref() == Some(&tx);
                let coset = valid && {
                    let diff = result.word.as_ref().expect("valid word") ^ &tx;
                    if on_c2perp {
                        pair.in_c1perp(&diff)
                    } else {
                        pair.in_c2(&diff)
                    }
                };
                Ok(TrialRecord {
                    point,
                    trial,
                    crossover: eps,
                    error_weight: errors.len(),
                    dense_errors: errors.iter().filter(|&&c| dense[c]).count(),
                    converged: result.converged,
                    valid_codeword: valid,
                    plain_success: plain,
                    coset_success: coset,
                    iterations: result.iterations,
                })
            })
            .collect();
        let records = records?;
        out.points
            .push(PointSummary::from_trials(cfg, eps, &records));
        out.trials.extend(records);
    }
    Ok(out)
}

fn bool_field(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn write_summary_csv<W: Write>(points: &[PointSummary], w: W) -> CliResult<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(SUMMARY_HEADER)?;
    for p in points {
        let coverage = p
            .coverage()
            .map_or("n/a".to_string(), |c| format!("{c:.6}"));
        let headline = p.headline();
        wr.write_record([
            SCHEMA_ID.to_string(),
            p.code_id.clone(),
            p.mode.clone(),
            p.crossover.to_string(),
            p.trials.to_string(),
            p.plain_failures.to_string(),
            p.coset_failures.to_string(),
            coverage,
            format!("{:.4}", p.mean_iters),
            p.seed.to_string(),
            p.wrong_codewords.to_string(),
            p.covered.to_string(),
            format!("{:.6e}", headline.estimate()),
            format!("{:.6e}", headline.upper),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_trials_csv<W: Write>(trials: &[TrialRecord], w: W) -> CliResult<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(TRIAL_HEADER)?;
    for t in trials {
        wr.write_record([
            TRIAL_SCHEMA_ID.to_string(),
            t.point.to_string(),
            t.trial.to_string(),
            t.crossover.to_string(),
            t.error_weight.to_string(),
            t.dense_errors.to_string(),
            bool_field(t.converged).to_string(),
            bool_field(t.valid_codeword).to_string(),
            bool_field(t.plain_success).to_string(),
            bool_field(t.coset_success).to_string(),
            t.iterations.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Reads a summary written by [`write_summary_csv`].
pub fn read_summary_csv<R: Read>(r: R) -> CliResult<Vec<PointSummary>> {
    let mut rd = csv::Reader::from_reader(r);
    let headers = rd.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Config(format!("summary csv lacks column `{name}`")))
    };
    let idx = [
        col("schema_id")?,
        col("code_id")?,
        col("mode")?,
        col("crossover")?,
        col("trials")?,
        col("plain_failures")?,
        col("coset_failures")?,
        col("wrong_codewords")?,
        col("covered")?,
        col("mean_iters")?,
        col("seed")?,
    ];
    let mut out = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| rec.get(idx[i]).unwrap_or("");
        if field(0) != SCHEMA_ID {
            return Err(CliError::Config(format!(
                "row {}: schema `{}`, expected `{SCHEMA_ID}`",
                line + 1,
                field(0)
            )));
        }
        let num = |i: usize| {
            field(i).parse::<f64>().map_err(|_| {
                CliError::Config(format!("row {}: bad number `{}`", line + 1, field(i)))
            })
        };
        let int = |i: usize| {
            field(i).parse::<u64>().map_err(|_| {
                CliError::Config(format!("row {}: bad count `{}`", line + 1, field(i)))
            })
        };
        out.push(PointSummary {
            code_id: field(1).to_string(),
            mode: field(2).to_string(),
            crossover: num(3)?,
            trials: int(4)?,
            plain_failures: int(5)?,
            coset_failures: int(6)?,
            wrong_codewords: int(7)?,
            covered: int(8)?,
            mean_iters: num(9)?,
            seed: int(10)?,
        });
    }
    Ok(out)
}

/// Mode of a summary, parsed back from its name.
pub fn parse_mode(name: &str) -> Option<Mode> {
    [
        Mode::C1Plain,
        Mode::C1Coset,
        Mode::C2perpPlain,
        Mode::C2perpCoset,
    ]
    .into_iter()
    .find(|m| m.name() == name)
}
