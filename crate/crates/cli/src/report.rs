//! Eve-bound and coset-coverage reports.

use std::fmt::Write;

use css_ldpc::bb84::{delta_for_bound, eve_bound, EveBoundInput};
use css_ldpc::Proportion;

use crate::sweep::PointSummary;
use crate::{CliError, CliResult};

/// Published bound values: `(crossover, bound)` for a 712-bit key.
pub const PUBLISHED_EVE: [(f64, f64); 2] = [(0.065, 0.5936), (0.0675, 6.312)];
pub const PUBLISHED_KEY_LEN: u32 = 712;

/// Published coverage: `(crossover, percent covered)`.
pub const PUBLISHED_COVERAGE: [(f64, f64); 6] = [
    (0.08, 85.8),
    (0.0775, 82.4),
    (0.075, 75.8),
    (0.0725, 67.5),
    (0.07, 61.1),
    (0.0675, 52.4),
];

const SAME_POINT: f64 = 1e-12;

/// Bound at one crossover with `δ` the worse measured coset BLER.
#[derive(Clone, Debug, PartialEq)]
pub struct EveRow {
    pub crossover: f64,
    /// Which side supplied `δ`: `"c1"` or `"c2perp"`.
    pub worse: &'static str,
    pub delta: Proportion,
    pub bound: f64,
    pub bound_lower: f64,
    pub bound_upper: f64,
}

impl EveRow {
    pub fn zero_failure(&self) -> bool {
        self.delta.zero_failure()
    }
}

fn bound_at(delta: f64, k: u32) -> CliResult<f64> {
    // The upper confidence end may touch 1; cap just below it.
    let delta = delta.min(1.0 - 1e-12);
    Ok(eve_bound(EveBoundInput { delta, k })?)
}

/// Pairs the C1 and C2⊥ coset sweeps point by point.
pub fn eve_report(
    c1: &[PointSummary],
    c2perp: &[PointSummary],
    key_len: u32,
) -> CliResult<Vec<EveRow>> {
    if c1.is_empty() || c2perp.is_empty() {
        return Err(CliError::Config(
            "eve report needs both C1 and C2perp sweep data".into(),
        ));
    }
    let mut rows = Vec::new();
    for a in c1 {
        let Some(b) = c2perp
            .iter()
            .find(|b| (b.crossover - a.crossover).abs() < SAME_POINT)
        else {
            return Err(CliError::Config(format!(
                "crossover {} missing from the C2perp sweep",
                a.crossover
            )));
        };
        let (pa, pb) = (a.coset(), b.coset());
        let (worse, delta) = if pb.estimate() > pa.estimate() {
            ("c2perp", pb)
        } else {
            ("c1", pa)
        };
        rows.push(EveRow {
            crossover: a.crossover,
            worse,
            delta,
            bound: bound_at(delta.estimate(), key_len)?,
            bound_lower: bound_at(delta.lower, key_len)?,
            bound_upper: bound_at(delta.upper, key_len)?,
        });
    }
    Ok(rows)
}

/// Bound for a single known `δ`.
pub fn eve_single(delta: f64, key_len: u32) -> CliResult<String> {
    let v = eve_bound(EveBoundInput { delta, k: key_len })?;
    Ok(format!(
        "delta = {delta:e}, key_len = {key_len}: I_Eve < {v:.6}\n"
    ))
}

pub fn format_eve_report(rows: &[EveRow], key_len: u32) -> CliResult<String> {
    let mut s = String::new();
    let _ = writeln!(s, "key_len = {key_len}");
    let _ = writeln!(
        s,
        "crossover  worse   delta        delta_95%            bound      bound_95%"
    );
    for r in rows {
        if r.zero_failure() {
            let _ = writeln!(
                s,
                "{:<10} {:<7} 0/{:<10} <= {:.3e} (rule of three)  < {:.6} (bound at delta = 3/T)",
                r.crossover, r.worse, r.delta.trials, r.delta.upper, r.bound_upper
            );
        } else {
            let _ = writeln!(
                s,
                "{:<10} {:<7} {:.4e}  [{:.3e}, {:.3e}]  {:.6}  [{:.6}, {:.6}]",
                r.crossover,
                r.worse,
                r.delta.estimate(),
                r.delta.lower,
                r.delta.upper,
                r.bound,
                r.bound_lower,
                r.bound_upper
            );
        }
    }
    let _ = writeln!(s, "published reference (key_len = {PUBLISHED_KEY_LEN}):");
    for (eps, published) in PUBLISHED_EVE {
        let implied = delta_for_bound(published, PUBLISHED_KEY_LEN)?;
        let measured = rows.iter().find(|r| (r.crossover - eps).abs() < SAME_POINT);
        let verdict = match measured {
            Some(r) if key_len == PUBLISHED_KEY_LEN => {
                if r.bound_lower <= published && published <= r.bound_upper {
                    format!(
                        "measured [{:.6}, {:.6}] consistent",
                        r.bound_lower, r.bound_upper
                    )
                } else {
                    format!(
                        "measured [{:.6}, {:.6}] diverges",
                        r.bound_lower, r.bound_upper
                    )
                }
            }
            _ => "not measured".to_string(),
        };
        let _ = writeln!(
            s,
            "  crossover {eps}: published < {published} (implies delta = {implied:.4e}); {verdict}"
        );
    }
    Ok(s)
}

/// Coverage table for a C2⊥ sweep next to the published values.
pub fn format_table1(points: &[PointSummary]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "crossover%  trials  wrong  covered  coverage%  published%"
    );
    for p in points {
        let coverage = p
            .coverage()
            .map_or("n/a".to_string(), |c| format!("{:.1}", 100.0 * c));
        let published = PUBLISHED_COVERAGE
            .iter()
            .find(|(e, _)| (e - p.crossover).abs() < SAME_POINT)
            .map_or("-".to_string(), |(_, v)| format!("{v:.1}"));
        let _ = writeln!(
            s,
            "{:<11} {:<7} {:<6} {:<8} {:<10} {}",
            100.0 * p.crossover,
            p.trials,
            p.wrong_codewords,
            p.covered,
            coverage,
            published
        );
    }
    s
}
