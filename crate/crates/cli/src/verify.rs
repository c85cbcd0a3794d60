//! Catalog verification: dimensions, rates, mask checksums and the CSS
//! identity for every code.

use std::fmt::{self, Write};
use std::path::Path;

use num_rational::Ratio;

use css_ldpc::catalog::{BuiltCode, Catalog, CodeEntry, CodeSpec};
use css_ldpc::construct::{load_mask, load_mask_from_dir, MaskMatrix};
use css_ldpc::css::{build_css, css_rate, verify_css};
use css_ldpc::{ColumnSelection, CssPair, Result};

/// Measured properties of one catalog code and everything that failed.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeCheck {
    pub id: String,
    pub rows: usize,
    pub cols: usize,
    pub rate: Option<Ratio<usize>>,
    /// The catalog's unreduced spelling of `rate` when they agree.
    pub rate_label: String,
    pub rank_h1: usize,
    pub rank_h2: usize,
    pub css_rate: Option<Ratio<usize>>,
    pub failures: Vec<String>,
}

impl CodeCheck {
    fn new(id: &str) -> Self {
        CodeCheck {
            id: id.to_string(),
            rows: 0,
            cols: 0,
            rate: None,
            rate_label: "-".into(),
            rank_h1: 0,
            rank_h2: 0,
            css_rate: None,
            failures: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records the CSS identity checks for `pair`.
    pub fn check_pair(&mut self, pair: &CssPair) {
        let report = verify_css(pair);
        if !report.product_zero {
            self.failures.push("h1 * h2^T != 0".into());
        }
        if !report.bad_rows.is_empty() {
            self.failures
                .push(format!("h2 rows outside C1: {:?}", report.bad_rows));
        }
        self.rank_h2 = report.rank_h2;
        let rate = css_rate(pair);
        self.css_rate = Some(rate);
        let (m, n) = (pair.h1().rows(), pair.n());
        if report.rank_h2 == m
            && pair.rank_h1() == m
            && rate != Ratio::new(n.saturating_sub(2 * m), n)
        {
            self.failures.push(format!(
                "css rate {rate} differs from 2r - 1 = {}/{n}",
                n - 2 * m
            ));
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CatalogReport {
    pub codes: Vec<CodeCheck>,
}

impl CatalogReport {
    pub fn pass(&self) -> bool {
        self.codes.iter().all(CodeCheck::pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.codes
            .iter()
            .flat_map(|c| c.failures.iter().map(move |f| format!("{}: {f}", c.id)))
            .collect()
    }
}

impl fmt::Display for CatalogReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<12} {:>6} {:>6} {:>8} {:>8} {:>8} {:>12}  status",
            "code", "rows", "cols", "rate", "rank_h1", "rank_h2", "css_rate"
        );
        for c in &self.codes {
            let show = |r: &Option<Ratio<usize>>| r.map_or("-".to_string(), |r| r.to_string());
            let _ = writeln!(
                s,
                "{:<12} {:>6} {:>6} {:>8} {:>8} {:>8} {:>12}  {}",
                c.id,
                c.rows,
                c.cols,
                c.rate_label,
                c.rank_h1,
                c.rank_h2,
                show(&c.css_rate),
                if c.pass() {
                    "ok".to_string()
                } else {
                    c.failures.join("; ")
                }
            );
        }
        f.write_str(&s)
    }
}

fn check_entry(
    catalog: &Catalog,
    entry: &CodeEntry,
    masks: &dyn Fn(&str) -> Result<MaskMatrix>,
) -> CodeCheck {
    let mut check = CodeCheck::new(&entry.id);
    if let CodeSpec::Masked { mask, .. } = &entry.spec {
        match (masks(mask), catalog.mask_checksum(mask)) {
            (Ok(m), Some(sum)) => {
                if let Err(e) = sum.check(&m) {
                    check.failures.push(format!("checksum failure: {e}"));
                }
            }
            (Ok(_), None) => check.failures.push(format!("no checksum for mask {mask}")),
            (Err(e), _) => {
                check.failures.push(format!("mask {mask}: {e}"));
                return check;
            }
        }
    }
    let code: BuiltCode = match entry.build_with(masks) {
        Ok(c) => c,
        Err(e) => {
            check.failures.push(format!("construction failed: {e}"));
            return check;
        }
    };
    check.rows = code.h.rows();
    check.cols = code.h.cols();
    if (check.rows, check.cols) != (entry.rows, entry.cols) {
        check.failures.push(format!(
            "shape {}x{}, expected {}x{}",
            check.rows, check.cols, entry.rows, entry.cols
        ));
    }
    if check.cols > 0 {
        let rate = Ratio::new(check.cols - check.rows.min(check.cols), check.cols);
        check.rate = Some(rate);
        check.rate_label = rate.to_string();
        match entry.expected_rate() {
            Ok(expected) if expected != rate => check
                .failures
                .push(format!("rate {rate}, expected {expected}")),
            Ok(_) => check.rate_label = entry.rate.clone(),
            Err(e) => check.failures.push(e.to_string()),
        }
    }
    let encoder = code.encoder();
    match build_css(&code.h, encoder.as_ref(), ColumnSelection::Lightest) {
        Ok(pair) => {
            check.rank_h1 = pair.rank_h1();
            check.check_pair(&pair);
        }
        Err(e) => {
            check.rank_h1 = code.h.rank();
            check.failures.push(format!("css construction failed: {e}"));
        }
    }
    check
}

/// Verifies the codes named in `ids` (all when empty). Masks come from
/// `mask_dir` when given, otherwise from the embedded copies.
pub fn verify_catalog(catalog: &Catalog, ids: &[String], mask_dir: Option<&Path>) -> CatalogReport {
    let masks = |id: &str| match mask_dir {
        Some(dir) => load_mask_from_dir(dir, id),
        None => load_mask(id),
    };
    let mut report = CatalogReport::default();
    for entry in &catalog.codes {
        if !ids.is_empty() && !ids.iter().any(|i| i == &entry.id) {
            continue;
        }
        report.codes.push(check_entry(catalog, entry, &masks));
    }
    for id in ids {
        if catalog.entry(id).is_err() {
            let mut c = CodeCheck::new(id);
            c.failures.push("unknown code".into());
            report.codes.push(c);
        }
    }
    report
}
