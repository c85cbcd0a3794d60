//! Erasure decoding: peeling, maximum likelihood, and the row transform that
//! makes peeling as strong as maximum likelihood.

use super::{DecodeResult, Flavor};
use crate::error::{Error, Result};
use crate::gf2::{BinMatrix, BinVector};

/// Variables left erased when peeling stalls.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StoppingSet {
    pub variables: Vec<usize>,
}

impl StoppingSet {
    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }
}

/// Every check touching `set` touches it at least twice.
pub fn is_stopping_set(h: &BinMatrix, set: &[usize]) -> bool {
    let mut member = vec![false; h.cols()];
    for &v in set {
        member[v] = true;
    }
    (0..h.rows()).all(|c| h.row_support(c).iter().filter(|&&v| member[v]).count() != 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErasureOutcome {
    pub result: DecodeResult,
    pub residual: StoppingSet,
}

fn erasure_mask(n: usize, erasures: &[usize]) -> Result<Vec<bool>> {
    let mut erased = vec![false; n];
    for &e in erasures {
        if e >= n {
            return Err(Error::InvalidParameter(format!(
                "erasure position {e} out of range for length {n}"
            )));
        }
        erased[e] = true;
    }
    Ok(erased)
}

fn check_len(h: &BinMatrix, known: &BinVector, op: &'static str) -> Result<()> {
    if known.len() != h.cols() {
        return Err(Error::DimensionMismatch {
            op,
            expected: h.cols(),
            found: known.len(),
        });
    }
    Ok(())
}

/// Resolves checks with a single erased neighbour until none is left.
/// Values of `known` at erased positions are ignored. `iterations` counts
/// resolved bits.
pub fn bec_peeling(h: &BinMatrix, erasures: &[usize], known: &BinVector) -> Result<ErasureOutcome> {
    check_len(h, known, "bec_peeling")?;
    let n = h.cols();
    let mut erased = erasure_mask(n, erasures)?;
    let mut x = known.clone();
    for (v, &e) in erased.iter().enumerate() {
        if e {
            x.set(v, false);
        }
    }

    let checks: Vec<Vec<usize>> = (0..h.rows()).map(|c| h.row_support(c)).collect();
    let mut var_checks = vec![Vec::new(); n];
    for (c, vars) in checks.iter().enumerate() {
        for &v in vars {
            var_checks[v].push(c);
        }
    }
    let mut open: Vec<usize> = checks
        .iter()
        .map(|vars| vars.iter().filter(|&&v| erased[v]).count())
        .collect();
    let mut parity: Vec<bool> = checks
        .iter()
        .map(|vars| vars.iter().filter(|&&v| x.get(v)).count() % 2 == 1)
        .collect();
    if let Some(c) = (0..checks.len()).find(|&c| open[c] == 0 && parity[c]) {
        return Err(Error::InconsistentErasures { check: Some(c) });
    }

    let mut queue: Vec<usize> = (0..checks.len()).filter(|&c| open[c] == 1).rev().collect();
    let mut resolved = 0;
    while let Some(c) = queue.pop() {
        if open[c] != 1 {
            continue;
        }
        let v = *checks[c]
            .iter()
            .find(|&&v| erased[v])
            .expect("one erased neighbour");
        let value = parity[c];
        erased[v] = false;
        x.set(v, value);
        resolved += 1;
        for &d in &var_checks[v] {
            open[d] -= 1;
            parity[d] ^= value;
            match open[d] {
                0 if parity[d] => return Err(Error::InconsistentErasures { check: Some(d) }),
                1 => queue.push(d),
                _ => {}
            }
        }
    }

    let residual: Vec<usize> = (0..n).filter(|&v| erased[v]).collect();
    let result = if residual.is_empty() {
        DecodeResult::success(x, resolved, Flavor::BecPeeling)
    } else {
        DecodeResult::failure(resolved, Flavor::BecPeeling)
    };
    Ok(ErasureOutcome {
        result,
        residual: StoppingSet {
            variables: residual,
        },
    })
}

/// Solves for the erased bits; more than one solution is a failure.
pub fn bec_ml(h: &BinMatrix, erasures: &[usize], known: &BinVector) -> Result<DecodeResult> {
    check_len(h, known, "bec_ml")?;
    let n = h.cols();
    let erased = erasure_mask(n, erasures)?;
    let cols: Vec<usize> = (0..n).filter(|&v| erased[v]).collect();
    let mut x = known.clone();
    for &v in &cols {
        x.set(v, false);
    }
    let rhs = h.mul_vec(&x)?;
    let sub = h.select_columns(&cols);
    let Some(z) = sub.solve(&rhs)? else {
        return Err(Error::InconsistentErasures { check: None });
    };
    if sub.rank() < cols.len() {
        return Ok(DecodeResult::failure(1, Flavor::BecMl));
    }
    for (i, &v) in cols.iter().enumerate() {
        x.set(v, z.get(i));
    }
    Ok(DecodeResult::success(x, 1, Flavor::BecMl))
}

/// Row operations that bring erased columns to weight one.
///
/// Erased columns are visited in ascending order. Each takes as pivot the
/// first incident row not already used as a pivot and adds it to every other
/// incident row. A column without such a row keeps its current weight.
pub fn transform_for_erasures(h: &BinMatrix, erasures: &[usize]) -> BinMatrix {
    let mut m = h.clone();
    let mut used = vec![false; m.rows()];
    let mut cols: Vec<usize> = erasures.to_vec();
    cols.sort_unstable();
    cols.dedup();
    for c in cols {
        let Some(pivot) = (0..m.rows()).find(|&r| !used[r] && m.get(r, c)) else {
            continue;
        };
        used[pivot] = true;
        for r in 0..m.rows() {
            if r != pivot && m.get(r, c) {
                m.add_row(pivot, r);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> BinMatrix {
        BinMatrix::from_strs(&["111100", "001100", "000111"]).unwrap()
    }

    #[test]
    fn no_erasures_is_immediate_success() {
        let h = example();
        let x = BinVector::zeros(6);
        let out = bec_peeling(&h, &[], &x).unwrap();
        assert!(out.result.converged && out.residual.is_empty());
        assert!(bec_ml(&h, &[], &x).unwrap().converged);
    }

    #[test]
    fn single_erasure_is_recovered() {
        let h = example();
        // 110000 is a codeword.
        let mut x = BinVector::from_bits(&[1, 1, 0, 0, 0, 0]);
        x.set(0, false);
        let out = bec_peeling(&h, &[0], &x).unwrap();
        assert_eq!(
            out.result.word.unwrap(),
            BinVector::from_bits(&[1, 1, 0, 0, 0, 0])
        );
    }

    #[test]
    fn codeword_support_is_ambiguous() {
        let h = example();
        let x = BinVector::zeros(6);
        // 110000 is a nonzero codeword; erasing its support leaves two candidates.
        let ml = bec_ml(&h, &[0, 1], &x).unwrap();
        assert!(!ml.converged);
        let t = transform_for_erasures(&h, &[0, 1]);
        let peel = bec_peeling(&t, &[0, 1], &x).unwrap();
        assert!(!peel.result.converged);
        assert!(is_stopping_set(&t, &peel.residual.variables));
        // Both columns already have weight one but share their only row.
        assert_eq!(t.select_columns(&[0, 1]).rank(), 1);
    }

    #[test]
    fn inconsistent_known_bits_are_rejected() {
        let h = example();
        let x = BinVector::from_bits(&[0, 0, 1, 0, 0, 0]);
        assert_eq!(
            bec_peeling(&h, &[], &x).unwrap_err(),
            Error::InconsistentErasures { check: Some(0) }
        );
    }

    #[test]
    fn transform_preserves_the_row_space() {
        let h = example();
        let t = transform_for_erasures(&h, &[2, 4]);
        assert!(h.same_rowspace(&t));
        assert_eq!(t.col_weight(2), 1);
        assert_eq!(t.col_weight(4), 1);
    }
}
