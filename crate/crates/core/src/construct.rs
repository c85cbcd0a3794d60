//! Efficiently encodable irregular LDPC codes built from a quasi-cyclic base
//! matrix `[H_p | H_d]` and a masking matrix, plus near-regular random codes
//! and a generic systematic encoder.
//!
//! Layout of the base matrix for parameters `(p, j, k)`, all blocks `p × p`:
//!
//! ```text
//! H_p = | T I       |      H_d = | I        I          ...  I          |
//!       |   I I     |            | P        P^2        ...  P^k        |
//!       |     ...   |            | ...                                 |
//!       |       I I |            | P^(j-1)  P^(2(j-1)) ...  P^(k(j-1)) |
//!       |         I |
//! ```
//!
//! `P` is the cyclic down-shift (`P[0][p-1] = 1`, `P[r][r-1] = 1`) and `T` is
//! the unit upper bidiagonal matrix. Masking replaces `H_d` blocks by zero
//! wherever the mask holds a 0.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BinMatrix, BinVector, Echelon};

/// Anything that maps information bits to codewords of a fixed code.
pub trait Encoder: Send + Sync {
    fn code_len(&self) -> usize;
    fn info_len(&self) -> usize;
    fn encode(&self, info: &BinVector) -> Result<BinVector>;
    /// Codeword positions that copy the information bits, in order.
    fn message_positions(&self) -> Vec<usize>;
}

/// A masking matrix with its identifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskMatrix {
    pub id: String,
    pub w: BinMatrix,
}

/// Identifiers of the embedded reference masks.
pub const MASK_IDS: [&str; 6] = ["A/0.82", "A/3-4", "A/2-3", "A/0.55", "B/0.8", "B/0.55"];

fn embedded_mask_text(id: &str) -> Option<&'static str> {
    Some(match id {
        "A/0.82" => include_str!("../masks/A/0.82.txt"),
        "A/3-4" => include_str!("../masks/A/3-4.txt"),
        "A/2-3" => include_str!("../masks/A/2-3.txt"),
        "A/0.55" => include_str!("../masks/A/0.55.txt"),
        "B/0.8" => include_str!("../masks/B/0.8.txt"),
        "B/0.55" => include_str!("../masks/B/0.55.txt"),
        _ => return None,
    })
}

/// Loads one of the embedded reference masks.
pub fn load_mask(id: &str) -> Result<MaskMatrix> {
    let text = embedded_mask_text(id).ok_or_else(|| Error::UnknownMask(id.to_string()))?;
    Ok(MaskMatrix {
        id: id.to_string(),
        w: BinMatrix::from_text(text)?,
    })
}

/// Loads `<dir>/<id>.txt`.
pub fn load_mask_from_dir(dir: &std::path::Path, id: &str) -> Result<MaskMatrix> {
    let path = dir.join(format!("{id}.txt"));
    let text = std::fs::read_to_string(&path).map_err(|_| Error::UnknownMask(id.to_string()))?;
    Ok(MaskMatrix {
        id: id.to_string(),
        w: BinMatrix::from_text(&text)?,
    })
}

fn is_odd_prime(p: usize) -> bool {
    p >= 3
        && p % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// A quasi-cyclic irregular LDPC code.
#[derive(Clone, Debug)]
pub struct LdpcCode {
    h: BinMatrix,
    p: usize,
    j: usize,
    k: usize,
    mask: Option<MaskMatrix>,
}

impl LdpcCode {
    pub fn h(&self) -> &BinMatrix {
        &self.h
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Code length `p(j + k)`.
    pub fn n(&self) -> usize {
        self.p * (self.j + self.k)
    }

    /// Number of checks `p j`.
    pub fn m(&self) -> usize {
        self.p * self.j
    }

    pub fn mask_id(&self) -> Option<&str> {
        self.mask.as_ref().map(|m| m.id.as_str())
    }

    /// Design rate `k / (j + k)`.
    pub fn rate(&self) -> Ratio<usize> {
        Ratio::new(self.k, self.j + self.k)
    }

    /// Whether data block `(i, l)` (`l` from 1) survives masking.
    fn block_kept(&self, i: usize, l: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m.w.get(i, l - 1))
    }

    pub fn into_h(self) -> BinMatrix {
        self.h
    }
}

/// Assembles the unmasked base matrix.
pub fn build_base(p: usize, j: usize, k: usize) -> Result<LdpcCode> {
    if !is_odd_prime(p) {
        return Err(Error::Constraint(format!("p = {p} is not an odd prime")));
    }
    if !(2 <= j && j <= k && k < p) {
        return Err(Error::Constraint(format!(
            "2 <= j <= k <= p - 1 fails for (p, j, k) = ({p}, {j}, {k})"
        )));
    }
    let m = p * j;
    let n = p * (j + k);
    let mut h = BinMatrix::zeros(m, n);

    // Parity part: T on block (0, 0), I on the diagonal below it and I on the
    // superdiagonal blocks.
    for r in 0..p {
        h.set(r, r, true);
        if r + 1 < p {
            h.set(r, r + 1, true);
        }
    }
    for i in 0..j {
        for r in 0..p {
            if i > 0 {
                h.set(i * p + r, i * p + r, true);
            }
            if i + 1 < j {
                h.set(i * p + r, (i + 1) * p + r, true);
            }
        }
    }

    // Data part: block (i, l) = P^(i l), i.e. entry (r, c) set when
    // r = c + i l (mod p).
    for i in 0..j {
        for l in 1..=k {
            let shift = (i * l) % p;
            for c in 0..p {
                let r = (c + shift) % p;
                h.set(i * p + r, m + (l - 1) * p + c, true);
            }
        }
    }
    Ok(LdpcCode {
        h,
        p,
        j,
        k,
        mask: None,
    })
}

/// Zeroes every data block whose mask entry is 0.
pub fn apply_mask(code: &LdpcCode, w: &MaskMatrix) -> Result<LdpcCode> {
    if w.w.rows() != code.j {
        return Err(Error::DimensionMismatch {
            op: "apply_mask rows",
            expected: code.j,
            found: w.w.rows(),
        });
    }
    if w.w.cols() != code.k {
        return Err(Error::DimensionMismatch {
            op: "apply_mask cols",
            expected: code.k,
            found: w.w.cols(),
        });
    }
    let mut out = code.clone();
    let p = code.p;
    let m = code.m();
    for i in 0..code.j {
        for l in 1..=code.k {
            if w.w.get(i, l - 1) {
                continue;
            }
            for r in 0..p {
                for c in 0..p {
                    out.h.set(i * p + r, m + (l - 1) * p + c, false);
                }
            }
        }
    }
    out.mask = Some(match &code.mask {
        None => w.clone(),
        Some(prev) => MaskMatrix {
            id: format!("{}&{}", prev.id, w.id),
            w: BinMatrix::from_fn(code.j, code.k, |i, l| prev.w.get(i, l) && w.w.get(i, l)),
        },
    });
    Ok(out)
}

/// Encodes `data` (length `p k`) into `(parity ‖ data)` by block
/// back-substitution through `H_p`. Cost is linear in the matrix weight.
pub fn efficient_encode(code: &LdpcCode, data: &BinVector) -> Result<BinVector> {
    let (p, j, k) = (code.p, code.j, code.k);
    if data.len() != p * k {
        return Err(Error::DimensionMismatch {
            op: "efficient_encode",
            expected: p * k,
            found: data.len(),
        });
    }
    // Syndrome of the data part, one p-bit block per block row.
    let mut s = vec![vec![false; p]; j];
    for bit in data.iter_ones() {
        let (l, c) = (bit / p + 1, bit % p);
        for (i, block) in s.iter_mut().enumerate() {
            if code.block_kept(i, l) {
                let r = (c + i * l) % p;
                block[r] ^= true;
            }
        }
    }
    // Block rows j-1 .. 1 carry [I I] (or a lone I at the bottom).
    let mut q = vec![vec![false; p]; j];
    q[j - 1] = s[j - 1].clone();
    for i in (1..j - 1).rev() {
        for r in 0..p {
            q[i][r] = s[i][r] ^ q[i + 1][r];
        }
    }
    // Block row 0: T q_0 = s_0 + q_1, T unit upper bidiagonal.
    let t: Vec<bool> = (0..p).map(|r| s[0][r] ^ q[1][r]).collect();
    q[0][p - 1] = t[p - 1];
    for r in (0..p - 1).rev() {
        q[0][r] = t[r] ^ q[0][r + 1];
    }

    let m = p * j;
    let mut out = BinVector::zeros(m + p * k);
    for (i, block) in q.iter().enumerate() {
        for (r, &b) in block.iter().enumerate() {
            if b {
                out.set(i * p + r, true);
            }
        }
    }
    for bit in data.iter_ones() {
        out.set(m + bit, true);
    }
    Ok(out)
}

impl Encoder for LdpcCode {
    fn code_len(&self) -> usize {
        self.n()
    }

    fn info_len(&self) -> usize {
        self.p * self.k
    }

    fn encode(&self, info: &BinVector) -> Result<BinVector> {
        efficient_encode(self, info)
    }

    fn message_positions(&self) -> Vec<usize> {
        (self.m()..self.n()).collect()
    }
}

/// Systematic encoder derived from any parity-check matrix by Gaussian
/// elimination: the free columns of the reduced form carry the information
/// bits (ascending), pivot columns carry parity.
#[derive(Clone, Debug)]
pub struct SystematicEncoder {
    n: usize,
    info_positions: Vec<usize>,
    parity: Vec<(usize, BinVector)>,
}

impl SystematicEncoder {
    pub fn from_parity_check(h: &BinMatrix) -> Self {
        let ech = Echelon::new(h, h.cols());
        let info_positions = ech.free_columns();
        let parity = ech
            .pivots()
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, ech.reduced().row(i).select(&info_positions)))
            .collect();
        SystematicEncoder {
            n: h.cols(),
            info_positions,
            parity,
        }
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }
}

impl Encoder for SystematicEncoder {
    fn code_len(&self) -> usize {
        self.n
    }

    fn info_len(&self) -> usize {
        self.info_positions.len()
    }

    fn encode(&self, info: &BinVector) -> Result<BinVector> {
        if info.len() != self.info_positions.len() {
            return Err(Error::DimensionMismatch {
                op: "systematic_encode",
                expected: self.info_positions.len(),
                found: info.len(),
            });
        }
        let mut out = BinVector::zeros(self.n);
        for bit in info.iter_ones() {
            out.set(self.info_positions[bit], true);
        }
        for (pos, row) in &self.parity {
            if row.dot(info) {
                out.set(*pos, true);
            }
        }
        Ok(out)
    }

    fn message_positions(&self) -> Vec<usize> {
        self.info_positions.clone()
    }
}

/// Random parity-check matrix with every column of weight `col_weight` and
/// row weights within one of `row_weight`.
///
/// Columns are filled left to right from the rows that still have spare
/// sockets; a row may take one extra edge only when fewer than `col_weight`
/// under-full rows remain. Deterministic given `seed`.
pub fn near_regular_ldpc(
    n: usize,
    col_weight: usize,
    row_weight: usize,
    seed: u64,
) -> Result<BinMatrix> {
    if n == 0 || col_weight == 0 || row_weight == 0 {
        return Err(Error::InvalidParameter(
            "near-regular parameters must be positive".into(),
        ));
    }
    let edges = n * col_weight;
    let m = (edges + row_weight / 2) / row_weight;
    if m < col_weight || edges > m * (row_weight + 1) || edges < m * (row_weight - 1) {
        return Err(Error::InvalidParameter(format!(
            "infeasible degree sequence: n = {n}, column weight {col_weight}, row weight {row_weight}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..64 {
        let mut h = BinMatrix::zeros(m, n);
        let mut weights = vec![0usize; m];
        for c in 0..n {
            let mut open: Vec<usize> = (0..m).filter(|&r| weights[r] < row_weight).collect();
            if open.len() < col_weight {
                let extra: Vec<usize> = (0..m).filter(|&r| weights[r] == row_weight).collect();
                open.extend(extra);
            }
            if open.len() < col_weight {
                continue 'attempt;
            }
            for &r in open.partial_shuffle(&mut rng, col_weight).0.iter() {
                h.set(r, c, true);
                weights[r] += 1;
            }
        }
        if weights
            .iter()
            .all(|&w| w + 1 >= row_weight && w <= row_weight + 1)
        {
            return Ok(h);
        }
    }
    Err(Error::InvalidParameter(format!(
        "failed to realize a near-regular ({col_weight}, {row_weight}) matrix of length {n}"
    )))
}
