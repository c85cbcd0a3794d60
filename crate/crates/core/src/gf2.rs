//! Bit-packed vectors and matrices over GF(2).
//!
//! [`BinMatrix`] stores rows as packed `u64` words, which keeps Gaussian
//! elimination cheap on the dense matrices produced by the CSS construction.
//! Sparse views (row/column supports, Tanner graphs) are derived on demand.
//!
//! All elimination routines pivot on the leftmost available column and the
//! topmost available row, so every derived basis is reproducible.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitXor, BitXorAssign};
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// A binary vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinVector {
    len: usize,
    words: Vec<u64>,
}

impl BinVector {
    pub fn zeros(len: usize) -> Self {
        BinVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from `0`/nonzero bytes.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            assert!(
                i < len,
                "support position {i} out of range for length {len}"
            );
            v.set(i, true);
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let extra = words.len() * WORD - len;
        if extra > 0 {
            if let Some(last) = words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
        BinVector { len, words }
    }

    /// Uniformly random vector.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let words = (0..words_for(len)).map(|_| rng.gen::<u64>()).collect();
        Self::from_words(len, words)
    }

    /// Each bit is set independently with probability `p`.
    pub fn bernoulli<R: Rng + ?Sized>(len: usize, p: f64, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        if p <= 0.0 {
            return v;
        }
        for i in 0..len {
            if rng.gen::<f64>() < p {
                v.set(i, true);
            }
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Positions holding a one, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    /// Number of positions where both vectors hold a one.
    pub fn overlap(&self, other: &BinVector) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BinVector) -> bool {
        self.overlap(other) % 2 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Lexicographic order on bit sequences read from index 0, with 0 < 1.
    pub fn lex_cmp(&self, other: &BinVector) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if (a >> bit) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }

    /// Restriction to the given positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> BinVector {
        let mut out = BinVector::zeros(positions.len());
        for (k, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(k, true);
            }
        }
        out
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for BinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinVector({})", self.to_bit_string())
    }
}

impl fmt::Display for BinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl FromStr for BinVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = BinVector::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        Ok(v)
    }
}

impl BitXorAssign<&BinVector> for BinVector {
    fn bitxor_assign(&mut self, rhs: &BinVector) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        xor_words(&mut self.words, &rhs.words);
    }
}

impl BitXor<&BinVector> for &BinVector {
    type Output = BinVector;

    fn bitxor(self, rhs: &BinVector) -> BinVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl BitAnd<&BinVector> for &BinVector {
    type Output = BinVector;

    fn bitand(self, rhs: &BinVector) -> BinVector {
        assert_eq!(self.len(), rhs.len());
        let words = self
            .words()
            .iter()
            .zip(rhs.words())
            .map(|(a, b)| a & b)
            .collect();
        BinVector::from_words(self.len(), words)
    }
}

/// A dense, row-major, bit-packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BinMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Stacks vectors as rows. All vectors must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[BinVector]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "from_rows",
                    expected: cols,
                    found: v.len(),
                });
            }
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        Ok(m)
    }

    /// Parses rows written as `0`/`1` strings, e.g. `["110", "011"]`.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.trim().len());
        let vecs = rows
            .iter()
            .map(|r| r.parse::<BinVector>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(cols, &vecs)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, density: f64, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| rng.gen::<f64>() < density)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let mask = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.stride + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BinVector {
        BinVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_vectors(&self) -> Vec<BinVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn set_row(&mut self, r: usize, v: &BinVector) {
        assert_eq!(v.len(), self.cols);
        self.row_words_mut(r).copy_from_slice(v.words());
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        xor_words(b, a);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for w in 0..s {
            self.data.swap(a * s + w, b * s + w);
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows).map(|r| self.row_weight(r)).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for r in 0..self.rows {
            for c in self.row_support(r) {
                w[c] += 1;
            }
        }
        w
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    /// Total number of ones.
    pub fn weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Column indices of the ones in row `r`, ascending.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.row_words(r).iter().enumerate() {
            let mut rest = w;
            while rest != 0 {
                out.push(wi * WORD + rest.trailing_zeros() as usize);
                rest &= rest - 1;
            }
        }
        out
    }

    /// Row indices of the ones in every column (column adjacency lists).
    pub fn col_supports(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cols];
        for r in 0..self.rows {
            for c in self.row_support(r) {
                out[c].push(r);
            }
        }
        out
    }

    /// Number of columns where rows `a` and `b` both hold a one.
    pub fn row_overlap(&self, a: usize, b: usize) -> usize {
        self.row_words(a)
            .iter()
            .zip(self.row_words(b))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    /// Overlap between row `r` and an arbitrary vector.
    pub fn row_overlap_with(&self, r: usize, v: &BinVector) -> usize {
        self.row_words(r)
            .iter()
            .zip(v.words())
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut t = BinMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = BinMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row_support(r) {
                let src = other.row_words(k);
                xor_words(out.row_words_mut(r), src);
            }
        }
        Ok(out)
    }

    /// `self · otherᵀ`.
    pub fn mul_transpose(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "mat_mul_transpose",
                expected: self.cols,
                found: other.cols,
            });
        }
        self.mul(&other.transpose())
    }

    /// Syndrome `self · xᵀ`.
    pub fn mul_vec(&self, x: &BinVector) -> Result<BinVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "mat_vec",
                expected: self.cols,
                found: x.len(),
            });
        }
        let mut out = BinVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// True when `self · xᵀ = 0`.
    pub fn annihilates(&self, x: &BinVector) -> bool {
        x.len() == self.cols
            && (0..self.rows).all(|r| {
                self.row_words(r)
                    .iter()
                    .zip(x.words())
                    .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                    & 1
                    == 0
            })
    }

    /// Submatrix keeping the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> BinMatrix {
        let mut out = BinMatrix::zeros(self.rows, columns.len());
        for r in 0..self.rows {
            for (k, &c) in columns.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, k, true);
                }
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BinMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Reduced row echelon form.
    pub fn echelon(&self) -> Echelon {
        Echelon::new(self, self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{x : self · xᵀ = 0}`, one vector per free column in
    /// ascending column order.
    pub fn nullspace_basis(&self) -> Vec<BinVector> {
        self.echelon().nullspace_basis()
    }

    /// Any `x` with `self · xᵀ = rhs` (free variables zero), or `None` when
    /// the system is inconsistent.
    pub fn solve(&self, rhs: &BinVector) -> Result<Option<BinVector>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch {
                op: "solve",
                expected: self.rows,
                found: rhs.len(),
            });
        }
        let mut aug = BinMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                aug.set(r, c, true);
            }
            if rhs.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let ech = Echelon::new(&aug, self.cols + 1);
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BinVector::zeros(self.cols);
        for (i, &p) in ech.pivots.iter().enumerate() {
            if ech.reduced.get(i, self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    /// True iff `x` is a GF(2) combination of rows.
    pub fn in_rowspace(&self, x: &BinVector) -> Result<bool> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "in_rowspace",
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(self.echelon().contains(x))
    }

    /// True when both matrices have the same row space, i.e. the same
    /// nullspace.
    pub fn same_rowspace(&self, other: &BinMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let a = self.echelon();
        let b = other.echelon();
        a.rank() == b.rank() && a.reduced_rows() == b.reduced_rows()
    }

    /// Serializes as `"rows cols"` followed by one `0`/`1` line per row.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1) + 16);
        s.push_str(&format!("{} {}\n", self.rows, self.cols));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<BinMatrix> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let mut dims = header.split_whitespace().map(str::parse::<usize>);
        let (rows, cols) = match (dims.next(), dims.next(), dims.next()) {
            (Some(Ok(r)), Some(Ok(c)), None) => (r, c),
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("expected \"rows cols\", found {header:?}"),
                })
            }
        };
        let mut m = BinMatrix::zeros(rows, cols);
        let mut r = 0;
        for (line_no, line) in lines {
            if line.is_empty() {
                continue;
            }
            if r == rows {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("more than {rows} rows"),
                });
            }
            if line.len() != cols {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {cols} columns, found {}", line.len()),
                });
            }
            for (c, ch) in line.bytes().enumerate() {
                match ch {
                    b'0' => {}
                    b'1' => m.set(r, c, true),
                    other => {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("unexpected character {:?}", other as char),
                        })
                    }
                }
            }
            r += 1;
        }
        if r != rows {
            return Err(Error::Parse {
                line: r + 2,
                msg: format!("expected {rows} rows, found {r}"),
            });
        }
        Ok(m)
    }
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{}", self.rows, self.cols)?;
        if self.rows * self.cols <= 4096 {
            for r in 0..self.rows {
                writeln!(f, "  {}", self.row(r))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    reduced: BinMatrix,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Gauss-Jordan elimination pivoting only on columns `< pivot_limit`.
    pub fn new(m: &BinMatrix, pivot_limit: usize) -> Echelon {
        let mut a = m.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_limit.min(a.cols) {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| a.get(i, c)) else {
                continue;
            };
            a.swap_rows(p, r);
            let w0 = c / WORD;
            let s = a.stride;
            let pivot_row: Vec<u64> = a.row_words(r)[w0..].to_vec();
            for i in 0..a.rows {
                if i != r && a.get(i, c) {
                    xor_words(&mut a.data[i * s + w0..(i + 1) * s], &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: a, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The full reduced matrix (zero rows at the bottom).
    pub fn reduced(&self) -> &BinMatrix {
        &self.reduced
    }

    /// The nonzero rows of the reduced form.
    pub fn reduced_rows(&self) -> Vec<BinVector> {
        (0..self.rank()).map(|r| self.reduced.row(r)).collect()
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.reduced.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.reduced.cols).filter(|&c| !is_pivot[c]).collect()
    }

    pub fn nullspace_basis(&self) -> Vec<BinVector> {
        let cols = self.reduced.cols;
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = BinVector::zeros(cols);
                v.set(f, true);
                for (i, &p) in self.pivots.iter().enumerate() {
                    if self.reduced.get(i, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Reduces `x` against the pivot rows; the remainder is zero iff `x` is in
    /// the row space.
    pub fn reduce(&self, x: &BinVector) -> BinVector {
        let mut y = x.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            if y.get(p) {
                xor_words(&mut y.words, self.reduced.row_words(i));
            }
        }
        y
    }

    pub fn contains(&self, x: &BinVector) -> bool {
        x.len() == self.reduced.cols && self.reduce(x).is_zero()
    }
}
