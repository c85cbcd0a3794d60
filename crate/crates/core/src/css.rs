//! CSS pairs `C1 ⊃ C2` built from a single LDPC parity-check matrix.
//!
//! `H2` is formed from `M` codewords of `C1`: take the `N - M` columns of `H1`
//! with the smallest weights (ties by column index), read each of the `M`
//! rows of that submatrix as an information vector and encode it with a
//! `C1` encoder. Because every row of `H2` lies in `C1`, `H1 · H2ᵀ = 0`.
//!
//! Conventions: `C1 = null(H1)`, `C2 = rowspace(H2)`, `C2⊥ = null(H2)` and
//! `C1⊥ = rowspace(H1)`.

use num_rational::Ratio;
use rand::Rng;

use crate::construct::Encoder;
use crate::error::{Error, Result};
use crate::gf2::{BinMatrix, BinVector, Echelon};

/// Which end of the column-weight ordering feeds `H1'`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColumnSelection {
    #[default]
    Lightest,
    Heaviest,
}

/// The two quotients whose cosets matter for key agreement and privacy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quotient {
    /// `C1 / C2`: equality up to rows of `H2`.
    C1OverC2,
    /// `C2⊥ / C1⊥`: equality up to rows of `H1`.
    C2PerpOverC1Perp,
}

#[derive(Clone, Debug)]
pub struct CssPair {
    h1: BinMatrix,
    h2: BinMatrix,
    selected_columns: Vec<usize>,
    message_positions: Vec<usize>,
    h1_space: Echelon,
    h2_space: Echelon,
    g1: Vec<BinVector>,
    g2perp: Vec<BinVector>,
}

impl CssPair {
    /// Wraps an arbitrary `(H1, H2)` without checking the CSS condition; use
    /// [`verify_css`] to test it.
    pub fn from_parts(h1: BinMatrix, h2: BinMatrix) -> Result<CssPair> {
        if h1.cols() != h2.cols() {
            return Err(Error::DimensionMismatch {
                op: "css pair",
                expected: h1.cols(),
                found: h2.cols(),
            });
        }
        let h1_space = h1.echelon();
        let h2_space = h2.echelon();
        let g1 = h1_space.nullspace_basis();
        let g2perp = h2_space.nullspace_basis();
        Ok(CssPair {
            h1,
            h2,
            selected_columns: Vec::new(),
            message_positions: Vec::new(),
            h1_space,
            h2_space,
            g1,
            g2perp,
        })
    }

    pub fn h1(&self) -> &BinMatrix {
        &self.h1
    }

    pub fn h2(&self) -> &BinMatrix {
        &self.h2
    }

    pub fn n(&self) -> usize {
        self.h1.cols()
    }

    /// Columns of `H1` that formed `H1'`, ascending.
    pub fn selected_columns(&self) -> &[usize] {
        &self.selected_columns
    }

    /// Columns of `H2` outside the encoder's message positions; these carry
    /// the dense parity part. Every column counts as dense for pairs built
    /// with [`CssPair::from_parts`].
    pub fn dense_columns(&self) -> Vec<usize> {
        let mut sparse = vec![false; self.n()];
        for &c in &self.message_positions {
            sparse[c] = true;
        }
        (0..self.n()).filter(|&c| !sparse[c]).collect()
    }

    pub fn rank_h1(&self) -> usize {
        self.h1_space.rank()
    }

    pub fn rank_h2(&self) -> usize {
        self.h2_space.rank()
    }

    /// True when `H2` has full row rank.
    pub fn h2_full_rank(&self) -> bool {
        self.rank_h2() == self.h2.rows()
    }

    /// Basis of `C1`.
    pub fn g1(&self) -> &[BinVector] {
        &self.g1
    }

    /// Basis of `C2⊥`.
    pub fn g2perp(&self) -> &[BinVector] {
        &self.g2perp
    }

    /// `dim C1 - dim C2`.
    pub fn css_dimension(&self) -> usize {
        (self.n() - self.rank_h1()).saturating_sub(self.rank_h2())
    }

    /// True iff `x ∈ C2`.
    pub fn in_c2(&self, x: &BinVector) -> bool {
        self.h2_space.contains(x)
    }

    /// True iff `x ∈ C1⊥`.
    pub fn in_c1perp(&self, x: &BinVector) -> bool {
        self.h1_space.contains(x)
    }

    pub fn random_c1<R: Rng + ?Sized>(&self, rng: &mut R) -> BinVector {
        random_combination(self.n(), &self.g1, rng)
    }

    pub fn random_c2<R: Rng + ?Sized>(&self, rng: &mut R) -> BinVector {
        random_combination(self.n(), &self.h2.row_vectors(), rng)
    }

    pub fn random_c2perp<R: Rng + ?Sized>(&self, rng: &mut R) -> BinVector {
        random_combination(self.n(), &self.g2perp, rng)
    }

    pub fn random_c1perp<R: Rng + ?Sized>(&self, rng: &mut R) -> BinVector {
        random_combination(self.n(), &self.h1.row_vectors(), rng)
    }

    /// Header describing the pair: dimensions, ranks and selected columns.
    pub fn header_text(&self) -> String {
        let cols: Vec<String> = self
            .selected_columns
            .iter()
            .map(|c| c.to_string())
            .collect();
        format!(
            "n = {}\nrows_h1 = {}\nrows_h2 = {}\nrank_h1 = {}\nrank_h2 = {}\ncss_dimension = {}\nselected_columns = [{}]\n",
            self.n(),
            self.h1.rows(),
            self.h2.rows(),
            self.rank_h1(),
            self.rank_h2(),
            self.css_dimension(),
            cols.join(", ")
        )
    }
}

fn random_combination<R: Rng + ?Sized>(n: usize, basis: &[BinVector], rng: &mut R) -> BinVector {
    let mut out = BinVector::zeros(n);
    for b in basis {
        if rng.gen::<bool>() {
            out ^= b;
        }
    }
    out
}

/// Builds `H2` from `H1` and a `C1` encoder.
pub fn build_css(
    h1: &BinMatrix,
    encoder: &dyn Encoder,
    selection: ColumnSelection,
) -> Result<CssPair> {
    let (m, n) = (h1.rows(), h1.cols());
    let h1_space = h1.echelon();
    if h1_space.rank() != m {
        return Err(Error::RankDeficient {
            expected: m,
            measured: h1_space.rank(),
        });
    }
    if encoder.code_len() != n {
        return Err(Error::DimensionMismatch {
            op: "build_css encoder length",
            expected: n,
            found: encoder.code_len(),
        });
    }
    if encoder.info_len() != n - m {
        return Err(Error::DimensionMismatch {
            op: "build_css encoder dimension",
            expected: n - m,
            found: encoder.info_len(),
        });
    }

    let weights = h1.col_weights();
    let mut order: Vec<usize> = (0..n).collect();
    match selection {
        ColumnSelection::Lightest => order.sort_by_key(|&c| (weights[c], c)),
        ColumnSelection::Heaviest => order.sort_by_key(|&c| (std::cmp::Reverse(weights[c]), c)),
    }
    let mut selected: Vec<usize> = order[..n - m].to_vec();
    selected.sort_unstable();

    let sub = h1.select_columns(&selected);
    let mut h2 = BinMatrix::zeros(m, n);
    for r in 0..m {
        let codeword = encoder.encode(&sub.row(r))?;
        if !h1.annihilates(&codeword) {
            return Err(Error::EncoderInconsistent { row: r });
        }
        h2.set_row(r, &codeword);
    }
    debug_assert!(h1.mul_transpose(&h2)?.is_zero());

    let h2_space = h2.echelon();
    let g1 = h1_space.nullspace_basis();
    let g2perp = h2_space.nullspace_basis();
    Ok(CssPair {
        h1: h1.clone(),
        h2,
        selected_columns: selected,
        message_positions: encoder.message_positions(),
        h1_space,
        h2_space,
        g1,
        g2perp,
    })
}

/// `(dim C1 - dim C2) / N`; equals `2r - 1` when both matrices have full
/// rank `M`.
pub fn css_rate(pair: &CssPair) -> Ratio<usize> {
    Ratio::new(pair.css_dimension(), pair.n())
}

/// Result of [`verify_css`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssReport {
    /// `H1 · H2ᵀ = 0`.
    pub product_zero: bool,
    /// Rows of `H2` that are not codewords of `C1`.
    pub bad_rows: Vec<usize>,
    pub rank_h2: usize,
    pub css_dimension: usize,
}

impl CssReport {
    pub fn pass(&self) -> bool {
        self.product_zero && self.bad_rows.is_empty()
    }
}

pub fn verify_css(pair: &CssPair) -> CssReport {
    let bad_rows: Vec<usize> = (0..pair.h2.rows())
        .filter(|&r| !pair.h1.annihilates(&pair.h2.row(r)))
        .collect();
    let product_zero = pair
        .h1
        .mul_transpose(&pair.h2)
        .map(|p| p.is_zero())
        .unwrap_or(false);
    CssReport {
        product_zero,
        bad_rows,
        rank_h2: pair.rank_h2(),
        css_dimension: pair.css_dimension(),
    }
}

/// Linear map whose value on `u ∈ C1` labels the coset `u + C2`.
#[derive(Clone, Debug)]
pub struct KeyMap {
    k: BinMatrix,
}

impl KeyMap {
    pub fn key_len(&self) -> usize {
        self.k.rows()
    }

    pub fn matrix(&self) -> &BinMatrix {
        &self.k
    }

    pub fn key(&self, u: &BinVector) -> Result<BinVector> {
        self.k.mul_vec(u)
    }
}

/// Builds the key map by extending `C2` to `C1`.
///
/// Reducing `u` against the reduced row echelon form of `H2` yields the
/// canonical representative of `u + C2`, a linear function of `u` supported
/// on the free columns of that form. Reducing the basis of `C1` the same way
/// and eliminating picks `dim C1 - dim C2` of those coordinates on which the
/// representatives of `C1 / C2` are in bijection with all bit strings.
pub fn make_key_map(pair: &CssPair) -> Result<KeyMap> {
    if !pair.h2_full_rank() {
        return Err(Error::RankDeficient {
            expected: pair.h2.rows(),
            measured: pair.rank_h2(),
        });
    }
    let space = &pair.h2_space;
    let free = space.free_columns();
    let images: Vec<BinVector> = pair
        .g1
        .iter()
        .map(|g| space.reduce(g).select(&free))
        .collect();
    let image_matrix = BinMatrix::from_rows(free.len(), &images)?;
    let image_space = image_matrix.echelon();
    let key_cols: Vec<usize> = image_space.pivots().iter().map(|&q| free[q]).collect();
    debug_assert_eq!(key_cols.len(), pair.css_dimension());

    let n = pair.n();
    let reduced = space.reduced();
    let mut k = BinMatrix::zeros(key_cols.len(), n);
    for (row, &c) in key_cols.iter().enumerate() {
        k.set(row, c, true);
        for (i, &p) in space.pivots().iter().enumerate() {
            if reduced.get(i, c) {
                k.set(row, p, true);
            }
        }
    }
    Ok(KeyMap { k })
}

/// Coset equality in the chosen quotient. Both vectors must lie in the
/// numerator code.
pub fn coset_equal(
    pair: &CssPair,
    a: &BinVector,
    b: &BinVector,
    quotient: Quotient,
) -> Result<bool> {
    for v in [a, b] {
        if v.len() != pair.n() {
            return Err(Error::DimensionMismatch {
                op: "coset_equal",
                expected: pair.n(),
                found: v.len(),
            });
        }
    }
    let diff = a ^ b;
    match quotient {
        Quotient::C1OverC2 => {
            if !pair.h1.annihilates(a) || !pair.h1.annihilates(b) {
                return Err(Error::NotInCode("C1"));
            }
            Ok(pair.in_c2(&diff))
        }
        Quotient::C2PerpOverC1Perp => {
            if !pair.h2.annihilates(a) || !pair.h2.annihilates(b) {
                return Err(Error::NotInCode("C2perp"));
            }
            Ok(pair.in_c1perp(&diff))
        }
    }
}
