//! `Z_M`-linear index codes: `x = sum_k w_k c_k mod M` with an invertible
//! encoding matrix `C` whose rows are the generators `c_k`.
//!
//! Codewords are kept as integer vectors of symmetric representatives, i.e.
//! points of the multidimensional QAM grid `Z_M^K`. Any transmit offset is
//! applied by the channel simulator, not here.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{next_tuple, Modulus, RingMatrix, RingVector};
use crate::subset::{Subset, MAX_MESSAGES};

/// Default cap on the number of points enumerated in a single subcode.
pub const DEFAULT_SUBCODE_BUDGET: u64 = 1 << 20;

/// A validated index code. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexCode {
    matrix: RingMatrix,
    inverse: RingMatrix,
    first_row: Option<Vec<i64>>,
}

/// Side information at a receiver: the index set `S` and the known message
/// values `a_S`, listed in increasing index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideInfo {
    set: Subset,
    values: Vec<i64>,
}

impl SideInfo {
    pub fn new(set: Subset, values: Vec<i64>) -> Result<Self> {
        if values.len() != set.len() {
            return Err(Error::DimensionMismatch { expected: set.len(), got: values.len() });
        }
        Ok(SideInfo { set, values })
    }

    pub fn none() -> Self {
        SideInfo { set: Subset::EMPTY, values: Vec::new() }
    }

    /// Side information consistent with the full message `w` on `set`.
    pub fn from_message(set: Subset, w: &[i64]) -> Self {
        SideInfo { set, values: set.indices().map(|i| w[i]).collect() }
    }

    pub fn set(&self) -> Subset {
        self.set
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

fn circulant_rows(first_row: &[i64]) -> Vec<Vec<i64>> {
    let k = first_row.len();
    (0..k).map(|i| (0..k).map(|j| first_row[(j + k - i) % k]).collect()).collect()
}

impl IndexCode {
    /// Circulant code: row `i + 1` is the right cyclic shift of row `i`.
    pub fn new_circulant(m: Modulus, k: usize, first_row: &[i64]) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("K must be at least 2, got {k}")));
        }
        if first_row.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: first_row.len() });
        }
        let row: Vec<i64> = first_row.iter().map(|&a| m.reduce(a)).collect();
        let matrix = RingMatrix::from_rows(&circulant_rows(&row), m)?;
        let mut code = Self::from_matrix(matrix)?;
        code.first_row = Some(row);
        Ok(code)
    }

    /// General code from a `K x K` encoding matrix.
    pub fn from_matrix(matrix: RingMatrix) -> Result<Self> {
        let k = matrix.nrows();
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: k, cols: matrix.ncols() });
        }
        if !(2..=MAX_MESSAGES).contains(&k) {
            return Err(Error::InvalidParameter(format!("K must be in 2..={MAX_MESSAGES}, got {k}")));
        }
        let det = matrix.det_mod()?;
        let inverse = matrix
            .inverse()?
            .ok_or(Error::NotUniquelyDecodable { det: det.value(), modulus: matrix.modulus().get() })?;
        // Keep the circulant tag if the matrix happens to be circulant.
        let first_row = (matrix.rows() == circulant_rows(matrix.row(0)).as_slice()).then(|| matrix.row(0).to_vec());
        Ok(IndexCode { matrix, inverse, first_row })
    }

    pub fn identity(m: Modulus, k: usize) -> Result<Self> {
        let mut row = vec![0; k];
        row[0] = 1;
        Self::new_circulant(m, k, &row)
    }

    pub fn modulus(&self) -> Modulus {
        self.matrix.modulus()
    }

    /// Number of messages (and dimensions).
    pub fn k(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &RingMatrix {
        &self.inverse
    }

    /// Generator `c_k` for 0-based `k`.
    pub fn generator(&self, k: usize) -> &[i64] {
        self.matrix.row(k)
    }

    pub fn is_circulant(&self) -> bool {
        self.first_row.is_some()
    }

    pub fn first_row(&self) -> Option<&[i64]> {
        self.first_row.as_deref()
    }

    /// The code with every generator multiplied by `u`; `u` must be a unit.
    pub fn scaled(&self, u: i64) -> Result<IndexCode> {
        let m = self.modulus();
        let rows: Vec<Vec<i64>> = self.matrix.rows().iter().map(|r| r.iter().map(|&x| m.mul(x, u)).collect()).collect();
        IndexCode::from_matrix(RingMatrix::from_rows(&rows, m)?)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.k() {
            return Err(Error::DimensionMismatch { expected: self.k(), got: len });
        }
        Ok(())
    }

    /// `x = sum_k w_k c_k mod M`.
    pub fn encode(&self, w: &[i64]) -> Result<RingVector> {
        self.check_len(w.len())?;
        self.matrix.left_mul(w)
    }

    /// Message tuple labelling the grid point `x`, i.e. `x C^-1 mod M`.
    pub fn message_of(&self, x: &[i64]) -> Result<RingVector> {
        self.check_len(x.len())?;
        self.inverse.left_mul(x)
    }

    /// Nearest grid point of `Z_M^K` to `y`, coordinate by coordinate.
    /// Halfway cases go to the smaller value.
    pub fn nearest_grid_point(&self, y: &[f64]) -> Vec<i64> {
        let m = self.modulus();
        let (lo, hi) = (m.min_rep() as f64, m.max_rep() as f64);
        y.iter().map(|&v| (v - 0.5).ceil().clamp(lo, hi) as i64).collect()
    }

    /// ML decoding for a receiver without side information.
    pub fn decode_no_side_info(&self, y: &[f64]) -> Result<RingVector> {
        self.check_len(y.len())?;
        self.message_of(&self.nearest_grid_point(y))
    }

    fn check_side(&self, side: &SideInfo) -> Result<()> {
        side.set.validate(self.k(), false)
    }

    fn subcode_size(&self, side: &SideInfo, budget: u64) -> Result<u64> {
        let free = side.set.complement(self.k()).len() as u32;
        let size = (self.modulus().get() as u128).pow(free);
        if size > budget as u128 {
            return Err(Error::BudgetExceeded { what: "subcode enumeration", needed: size, budget: budget as u128 });
        }
        Ok(size as u64)
    }

    /// Visits every point of the expurgated subcode `X_{a_S}` as
    /// `(w, x)`, with `w` the full message tuple, in lexicographic order of
    /// the unknown messages.
    pub fn for_each_subcode_point<F>(&self, side: &SideInfo, budget: u64, mut f: F) -> Result<()>
    where
        F: FnMut(&[i64], &[i64]),
    {
        self.check_side(side)?;
        self.subcode_size(side, budget)?;
        let m = self.modulus();
        let k = self.k();
        let free: Vec<usize> = side.set.complement(k).indices().collect();
        let mut w = vec![0i64; k];
        for (i, &a) in side.set.indices().zip(&side.values) {
            w[i] = m.reduce(a);
        }
        let mut t = vec![m.min_rep(); free.len()];
        loop {
            for (&i, &v) in free.iter().zip(&t) {
                w[i] = v;
            }
            let x = self.matrix.left_mul(&w)?;
            f(&w, x.entries());
            if !next_tuple(&mut t, m) {
                break;
            }
        }
        Ok(())
    }

    /// All `M^{|S̄|}` codewords consistent with the side information.
    pub fn subcode_points(&self, side: &SideInfo) -> Result<Vec<RingVector>> {
        self.subcode_points_capped(side, DEFAULT_SUBCODE_BUDGET)
    }

    pub fn subcode_points_capped(&self, side: &SideInfo, budget: u64) -> Result<Vec<RingVector>> {
        let m = self.modulus();
        let mut out = Vec::new();
        self.for_each_subcode_point(side, budget, |_, x| {
            out.push(crate::modring::vec_mod(x, m));
        })?;
        Ok(out)
    }

    /// ML decoding restricted to the subcode `X_{a_S}`. Returns the full
    /// message tuple; ties go to the first point in enumeration order.
    pub fn decode_with_side_info(&self, y: &[f64], side: &SideInfo) -> Result<RingVector> {
        self.decode_with_side_info_capped(y, side, DEFAULT_SUBCODE_BUDGET)
    }

    pub fn decode_with_side_info_capped(&self, y: &[f64], side: &SideInfo, budget: u64) -> Result<RingVector> {
        self.check_len(y.len())?;
        let mut best: Option<(f64, Vec<i64>)> = None;
        self.for_each_subcode_point(side, budget, |w, x| {
            let d: f64 = y.iter().zip(x).map(|(&a, &b)| (a - b as f64).powi(2)).sum();
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, w.to_vec()));
            }
        })?;
        let (_, w) = best.expect("subcode is never empty");
        Ok(crate::modring::vec_mod(&w, self.modulus()))
    }

    pub fn to_record(&self) -> CodeRecord {
        CodeRecord {
            m: self.modulus().get(),
            k: self.k(),
            first_row: self.first_row.clone(),
            matrix: if self.first_row.is_some() { None } else { Some(self.matrix.rows().to_vec()) },
        }
    }
}

impl fmt::Display for IndexCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_row {
            Some(r) => write!(f, "{}", format_row(r)),
            None => {
                let rows: Vec<String> = self.matrix.rows().iter().map(|r| format_row(r)).collect();
                write!(f, "[{}]", rows.join(";"))
            }
        }
    }
}

/// `(1,-2,0)`.
pub fn format_row(r: &[i64]) -> String {
    let parts: Vec<String> = r.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Plain serialized form of a code: `{"M", "K", "first_row" | "matrix"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    #[serde(rename = "M")]
    pub m: i64,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_row: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
}

impl CodeRecord {
    pub fn build(&self) -> Result<IndexCode> {
        let m = Modulus::new(self.m)?;
        match (&self.first_row, &self.matrix) {
            (Some(row), None) => IndexCode::new_circulant(m, self.k, row),
            (None, Some(rows)) => {
                if rows.len() != self.k {
                    return Err(Error::DimensionMismatch { expected: self.k, got: rows.len() });
                }
                IndexCode::from_matrix(RingMatrix::from_rows(rows, m)?)
            }
            _ => Err(Error::InvalidParameter("code record needs exactly one of first_row or matrix".into())),
        }
    }
}

impl Serialize for IndexCode {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for IndexCode {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        CodeRecord::deserialize(de)?.build().map_err(serde::de::Error::custom)
    }
}
