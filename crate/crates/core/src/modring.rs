//! Exact arithmetic over `Z_M` using zero-centred representatives.
//!
//! For even `M` the representatives are `{-M/2, ..., (M-2)/2}`, for odd `M`
//! they are `{-(M-1)/2, ..., (M-1)/2}`. Both sets are `{lo, ..., lo + M - 1}`
//! with `lo = -floor(M/2)`, which is what every reduction here uses.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus. Products of two representatives then stay
/// below `2^60`, so dot products of up to a few hundred terms fit in `i128`
/// trivially and a single product always fits in `i64`.
pub const MAX_MODULUS: i64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Modulus(i64);

impl Modulus {
    pub fn new(m: i64) -> Result<Self> {
        if (2..=MAX_MODULUS).contains(&m) {
            Ok(Modulus(m))
        } else {
            Err(Error::InvalidModulus(m))
        }
    }

    #[inline]
    pub fn get(self) -> i64 {
        self.0
    }

    /// Smallest representative, `-floor(M/2)`.
    #[inline]
    pub fn min_rep(self) -> i64 {
        -(self.0 / 2)
    }

    /// Largest representative.
    #[inline]
    pub fn max_rep(self) -> i64 {
        self.min_rep() + self.0 - 1
    }

    #[inline]
    pub fn contains(self, a: i64) -> bool {
        (self.min_rep()..=self.max_rep()).contains(&a)
    }

    /// Symmetric remainder of `a`.
    #[inline]
    pub fn reduce(self, a: i64) -> i64 {
        self.reduce_wide(a as i128)
    }

    #[inline]
    pub fn reduce_wide(self, a: i128) -> i64 {
        let lo = self.min_rep() as i128;
        ((a - lo).rem_euclid(self.0 as i128) + lo) as i64
    }

    /// All representatives in increasing order, starting at `min_rep`.
    pub fn elements(self) -> impl DoubleEndedIterator<Item = i64> + Clone {
        self.min_rep()..=self.max_rep()
    }

    pub fn is_unit(self, a: i64) -> bool {
        a.unsigned_abs().gcd(&(self.0 as u64)) == 1
    }

    /// Multiplicative inverse of `a`, if it is a unit.
    pub fn inverse(self, a: i64) -> Option<i64> {
        let e = (self.reduce(a)).extended_gcd(&self.0);
        if e.gcd == 1 {
            Some(self.reduce(e.x))
        } else {
            None
        }
    }

    pub fn units(self) -> impl Iterator<Item = i64> {
        self.elements().filter(move |&a| self.is_unit(a))
    }

    #[inline]
    pub fn mul(self, a: i64, b: i64) -> i64 {
        self.reduce_wide(a as i128 * b as i128)
    }

    #[inline]
    pub fn add(self, a: i64, b: i64) -> i64 {
        self.reduce_wide(a as i128 + b as i128)
    }
}

impl TryFrom<i64> for Modulus {
    type Error = Error;
    fn try_from(m: i64) -> Result<Self> {
        Modulus::new(m)
    }
}

impl From<Modulus> for i64 {
    fn from(m: Modulus) -> i64 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An element of `Z_M`, always held as its symmetric representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    value: i64,
    modulus: Modulus,
}

/// Reduces `a` to its representative in the symmetric set of `Z_M`.
pub fn symmetric_mod(a: i64, m: Modulus) -> RingElement {
    RingElement { value: m.reduce(a), modulus: m }
}

#[allow(clippy::should_implement_trait)]
impl RingElement {
    pub fn new(a: i64, m: Modulus) -> Self {
        symmetric_mod(a, m)
    }

    #[inline]
    pub fn value(self) -> i64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_unit(self) -> bool {
        self.modulus.is_unit(self.value)
    }

    pub fn inverse(self) -> Option<RingElement> {
        self.modulus.inverse(self.value).map(|v| RingElement { value: v, modulus: self.modulus })
    }

    pub fn add(self, other: RingElement) -> Result<RingElement> {
        let m = same_modulus(self.modulus, other.modulus)?;
        Ok(RingElement { value: m.add(self.value, other.value), modulus: m })
    }

    pub fn mul(self, other: RingElement) -> Result<RingElement> {
        let m = same_modulus(self.modulus, other.modulus)?;
        Ok(RingElement { value: m.mul(self.value, other.value), modulus: m })
    }

    pub fn neg(self) -> RingElement {
        symmetric_mod(-self.value, self.modulus)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// Convenience wrapper: `is_unit(a)` for a ring element.
pub fn is_unit(a: RingElement) -> bool {
    a.is_unit()
}

fn same_modulus(a: Modulus, b: Modulus) -> Result<Modulus> {
    if a == b {
        Ok(a)
    } else {
        Err(Error::ModulusMismatch(a.get(), b.get()))
    }
}

/// A vector over `Z_M`; entries are symmetric representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingVector {
    entries: Vec<i64>,
    modulus: Modulus,
}

impl RingVector {
    pub fn zeros(len: usize, m: Modulus) -> Self {
        RingVector { entries: vec![0; len], modulus: m }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.entries
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> RingElement {
        RingElement { value: self.entries[i], modulus: self.modulus }
    }

    /// Squared Euclidean norm of the natural embedding into `Z^K`.
    pub fn norm_sq(&self) -> i64 {
        self.entries.iter().map(|&x| x * x).sum()
    }
}

impl fmt::Display for RingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Reduces each coordinate of an integer vector.
pub fn vec_mod(x: &[i64], m: Modulus) -> RingVector {
    RingVector { entries: x.iter().map(|&a| m.reduce(a)).collect(), modulus: m }
}

pub fn vec_add(a: &RingVector, b: &RingVector) -> Result<RingVector> {
    let m = same_modulus(a.modulus, b.modulus)?;
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    let entries = a.entries.iter().zip(&b.entries).map(|(&x, &y)| m.add(x, y)).collect();
    Ok(RingVector { entries, modulus: m })
}

pub fn scalar_mul(s: RingElement, v: &RingVector) -> Result<RingVector> {
    let m = same_modulus(s.modulus, v.modulus)?;
    let entries = v.entries.iter().map(|&x| m.mul(s.value, x)).collect();
    Ok(RingVector { entries, modulus: m })
}

/// A matrix over `Z_M` stored row-major with symmetric representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    rows: Vec<Vec<i64>>,
    cols: usize,
    modulus: Modulus,
}

impl RingMatrix {
    /// Builds a matrix from integer rows, reducing every entry.
    pub fn from_rows(rows: &[Vec<i64>], m: Modulus) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, got: bad.len() });
        }
        let rows = rows.iter().map(|r| r.iter().map(|&a| m.reduce(a)).collect()).collect();
        Ok(RingMatrix { rows, cols, modulus: m })
    }

    pub fn identity(n: usize, m: Modulus) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| m.reduce(i64::from(i == j))).collect()).collect();
        RingMatrix { rows, cols: n, modulus: m }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Row vector times matrix: `sum_i w_i * row_i mod M`.
    pub fn left_mul(&self, w: &[i64]) -> Result<RingVector> {
        if w.len() != self.nrows() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), got: w.len() });
        }
        let m = self.modulus;
        let entries = (0..self.cols)
            .map(|j| {
                let acc: i128 = w.iter().zip(&self.rows).map(|(&wi, r)| wi as i128 * r[j] as i128).sum();
                m.reduce_wide(acc)
            })
            .collect();
        Ok(RingVector { entries, modulus: m })
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        same_modulus(self.modulus, other.modulus)?;
        if self.cols != other.nrows() {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.nrows() });
        }
        let rows = self.rows.iter().map(|r| other.left_mul(r).map(RingVector::into_entries)).collect::<Result<_>>()?;
        Ok(RingMatrix { rows, cols: other.cols, modulus: self.modulus })
    }

    /// Determinant over `Z_M`.
    ///
    /// Euclidean row elimination: within each column the entries are driven
    /// to a single nonzero pivot by repeated integer division with remainder,
    /// using only swaps (sign flip) and row additions (determinant
    /// preserving). No inverses are needed, so this works for any `M`.
    pub fn det_mod(&self) -> Result<RingElement> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.nrows(), cols: self.cols });
        }
        let m = self.modulus;
        let n = self.cols;
        let mut a = self.rows.clone();
        let mut sign = 1i64;
        for col in 0..n {
            loop {
                // Smallest nonzero magnitude at or below the diagonal.
                let pivot = (col..n).filter(|&r| a[r][col] != 0).min_by_key(|&r| a[r][col].unsigned_abs());
                let Some(p) = pivot else {
                    return Ok(symmetric_mod(0, m));
                };
                if p != col {
                    a.swap(p, col);
                    sign = -sign;
                }
                let mut done = true;
                for r in col + 1..n {
                    if a[r][col] == 0 {
                        continue;
                    }
                    let q = a[r][col] / a[col][col];
                    for j in col..n {
                        let v = a[r][j] as i128 - q as i128 * a[col][j] as i128;
                        a[r][j] = m.reduce_wide(v);
                    }
                    if a[r][col] != 0 {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
        }
        let det = (0..n).fold(sign, |acc, i| m.mul(acc, a[i][i]));
        Ok(symmetric_mod(det, m))
    }

    /// Matrix with row `i` and column `j` removed.
    fn minor(&self, i: usize, j: usize) -> RingMatrix {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != i)
            .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
            .collect();
        RingMatrix { rows, cols: self.cols - 1, modulus: self.modulus }
    }

    /// Classical adjugate: transpose of the cofactor matrix.
    pub fn adjugate(&self) -> Result<RingMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.nrows(), cols: self.cols });
        }
        let n = self.cols;
        let m = self.modulus;
        if n == 1 {
            return Ok(RingMatrix::identity(1, m));
        }
        let mut adj = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let d = self.minor(i, j).det_mod()?.value();
                let cof = if (i + j) % 2 == 0 { d } else { -d };
                adj[j][i] = m.reduce(cof);
            }
        }
        Ok(RingMatrix { rows: adj, cols: n, modulus: m })
    }

    /// Inverse over `Z_M` via `adj(C) * det(C)^-1`; `None` if the
    /// determinant is not a unit.
    pub fn inverse(&self) -> Result<Option<RingMatrix>> {
        let det = self.det_mod()?;
        let Some(det_inv) = det.inverse() else {
            return Ok(None);
        };
        let adj = self.adjugate()?;
        let m = self.modulus;
        let rows = adj.rows.iter().map(|r| r.iter().map(|&v| m.mul(v, det_inv.value())).collect()).collect();
        Ok(Some(RingMatrix { rows, cols: self.cols, modulus: m }))
    }
}

/// Determinant of a square matrix over `Z_M`.
pub fn det_mod(c: &RingMatrix) -> Result<RingElement> {
    c.det_mod()
}

/// Advances `t` to the next tuple of representatives in lexicographic order
/// (last coordinate fastest). Returns `false` after wrapping past the last
/// tuple, leaving `t` at the first tuple again.
pub fn next_tuple(t: &mut [i64], m: Modulus) -> bool {
    for x in t.iter_mut().rev() {
        if *x < m.max_rep() {
            *x += 1;
            return true;
        }
        *x = m.min_rep();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: i64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn symmetric_mod_examples() {
        assert_eq!(symmetric_mod(-3, m(4)).value(), 1);
        assert_eq!(symmetric_mod(-6, m(4)).value(), -2);
        for modulus in 2..20 {
            assert_eq!(symmetric_mod(0, m(modulus)).value(), 0);
        }
        assert_eq!(symmetric_mod(2, m(4)).value(), -2);
        assert_eq!(symmetric_mod(3, m(5)).value(), -2);
        assert_eq!(symmetric_mod(2, m(5)).value(), 2);
        assert_eq!(symmetric_mod(i64::MIN, m(7)).value(), m(7).reduce_wide(i64::MIN as i128));
    }

    #[test]
    fn representative_sets() {
        assert_eq!(m(4).elements().collect::<Vec<_>>(), vec![-2, -1, 0, 1]);
        assert_eq!(m(5).elements().collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(m(2).elements().collect::<Vec<_>>(), vec![-1, 0]);
    }

    #[test]
    fn modulus_bounds() {
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(MAX_MODULUS + 1).is_err());
        assert!(Modulus::new(2).is_ok());
    }

    #[test]
    fn units() {
        assert!(RingElement::new(1, m(4)).is_unit());
        assert!(RingElement::new(-3, m(4)).is_unit());
        assert!(!RingElement::new(2, m(8)).is_unit());
        assert!(!RingElement::new(0, m(8)).is_unit());
        assert_eq!(m(8).units().collect::<Vec<_>>(), vec![-3, -1, 1, 3]);
        assert_eq!(m(9).inverse(2), Some(-4));
        assert_eq!(m(8).inverse(4), None);
    }

    #[test]
    fn det_examples() {
        let c = RingMatrix::from_rows(&[vec![1, -2], vec![-2, 1]], m(4)).unwrap();
        assert_eq!(c.det_mod().unwrap().value(), 1);
        let c = RingMatrix::from_rows(&[vec![1, 2], vec![2, 1]], m(8)).unwrap();
        assert_eq!(c.det_mod().unwrap().value(), -3);
        for k in 1..6 {
            assert_eq!(RingMatrix::identity(k, m(6)).det_mod().unwrap().value(), 1);
        }
        let c = RingMatrix::from_rows(&[vec![2, 2], vec![2, 2]], m(4)).unwrap();
        assert_eq!(c.det_mod().unwrap().value(), 0);
    }

    #[test]
    fn det_rejects_non_square() {
        let c = RingMatrix::from_rows(&[vec![1, 2, 3], vec![2, 1, 0]], m(8)).unwrap();
        assert!(matches!(c.det_mod(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(RingMatrix::from_rows(&[vec![1, 2], vec![1]], m(8)).is_err());
    }

    /// Leibniz-formula determinant over the integers, then reduced.
    fn det_leibniz(a: &[Vec<i64>]) -> i64 {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0i64;
        fn heap(k: usize, perm: &mut Vec<usize>, a: &[Vec<i64>], total: &mut i64) {
            if k == 1 {
                let mut inv = 0;
                for i in 0..perm.len() {
                    for j in i + 1..perm.len() {
                        if perm[i] > perm[j] {
                            inv += 1;
                        }
                    }
                }
                let prod: i64 = perm.iter().enumerate().map(|(i, &p)| a[i][p]).product();
                *total += if inv % 2 == 0 { prod } else { -prod };
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, a, total);
                if k % 2 == 0 {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
            }
        }
        heap(n, &mut perm, a, &mut total);
        total
    }

    #[test]
    fn det_matches_leibniz_and_inverse_is_inverse() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let modulus = m(rng.random_range(2..40));
            let n = rng.random_range(1..6);
            let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(-20..20)).collect()).collect();
            let c = RingMatrix::from_rows(&rows, modulus).unwrap();
            let expect = modulus.reduce(det_leibniz(c.rows()));
            assert_eq!(c.det_mod().unwrap().value(), expect, "{rows:?} mod {modulus}");
            if let Some(inv) = c.inverse().unwrap() {
                assert_eq!(c.mul(&inv).unwrap(), RingMatrix::identity(n, modulus));
                assert_eq!(inv.mul(&c).unwrap(), RingMatrix::identity(n, modulus));
            } else {
                assert!(!modulus.is_unit(expect));
            }
        }
    }

    #[test]
    fn vector_ops() {
        let v = vec_mod(&[1, -2], m(4));
        let z = RingVector::zeros(2, m(4));
        assert_eq!(vec_add(&z, &v).unwrap(), v);
        assert_eq!(scalar_mul(RingElement::new(3, m(4)), &v).unwrap().entries(), &[-1, -2]);
        assert_eq!(scalar_mul(RingElement::new(1, m(4)), &v).unwrap(), v);
        assert!(vec_add(&v, &RingVector::zeros(3, m(4))).is_err());
        assert!(vec_add(&v, &RingVector::zeros(2, m(5))).is_err());
        assert!(scalar_mul(RingElement::new(1, m(5)), &v).is_err());
    }

    #[test]
    fn unit_iff_invertible_exhaustive() {
        for modulus in 2..=64 {
            let md = m(modulus);
            for a in md.elements() {
                let has_inverse = md.elements().any(|b| md.mul(a, b) == md.reduce(1));
                assert_eq!(md.is_unit(a), has_inverse, "a={a} M={modulus}");
                assert_eq!(md.inverse(a).is_some(), has_inverse);
            }
        }
    }

    #[test]
    fn det_unit_iff_bijection_exhaustive() {
        // Every K x K matrix for M <= 4, K <= 2 plus random 3x3 ones for M <= 8.
        use rand::{Rng, SeedableRng};
        let check = |c: &RingMatrix| {
            let md = c.modulus();
            let k = c.nrows();
            let mut seen = std::collections::HashSet::new();
            let mut w = vec![md.min_rep(); k];
            loop {
                seen.insert(c.left_mul(&w).unwrap().into_entries());
                if !crate::modring::next_tuple(&mut w, md) {
                    break;
                }
            }
            let bij = seen.len() == (md.get() as usize).pow(k as u32);
            assert_eq!(c.det_mod().unwrap().is_unit(), bij, "{c:?}");
        };
        for modulus in 2..=4 {
            let md = m(modulus);
            let mut e = vec![md.min_rep(); 4];
            loop {
                let c = RingMatrix::from_rows(&[e[..2].to_vec(), e[2..].to_vec()], md).unwrap();
                check(&c);
                if !next_tuple(&mut e, md) {
                    break;
                }
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let md = m(rng.random_range(2..=8));
            let rows: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| rng.random_range(-4..4)).collect()).collect();
            check(&RingMatrix::from_rows(&rows, md).unwrap());
        }
    }
}
