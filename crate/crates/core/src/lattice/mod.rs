//! Construction-A lattices of expurgated subcodes and their shortest
//! vectors.
//!
//! For a side-information set `S`, the subcode `X_{S̄}` spanned by the
//! generators `c_k`, `k ∉ S`, lifts to the lattice `Λ = X_{S̄} + M Z^K`.
//! A shortest vector of `Λ` outside `M Z^K` has length `d_S`; when every
//! shortest vector lies in `M Z^K` the search radius is widened until the
//! shortest vector outside `M Z^K` is found.

mod distance;
mod enumerate;
mod hnf;
mod lll;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::indexcode::IndexCode;
use crate::subset::Subset;

pub use distance::{
    brute_force_distance, brute_force_distance_capped, coset_distances, subgroup_min_norm, subset_distance,
    subset_distance_with, DistanceMethod, DistanceOptions, SubsetDistance, DEFAULT_BRUTE_FORCE_BUDGET,
};
pub use enumerate::enumerate_ball;
pub use hnf::modular_hnf;
pub use lll::{is_lll_reduced, lll_in_place, IntegralGram};

/// Largest dimension accepted by the shortest-vector enumeration.
pub const MAX_ENUM_DIM: usize = 12;

/// Cap on the number of witnesses kept in a [`ShortestVectorReport`].
pub const DEFAULT_WITNESS_CAP: usize = 64;

/// A full-rank integer lattice containing `M Z^K`; rows of `basis` are the
/// basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    basis: Vec<Vec<i64>>,
    det: u128,
    modulus: i64,
}

/// Result of a shortest-vector computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestVectorReport {
    pub norm_sq: i64,
    /// Shortest vectors, one of each `±v` pair, at most the witness cap.
    pub witnesses: Vec<Vec<i64>>,
    /// Number of shortest vectors up to sign (not capped).
    pub count: usize,
    /// Some shortest vector has a coordinate not divisible by `M`.
    pub any_outside_mz: bool,
}

pub(crate) fn norm_sq(v: &[i64]) -> i64 {
    v.iter().map(|&x| x * x).sum()
}

pub(crate) fn in_mz(v: &[i64], m: i64) -> bool {
    v.iter().all(|&x| x % m == 0)
}

/// Exact determinant of an integer matrix (Bareiss elimination).
pub fn exact_det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Solves `x B = v` over the rationals; returns `x` when it is integral.
fn integer_coordinates(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<BigInt>> {
    let n = basis.len();
    // Columns of B^T: augmented system B^T x^T = v^T.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..n).map(|i| BigRational::from_integer(basis[i][j].into())).collect();
            row.push(BigRational::from_integer(v[j].into()));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let piv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n].is_integer().then(|| row[n].to_integer())).collect()
}

impl IntegerLattice {
    /// Lattice spanned by `basis`, which must be square, nonsingular and
    /// contain `m Z^K`.
    pub fn from_basis(basis: Vec<Vec<i64>>, m: i64) -> Result<Self> {
        let k = basis.len();
        if let Some(r) = basis.iter().find(|r| r.len() != k) {
            return Err(Error::NotSquare { rows: k, cols: r.len() });
        }
        let det = exact_det(&basis).abs();
        if det.is_zero() {
            return Err(Error::InvalidParameter("singular lattice basis".into()));
        }
        let det = det.to_u128().ok_or(Error::Overflow("lattice determinant"))?;
        let lat = IntegerLattice { basis, det, modulus: m };
        for i in 0..k {
            let mut e = vec![0; k];
            e[i] = m;
            if !lat.contains(&e) {
                return Err(Error::InvalidParameter(format!("lattice does not contain {m}·Z^{k}")));
            }
        }
        Ok(lat)
    }

    /// Lattice generated by `gens` and the rows of `m I_K`, in Hermite
    /// normal form.
    pub fn from_generators(gens: &[Vec<i64>], k: usize, m: i64) -> Result<Self> {
        let basis = modular_hnf(gens, k, m)?;
        let mut det: u128 = 1;
        for (i, row) in basis.iter().enumerate() {
            det = det.checked_mul(row[i] as u128).ok_or(Error::Overflow("lattice determinant"))?;
        }
        Ok(IntegerLattice { basis, det, modulus: m })
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Absolute value of the basis determinant (the covolume).
    pub fn det(&self) -> u128 {
        self.det
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Exact membership test.
    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim() && integer_coordinates(&self.basis, v).is_some()
    }

    /// Integer coordinates of `v` in this basis, if `v` is in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim() {
            return None;
        }
        integer_coordinates(&self.basis, v)
    }
}

/// The Construction-A lattice `X_{S̄} + M Z^K` of the subcode generated by
/// `c_k`, `k ∉ S`.
pub fn construction_a(code: &IndexCode, s: Subset) -> Result<IntegerLattice> {
    let k = code.k();
    s.validate(k, true)?;
    let gens: Vec<Vec<i64>> = s.complement(k).indices().map(|i| code.generator(i).to_vec()).collect();
    IntegerLattice::from_generators(&gens, k, code.modulus().get())
}

/// LLL-reduced basis of the same lattice.
pub fn lll_reduce(l: &IntegerLattice, delta: Ratio<i64>) -> Result<IntegerLattice> {
    let mut basis = l.basis.clone();
    lll_in_place(&mut basis, delta)?;
    Ok(IntegerLattice { basis, det: l.det, modulus: l.modulus })
}

pub fn default_delta() -> Ratio<i64> {
    Ratio::new(3, 4)
}

/// All shortest nonzero vectors of `l` (up to sign), by LLL followed by
/// exact enumeration with the shortest reduced basis vector as the initial
/// radius.
pub fn shortest_vectors(l: &IntegerLattice) -> Result<ShortestVectorReport> {
    shortest_vectors_capped(l, DEFAULT_WITNESS_CAP)
}

pub fn shortest_vectors_capped(l: &IntegerLattice, cap: usize) -> Result<ShortestVectorReport> {
    if l.dim() > MAX_ENUM_DIM {
        return Err(Error::BudgetExceeded {
            what: "enumeration dimension",
            needed: l.dim() as u128,
            budget: MAX_ENUM_DIM as u128,
        });
    }
    let reduced = lll_reduce(l, default_delta())?;
    let radius = reduced.basis.iter().map(|b| norm_sq(b)).min().unwrap_or(0);
    let m = l.modulus;
    let mut report = ShortestVectorReport { norm_sq: i64::MAX, witnesses: Vec::new(), count: 0, any_outside_mz: false };
    enumerate_ball(&reduced.basis, radius, |v, n, r| {
        if n < report.norm_sq {
            report.norm_sq = n;
            report.witnesses.clear();
            report.count = 0;
            report.any_outside_mz = false;
            *r = n;
        }
        if n == report.norm_sq {
            report.count += 1;
            report.any_outside_mz |= !in_mz(v, m);
            if report.witnesses.len() < cap {
                report.witnesses.push(v.to_vec());
            }
        }
    })?;
    Ok(report)
}

/// Squared length of the shortest lattice vector not in `M Z^K`, searched
/// within `radius`.
pub fn shortest_outside_mz(l: &IntegerLattice, radius: i64) -> Result<Option<(i64, Vec<i64>)>> {
    if l.dim() > MAX_ENUM_DIM {
        return Err(Error::BudgetExceeded {
            what: "enumeration dimension",
            needed: l.dim() as u128,
            budget: MAX_ENUM_DIM as u128,
        });
    }
    let reduced = lll_reduce(l, default_delta())?;
    let m = l.modulus;
    let mut best: Option<(i64, Vec<i64>)> = None;
    enumerate_ball(&reduced.basis, radius, |v, n, r| {
        if !in_mz(v, m) && best.as_ref().is_none_or(|(b, _)| n < *b) {
            best = Some((n, v.to_vec()));
            *r = n;
        }
    })?;
    Ok(best)
}
