//! Integral LLL reduction (de Weger / Cohen style).
//!
//! Gram–Schmidt data is carried as the integers `d_i` (leading Gram
//! determinants) and `λ_{ij} = d_j μ_{ij}`, so every quantity is exact and
//! all divisions are exact integer divisions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn dot(a: &[i64], b: &[i64]) -> BigInt {
    BigInt::from(a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum::<i128>())
}

/// Exact Gram–Schmidt data of a basis, 1-based as in the classical
/// formulation: `d[0] = 1`, `d[i]` for row `i - 1`, and `lambda[k][j]` for
/// `j < k`.
#[derive(Clone, Debug)]
pub struct IntegralGram {
    pub d: Vec<BigInt>,
    pub lambda: Vec<Vec<BigInt>>,
}

impl IntegralGram {
    fn empty(n: usize) -> Self {
        let mut d = vec![BigInt::zero(); n + 1];
        d[0] = BigInt::one();
        IntegralGram { d, lambda: vec![vec![BigInt::zero(); n + 1]; n + 1] }
    }

    /// Fills row `k` (1-based) from the current basis.
    fn compute_row(&mut self, b: &[Vec<i64>], k: usize) -> Result<()> {
        for j in 1..=k {
            let mut u = dot(&b[k - 1], &b[j - 1]);
            for i in 1..j {
                u = (&self.d[i] * &u - &self.lambda[k][i] * &self.lambda[j][i]) / &self.d[i - 1];
            }
            if j < k {
                self.lambda[k][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::InvalidParameter("basis vectors are linearly dependent".into()));
                }
                self.d[k] = u;
            }
        }
        Ok(())
    }

    pub fn of_basis(b: &[Vec<i64>]) -> Result<Self> {
        let mut g = IntegralGram::empty(b.len());
        for k in 1..=b.len() {
            g.compute_row(b, k)?;
        }
        Ok(g)
    }

    /// `μ_{kj}` for 0-based rows `k > j`.
    pub fn mu(&self, k: usize, j: usize) -> BigRational {
        BigRational::new(self.lambda[k + 1][j + 1].clone(), self.d[j + 1].clone())
    }

    /// `|b*_i|^2` for 0-based row `i`.
    pub fn bstar_sq(&self, i: usize) -> BigRational {
        BigRational::new(self.d[i + 1].clone(), self.d[i].clone())
    }
}

/// Nearest integer to `num / den` for `den > 0`.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * &two))
}

fn sub_scaled(target: &mut [i64], src: &[i64], q: i64) -> Result<()> {
    for (t, &s) in target.iter_mut().zip(src) {
        *t = q.checked_mul(s).and_then(|qs| t.checked_sub(qs)).ok_or(Error::Overflow("LLL size reduction"))?;
    }
    Ok(())
}

/// LLL-reduces the rows of `basis` in place with parameter `delta`.
pub fn lll_in_place(b: &mut [Vec<i64>], delta: Ratio<i64>) -> Result<()> {
    let (p, q) = (BigInt::from(*delta.numer()), BigInt::from(*delta.denom()));
    if delta <= Ratio::new(1, 4) || delta > Ratio::one() {
        return Err(Error::InvalidParameter(format!("LLL delta {delta} outside (1/4, 1]")));
    }
    let n = b.len();
    if n <= 1 {
        if n == 1 && b[0].iter().all(|&x| x == 0) {
            return Err(Error::InvalidParameter("basis vectors are linearly dependent".into()));
        }
        return Ok(());
    }
    let mut g = IntegralGram::empty(n);
    g.compute_row(b, 1)?;
    let mut k = 2;
    let mut kmax = 1;

    // RED(k, l): size-reduce row k against row l (1-based).
    let red = |b: &mut [Vec<i64>], g: &mut IntegralGram, k: usize, l: usize| -> Result<()> {
        if (&g.lambda[k][l] * BigInt::from(2)).abs() > g.d[l] {
            let qq = round_div(&g.lambda[k][l], &g.d[l]);
            let qi = qq.to_i64().ok_or(Error::Overflow("LLL quotient"))?;
            let (lo, hi) = b.split_at_mut(k - 1);
            sub_scaled(&mut hi[0], &lo[l - 1], qi)?;
            g.lambda[k][l] -= &qq * &g.d[l];
            for i in 1..l {
                let t = &qq * &g.lambda[l][i];
                g.lambda[k][i] -= t;
            }
        }
        Ok(())
    };

    while k <= n {
        if k > kmax {
            kmax = k;
            g.compute_row(b, k)?;
        }
        red(b, &mut g, k, k - 1)?;
        let lhs = &q * &g.d[k] * &g.d[k - 2];
        let rhs = &p * &g.d[k - 1] * &g.d[k - 1] - &q * &g.lambda[k][k - 1] * &g.lambda[k][k - 1];
        if lhs < rhs {
            // SWAP(k)
            b.swap(k - 1, k - 2);
            for j in 1..k - 1 {
                let t = std::mem::take(&mut g.lambda[k][j]);
                g.lambda[k][j] = std::mem::replace(&mut g.lambda[k - 1][j], t);
            }
            let lam = g.lambda[k][k - 1].clone();
            let bb = (&g.d[k - 2] * &g.d[k] + &lam * &lam) / &g.d[k - 1];
            for i in k + 1..=kmax {
                let t = g.lambda[i][k].clone();
                g.lambda[i][k] = (&g.d[k] * &g.lambda[i][k - 1] - &lam * &t) / &g.d[k - 1];
                g.lambda[i][k - 1] = (&bb * &t + &lam * &g.lambda[i][k]) / &g.d[k];
            }
            g.d[k - 1] = bb;
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                red(b, &mut g, k, l)?;
            }
            k += 1;
        }
    }
    Ok(())
}

/// Checks the two LLL conditions exactly: `|μ_{kj}| <= 1/2` and
/// `|b*_k|^2 >= (δ - μ_{k,k-1}^2) |b*_{k-1}|^2`.
pub fn is_lll_reduced(b: &[Vec<i64>], delta: Ratio<i64>) -> Result<bool> {
    let g = IntegralGram::of_basis(b)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(*delta.numer()), BigInt::from(*delta.denom()));
    for k in 1..b.len() {
        for j in 0..k {
            if g.mu(k, j).abs() > half {
                return Ok(false);
            }
        }
        let mu = g.mu(k, k - 1);
        if g.bstar_sq(k) < (&delta - &mu * &mu) * g.bstar_sq(k - 1) {
            return Ok(false);
        }
    }
    Ok(true)
}
