//! Exact Fincke–Pohst enumeration of lattice points in a ball.
//!
//! Works on the Gram–Schmidt data of an (ideally LLL-reduced) basis. At
//! level `i` the admissible coefficients `x_i` satisfy
//! `ℓ_i + |b*_i|^2 (x_i - c_i)^2 <= R`, where `c_i` is the projected centre.
//! All of this is done in exact rationals; the feasible `x_i` form an
//! interval around `round(c_i)` that is walked outward until it fails.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::lll::IntegralGram;
use crate::error::{Error, Result};

struct Enumerator<'a, F> {
    basis: &'a [Vec<i64>],
    mu: Vec<Vec<BigRational>>,
    bstar: Vec<BigRational>,
    x: Vec<i64>,
    radius: i64,
    visit: F,
}

impl<F> Enumerator<'_, F>
where
    F: FnMut(&[i64], i64, &mut i64),
{
    fn leaf(&mut self) -> Result<()> {
        let dim = self.basis[0].len();
        let mut v = vec![0i128; dim];
        for (xi, b) in self.x.iter().zip(self.basis) {
            if *xi != 0 {
                for (vj, &bj) in v.iter_mut().zip(b) {
                    *vj += *xi as i128 * bj as i128;
                }
            }
        }
        let norm: i128 = v.iter().map(|a| a * a).sum();
        let v: Vec<i64> = v
            .into_iter()
            .map(|a| i64::try_from(a).map_err(|_| Error::Overflow("enumeration")))
            .collect::<Result<_>>()?;
        let norm = i64::try_from(norm).map_err(|_| Error::Overflow("enumeration"))?;
        if norm <= self.radius {
            (self.visit)(&v, norm, &mut self.radius);
        }
        Ok(())
    }

    /// `upper_zero`: every coefficient above level `i` is zero, so only
    /// `x_i >= 0` is explored (one vector of each `±v` pair).
    fn level(&mut self, i: usize, partial: &BigRational, upper_zero: bool) -> Result<()> {
        let n = self.x.len();
        let mut c = BigRational::zero();
        for j in i + 1..n {
            if self.x[j] != 0 {
                c -= &self.mu[j][i] * BigRational::from_integer(BigInt::from(self.x[j]));
            }
        }
        let bstar = self.bstar[i].clone();
        let feasible = |x: i64, radius: i64| -> Option<BigRational> {
            let diff = BigRational::from_integer(BigInt::from(x)) - &c;
            let l = partial + &bstar * &diff * &diff;
            (l <= BigRational::from_integer(BigInt::from(radius))).then_some(l)
        };
        let centre = c.round().to_integer().to_i64().ok_or(Error::Overflow("enumeration"))?;
        let start = if upper_zero { centre.max(0) } else { centre };

        // Walk upward from the start, then downward.
        for dir in [1i64, -1] {
            let mut x = if dir == 1 { start } else { start - 1 };
            loop {
                if upper_zero && x < 0 {
                    break;
                }
                let Some(l) = feasible(x, self.radius) else { break };
                self.x[i] = x;
                let zero_here = upper_zero && x == 0;
                if i == 0 {
                    if !zero_here {
                        self.leaf()?;
                    }
                } else {
                    self.level(i - 1, &l, zero_here)?;
                }
                x += dir;
            }
        }
        self.x[i] = 0;
        Ok(())
    }
}

/// Calls `visit(v, |v|^2, &mut radius)` for every nonzero lattice vector
/// with `|v|^2 <= radius`, one of each `±v` pair. The visitor may lower the
/// radius to prune the rest of the search.
pub fn enumerate_ball<F>(basis: &[Vec<i64>], radius: i64, visit: F) -> Result<()>
where
    F: FnMut(&[i64], i64, &mut i64),
{
    let n = basis.len();
    if n == 0 || radius < 1 {
        return Ok(());
    }
    let g = IntegralGram::of_basis(basis)?;
    let mu = (0..n).map(|k| (0..k).map(|j| g.mu(k, j)).collect::<Vec<_>>()).collect();
    let bstar = (0..n).map(|i| g.bstar_sq(i)).collect();
    let mut e = Enumerator { basis, mu, bstar, x: vec![0; n], radius, visit };
    e.level(n - 1, &BigRational::zero(), true)
}
