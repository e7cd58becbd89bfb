//! Hermite normal form for lattices that contain `M Z^K`.
//!
//! Because every `M e_i` is in the lattice, the basis can be grown from
//! `M I_K` by inserting generators one at a time and all off-diagonal
//! entries stay reduced modulo `M`. No coefficient growth, so `i64` is
//! enough.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Upper-triangular HNF basis (rows) of the lattice spanned by `gens` and
/// the rows of `m * I`. Pivots are positive and divide `m`; entries to the
/// right of a pivot lie in `[0, pivot)`.
pub fn modular_hnf(gens: &[Vec<i64>], dim: usize, m: i64) -> Result<Vec<Vec<i64>>> {
    let mut h: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| if i == j { m } else { 0 }).collect()).collect();
    for g in gens {
        if g.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
        }
        let mut g: Vec<i64> = g.iter().map(|&x| x.rem_euclid(m)).collect();
        for col in 0..dim {
            if g[col] == 0 {
                continue;
            }
            let p = h[col][col];
            let e = p.extended_gcd(&g[col]);
            let (a, b) = (e.x, e.y);
            let (u, v) = (g[col] / e.gcd, p / e.gcd);
            // [a b; -u v] has determinant a*v + b*u = (a*p + b*g)/gcd = 1.
            for j in col..dim {
                let hr = h[col][j] as i128;
                let gr = g[j] as i128;
                let new_h = a as i128 * hr + b as i128 * gr;
                let new_g = -(u as i128) * hr + v as i128 * gr;
                h[col][j] = new_h.rem_euclid(m as i128) as i64;
                g[j] = new_g.rem_euclid(m as i128) as i64;
            }
            // The pivot is gcd(p, g_col) > 0, possibly equal to m.
            h[col][col] = e.gcd.abs();
            debug_assert_eq!(g[col], 0);
        }
    }
    // Reduce entries above each pivot.
    for col in 0..dim {
        let p = h[col][col];
        for r in 0..col {
            let q = h[r][col].div_euclid(p);
            if q != 0 {
                for j in col..dim {
                    h[r][j] -= q * h[col][j];
                }
            }
        }
    }
    Ok(h)
}
