use serde::{Deserialize, Serialize};

use super::{construction_a, norm_sq, shortest_outside_mz, shortest_vectors};
use crate::error::{Error, Result};
use crate::indexcode::{IndexCode, SideInfo};
use crate::modring::next_tuple;
use crate::subset::Subset;

/// Default cap on pairwise comparisons done by the brute-force oracle.
pub const DEFAULT_BRUTE_FORCE_BUDGET: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    /// A shortest vector of the Construction-A lattice lies outside `M Z^K`.
    Lattice,
    /// All shortest vectors lie in `M Z^K`; enumeration was widened to the
    /// shortest vector outside `M Z^K`.
    ExtendedLattice,
    /// Exhaustive pairwise search over every coset `X_{a_S}`.
    BruteForce,
}

/// Exact squared minimum distance `d_S^2` for one side-information set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetDistance {
    pub subset: Subset,
    pub d_sq: i64,
    pub method: DistanceMethod,
    /// The value was cross-checked against the brute-force oracle.
    pub confirmed: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct DistanceOptions {
    /// Cross-check widened-enumeration results against brute force when the
    /// pair count fits this budget.
    pub brute_force_budget: u128,
    /// Also cross-check plain lattice results.
    pub always_confirm: bool,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions { brute_force_budget: DEFAULT_BRUTE_FORCE_BUDGET, always_confirm: false }
    }
}

/// `d_S^2` via the Construction-A lattice of `X_{S̄}`.
pub fn subset_distance(code: &IndexCode, s: Subset) -> Result<SubsetDistance> {
    subset_distance_with(code, s, &DistanceOptions::default())
}

pub fn subset_distance_with(code: &IndexCode, s: Subset, opts: &DistanceOptions) -> Result<SubsetDistance> {
    let lattice = construction_a(code, s)?;
    let report = shortest_vectors(&lattice)?;
    let (d_sq, method) = if report.any_outside_mz {
        (report.norm_sq, DistanceMethod::Lattice)
    } else {
        // Every nonzero x in X_{S̄} reduces to a vector of squared norm at
        // most K * floor(M/2)^2, so this radius always finds one.
        let m = code.modulus();
        let half = m.get() / 2;
        let radius = (code.k() as i64) * half * half;
        let (n, _) = shortest_outside_mz(&lattice, radius)?
            .ok_or_else(|| Error::Inconsistent(format!("no lattice vector outside M·Z^K within radius {radius}")))?;
        (n, DistanceMethod::ExtendedLattice)
    };
    let mut out = SubsetDistance { subset: s, d_sq, method, confirmed: false };
    if (method == DistanceMethod::ExtendedLattice || opts.always_confirm)
        && pair_work(code, s) <= opts.brute_force_budget
    {
        let bf = brute_force_distance_capped(code, s, opts.brute_force_budget)?;
        if bf.d_sq != d_sq {
            return Err(Error::Inconsistent(format!(
                "lattice d_S^2 = {d_sq} but brute force gives {} for S = {s}",
                bf.d_sq
            )));
        }
        out.confirmed = true;
    }
    Ok(out)
}

fn pair_work(code: &IndexCode, s: Subset) -> u128 {
    let m = code.modulus().get() as u128;
    let cosets = m.saturating_pow(s.len() as u32);
    let size = m.saturating_pow(s.complement(code.k()).len() as u32);
    cosets.saturating_mul(size.saturating_mul(size.saturating_sub(1)) / 2)
}

/// Ground truth `d_S^2`: minimum over all `a_S` of the minimum pairwise
/// squared distance within `X_{a_S}`.
pub fn brute_force_distance(code: &IndexCode, s: Subset) -> Result<SubsetDistance> {
    brute_force_distance_capped(code, s, DEFAULT_BRUTE_FORCE_BUDGET)
}

pub fn brute_force_distance_capped(code: &IndexCode, s: Subset, budget: u128) -> Result<SubsetDistance> {
    let d = coset_distances(code, s, budget)?;
    let d_sq = d.into_iter().min().expect("at least one coset");
    Ok(SubsetDistance { subset: s, d_sq, method: DistanceMethod::BruteForce, confirmed: true })
}

/// `d_{a_S}^2` for every `a_S`, in lexicographic order of `a_S`.
pub fn coset_distances(code: &IndexCode, s: Subset, budget: u128) -> Result<Vec<i64>> {
    s.validate(code.k(), true)?;
    let work = pair_work(code, s);
    if work > budget {
        return Err(Error::BudgetExceeded { what: "brute-force distance", needed: work, budget });
    }
    let m = code.modulus();
    let mut a = vec![m.min_rep(); s.len()];
    let mut out = Vec::new();
    let mut points: Vec<Vec<i64>> = Vec::new();
    loop {
        points.clear();
        let side = SideInfo::new(s, a.clone())?;
        code.for_each_subcode_point(&side, u64::MAX, |_, x| points.push(x.to_vec()))?;
        let mut best = i64::MAX;
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                let d: i64 = p.iter().zip(q).map(|(&x, &y)| (x - y) * (x - y)).sum();
                best = best.min(d);
            }
        }
        out.push(best);
        if !next_tuple(&mut a, m) {
            break;
        }
    }
    Ok(out)
}

/// Minimum nonzero `|x mod M|^2` over the subgroup `X_{S̄}`, by listing it.
/// Independent of both the lattice path and the pairwise oracle.
pub fn subgroup_min_norm(code: &IndexCode, s: Subset) -> Result<i64> {
    s.validate(code.k(), true)?;
    let zero = SideInfo::new(s, vec![0; s.len()])?;
    let mut best = i64::MAX;
    code.for_each_subcode_point(&zero, u64::MAX, |_, x| {
        let n = norm_sq(x);
        if n > 0 {
            best = best.min(n);
        }
    })?;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::Modulus;

    fn code(m: i64, row: &[i64]) -> IndexCode {
        IndexCode::new_circulant(Modulus::new(m).unwrap(), row.len(), row).unwrap()
    }

    #[test]
    fn example_code_distances() {
        let c = code(4, &[1, -2]);
        for s in [Subset::from_indices([0]), Subset::from_indices([1])] {
            let d = subset_distance(&c, s).unwrap();
            assert_eq!(d.d_sq, 4);
            assert_eq!(d.method, DistanceMethod::Lattice);
            assert_eq!(brute_force_distance(&c, s).unwrap().d_sq, 4);
        }
        assert_eq!(coset_distances(&c, Subset::from_indices([0]), 1 << 20).unwrap(), vec![4; 4]);
    }

    #[test]
    fn empty_side_information() {
        for c in [code(4, &[1, -2]), code(8, &[1, 2, 0]), code(5, &[1, 0])] {
            assert_eq!(subset_distance(&c, Subset::EMPTY).unwrap().d_sq, 1);
            assert_eq!(brute_force_distance(&c, Subset::EMPTY).unwrap().d_sq, 1);
        }
    }

    #[test]
    fn identity_code_distance_is_one() {
        for m in [2, 5, 8] {
            for k in 2..5 {
                let c = IndexCode::identity(Modulus::new(m).unwrap(), k).unwrap();
                assert_eq!(subset_distance(&c, Subset::from_indices([0])).unwrap().d_sq, 1);
            }
        }
    }

    #[test]
    fn m8_code_distances() {
        let c = code(8, &[1, 2]);
        assert_eq!(brute_force_distance(&c, Subset::from_indices([1])).unwrap().d_sq, 5);
        assert_eq!(subset_distance(&c, Subset::from_indices([1])).unwrap().d_sq, 5);
        assert_eq!(subset_distance(&c, Subset::from_indices([0])).unwrap().d_sq, 5);
    }

    #[test]
    fn widened_enumeration_path() {
        // M = 2, K = 5, c_5 = (1,1,1,1,1): X_{S̄} for S = {1,2,3,4} is {0, c_5},
        // whose lift has norm 5 > M^2 = 4, so every shortest vector is in 2Z^5.
        let m = Modulus::new(2).unwrap();
        let rows: Vec<Vec<i64>> = vec![
            vec![1, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0],
            vec![0, 0, 1, 0, 0],
            vec![0, 0, 0, 1, 0],
            vec![1, 1, 1, 1, 1],
        ];
        let c = IndexCode::from_matrix(crate::modring::RingMatrix::from_rows(&rows, m).unwrap()).unwrap();
        let s = Subset::from_indices([0, 1, 2, 3]);
        let l = construction_a(&c, s).unwrap();
        let r = shortest_vectors(&l).unwrap();
        assert_eq!(r.norm_sq, 4);
        assert!(!r.any_outside_mz);
        let d = subset_distance(&c, s).unwrap();
        assert_eq!(d.d_sq, 5);
        assert_eq!(d.method, DistanceMethod::ExtendedLattice);
        assert!(d.confirmed);
        assert_eq!(brute_force_distance(&c, s).unwrap().d_sq, 5);
    }

    #[test]
    fn brute_force_budget() {
        let c = IndexCode::identity(Modulus::new(16).unwrap(), 4).unwrap();
        let err = brute_force_distance(&c, Subset::from_indices([0])).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn subgroup_route_agrees() {
        let c = code(16, &[1, 2, -6]);
        for s in Subset::proper_nonempty(3) {
            assert_eq!(subgroup_min_norm(&c, s).unwrap(), subset_distance(&c, s).unwrap().d_sq);
        }
    }
}
