use proptest::prelude::*;
use qamidx::gain::{gamma_with, GammaOptions};
use qamidx::lattice::subset_distance;
use qamidx::{gamma, IndexCode, Modulus, Subset};

fn code_strategy(max_m: i64, max_k: usize) -> impl Strategy<Value = Option<IndexCode>> {
    (2i64..=max_m, 2usize..=max_k)
        .prop_flat_map(|(m, k)| (Just(m), proptest::collection::vec(-20i64..20, k)))
        .prop_map(|(m, row)| IndexCode::new_circulant(Modulus::new(m).unwrap(), row.len(), &row).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn unit_scaling_keeps_every_subset_distance(code in code_strategy(16, 4), pick in 0usize..64) {
        let Some(c) = code else { return Ok(()) };
        let units: Vec<i64> = c.modulus().units().collect();
        let u = units[pick % units.len()];
        let scaled = c.scaled(u).unwrap();
        for s in Subset::proper_nonempty(c.k()) {
            prop_assert_eq!(subset_distance(&c, s).unwrap().d_sq, subset_distance(&scaled, s).unwrap().d_sq);
        }
    }

    #[test]
    fn rotating_the_side_information_keeps_the_distance(code in code_strategy(16, 4)) {
        let Some(c) = code else { return Ok(()) };
        let k = c.k();
        for s in Subset::proper_nonempty(k) {
            let d = subset_distance(&c, s).unwrap().d_sq;
            prop_assert_eq!(d, subset_distance(&c, s.rotate(k)).unwrap().d_sq);
        }
    }

    #[test]
    fn class_representatives_give_the_same_gamma(code in code_strategy(16, 4)) {
        let Some(c) = code else { return Ok(()) };
        let fast = gamma(&c).unwrap();
        let full = gamma_with(&c, &GammaOptions { all_subsets: true, ..Default::default() }).unwrap();
        prop_assert_eq!(fast.gamma_db, full.gamma_db);
        prop_assert_eq!(fast.argmin, full.argmin);
    }

    #[test]
    fn more_side_information_never_shrinks_distance(code in code_strategy(8, 4)) {
        let Some(c) = code else { return Ok(()) };
        let k = c.k();
        for s in Subset::proper(k) {
            for t in Subset::proper(k) {
                if s.is_subset_of(t) {
                    prop_assert!(subset_distance(&c, s).unwrap().d_sq <= subset_distance(&c, t).unwrap().d_sq);
                }
            }
        }
    }
}
