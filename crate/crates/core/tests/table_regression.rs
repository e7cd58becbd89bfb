use qamidx::lattice::{construction_a, shortest_vectors};
use qamidx::{gamma, IndexCode, Modulus, Subset};

/// Reference codes: (M, first row, Γ in dB/b/dim to two decimals).
const REFERENCE: [(i64, &[i64], f64); 20] = [
    (4, &[1, -2], 6.02),
    (4, &[1, -2, -2], 4.52),
    (4, &[1, 1, -1, 0], 3.01),
    (4, &[1, -2, 1, -1, 0], 3.76),
    (8, &[1, 2], 4.65),
    (8, &[1, 2, 0], 3.49),
    (8, &[1, 0, 3, 3], 4.01),
    (8, &[1, -1, 2, 2, -3], 4.70),
    (16, &[1, -4], 6.02),
    (16, &[1, 2, -6], 5.24),
    (16, &[1, 4, -6, -8], 5.57),
    (16, &[1, -2, -5, -4, 5], 5.28),
    (32, &[1, 6], 5.85),
    (32, &[1, -10, 14], 5.73),
    (32, &[1, 10, 14, 2], 5.80),
    (32, &[1, -8, -5, 15, -6], 5.77),
    (64, &[1, -28], 6.04),
    (64, &[1, -26, -4], 5.73),
    (64, &[1, -26, 20, 30], 5.85),
    (64, &[1, 16, 18, -9, 21], 5.82),
];

fn code(m: i64, row: &[i64]) -> IndexCode {
    IndexCode::new_circulant(Modulus::new(m).unwrap(), row.len(), row).unwrap()
}

#[test]
fn reference_codes_reproduce_gamma() {
    let mut off = Vec::new();
    for (m, row, want) in REFERENCE {
        let r = gamma(&code(m, row)).unwrap();
        if (r.gamma_db - want).abs() > 0.01 {
            off.push((m, row, r.gamma_db));
        }
    }
    // The one disagreement is explained by `m64_k5_reference_row_has_norm_four_subcode_vector`.
    assert_eq!(off.len(), 1, "{off:?}");
    assert_eq!(off[0].0, 64);
    assert_eq!(off[0].1, &[1, 16, 18, -9, 21]);
}

#[test]
fn m64_k5_reference_row_has_norm_four_subcode_vector() {
    // x = (-1,-1,0,-1,-1) = w C mod 64 with w = (0,46,47,24,15), so a
    // receiver knowing w_1 sees two codewords at squared distance 4 and
    // Γ <= 10 log10(4) / 1.2 = 5.0172 < 5.82.
    let c = code(64, &[1, 16, 18, -9, 21]);
    let w = [0, 46, 47, 24, 15];
    let x = c.encode(&w).unwrap();
    assert_eq!(x.entries(), &[-1, -1, 0, -1, -1]);
    let s = Subset::from_messages([1]).unwrap();
    let sv = shortest_vectors(&construction_a(&c, s).unwrap()).unwrap();
    assert_eq!(sv.norm_sq, 4);
    let g = gamma(&c).unwrap().gamma_db;
    assert!((g - 10.0 * 4f64.log10() / 1.2).abs() < 1e-9);
}
