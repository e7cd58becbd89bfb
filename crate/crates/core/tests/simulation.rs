use qamidx::awgnsim::{simulate, snr_gap_at, ChannelConfig, SnrConvention};
use qamidx::{IndexCode, Modulus, Subset};
use statrs::function::erf::erfc;

fn example() -> IndexCode {
    IndexCode::new_circulant(Modulus::new(4).unwrap(), 2, &[1, -2]).unwrap()
}

fn q(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

#[test]
fn no_side_information_matches_exact_16qam_error_rate() {
    // Without side information the code is the full 4x4 grid, so the
    // symbol error rate is 1 - (1 - 1.5 Q(1 / 2σ))^2.
    let cfg = ChannelConfig { max_errors: None, ..ChannelConfig::new(vec![8.0, 11.0, 14.0], 40_000, 11) };
    let r = simulate(&example(), Subset::EMPTY, &cfg).unwrap();
    for p in &r.points {
        let pam = 1.5 * q(0.5 / p.noise_std);
        let exact = 1.0 - (1.0 - pam).powi(2);
        assert!((p.rate - exact).abs() <= 4.0 * p.stderr.max(1e-4), "{} dB: {} vs {}", p.snr_db, p.rate, exact);
    }
}

#[test]
fn error_rate_falls_with_snr_and_side_information_helps() {
    let c = IndexCode::new_circulant(Modulus::new(8).unwrap(), 3, &[1, 2, 0]).unwrap();
    let cfg = ChannelConfig { max_errors: None, ..ChannelConfig::new(vec![10.0, 13.0, 16.0, 19.0], 6_000, 5) };
    let sets = [Subset::EMPTY, Subset::from_messages([1]).unwrap(), Subset::from_messages([1, 2]).unwrap()];
    let runs: Vec<_> = sets.iter().map(|&s| simulate(&c, s, &cfg).unwrap()).collect();
    for r in &runs {
        for w in r.points.windows(2) {
            assert!(w[1].rate <= w[0].rate + 3.0 * (w[0].stderr + w[1].stderr));
        }
    }
    for pair in runs.windows(2) {
        for (a, b) in pair[0].points.iter().zip(&pair[1].points) {
            assert!(b.rate <= a.rate + 3.0 * (a.stderr + b.stderr), "{} dB", a.snr_db);
        }
    }
}

#[test]
fn es_over_n0_shifts_the_curve_by_the_constellation_energy() {
    let c = example();
    let base = ChannelConfig { max_errors: None, ..ChannelConfig::new(vec![10.0, 12.0, 14.0, 16.0], 30_000, 2) };
    let a = simulate(&c, Subset::EMPTY, &base).unwrap();
    // Es = 1.25 for M = 4: the same noise at SNR + 10 log10(1.25) dB
    let shift = 10.0 * 1.25f64.log10();
    let es = ChannelConfig {
        snr_convention: SnrConvention::EsOverN0,
        snr_db_points: base.snr_db_points.iter().map(|s| s + shift).collect(),
        ..base.clone()
    };
    let b = simulate(&c, Subset::EMPTY, &es).unwrap();
    for (p, q) in a.points.iter().zip(&b.points) {
        assert!((p.noise_std - q.noise_std).abs() < 1e-12);
        assert_eq!(p.errors, q.errors);
    }
    assert!((snr_gap_at(&b, &a, 1e-2).unwrap() - shift).abs() < 1e-9);
}
