//! Side-information rates, per-subset gains and the side-information gain
//! `Γ = min_S 10 log10(d_S^2 / d_0^2) / R_S` in dB per bit per dimension.
//!
//! With equal rates `R_S = (|S|/K) log2 M`, so for a fixed `(M, K)` the
//! ordering of gains only depends on `log(d_S^2) / |S|`. [`GainKey`] compares
//! those exactly as `d1^{|S2|}` vs `d2^{|S1|}`; floating point only appears
//! when a value is reported in dB.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::indexcode::{CodeRecord, IndexCode};
use crate::lattice::{subset_distance_with, DistanceMethod, DistanceOptions};
use crate::subset::Subset;

/// Exact stand-in for a gain value at fixed `(M, K)`: `log(d_sq) / size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GainKey {
    pub d_sq: i64,
    pub size: u32,
}

impl GainKey {
    pub fn new(d_sq: i64, size: u32) -> Self {
        assert!(d_sq >= 1 && size >= 1, "gain key needs d_sq >= 1 and |S| >= 1");
        GainKey { d_sq, size }
    }

    pub fn to_db(self, m: i64, k: usize) -> f64 {
        10.0 * (self.d_sq as f64).log10() / (self.size as f64 / k as f64 * (m as f64).log2())
    }
}

impl Ord for GainKey {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.d_sq == other.d_sq && self.size == other.size {
            return Ordering::Equal;
        }
        let lhs = BigUint::from(self.d_sq as u64).pow(other.size);
        let rhs = BigUint::from(other.d_sq as u64).pow(self.size);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for GainKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Rate of each message, `log2(M) / K` b/dim.
pub fn per_message_rate(code: &IndexCode) -> f64 {
    (code.modulus().get() as f64).log2() / code.k() as f64
}

/// `R_S = (|S| / K) log2 M` b/dim.
pub fn rate_of_subset(code: &IndexCode, s: Subset) -> f64 {
    s.len() as f64 * per_message_rate(code)
}

/// `10 log10(d_S^2) / R_S` for a proper nonempty `S`.
pub fn subset_gain_db(code: &IndexCode, s: Subset) -> Result<f64> {
    let d = subset_distance_with(code, s, &DistanceOptions::default())?;
    Ok(gain_db(code, s, d.d_sq))
}

fn gain_db(code: &IndexCode, s: Subset, d_sq: i64) -> f64 {
    10.0 * (d_sq as f64).log10() / rate_of_subset(code, s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetGain {
    pub subset: Subset,
    pub rate: f64,
    pub d_sq: i64,
    pub gain_db: f64,
    pub method: DistanceMethod,
    /// Value copied from a cyclic shift of `subset` rather than computed.
    #[serde(default)]
    pub by_symmetry: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainReport {
    pub code: CodeRecord,
    pub per_message_rate: f64,
    pub entries: Vec<SubsetGain>,
    pub gamma_db: f64,
    pub argmin: Vec<Subset>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GammaOptions {
    /// Evaluate every subset even for circulant codes.
    pub all_subsets: bool,
    pub distance: DistanceOptions,
}

/// Subsets to evaluate, largest `|S|` first (single-generator subcodes are
/// the cheapest and most often binding), restricted to one per cyclic class
/// when `circulant`.
pub fn evaluation_order(k: usize, circulant: bool) -> Vec<Subset> {
    let mut v: Vec<Subset> =
        Subset::proper_nonempty(k).filter(|s| !circulant || s.cyclic_representative(k) == *s).collect();
    v.sort_by_key(|s| (std::cmp::Reverse(s.len()), s.mask()));
    v
}

/// `Γ` and the full per-subset breakdown.
pub fn gamma(code: &IndexCode) -> Result<GainReport> {
    gamma_with(code, &GammaOptions::default())
}

pub fn gamma_with(code: &IndexCode, opts: &GammaOptions) -> Result<GainReport> {
    let k = code.k();
    let use_symmetry = code.is_circulant() && !opts.all_subsets;
    let mut computed = std::collections::HashMap::new();
    for s in evaluation_order(k, use_symmetry) {
        computed.insert(s, subset_distance_with(code, s, &opts.distance)?);
    }
    let mut entries = Vec::new();
    for s in Subset::proper_nonempty(k) {
        let (d, by_symmetry) = match computed.get(&s) {
            Some(d) => (*d, false),
            None => (computed[&s.cyclic_representative(k)], true),
        };
        entries.push(SubsetGain {
            subset: s,
            rate: rate_of_subset(code, s),
            d_sq: d.d_sq,
            gain_db: gain_db(code, s, d.d_sq),
            method: d.method,
            by_symmetry,
        });
    }
    let key = |e: &SubsetGain| GainKey::new(e.d_sq, e.subset.len() as u32);
    let min_key = entries.iter().map(key).min().expect("K >= 2 gives a proper nonempty subset");
    let argmin: Vec<Subset> = entries.iter().filter(|e| key(e) == min_key).map(|e| e.subset).collect();
    Ok(GainReport {
        code: code.to_record(),
        per_message_rate: per_message_rate(code),
        gamma_db: min_key.to_db(code.modulus().get(), k),
        entries,
        argmin,
    })
}

/// Exact `Γ` key of a code. With `floor`, gives up (returns `None`) as soon
/// as some subset falls strictly below it.
pub fn gamma_key(code: &IndexCode, floor: Option<GainKey>, opts: &DistanceOptions) -> Result<Option<GainKey>> {
    let k = code.k();
    let mut best: Option<GainKey> = None;
    for s in evaluation_order(k, code.is_circulant()) {
        let d = subset_distance_with(code, s, opts)?;
        let key = GainKey::new(d.d_sq, s.len() as u32);
        if floor.is_some_and(|f| key < f) {
            return Ok(None);
        }
        best = Some(best.map_or(key, |b| b.min(key)));
    }
    Ok(best)
}

/// Rounds to the two decimals used in tables.
pub fn format_db(x: f64) -> String {
    format!("{x:.2}")
}

impl GainReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let row = match (&self.code.first_row, &self.code.matrix) {
            (Some(r), _) => crate::indexcode::format_row(r),
            (None, Some(rows)) => {
                let parts: Vec<String> = rows.iter().map(|r| crate::indexcode::format_row(r)).collect();
                format!("[{}]", parts.join(";"))
            }
            _ => String::new(),
        };
        let _ = writeln!(out, "M = {}  K = {}  C = {}", self.code.m, self.code.k, row);
        let _ = writeln!(out, "{:<16} {:>8} {:>8} {:>10}", "S", "R_S", "d_S^2", "gain");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:<16} {:>8.3} {:>8} {:>10}",
                e.subset.to_string(),
                e.rate,
                e.d_sq,
                format_db(e.gain_db)
            );
        }
        let argmin: Vec<String> = self.argmin.iter().map(Subset::to_string).collect();
        let _ = writeln!(out, "Gamma = {} dB/b/dim  (attained at {})", format_db(self.gamma_db), argmin.join(" "));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::Modulus;

    fn code(m: i64, row: &[i64]) -> IndexCode {
        IndexCode::new_circulant(Modulus::new(m).unwrap(), row.len(), row).unwrap()
    }

    #[test]
    fn rates() {
        let c = code(4, &[1, -2]);
        assert_eq!(rate_of_subset(&c, Subset::from_indices([0])), 1.0);
        assert_eq!(rate_of_subset(&c, Subset::EMPTY), 0.0);
        assert_eq!(rate_of_subset(&code(8, &[1, 2]), Subset::from_indices([0])), 1.5);
    }

    #[test]
    fn subset_gains() {
        let g = subset_gain_db(&code(4, &[1, -2]), Subset::from_indices([0])).unwrap();
        assert!((g - 10.0 * 4f64.log10()).abs() < 1e-12);
        assert!((g - 6.02).abs() < 0.005);
        let id = IndexCode::identity(Modulus::new(4).unwrap(), 2).unwrap();
        assert_eq!(subset_gain_db(&id, Subset::from_indices([0])).unwrap(), 0.0);
        let g = subset_gain_db(&code(8, &[1, 2]), Subset::from_indices([0])).unwrap();
        assert!((g - 10.0 * 5f64.log10() / 1.5).abs() < 1e-12);
    }

    #[test]
    fn gamma_examples() {
        let r = gamma(&code(4, &[1, -2])).unwrap();
        assert!((r.gamma_db - 6.0206).abs() < 1e-4);
        assert_eq!(r.argmin.len(), 2);
        let r = gamma(&code(16, &[1, -4])).unwrap();
        assert_eq!(format_db(r.gamma_db), "6.02");
        for m in [2, 4, 7] {
            for k in 2..5 {
                let id = IndexCode::identity(Modulus::new(m).unwrap(), k).unwrap();
                assert_eq!(gamma(&id).unwrap().gamma_db, 0.0);
            }
        }
    }

    #[test]
    fn key_ordering_matches_db() {
        let keys: Vec<GainKey> = (1..12).flat_map(|d| (1..5).map(move |s| GainKey::new(d, s))).collect();
        for a in &keys {
            for b in &keys {
                let (x, y) = (a.to_db(16, 5), b.to_db(16, 5));
                match a.cmp(b) {
                    Ordering::Less => assert!(x < y),
                    Ordering::Greater => assert!(x > y),
                    Ordering::Equal => assert!((x - y).abs() < 1e-12),
                }
            }
        }
        // 4 with |S| = 2 equals 2 with |S| = 1
        assert_eq!(GainKey::new(4, 2).cmp(&GainKey::new(2, 1)), Ordering::Equal);
    }

    #[test]
    fn symmetry_expansion_matches_full_evaluation() {
        let c = code(8, &[1, 2, 0]);
        let sym = gamma(&c).unwrap();
        let full = gamma_with(&c, &GammaOptions { all_subsets: true, ..Default::default() }).unwrap();
        assert_eq!(sym.entries.len(), 6);
        for (a, b) in sym.entries.iter().zip(&full.entries) {
            assert_eq!(a.d_sq, b.d_sq);
        }
        assert_eq!(sym.gamma_db, full.gamma_db);
        assert!(sym.entries.iter().any(|e| e.by_symmetry));
    }

    #[test]
    fn pruned_key() {
        let c = code(8, &[1, 2, 0]);
        let key = gamma_key(&c, None, &DistanceOptions::default()).unwrap().unwrap();
        assert_eq!(format_db(key.to_db(8, 3)), "3.49");
        let higher = GainKey::new(4, 1);
        assert_eq!(gamma_key(&c, Some(higher), &DistanceOptions::default()).unwrap(), None);
        assert_eq!(gamma_key(&c, Some(key), &DistanceOptions::default()).unwrap(), Some(key));
    }

    #[test]
    fn report_table_and_json() {
        let r = gamma(&code(4, &[1, -2])).unwrap();
        let t = r.to_table();
        assert!(t.contains("Gamma = 6.02 dB/b/dim"));
        assert!(t.contains("(1,-2)"));
        let json = serde_json::to_string(&r).unwrap();
        let back: GainReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
