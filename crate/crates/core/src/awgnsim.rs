//! Seeded Monte-Carlo simulation of one receiver `(SNR, S)` of the Gaussian
//! broadcast channel, SNR-gap reading between error curves, and the
//! capacity-limit SNR.
//!
//! Each SNR point is split into batches of `batch_size` trials. Batch `b` of
//! point `p` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream
//! `(p << 40) | b`, so a batch's outcome is fixed by `(seed, p, b)` alone.
//! Batches run in parallel but are consumed in order, and a point stops after
//! the first batch that brings its error count to `max_errors`. Results are
//! therefore bit-identical at any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexcode::{CodeRecord, IndexCode, DEFAULT_SUBCODE_BUDGET};
use crate::subset::Subset;

/// Recorded in every result so a run can be reproduced elsewhere.
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng::seed_from_u64(seed), stream (point << 40) | batch; rand_distr::StandardNormal (ziggurat)";

pub const DEFAULT_MAX_ERRORS: u64 = 200;
pub const DEFAULT_BATCH_SIZE: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrConvention {
    /// Unnormalized constellation, noise variance `1/SNR` per dimension.
    NoiseVariancePerDim,
    /// SNR is `E_s / σ²` per real dimension with `E_s = (M²-1)/12`, the
    /// energy of the offset constellation.
    EsOverN0,
}

impl SnrConvention {
    pub fn describe(self) -> &'static str {
        match self {
            SnrConvention::NoiseVariancePerDim => "noise variance 1/SNR per dimension",
            SnrConvention::EsOverN0 => "SNR = Es/sigma^2 per dimension, Es = (M^2-1)/12",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub snr_db_points: Vec<f64>,
    /// Trials per SNR point; with early stopping this is the maximum.
    pub trials_per_point: u64,
    pub seed: u64,
    pub snr_convention: SnrConvention,
    /// Stop a point once this many message errors were counted.
    #[serde(default)]
    pub max_errors: Option<u64>,
    #[serde(default = "default_batch")]
    pub batch_size: u64,
    /// Worker threads; `None` uses rayon's global pool. Never affects results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

fn default_batch() -> u64 {
    DEFAULT_BATCH_SIZE
}

impl ChannelConfig {
    pub fn new(snr_db_points: Vec<f64>, trials_per_point: u64, seed: u64) -> Self {
        ChannelConfig {
            snr_db_points,
            trials_per_point,
            seed,
            snr_convention: SnrConvention::NoiseVariancePerDim,
            max_errors: Some(DEFAULT_MAX_ERRORS),
            batch_size: DEFAULT_BATCH_SIZE,
            threads: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials_per_point == 0 {
            return Err(Error::InvalidParameter("trials per point must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidParameter("batch size must be at least 1".into()));
        }
        if self.snr_db_points.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter("SNR points must be finite".into()));
        }
        if self.snr_db_points.len() >= 1 << 24 {
            return Err(Error::InvalidParameter("too many SNR points".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("thread count must be at least 1".into()));
        }
        Ok(())
    }

    fn sigma(&self, m: i64, snr_db: f64) -> f64 {
        let snr = 10f64.powf(snr_db / 10.0);
        let var = match self.snr_convention {
            SnrConvention::NoiseVariancePerDim => 1.0 / snr,
            SnrConvention::EsOverN0 => average_energy_per_dim(m) / snr,
        };
        var.sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub snr_db: f64,
    pub noise_std: f64,
    pub trials: u64,
    /// Trials where some unknown message decoded wrongly.
    pub errors: u64,
    pub rate: f64,
    /// `sqrt(rate (1 - rate) / trials)`.
    pub stderr: f64,
    /// Symbol errors per message; zero for messages in `S`.
    pub per_message_errors: Vec<u64>,
    pub per_message_rates: Vec<f64>,
    pub stopped_early: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub code: CodeRecord,
    pub subset: Subset,
    pub config: ChannelConfig,
    pub convention: String,
    pub rng: String,
    pub points: Vec<SimPoint>,
}

impl SimResult {
    pub const CSV_HEADER: &'static str = "S,snr_db,trials,errors,rate,stderr";

    /// CSV rows without header. `S` is quoted since it contains commas.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            out.push_str(&format!(
                "\"{}\",{},{},{},{:e},{:e}\n",
                self.subset, p.snr_db, p.trials, p.errors, p.rate, p.stderr
            ));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}", Self::CSV_HEADER, self.csv_rows())
    }
}

/// Per-coordinate offset making the constellation zero-mean.
pub fn transmit_offset(code: &IndexCode) -> Vec<f64> {
    let off = if code.modulus().get() % 2 == 0 { 0.5 } else { 0.0 };
    vec![off; code.k()]
}

/// Second moment per dimension of the offset constellation, `(M²-1)/12`.
pub fn average_energy_per_dim(m: i64) -> f64 {
    let m = m as f64;
    (m * m - 1.0) / 12.0
}

/// ML decoder for one side-information set with the subgroup part of every
/// subcode point precomputed. Enumeration order and tie-breaking match
/// [`IndexCode::decode_with_side_info`].
pub struct SubcodeDecoder {
    k: usize,
    m: crate::modring::Modulus,
    known: Vec<usize>,
    free: Vec<usize>,
    generators: Vec<Vec<i64>>,
    /// `(w_{S̄}, sum_{i in S̄} w_i c_i)` for every `w_{S̄}`, in order.
    table: Vec<(Vec<i64>, Vec<i64>)>,
}

impl SubcodeDecoder {
    pub fn new(code: &IndexCode, s: Subset) -> Result<Self> {
        Self::with_budget(code, s, DEFAULT_SUBCODE_BUDGET)
    }

    pub fn with_budget(code: &IndexCode, s: Subset, budget: u64) -> Result<Self> {
        let k = code.k();
        s.validate(k, false)?;
        let m = code.modulus();
        let free: Vec<usize> = s.complement(k).indices().collect();
        let size = (m.get() as u128).saturating_pow(free.len() as u32);
        if size > budget as u128 {
            return Err(Error::BudgetExceeded { what: "subcode enumeration", needed: size, budget: budget as u128 });
        }
        let generators: Vec<Vec<i64>> = (0..k).map(|i| code.generator(i).to_vec()).collect();
        let mut table = Vec::with_capacity(size as usize);
        let mut t = vec![m.min_rep(); free.len()];
        loop {
            let mut g = vec![0i64; k];
            for (&i, &v) in free.iter().zip(&t) {
                for (gj, &cj) in g.iter_mut().zip(&generators[i]) {
                    *gj = m.add(*gj, m.mul(v, cj));
                }
            }
            table.push((t.clone(), g));
            if !crate::modring::next_tuple(&mut t, m) {
                break;
            }
        }
        Ok(SubcodeDecoder { k, m, known: s.indices().collect(), free, generators, table })
    }

    /// Decoded unknown messages `w_{S̄}` (in increasing message order) for
    /// the received point `y` (offset already removed) and known `w`.
    pub fn decode(&self, y: &[f64], w_known_full: &[i64]) -> &[i64] {
        let mut base = vec![0i64; self.k];
        for &i in &self.known {
            for (b, &c) in base.iter_mut().zip(&self.generators[i]) {
                *b = self.m.add(*b, self.m.mul(w_known_full[i], c));
            }
        }
        let mut best = f64::INFINITY;
        let mut arg = 0;
        for (idx, (_, g)) in self.table.iter().enumerate() {
            let mut d = 0.0;
            for j in 0..self.k {
                let x = self.m.add(base[j], g[j]) as f64;
                d += (y[j] - x) * (y[j] - x);
            }
            if d < best {
                best = d;
                arg = idx;
            }
        }
        &self.table[arg].0
    }

    pub fn unknown(&self) -> &[usize] {
        &self.free
    }
}

#[derive(Clone, Default)]
struct Tally {
    trials: u64,
    errors: u64,
    per_message: Vec<u64>,
}

fn run_batch(
    code: &IndexCode,
    dec: &SubcodeDecoder,
    offset: &[f64],
    sigma: f64,
    seed: u64,
    stream: u64,
    trials: u64,
) -> Result<Tally> {
    let k = code.k();
    let m = code.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut tally = Tally { trials, errors: 0, per_message: vec![0; k] };
    let mut w = vec![0i64; k];
    let mut y = vec![0f64; k];
    for _ in 0..trials {
        for wi in w.iter_mut() {
            *wi = rng.random_range(m.min_rep()..=m.max_rep());
        }
        let x = code.encode(&w)?;
        for j in 0..k {
            let z: f64 = rng.sample(StandardNormal);
            let tx = x.entries()[j] as f64 + offset[j];
            y[j] = tx + sigma * z - offset[j];
        }
        let got = dec.decode(&y, &w);
        let mut wrong = false;
        for (&i, &g) in dec.unknown().iter().zip(got) {
            if g != w[i] {
                tally.per_message[i] += 1;
                wrong = true;
            }
        }
        tally.errors += u64::from(wrong);
    }
    Ok(tally)
}

/// Message-error rates of receiver `(SNR, S)` at every configured SNR.
pub fn simulate(code: &IndexCode, s: Subset, cfg: &ChannelConfig) -> Result<SimResult> {
    cfg.validate()?;
    let dec = SubcodeDecoder::new(code, s)?;
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(|| simulate_in_pool(code, s, cfg, &dec)),
        None => simulate_in_pool(code, s, cfg, &dec),
    }
}

fn simulate_in_pool(code: &IndexCode, s: Subset, cfg: &ChannelConfig, dec: &SubcodeDecoder) -> Result<SimResult> {
    let k = code.k();
    let offset = transmit_offset(code);
    let nbatches = cfg.trials_per_point.div_ceil(cfg.batch_size);
    let wave = (rayon::current_num_threads() as u64).max(1) * 2;
    let mut points = Vec::with_capacity(cfg.snr_db_points.len());
    for (p, &snr_db) in cfg.snr_db_points.iter().enumerate() {
        let sigma = cfg.sigma(code.modulus().get(), snr_db);
        let mut acc = Tally { per_message: vec![0; k], ..Default::default() };
        let mut next = 0u64;
        'point: while next < nbatches {
            let hi = (next + wave).min(nbatches);
            let tallies: Vec<Tally> = (next..hi)
                .into_par_iter()
                .map(|b| {
                    let trials = cfg.batch_size.min(cfg.trials_per_point - b * cfg.batch_size);
                    run_batch(code, dec, &offset, sigma, cfg.seed, ((p as u64) << 40) | b, trials)
                })
                .collect::<Result<_>>()?;
            for t in tallies {
                acc.trials += t.trials;
                acc.errors += t.errors;
                for (a, b) in acc.per_message.iter_mut().zip(&t.per_message) {
                    *a += b;
                }
                next += 1;
                if cfg.max_errors.is_some_and(|me| acc.errors >= me) {
                    break 'point;
                }
            }
        }
        let rate = acc.errors as f64 / acc.trials as f64;
        points.push(SimPoint {
            snr_db,
            noise_std: sigma,
            trials: acc.trials,
            errors: acc.errors,
            rate,
            stderr: (rate * (1.0 - rate) / acc.trials as f64).sqrt(),
            per_message_rates: acc.per_message.iter().map(|&e| e as f64 / acc.trials as f64).collect(),
            per_message_errors: acc.per_message,
            stopped_early: acc.trials < cfg.trials_per_point,
        });
    }
    Ok(SimResult {
        code: code.to_record(),
        subset: s,
        config: ChannelConfig { threads: None, ..cfg.clone() },
        convention: cfg.snr_convention.describe().to_string(),
        rng: RNG_ALGORITHM.to_string(),
        points,
    })
}

/// SNR (dB) at which a curve crosses `target`, by linear interpolation of
/// `log10(rate)` against dB between the first bracketing pair of points.
pub fn snr_at_rate(points: &[SimPoint], target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::NotBracketed(target));
    }
    let mut pts: Vec<&SimPoint> = points.iter().filter(|p| p.rate > 0.0).collect();
    pts.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.rate >= target && b.rate <= target {
            if a.rate == b.rate {
                return Ok(a.snr_db);
            }
            let (la, lb, lt) = (a.rate.log10(), b.rate.log10(), target.log10());
            return Ok(a.snr_db + (b.snr_db - a.snr_db) * (la - lt) / (la - lb));
        }
    }
    Err(Error::NotBracketed(target))
}

/// How much more SNR curve `a` needs than curve `b` to reach `target`.
pub fn snr_gap_at(a: &SimResult, b: &SimResult, target: f64) -> Result<f64> {
    Ok(snr_at_rate(&a.points, target)? - snr_at_rate(&b.points, target)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "db")]
pub enum CapacityLimit {
    MinSnrDb(f64),
    /// The receiver already knows everything it demands.
    NoMinimum,
}

impl std::fmt::Display for CapacityLimit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CapacityLimit::MinSnrDb(x) => write!(f, "{x:.2} dB"),
            CapacityLimit::NoMinimum => write!(f, "no minimum SNR"),
        }
    }
}

/// Smallest SNR with `1/2 log2(1 + SNR) > sum_k R_k - sum_{k in S} R_k`.
pub fn capacity_min_snr_db(rates: &[f64], s: Subset) -> Result<CapacityLimit> {
    if rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::InvalidParameter("rates must be finite and non-negative".into()));
    }
    s.validate(rates.len(), false)?;
    let total: f64 = rates.iter().sum();
    let known: f64 = s.indices().map(|i| rates[i]).sum();
    let delta = total - known;
    if delta <= 0.0 {
        return Ok(CapacityLimit::NoMinimum);
    }
    Ok(CapacityLimit::MinSnrDb(10.0 * (2f64.powf(2.0 * delta) - 1.0).log10()))
}
