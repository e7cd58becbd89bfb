//! Exhaustive search over circulant encoding matrices for the largest `Γ`.
//!
//! Candidates are numbered: index `i` selects the first entry
//! `firsts[i / M^(K-1)]` (per [`FirstEntryPolicy`]) and the remaining `K-1`
//! entries are the base-`M` digits of `i mod M^(K-1)`, most significant
//! first, each read as `min_rep + digit`. The search is lexicographic in that
//! numbering and every tie is broken toward the smaller index, so results do
//! not depend on thread count. A run can stop at a candidate budget and
//! resume from the returned state.

use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gain::{gamma_key, GainKey};
use crate::indexcode::{format_row, IndexCode};
use crate::lattice::DistanceOptions;
use crate::modring::{Modulus, RingMatrix};

/// Largest candidate count accepted by default in one call.
pub const DEFAULT_CANDIDATE_BUDGET: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstEntryPolicy {
    /// One first entry per unit-scaling orbit, see [`orbit_representatives`].
    OrbitRepresentatives,
    /// Every element of `Z_M`, from `min_rep` upward.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TiePolicy {
    /// Report only the first best candidate.
    Lexicographic,
    /// Report every best candidate, up to `cap` of them.
    All { cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchScope {
    Circulant,
    /// All `K x K` matrices, entries row-major. Meant for tiny `M`, `K`.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchSpec {
    #[serde(rename = "M")]
    pub m: i64,
    #[serde(rename = "K")]
    pub k: usize,
    pub first_entry_policy: FirstEntryPolicy,
    pub tie_policy: TiePolicy,
    #[serde(default = "default_scope")]
    pub scope: SearchScope,
    /// Index of the first candidate to examine.
    #[serde(default)]
    pub start_candidate: u64,
    /// Most candidates examined in this call.
    pub max_candidates: u64,
    /// Abandon candidates early once some subset is below the best so far.
    pub prune: bool,
    /// Worker threads; `None` uses rayon's global pool.
    #[serde(default)]
    pub threads: Option<usize>,
}

fn default_scope() -> SearchScope {
    SearchScope::Circulant
}

impl SearchSpec {
    pub fn new(m: i64, k: usize) -> Self {
        SearchSpec {
            m,
            k,
            first_entry_policy: FirstEntryPolicy::OrbitRepresentatives,
            tie_policy: TiePolicy::Lexicographic,
            scope: SearchScope::Circulant,
            start_candidate: 0,
            max_candidates: DEFAULT_CANDIDATE_BUDGET,
            prune: true,
            threads: None,
        }
    }

    fn validate(&self) -> Result<Modulus> {
        let m = Modulus::new(self.m)?;
        if !(2..=crate::subset::MAX_MESSAGES).contains(&self.k) {
            return Err(Error::InvalidParameter(format!("K = {} must be in 2..=32", self.k)));
        }
        if let TiePolicy::All { cap: 0 } = self.tie_policy {
            return Err(Error::InvalidParameter("tie cap must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("thread count must be at least 1".into()));
        }
        Ok(m)
    }

    /// Total number of candidates, or `None` if it does not fit in `u64`.
    pub fn total_candidates(&self) -> Result<Option<u64>> {
        let m = self.validate()?;
        Ok(Candidates::new(self, m).map(|c| c.total))
    }
}

/// One best code found by the search.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Found {
    pub index: u64,
    /// First row for circulant scope, row-major entries for general scope.
    pub entries: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub spec: SearchSpec,
    pub best_key: Option<GainKey>,
    pub best_gamma_db: Option<f64>,
    pub best_codes: Vec<Found>,
    pub candidates_examined: u64,
    pub candidates_valid: u64,
    pub total_candidates: u64,
    pub next_candidate: u64,
    pub complete: bool,
    pub elapsed_secs: f64,
}

impl SearchResult {
    /// Equality of everything except timing and thread count.
    pub fn same_outcome(&self, other: &SearchResult) -> bool {
        let strip = |r: &SearchResult| {
            let mut r = r.clone();
            r.elapsed_secs = 0.0;
            r.spec.threads = None;
            r
        };
        strip(self) == strip(other)
    }

    pub fn best_code(&self) -> Option<Result<IndexCode>> {
        let f = self.best_codes.first()?;
        Some(build_code(&self.spec, &f.entries))
    }

    /// `M = 4  K = 2  (1,-2)  6.02`, one line per reported code.
    pub fn to_rows(&self) -> String {
        let g = self.best_gamma_db.map_or("-".to_string(), crate::gain::format_db);
        let mut out = String::new();
        if self.best_codes.is_empty() {
            out.push_str(&format!("M = {}  K = {}  (none)  {g}\n", self.spec.m, self.spec.k));
        }
        for f in &self.best_codes {
            out.push_str(&format!("M = {}  K = {}  {}  {g}\n", self.spec.m, self.spec.k, format_row(&f.entries)));
        }
        out
    }
}

/// One divisor of `M` per orbit of `Z_M` under multiplication by units,
/// ascending, with `M` itself written as `0` and listed last.
pub fn orbit_representatives(m: Modulus) -> Vec<i64> {
    let m = m.get();
    let mut out: Vec<i64> = (1..m).filter(|d| m % d == 0).collect();
    out.push(0);
    out
}

struct Candidates {
    m: Modulus,
    firsts: Vec<i64>,
    /// `M^(len-1)`: candidates per first entry.
    block: u64,
    len: usize,
    total: u64,
}

impl Candidates {
    fn new(spec: &SearchSpec, m: Modulus) -> Option<Self> {
        let len = match spec.scope {
            SearchScope::Circulant => spec.k,
            SearchScope::General => spec.k.checked_mul(spec.k)?,
        };
        let firsts = match spec.first_entry_policy {
            FirstEntryPolicy::OrbitRepresentatives => {
                orbit_representatives(m).into_iter().map(|a| m.reduce(a)).collect()
            }
            FirstEntryPolicy::All => m.elements().collect::<Vec<_>>(),
        };
        let block = (m.get() as u64).checked_pow(u32::try_from(len - 1).ok()?)?;
        let total = block.checked_mul(firsts.len() as u64)?;
        Some(Candidates { m, firsts, block, len, total })
    }

    fn entries(&self, index: u64) -> Vec<i64> {
        let mut v = vec![0; self.len];
        v[0] = self.firsts[(index / self.block) as usize];
        let mut r = index % self.block;
        let base = self.m.get() as u64;
        for slot in v[1..].iter_mut().rev() {
            *slot = self.m.min_rep() + (r % base) as i64;
            r /= base;
        }
        v
    }
}

fn build_code(spec: &SearchSpec, entries: &[i64]) -> Result<IndexCode> {
    let m = Modulus::new(spec.m)?;
    match spec.scope {
        SearchScope::Circulant => IndexCode::new_circulant(m, spec.k, entries),
        SearchScope::General => {
            let rows: Vec<Vec<i64>> = entries.chunks(spec.k).map(<[i64]>::to_vec).collect();
            IndexCode::from_matrix(RingMatrix::from_rows(&rows, m)?)
        }
    }
}

#[derive(Default)]
struct Partial {
    key: Option<GainKey>,
    found: Vec<Found>,
    valid: u64,
}

impl Partial {
    fn offer(&mut self, key: GainKey, f: Found, cap: usize) {
        match self.key {
            Some(k) if key < k => {}
            Some(k) if key == k => {
                if self.found.len() < cap {
                    self.found.push(f);
                }
            }
            _ => {
                self.key = Some(key);
                self.found = vec![f];
            }
        }
    }

    /// `other` covers later indices than `self`.
    fn merge(mut self, other: Partial, cap: usize) -> Partial {
        self.valid += other.valid;
        match (self.key, other.key) {
            (_, None) => {}
            (None, Some(_)) => {
                self.key = other.key;
                self.found = other.found;
            }
            (Some(a), Some(b)) if b > a => {
                self.key = other.key;
                self.found = other.found;
            }
            (Some(a), Some(b)) if b == a => {
                self.found.extend(other.found);
                self.found.truncate(cap);
            }
            _ => {}
        }
        self
    }
}

/// Runs `spec` from `spec.start_candidate`.
pub fn search_circulant(spec: &SearchSpec) -> Result<SearchResult> {
    search_from(spec, None)
}

/// Continues from an earlier, incomplete result of the same spec: the
/// new call starts at `previous.next_candidate` and merges the best codes.
pub fn resume(spec: &SearchSpec, previous: &SearchResult) -> Result<SearchResult> {
    let mut prev_spec = previous.spec.clone();
    let mut cur = spec.clone();
    for s in [&mut prev_spec, &mut cur] {
        s.start_candidate = 0;
        s.max_candidates = 0;
        s.threads = None;
    }
    if prev_spec != cur {
        return Err(Error::InvalidParameter("checkpoint belongs to a different search".into()));
    }
    let mut s = spec.clone();
    s.start_candidate = previous.next_candidate;
    search_from(&s, Some(previous))
}

fn search_from(spec: &SearchSpec, previous: Option<&SearchResult>) -> Result<SearchResult> {
    let started = Instant::now();
    let m = spec.validate()?;
    let cands = Candidates::new(spec, m).ok_or(Error::Overflow("candidate count"))?;
    let cap = match spec.tie_policy {
        TiePolicy::Lexicographic => 1,
        TiePolicy::All { cap } => cap,
    };
    let start = spec.start_candidate.min(cands.total);
    let end = start.saturating_add(spec.max_candidates).min(cands.total);

    let mut seed = Partial::default();
    let (mut examined, mut valid) = (0, 0);
    if let Some(p) = previous {
        seed.key = p.best_key;
        seed.found = p.best_codes.clone();
        examined = p.candidates_examined;
        valid = p.candidates_valid;
    }
    let shared = Mutex::new(seed.key);
    let opts = DistanceOptions::default();

    let run_block = |lo: u64, hi: u64| -> Result<Partial> {
        let mut part = Partial::default();
        for index in lo..hi {
            let entries = cands.entries(index);
            let code = match build_code(spec, &entries) {
                Ok(c) => c,
                Err(Error::NotUniquelyDecodable { .. }) => continue,
                Err(e) => return Err(e),
            };
            part.valid += 1;
            let floor = if spec.prune { *shared.lock().expect("bound lock") } else { None };
            let Some(key) = gamma_key(&code, floor, &opts)? else { continue };
            part.offer(key, Found { index, entries }, cap);
            if spec.prune {
                let mut b = shared.lock().expect("bound lock");
                if b.is_none_or(|b| key > b) {
                    *b = Some(key);
                }
            }
        }
        Ok(part)
    };

    let workers = spec.threads.unwrap_or_else(rayon::current_num_threads).max(1) as u64;
    let span = end - start;
    let nblocks = (workers * 8).min(span.max(1));
    let blocks: Vec<(u64, u64)> =
        (0..nblocks).map(|b| (start + span * b / nblocks, start + span * (b + 1) / nblocks)).collect();
    let run_all = || -> Result<Vec<Partial>> { blocks.par_iter().map(|&(lo, hi)| run_block(lo, hi)).collect() };
    let parts = match spec.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run_all)?,
        None => run_all()?,
    };

    let mut acc = seed;
    acc.valid = 0;
    for p in parts {
        acc = acc.merge(p, cap);
    }
    Ok(SearchResult {
        spec: spec.clone(),
        best_key: acc.key,
        best_gamma_db: acc.key.map(|k| k.to_db(spec.m, spec.k)),
        best_codes: acc.found,
        candidates_examined: examined + (end - start),
        candidates_valid: valid + acc.valid,
        total_candidates: cands.total,
        next_candidate: end,
        complete: end == cands.total,
        elapsed_secs: started.elapsed().as_secs_f64(),
    })
}
