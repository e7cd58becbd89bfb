use std::fs;
use std::path::Path;

use qamidx::awgnsim::{self, CapacityLimit, ChannelConfig, SimResult, SnrConvention};
use qamidx::gain::{gamma_with, GammaOptions};
use qamidx::indexcode::format_row;
use qamidx::search::{self, FirstEntryPolicy, SearchResult, SearchScope, SearchSpec, TiePolicy};
use qamidx::{CodeRecord, Error, IndexCode, SideInfo, Subset};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{CapacityArgs, CodeArgs, CodecOp, EvalArgs, SearchArgs, SimulateArgs};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INVALID_CODE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_USAGE: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

type Out = Result<String, CliError>;

fn usage(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, message: message.into() }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotUniquelyDecodable { .. } => EXIT_INVALID_CODE,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::InvalidModulus(_)
            | Error::ModulusMismatch(..)
            | Error::DimensionMismatch { .. }
            | Error::NotSquare { .. }
            | Error::InvalidSubset(_)
            | Error::InvalidParameter(_) => EXIT_USAGE,
            Error::Overflow(_) | Error::NotBracketed(_) | Error::Inconsistent(_) => EXIT_FAILURE,
        };
        let message = match e {
            Error::NotUniquelyDecodable { det, modulus } => {
                format!("det(C) not a unit mod {modulus} (det(C) = {det}); the code is not uniquely decodable")
            }
            other => other.to_string(),
        };
        CliError { code, message }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    let s = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| usage(format!("bad {what} entry {t:?}")))).collect()
}

fn parse_subset(s: &str) -> Result<Subset, CliError> {
    s.parse().map_err(|e: Error| usage(e.to_string()))
}

fn parse_snr(s: &str) -> Result<Vec<f64>, CliError> {
    if s.contains(':') {
        let p: Vec<f64> = s
            .split(':')
            .map(|t| t.trim().parse().map_err(|_| usage(format!("bad SNR range {s:?}"))))
            .collect::<Result<_, _>>()?;
        let [a, b, step] = p[..] else { return Err(usage("SNR range is START:STOP:STEP")) };
        if step.is_nan() || step <= 0.0 || b < a {
            return Err(usage("SNR range needs STEP > 0 and STOP >= START"));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| a + step * i as f64).collect())
    } else {
        parse_list(s, "SNR")
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("cannot parse {}: {e}", path.display())))
}

/// Accepts either `{"code": {...}, ...}` or a bare code record.
fn read_code_json(path: &Path) -> Result<CodeRecord, CliError> {
    let v: serde_json::Value = read_json(path)?;
    let rec = v.get("code").cloned().unwrap_or(v);
    serde_json::from_value(rec).map_err(|e| usage(format!("no code record in {}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output types serialize");
    s.push('\n');
    s
}

fn code_record(a: &CodeArgs) -> Result<CodeRecord, CliError> {
    let m = a.m.ok_or_else(|| usage("-M is required"))?;
    match (&a.row, &a.matrix) {
        (Some(row), None) => {
            let row: Vec<i64> = parse_list(row, "row")?;
            let k = a.k.unwrap_or(row.len());
            if k != row.len() {
                return Err(usage(format!("-K {k} but the row has {} entries", row.len())));
            }
            Ok(CodeRecord { m, k, first_row: Some(row), matrix: None })
        }
        (None, Some(mat)) => {
            let rows: Vec<Vec<i64>> = mat.split(';').map(|r| parse_list(r, "matrix")).collect::<Result<_, _>>()?;
            let k = a.k.unwrap_or(rows.len());
            Ok(CodeRecord { m, k, first_row: None, matrix: Some(rows) })
        }
        _ => Err(usage("give exactly one of --row or --matrix")),
    }
}

fn build(rec: &CodeRecord) -> Result<IndexCode, CliError> {
    Ok(rec.build()?)
}

pub fn eval(a: EvalArgs) -> Out {
    let rec = match &a.json_in {
        Some(p) => read_code_json(p)?,
        None => code_record(&a.code)?,
    };
    let code = build(&rec)?;
    let report = gamma_with(&code, &GammaOptions { all_subsets: a.all_subsets, ..Default::default() })?;
    Ok(if a.json { to_json(&report) } else { report.to_table() })
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    spec_hash: String,
    next_candidate: u64,
    best_so_far: SearchResult,
}

/// Hash of the parts of a spec that define the candidate set and outcome.
fn spec_hash(spec: &SearchSpec) -> String {
    let mut s = spec.clone();
    s.start_candidate = 0;
    s.max_candidates = 0;
    s.threads = None;
    let bytes = serde_json::to_vec(&s).expect("spec serializes");
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Deserialize)]
struct SearchInput {
    spec: SearchSpec,
}

pub fn search(a: SearchArgs) -> Out {
    let mut spec = match &a.json_in {
        Some(p) => {
            let v: serde_json::Value = read_json(p)?;
            match serde_json::from_value::<SearchInput>(v.clone()) {
                Ok(i) => i.spec,
                Err(_) => serde_json::from_value(v).map_err(|e| usage(format!("no search spec in JSON: {e}")))?,
            }
        }
        None => {
            let m = a.m.ok_or_else(|| usage("-M is required"))?;
            let k = a.k.ok_or_else(|| usage("-K is required"))?;
            let mut s = SearchSpec::new(m, k);
            if a.all_first_entries {
                s.first_entry_policy = FirstEntryPolicy::All;
            }
            if a.all_ties {
                s.tie_policy = TiePolicy::All { cap: a.tie_cap };
            }
            if a.general {
                s.scope = SearchScope::General;
            }
            s.prune = !a.no_prune;
            s
        }
    };
    spec.max_candidates = a.max_candidates;
    spec.threads = a.threads;

    let result = if let Some(path) = &a.resume {
        let cp: Checkpoint = read_json(path)?;
        if cp.spec_hash != spec_hash(&spec) {
            return Err(usage(format!("checkpoint {} was written for a different search", path.display())));
        }
        if cp.next_candidate != cp.best_so_far.next_candidate {
            return Err(usage(format!("checkpoint {} is inconsistent", path.display())));
        }
        search::resume(&spec, &cp.best_so_far)?
    } else {
        let total = spec.total_candidates()?;
        let remaining = total.map(|t| t.saturating_sub(spec.start_candidate));
        if a.checkpoint.is_none() && remaining.is_none_or(|r| r > spec.max_candidates) {
            return Err(CliError {
                code: EXIT_BUDGET,
                message: format!(
                    "search needs {} candidates but the budget is {}; raise --max-candidates or pass --checkpoint FILE to run in pieces",
                    remaining.map_or("more than 2^64".to_string(), |r| r.to_string()),
                    spec.max_candidates
                ),
            });
        }
        search::search_circulant(&spec)?
    };

    if let Some(path) = &a.checkpoint {
        let cp = Checkpoint {
            spec_hash: spec_hash(&spec),
            next_candidate: result.next_candidate,
            best_so_far: result.clone(),
        };
        fs::write(path, to_json(&cp))
            .map_err(|e| CliError { code: EXIT_FAILURE, message: format!("cannot write {}: {e}", path.display()) })?;
    }
    if a.json {
        return Ok(to_json(&result));
    }
    let mut out = result.to_rows();
    out.push_str(&format!(
        "examined {} of {} candidates, {} with unit determinant\n",
        result.candidates_examined, result.total_candidates, result.candidates_valid
    ));
    if !result.complete {
        out.push_str(&format!(
            "incomplete: next candidate {}; continue with --resume{}\n",
            result.next_candidate,
            a.checkpoint.as_ref().map_or(String::new(), |p| format!(" {}", p.display()))
        ));
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct SimulateIo {
    code: CodeRecord,
    subsets: Vec<Subset>,
    config: ChannelConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    results: Vec<SimResult>,
}

pub fn simulate(a: SimulateArgs) -> Out {
    let mut io = match &a.json_in {
        Some(p) => read_json::<SimulateIo>(p)?,
        None => {
            let code = code_record(&a.code)?;
            let seed = a.seed.ok_or_else(|| usage("--seed is required for simulate"))?;
            let snr = parse_snr(a.snr.as_deref().ok_or_else(|| usage("--snr is required"))?)?;
            let mut subsets: Vec<Subset> = a.subsets.iter().map(|s| parse_subset(s)).collect::<Result<_, _>>()?;
            if subsets.is_empty() {
                subsets.push(Subset::EMPTY);
            }
            let mut config = ChannelConfig::new(snr, a.trials, seed);
            config.max_errors = (a.max_errors > 0).then_some(a.max_errors);
            config.batch_size = a.batch_size;
            if a.es_n0 {
                config.snr_convention = SnrConvention::EsOverN0;
            }
            SimulateIo { code, subsets, config, results: Vec::new() }
        }
    };
    let code = build(&io.code)?;
    let mut cfg = io.config.clone();
    cfg.threads = a.threads;
    io.results = io.subsets.iter().map(|&s| awgnsim::simulate(&code, s, &cfg)).collect::<Result<_, _>>()?;
    if a.json {
        return Ok(to_json(&io));
    }
    let mut out = format!(
        "# code: M = {} K = {} C = {}\n# snr convention: {}\n# seed: {}\n# rng: {}\n{}\n",
        io.code.m,
        io.code.k,
        code,
        io.config.snr_convention.describe(),
        io.config.seed,
        awgnsim::RNG_ALGORITHM,
        SimResult::CSV_HEADER
    );
    for r in &io.results {
        out.push_str(&r.csv_rows());
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct EncodeIo {
    code: CodeRecord,
    message: Vec<i64>,
    #[serde(default)]
    codeword: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct DecodeIo {
    code: CodeRecord,
    y: Vec<f64>,
    subset: Subset,
    side: Vec<i64>,
    #[serde(default)]
    message: Vec<i64>,
    #[serde(default)]
    codeword: Vec<i64>,
}

pub fn codec(op: CodecOp) -> Out {
    match op {
        CodecOp::Encode { code, message, json, json_in } => {
            let mut io = match &json_in {
                Some(p) => read_json::<EncodeIo>(p)?,
                None => EncodeIo {
                    code: code_record(&code)?,
                    message: parse_list(message.as_deref().ok_or_else(|| usage("--message is required"))?, "message")?,
                    codeword: Vec::new(),
                },
            };
            let c = build(&io.code)?;
            io.codeword = c.encode(&io.message)?.into_entries();
            Ok(if json { to_json(&io) } else { format!("{}\n", format_row(&io.codeword)) })
        }
        CodecOp::Decode { code, y, subset, side, json, json_in } => {
            let mut io = match &json_in {
                Some(p) => read_json::<DecodeIo>(p)?,
                None => DecodeIo {
                    code: code_record(&code)?,
                    y: parse_list(y.as_deref().ok_or_else(|| usage("--y is required"))?, "y")?,
                    subset: parse_subset(&subset)?,
                    side: parse_list(&side, "side")?,
                    message: Vec::new(),
                    codeword: Vec::new(),
                },
            };
            let c = build(&io.code)?;
            if io.y.len() != c.k() {
                return Err(usage(format!("y has {} entries, expected {}", io.y.len(), c.k())));
            }
            let w = if io.subset.is_empty() {
                c.decode_no_side_info(&io.y)?
            } else {
                c.decode_with_side_info(&io.y, &SideInfo::new(io.subset, io.side.clone())?)?
            };
            io.codeword = c.encode(w.entries())?.into_entries();
            io.message = w.into_entries();
            Ok(if json { to_json(&io) } else { format!("{}\n", format_row(&io.message)) })
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CapacityIo {
    rates: Vec<f64>,
    subset: Subset,
    #[serde(default, skip_deserializing)]
    limit: Option<CapacityLimit>,
}

pub fn capacity(a: CapacityArgs) -> Out {
    let mut io = match &a.json_in {
        Some(p) => read_json::<CapacityIo>(p)?,
        None => CapacityIo {
            rates: parse_list(a.rates.as_deref().ok_or_else(|| usage("--rates is required"))?, "rate")?,
            subset: parse_subset(&a.subset)?,
            limit: None,
        },
    };
    if let Some(k) = a.k {
        if k != io.rates.len() {
            return Err(usage(format!("-K {k} but {} rates given", io.rates.len())));
        }
    }
    let limit = awgnsim::capacity_min_snr_db(&io.rates, io.subset)?;
    io.limit = Some(limit);
    Ok(if a.json { to_json(&io) } else { format!("S = {}  minimum SNR: {limit}\n", io.subset) })
}
