//! Counterexample verification over PGL2 classes and the search for a
//! rational function `D` with `D(u)` behaved for every nonconstant `u`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use fqt::behaved::is_l_behaved;
use fqt::funcfield::{enumerate_pgl2, enumerate_rationals};
use fqt::galois::enumerate_monic;
use fqt::{Fq, Poly, RationalFunction};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::{io_err, CliError, Result};
use crate::report::ExperimentReport;

/// Counterexample candidates for `l = 2`.
pub const COUNTEREXAMPLES: [(u64, &str); 5] = [
    (3, "t^6/(t^6+2)"),
    (5, "(t^6+2)/(t^6+t^2+2)"),
    (7, "(t^6+2)/(t^6+t^2+2)"),
    (11, "(t^8+1)/(t^8+t^6+t^4+t^2+1)"),
    (13, "(t^8+1)/(t^8+t^4+1)"),
];

fn verdict_json(v: &RationalFunction, l: u64, exponent: u64) -> Result<(bool, Value)> {
    let rep = is_l_behaved(v, l)?;
    let ok = rep.is_behaved;
    Ok((
        ok,
        json!({
            "exponent": exponent,
            "value": v,
            "behaved": ok,
            "witnesses": rep.witnesses,
            "excluded": rep.excluded,
        }),
    ))
}

/// Run every PGL2(F_p) class on `u` and its `p^n`-th powers for
/// `n <= max_frob_power`. A genuine counterexample has no behaved
/// transform; the verdict is recorded, not enforced. A class whose
/// verdict changes across Frobenius powers is a violation.
pub fn verify_counterexample(
    p: u64,
    u: &RationalFunction,
    l: u64,
    max_frob_power: u32,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    if u.is_constant() {
        return Err(fqt::Error::ConstantInput.into());
    }
    let field = u.field().clone();
    let mut cfg = ExperimentConfig::new("counterexamples", p, l)
        .arg("u", u)
        .arg("max_frob_power", max_frob_power);
    let maps = enumerate_pgl2(&field);
    cfg.args.insert("classes".into(), maps.len().to_string());
    let rows: Vec<Result<(Value, bool, bool)>> = maps
        .par_iter()
        .map(|m| {
            let [a, b, c, d] = m.entries();
            let den = u.scale(c).add(&RationalFunction::constant(&field, d));
            if den.is_zero() {
                return Ok((json!({"entries": [a, b, c, d], "skipped": "denominator vanishes"}), false, true));
            }
            let v = m.apply(u)?;
            if v.is_constant() {
                return Ok((json!({"entries": [a, b, c, d], "skipped": "constant transform"}), false, true));
            }
            let mut verdicts = Vec::new();
            let mut flags = Vec::new();
            let mut pe = 1u64;
            for n in 0..=max_frob_power {
                let (ok, row) = verdict_json(&v.frobenius_pow(n), l, pe)?;
                flags.push(ok);
                verdicts.push(row);
                pe = pe.saturating_mul(p);
            }
            let consistent = flags.iter().all(|&f| f == flags[0]);
            Ok((
                json!({
                    "entries": [a, b, c, d],
                    "transform": v,
                    "behaved": flags[0],
                    "frobenius_consistent": consistent,
                    "verdicts": verdicts,
                }),
                flags[0],
                consistent,
            ))
        })
        .collect();
    let mut report = ExperimentReport::new(cfg);
    let mut behaved = Vec::new();
    for r in rows {
        let (row, is_behaved, consistent) = r?;
        if is_behaved {
            behaved.push(row["entries"].clone());
        }
        if consistent {
            report.push_flagged(row, is_behaved);
        } else {
            report.push(row, false);
        }
    }
    let agrees = behaved.is_empty();
    report.findings.push(if agrees {
        format!("p = {p}, u = {u}: no behaved transform, counterexample confirmed")
    } else {
        format!(
            "p = {p}, u = {u}: {} behaved transform(s), not a counterexample; first {}",
            behaved.len(),
            behaved[0]
        )
    });
    report.rows.push(json!({"summary": true, "behaved_transforms": behaved, "claim_confirmed": agrees}));
    Ok(report.finish(start))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchDParams {
    pub p: u64,
    pub l: u64,
    pub num_deg: usize,
    pub den_deg: usize,
    pub u_height: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateResult {
    pub index: usize,
    pub d: String,
    pub survivor: bool,
    /// Least `u` in enumeration order with `D(u)` not behaved.
    pub falsifier: Option<String>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Checkpoint {
    params: SearchDParams,
    next: usize,
    results: Vec<CandidateResult>,
}

/// All reduced `A/B` with `deg A <= num_deg`, `B` monic of degree
/// `<= den_deg`, in (denominator degree, denominator, numerator) order.
pub fn d_candidates(field: &Fq, num_deg: usize, den_deg: usize) -> Vec<RationalFunction> {
    let nums: Vec<Poly> = (0..(field.order() as u128).pow(num_deg as u32 + 1))
        .map(|i| Poly::from_index(field, i))
        .collect();
    let mut out = Vec::new();
    for e in 0..=den_deg {
        for b in enumerate_monic(field, e) {
            for a in &nums {
                if a.is_zero() && e > 0 {
                    continue;
                }
                if !a.gcd(&b).is_one() && !a.is_zero() {
                    continue;
                }
                out.push(RationalFunction::new(a.clone(), b.clone()).expect("monic denominator"));
            }
        }
    }
    out
}

fn test_candidate(index: usize, d: &RationalFunction, us: &[RationalFunction], l: u64) -> Result<CandidateResult> {
    let mut res = CandidateResult { index, d: d.to_string(), survivor: false, falsifier: None, reason: None };
    if d.is_constant() {
        res.reason = Some("constant".into());
        return Ok(res);
    }
    for u in us {
        let v = d.substitute(u)?;
        if !is_l_behaved(&v, l)?.is_behaved {
            res.falsifier = Some(u.to_string());
            res.reason = Some(format!("D(u) = {v} is not behaved"));
            return Ok(res);
        }
    }
    res.survivor = true;
    Ok(res)
}

fn read_checkpoint(path: &Path, params: &SearchDParams) -> Result<Option<Checkpoint>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let ck: Checkpoint = serde_json::from_str(&text)?;
    if &ck.params != params {
        return Err(CliError::CheckpointMismatch(path.to_path_buf()));
    }
    Ok(Some(ck))
}

fn write_checkpoint(path: &Path, ck: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string(ck)?).map_err(io_err(&tmp))?;
    std::fs::rename(&tmp, path).map_err(io_err(path))
}

/// Outcome of `search_d`; `complete` is false when the run stopped early
/// and left a checkpoint behind.
pub struct SearchOutcome {
    pub report: ExperimentReport,
    pub complete: bool,
    pub survivors: Vec<String>,
}

/// Sweep candidates in chunks of `chunk`, checkpointing after each chunk.
/// `stop_after` bounds the number of chunks processed in this call.
pub fn search_d(
    params: &SearchDParams,
    chunk: usize,
    checkpoint: Option<&PathBuf>,
    stop_after: Option<usize>,
) -> Result<SearchOutcome> {
    let start = Instant::now();
    let field = Fq::prime(params.p)?;
    let candidates = d_candidates(&field, params.num_deg, params.den_deg);
    let us: Vec<RationalFunction> = enumerate_rationals(&field, params.u_height)
        .filter(|u| !u.is_constant())
        .collect();
    let mut ck = match checkpoint {
        Some(path) => read_checkpoint(path, params)?,
        None => None,
    }
    .unwrap_or(Checkpoint { params: params.clone(), next: 0, results: Vec::new() });
    let chunk = chunk.max(1);
    let mut done = 0;
    while ck.next < candidates.len() && stop_after.map_or(true, |s| done < s) {
        let end = (ck.next + chunk).min(candidates.len());
        let batch: Vec<Result<CandidateResult>> = (ck.next..end)
            .into_par_iter()
            .map(|i| test_candidate(i, &candidates[i], &us, params.l))
            .collect();
        for r in batch {
            ck.results.push(r?);
        }
        ck.next = end;
        done += 1;
        if let Some(path) = checkpoint {
            write_checkpoint(path, &ck)?;
        }
    }
    let complete = ck.next == candidates.len();

    let mut cfg = ExperimentConfig::new("search-d", params.p, params.l);
    cfg.num_deg = Some(params.num_deg);
    cfg.den_deg = Some(params.den_deg);
    cfg.u_height = Some(params.u_height);
    cfg.checkpoint = checkpoint.cloned();
    cfg.args.insert("chunk".into(), chunk.to_string());
    cfg.args.insert("candidates".into(), candidates.len().to_string());
    cfg.args.insert("u_count".into(), us.len().to_string());
    let mut report = ExperimentReport::new(cfg);
    let mut survivors = Vec::new();
    for r in &ck.results {
        // a reported falsifier must falsify on recomputation
        let confirmed = match &r.falsifier {
            Some(u) => {
                let u = RationalFunction::parse(&field, u)?;
                !is_l_behaved(&candidates[r.index].substitute(&u)?, params.l)?.is_behaved
            }
            None => true,
        };
        if r.survivor {
            survivors.push(r.d.clone());
        }
        report.push(serde_json::to_value(r)?, confirmed);
    }
    report.findings.push(format!(
        "{} of {} candidates processed, {} survivor(s)",
        ck.results.len(),
        candidates.len(),
        survivors.len()
    ));
    if !complete {
        report.findings.push("stopped early; resume from the checkpoint".into());
    }
    Ok(SearchOutcome { report: report.finish(start), complete, survivors })
}
