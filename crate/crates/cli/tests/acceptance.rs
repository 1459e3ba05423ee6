//! The eleven acceptance criteria, one line each. Runs without the test
//! harness so the lines are always printed.

use std::time::{Duration, Instant};

use fqt_cli::suites::run_suite;
use fqt_cli::{ExperimentReport, Result};

struct Criterion {
    id: u32,
    name: &'static str,
    suites: &'static [&'static str],
    limit: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, name: "factorization vs trial division", suites: &["factor-oracle"], limit: secs(30) },
    Criterion { id: 2, name: "square criterion vs p-power test over F_13", suites: &["pasten-f13"], limit: secs(60) },
    Criterion { id: 3, name: "M spot values", suites: &["m-values"], limit: secs(2) },
    Criterion { id: 4, name: "behavedness laws", suites: &["behaved-laws"], limit: secs(60) },
    Criterion { id: 5, name: "t is 2-behaved for odd p <= 50", suites: &["t-behaved"], limit: secs(2) },
    Criterion { id: 6, name: "h_w valuation identities", suites: &["hw-identities"], limit: secs(60) },
    Criterion { id: 7, name: "two squares over F_3, deg <= 4", suites: &["leahey-f3"], limit: secs(120) },
    Criterion {
        id: 8,
        name: "norm decision vs witness search; behaved/norm sweep",
        suites: &["norm-search", "corollary36-sweep"],
        limit: secs(300),
    },
    Criterion { id: 9, name: "reduction end to end", suites: &["reduction-e2e"], limit: secs(300) },
    Criterion { id: 10, name: "counterexample sweeps", suites: &["counterexamples"], limit: secs(600) },
    Criterion { id: 11, name: "formula structure", suites: &["phi-structure"], limit: secs(2) },
];

const SEED: u64 = 20240601;

fn persist(report: &ExperimentReport) -> Result<String> {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(format!("{}.json", report.config.args["suite"]));
    report.write_json(&path)?;
    Ok(path.display().to_string())
}

fn run(c: &Criterion) -> Result<(bool, String)> {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for s in c.suites {
        let r = run_suite(s, SEED)?;
        ok &= r.ok;
        notes.push(format!("{s}: {}/{} passed, {} flagged", r.summary.passed, r.summary.items, r.summary.flagged));
        notes.extend(r.findings.iter().cloned());
        if *s == "corollary36-sweep" {
            let mut d = r.clone();
            d.rows.retain(|row| row["complementary"] == false);
            notes.push(format!("discrepancy list ({} rows) at {}", d.rows.len(), persist(&d)?));
        }
        if *s == "counterexamples" {
            notes.push(format!("verdicts at {}", persist(&r)?));
        }
    }
    let took = start.elapsed();
    if took > c.limit {
        ok = false;
        notes.push(format!("over the {:?} limit", c.limit));
    }
    Ok((ok, format!("{:.2}s; {}", took.as_secs_f64(), notes.join("; "))))
}

fn main() {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let (ok, detail) = match run(c) {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {:>2} {} [{}] {}", c.id, if ok { "PASS" } else { "FAIL" }, c.name, detail);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
