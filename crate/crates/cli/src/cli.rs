use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fqt::behaved::is_l_behaved;
use fqt::logic::{
    eval_ring, parse_arith, parse_ring, print_ring, translate, wrap_universal_psi_c, EvalBudget, ParamPolicy,
    TranslateMode,
};
use fqt::norms::{is_norm, norm_witness_search, psi_c, two_squares, ExtensionSpec};
use fqt::power::{build_phi, choose_params, den_p, pasten_criterion, PhiTarget};
use fqt::{Fq, Poly, RationalFunction};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{io_err, CliError, Result};
use crate::experiments::{search_d, verify_counterexample, SearchDParams, COUNTEREXAMPLES};
use crate::report::ExperimentReport;
use crate::suites::{run_suite, SUITES};

#[derive(Debug, Parser)]
#[command(name = "fqt", version, about = "Experiments in rational function fields over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u64,
    /// The prime l.
    #[arg(long, global = true, default_value_t = 2)]
    pub l: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here as well as to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the rows as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Abstract,
    ExpandDenp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Policy {
    FixedT,
    FreeU,
    QuantifiedBl,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Kummer,
    ArtinSchreier,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide l-behavedness with a per-place trace.
    Behaved {
        #[arg(long)]
        u: String,
    },
    /// Square criterion against the ground-truth p-power test.
    Pasten {
        #[arg(long, default_value_t = 0)]
        g: u64,
        #[arg(long)]
        f: String,
        #[arg(long)]
        h: String,
    },
    /// Print the square-criterion formula as an S-expression.
    EmitPhi {
        #[arg(long, default_value_t = 0)]
        g: u64,
        /// Emit the characteristic-independent formula instead.
        #[arg(long)]
        uniform: bool,
    },
    /// Norm decision for the degree-l constant extension.
    NormCheck {
        #[arg(long)]
        u: String,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Also search for a witness up to this degree.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Sum of two squares in F_q[t].
    TwoSquares {
        #[arg(long)]
        f: String,
    },
    PsiC {
        #[arg(long)]
        u: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Compile an arithmetic sentence into a ring formula.
    Translate {
        #[arg(long, value_enum, default_value = "abstract")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "fixed-t")]
        policy: Policy,
        #[arg(long, default_value_t = 0)]
        genus: u64,
        #[arg(long, conflicts_with = "sentence_file")]
        sentence: Option<String>,
        #[arg(long)]
        sentence_file: Option<PathBuf>,
        /// Wrap the body in the universal psi_C guard (display only).
        #[arg(long)]
        psi_c: bool,
    },
    /// Bounded evaluation of a ring formula.
    Eval {
        #[arg(long, default_value = "t")]
        u: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
        #[arg(long, conflicts_with = "formula_file")]
        formula: Option<String>,
        #[arg(long)]
        formula_file: Option<PathBuf>,
        /// Drop the enumeration and step caps.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Sweep PGL2 classes on the listed counterexamples, or on `--u`.
    Counterexamples {
        #[arg(long)]
        u: Option<String>,
        #[arg(long, default_value_t = 1)]
        max_frob_power: u32,
    },
    /// Search for D with D(u) behaved for every nonconstant u.
    SearchD {
        #[arg(long, default_value_t = 1)]
        num_deg: usize,
        #[arg(long, default_value_t = 0)]
        den_deg: usize,
        #[arg(long, default_value_t = 2)]
        u_height: usize,
        #[arg(long, default_value_t = 64)]
        chunk: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Stop after this many chunks.
        #[arg(long)]
        stop_after: Option<usize>,
    },
    /// Run a named suite; see `--list`.
    RunSuite {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

/// What a command produced: a report, optionally with plain text for stdout.
pub struct Output {
    pub report: ExperimentReport,
    pub text: Option<String>,
}

fn field(p: u64) -> Result<Fq> {
    Ok(Fq::prime(p)?)
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(io_err(path))
}

fn text_arg(inline: &Option<String>, file: &Option<PathBuf>, what: &str) -> Result<String> {
    match (inline, file) {
        (Some(s), _) => Ok(s.clone()),
        (None, Some(path)) => Ok(read(path)?.trim().to_string()),
        (None, None) => Err(CliError::Usage(format!("give --{what} or --{what}-file"))),
    }
}

fn base_config(name: &str, g: &Global) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(name, g.p, g.l);
    c.seed = g.seed;
    c.jobs = g.jobs;
    c.out = g.out.clone();
    c
}

fn single(cfg: ExperimentConfig, row: serde_json::Value, start: Instant) -> ExperimentReport {
    let mut r = ExperimentReport::new(cfg);
    r.push(row, true);
    r.finish(start)
}

pub fn execute(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    let start = Instant::now();
    let mut text = None;
    let report = match &cli.command {
        Command::Behaved { u } => {
            let cfg = base_config("behaved", g).arg("u", u);
            cfg.validate()?;
            let u = RationalFunction::parse(&field(g.p)?, u)?;
            single(cfg, serde_json::to_value(is_l_behaved(&u, g.l)?)?, start)
        }
        Command::Pasten { g: genus, f, h } => {
            let cfg = base_config("pasten", g).arg("g", genus).arg("f", f).arg("h", h);
            cfg.validate()?;
            let k = field(g.p)?;
            let (f, h) = (RationalFunction::parse(&k, f)?, RationalFunction::parse(&k, h)?);
            let params = choose_params(*genus, g.p)?;
            let crit = pasten_criterion(&f, &h, &params)?;
            let s = den_p(&f, &h)?;
            let mut r = ExperimentReport::new(cfg);
            r.push(json!({"criterion": crit, "ground_truth_s": s, "params": params}), crit == s.is_some());
            r.finish(start)
        }
        Command::EmitPhi { g: genus, uniform } => {
            let cfg = base_config("emit-phi", g).arg("g", genus).arg("uniform", uniform);
            let target = if *uniform { PhiTarget::Uniform } else { PhiTarget::Prime(g.p) };
            let phi = build_phi(*genus, target)?;
            let s = print_ring(&phi);
            text = Some(s.clone());
            single(cfg, json!({"formula": s, "square_atoms": fqt::power::count_square_atoms(&phi)}), start)
        }
        Command::NormCheck { u, kind, bound } => {
            let mut cfg = base_config("norm-check", g).arg("u", u);
            cfg.bound = *bound;
            cfg.validate()?;
            let k = field(g.p)?;
            let spec = match kind {
                None => ExtensionSpec::for_degree(&k, g.l)?,
                Some(Kind::Kummer) => ExtensionSpec::default_kummer(&k, g.l)?,
                Some(Kind::ArtinSchreier) => ExtensionSpec::default_artin_schreier(&k)?,
            };
            cfg.args.insert("extension".into(), spec.to_string());
            let u = RationalFunction::parse(&k, u)?;
            let dec = is_norm(&u, &spec)?;
            let witness = match bound {
                Some(b) => norm_witness_search(&u, &spec, *b)?,
                None => None,
            };
            single(
                cfg,
                json!({"decision": dec.is_norm, "extension": spec, "witness": witness, "trace": dec.trace}),
                start,
            )
        }
        Command::TwoSquares { f } => {
            let cfg = base_config("two-squares", g).arg("f", f);
            let r = two_squares(&Poly::parse(&field(g.p)?, f)?)?;
            single(cfg, serde_json::to_value(r)?, start)
        }
        Command::PsiC { u, bound } => {
            let mut cfg = base_config("psi-c", g).arg("u", u);
            cfg.bound = Some(*bound);
            let d = psi_c(&RationalFunction::parse(&field(g.p)?, u)?, *bound)?;
            single(cfg, serde_json::to_value(d)?, start)
        }
        Command::Translate { mode, policy, genus, sentence, sentence_file, psi_c } => {
            let src = text_arg(sentence, sentence_file, "sentence")?;
            let mode = match mode {
                Mode::Abstract => TranslateMode::Abstract,
                Mode::ExpandDenp => TranslateMode::ExpandDenp,
            };
            let policy = match policy {
                Policy::FixedT => ParamPolicy::FixedT,
                Policy::FreeU => ParamPolicy::FreeU,
                Policy::QuantifiedBl => ParamPolicy::QuantifiedBl,
            };
            let cfg = base_config("translate", g)
                .arg("sentence", &src)
                .arg("mode", serde_json::to_value(mode)?.as_str().unwrap_or_default())
                .arg("policy", serde_json::to_value(policy)?.as_str().unwrap_or_default())
                .arg("genus", genus)
                .arg("psi_c", psi_c);
            let phi = translate(&parse_arith(&src)?, mode, *genus, policy)?;
            let s = if *psi_c {
                let alpha = fqt::galois::nonsquare_constant(&field(g.p)?)?.code() as i64;
                wrap_universal_psi_c(&phi, alpha)
            } else {
                print_ring(&phi)
            };
            text = Some(s.clone());
            single(cfg, json!({"formula": s}), start)
        }
        Command::Eval { u, bound, formula, formula_file, exhaustive } => {
            let src = text_arg(formula, formula_file, "formula")?;
            let mut cfg = base_config("eval", g).arg("u", u).arg("formula", &src).arg("exhaustive", exhaustive);
            cfg.bound = Some(*bound);
            cfg.validate()?;
            let k = field(g.p)?;
            let budget = if *exhaustive { EvalBudget::exhaustive(&k, *bound) } else { EvalBudget::new(&k, *bound) };
            let out = eval_ring(&parse_ring(&src)?, &RationalFunction::parse(&k, u)?, g.l, &budget)?;
            single(cfg, serde_json::to_value(out)?, start)
        }
        Command::Counterexamples { u, max_frob_power } => {
            let entries: Vec<(u64, String)> = match u {
                Some(u) => vec![(g.p, u.clone())],
                None => COUNTEREXAMPLES.iter().map(|(p, u)| (*p, u.to_string())).collect(),
            };
            let mut cfg = base_config("counterexamples", g).arg("max_frob_power", max_frob_power);
            if let Some(u) = u {
                cfg.args.insert("u".into(), u.clone());
            }
            cfg.validate()?;
            let mut r = ExperimentReport::new(cfg);
            for (p, u) in entries {
                let sub = verify_counterexample(p, &RationalFunction::parse(&field(p)?, &u)?, g.l, *max_frob_power)?;
                r.ok &= sub.ok;
                r.summary.items += sub.summary.items;
                r.summary.passed += sub.summary.passed;
                r.summary.failed += sub.summary.failed;
                r.summary.flagged += sub.summary.flagged;
                r.findings.extend(sub.findings);
                r.rows.push(json!({"p": p, "u": u, "classes": sub.rows}));
            }
            r.finish(start)
        }
        Command::SearchD { num_deg, den_deg, u_height, chunk, checkpoint, stop_after } => {
            base_config("search-d", g).validate()?;
            let params = SearchDParams { p: g.p, l: g.l, num_deg: *num_deg, den_deg: *den_deg, u_height: *u_height };
            let out = search_d(&params, *chunk, checkpoint.as_ref(), *stop_after)?;
            let mut r = out.report;
            r.config.seed = g.seed;
            r.config.jobs = g.jobs;
            r.config.out = g.out.clone();
            if let Some(s) = stop_after {
                r.config.args.insert("stop_after".into(), s.to_string());
            }
            r.rows.push(json!({"summary": true, "complete": out.complete, "survivors": out.survivors}));
            r
        }
        Command::RunSuite { name, list } => {
            if *list {
                text = Some(SUITES.join("\n"));
                single(base_config("run-suite", g).arg("list", true), json!({"suites": SUITES}), start)
            } else {
                let name = name.as_deref().unwrap_or_default();
                let mut r = run_suite(name, g.seed)?;
                r.config.jobs = g.jobs;
                r.config.out = g.out.clone();
                r
            }
        }
    };
    Ok(Output { report, text })
}

/// Parse arguments, run, write outputs and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(j) = cli.global.jobs {
        // fails only if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let out = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let written = (|| -> Result<()> {
        if let Some(path) = &cli.global.out {
            out.report.write_json(path)?;
        }
        if let Some(path) = &cli.global.csv {
            out.report.write_csv(path)?;
        }
        let body = match &out.text {
            Some(t) => t.clone(),
            None => out.report.to_json()?,
        };
        let mut stdout = std::io::stdout().lock();
        match writeln!(stdout, "{body}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(io_err("<stdout>")),
        }
    })();
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    if out.report.ok {
        0
    } else {
        eprintln!("invariant violated; see the report");
        1
    }
}
