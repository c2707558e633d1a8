//! `mixhecke`: command-line front end to the normal-form kernel.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixhecke_core::algebra::AlgebraElement;
use mixhecke_core::braid::embed;
use mixhecke_core::certify::{certify_identity, Certificate, Scope, SearchConfig};
use mixhecke_core::garside::normal_form;
use mixhecke_core::lab::{collision_scan, confluence_batch, enumerate_lambda, write_jsonl, TrialParams};
use mixhecke_core::modp;
use mixhecke_core::normalizer::Normalizer;
use mixhecke_core::parse::{parse_element, parse_word};
use mixhecke_core::probe::{distinct, vanishes_at, ProbeConfig, RepContext};
use mixhecke_core::rules::{validate_rules, Provenance, RuleBook, RuleTable};
use serde_json::json;

/// Environment variable naming an optional `key=value` defaults file.
const CONFIG_ENV: &str = "MIXHECKE_CONFIG";

#[derive(Parser)]
#[command(name = "mixhecke", version, about = "Normal forms in the mixed Hecke algebra H_{2,n}(q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Number of moving strands.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// State budget for certificate search.
    #[arg(long)]
    budget: Option<usize>,
    /// Fixed probe modulus instead of random 61-bit primes.
    #[arg(long)]
    prime: Option<u64>,
    /// Number of probe specializations.
    #[arg(long = "q-samples")]
    q_samples: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite an element to a combination of Λ words.
    Normalize {
        #[command(flatten)]
        common: Common,
        /// Print each rewrite with its rule name.
        #[arg(long)]
        trace: bool,
        element: String,
    },
    /// Compare two elements: by normal form, then by probe.
    Equal {
        #[command(flatten)]
        common: Common,
        lhs: String,
        rhs: String,
    },
    /// Search for a certificate of lhs = rhs, or replay one with --check.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Certificate file to replay.
        #[arg(long)]
        check: Option<String>,
        lhs: Option<String>,
        rhs: Option<String>,
    },
    /// Certify every rule instance for n up to --n.
    ValidateRules {
        #[command(flatten)]
        common: Common,
    },
    /// Garside normal form of a word's braid image.
    GarsideNf {
        #[command(flatten)]
        common: Common,
        word: String,
    },
    /// List Λ words within length bounds.
    Enumerate {
        #[command(flatten)]
        common: Common,
        max_prefix: usize,
        max_tail: usize,
    },
    /// Random confluence trials, JSON lines.
    Confluence {
        #[command(flatten)]
        common: Common,
        trials: u64,
    },
    /// Group-level collisions among Λ words.
    ScanCollisions {
        #[command(flatten)]
        common: Common,
        max_prefix: usize,
        max_tail: usize,
    },
}

/// Exit 1 with a one-line diagnostic.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Resolved settings: flags over the config file over built-in defaults.
struct Settings {
    n: usize,
    seed: u64,
    budget: usize,
    prime: Option<u64>,
    q_samples: usize,
    format: Format,
    out: Option<String>,
}

fn load_config() -> Result<HashMap<String, String>, Failure> {
    let Ok(path) = std::env::var(CONFIG_ENV) else { return Ok(HashMap::new()) };
    let text = fs::read_to_string(&path).map_err(|e| Failure(format!("{path}: {e}")))?;
    let mut map = HashMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Failure(format!("{path}:{}: expected key=value", k + 1)))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn settings(c: &Common) -> Result<Settings, Failure> {
    let cfg = load_config()?;
    let get = |key: &str| -> Result<Option<u64>, Failure> {
        cfg.get(key).map(|v| v.parse::<u64>().map_err(|e| Failure(format!("config {key}: {e}")))).transpose()
    };
    let s = Settings {
        n: c.n.or(get("n")?.map(|v| v as usize)).unwrap_or(2),
        seed: c.seed.or(get("seed")?).unwrap_or(0),
        budget: c.budget.or(get("budget")?.map(|v| v as usize)).unwrap_or(2000),
        prime: c.prime.or(get("prime")?),
        q_samples: c.q_samples.or(get("q-samples")?.map(|v| v as usize)).unwrap_or(5),
        format: c.format,
        out: c.out.clone(),
    };
    if s.n == 0 {
        return Err(Failure("--n must be at least 1".into()));
    }
    if s.budget == 0 {
        return Err(Failure("--budget must be at least 1".into()));
    }
    Ok(s)
}

fn emit(s: &Settings, text: &str) -> Result<(), Failure> {
    match &s.out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn element_json(e: &AlgebraElement) -> serde_json::Value {
    let terms: Vec<_> = e.sorted_terms().into_iter().map(|(w, c)| json!({"coeff": c.to_string(), "word": w.to_string()})).collect();
    json!({"text": e.to_string(), "terms": terms})
}

/// Probe comparison: at `q_samples` random points, mod `prime` if given.
fn probe_distinct(s: &Settings, a: &AlgebraElement, b: &AlgebraElement) -> Result<bool, Failure> {
    let Some(p) = s.prime else {
        let cfg = ProbeConfig { trials: s.q_samples.max(1), local_dim: 2, seed: s.seed };
        return Ok(distinct(a, b, cfg)?.is_distinct());
    };
    if !modp::is_prime(p) || p < 5 {
        return Err(Failure(format!("--prime {p} is not a usable prime")));
    }
    let diff = a.sub(b)?;
    for k in 0..s.q_samples.max(1) as u64 {
        let q = 2 + (mixhecke_core::lab::trial_seed(s.seed, k) % (p - 3));
        let ctx = RepContext::new(a.n(), p, q)?;
        if !vanishes_at(&ctx, &diff, s.seed ^ k)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Normalize { common, trace, element } => {
            let s = settings(&common)?;
            let e = parse_element(&element, s.n)?;
            let book = RuleBook::builtin(s.n);
            let nz = if trace { Normalizer::new(&book).traced() } else { Normalizer::new(&book) };
            let out = nz.to_lambda(&e)?;
            let steps = nz.take_trace();
            let text = match s.format {
                Format::Text => {
                    let mut t = String::new();
                    for step in &steps {
                        t.push_str(&format!("# {step}\n"));
                    }
                    t.push_str(&format!("{out}\n"));
                    t
                }
                Format::Json => {
                    let trace: Vec<_> = steps
                        .iter()
                        .map(|st| json!({"rule": st.rule, "input": st.input.to_string(), "output": st.output.to_string()}))
                        .collect();
                    format!("{}\n", json!({"n": s.n, "input": e.to_string(), "output": element_json(&out), "trace": trace}))
                }
            };
            emit(&s, &text)
        }
        Command::Equal { common, lhs, rhs } => {
            let s = settings(&common)?;
            let (a, b) = (parse_element(&lhs, s.n)?, parse_element(&rhs, s.n)?);
            let book = RuleBook::builtin(s.n);
            let nz = Normalizer::new(&book);
            let verdict = if nz.to_lambda(&a)? == nz.to_lambda(&b)? {
                "equal"
            } else if probe_distinct(&s, &a, &b)? {
                "distinct"
            } else {
                "undecided"
            };
            let text = match s.format {
                Format::Text => format!("{verdict}\n"),
                Format::Json => format!("{}\n", json!({"verdict": verdict})),
            };
            emit(&s, &text)
        }
        Command::Certify { common, check, lhs, rhs } => {
            let s = settings(&common)?;
            if let Some(path) = check {
                let cert = Certificate::parse(&fs::read_to_string(&path).map_err(|e| Failure(format!("{path}: {e}")))?)?;
                let book = RuleBook::builtin(cert.n);
                return match cert.check(&book, Scope::all()) {
                    Ok(()) => emit(&s, &format!("valid ({} moves)\n", cert.moves.len())),
                    Err(e) => Err(Failure(format!("invalid: {e}"))),
                };
            }
            let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
                return Err(Failure("certify needs LHS and RHS, or --check FILE".into()));
            };
            let (a, b) = (parse_element(&lhs, s.n)?, parse_element(&rhs, s.n)?);
            let book = RuleBook::builtin(s.n);
            let cfg = SearchConfig {
                budget: s.budget,
                probe: ProbeConfig { trials: s.q_samples.max(1), local_dim: 2, seed: s.seed },
                ..SearchConfig::default()
            };
            match certify_identity(&a, &b, &book, &cfg) {
                Ok(cert) => emit(&s, &cert.to_text()),
                Err(nf) => Err(Failure(nf.to_string())),
            }
        }
        Command::ValidateRules { common } => {
            let s = settings(&common)?;
            let table = RuleTable::builtin();
            let ns: Vec<usize> = (1..=s.n).collect();
            let rows = validate_rules(&table, &ns, s.budget)?;
            let mut text = String::new();
            let mut all_ok = true;
            let mut json_rows = Vec::new();
            for t in &table.templates {
                let mine: Vec<_> = rows.iter().filter(|r| r.id.split(' ').next() == Some(t.name.as_str())).collect();
                let certified = mine.iter().filter(|r| r.certified && r.rechecked).count();
                let expected = mine.iter().all(|r| r.as_expected());
                all_ok &= expected;
                let status = if mine.is_empty() {
                    "SKIP"
                } else if certified == mine.len() {
                    "PASS"
                } else {
                    "FAIL"
                };
                let note = match (t.provenance, expected) {
                    _ if mine.is_empty() => "no instances at this n",
                    (Provenance::Erratum, true) => "printed form, refuted as expected",
                    (_, true) => "ok",
                    (_, false) => "UNEXPECTED",
                };
                text.push_str(&format!(
                    "{status}  {:<28} {:<20} {:>3}/{:<3} certified  {note}\n",
                    t.name,
                    t.provenance.to_string(),
                    certified,
                    mine.len()
                ));
                json_rows.push(json!({
                    "rule": t.name, "provenance": t.provenance.to_string(), "status": status,
                    "certified": certified, "instances": mine.len(), "expected": expected,
                }));
            }
            if s.format == Format::Json {
                text = format!("{}\n", json!({"n": s.n, "rules": json_rows, "all_expected": all_ok}));
            }
            emit(&s, &text)?;
            if all_ok {
                Ok(())
            } else {
                Err(Failure("some rules did not validate as expected".into()))
            }
        }
        Command::GarsideNf { common, word } => {
            let s = settings(&common)?;
            let w = parse_word(&word, s.n)?;
            let nf = normal_form(&embed(&w, s.n));
            let factors: Vec<String> = nf.factors.iter().map(|f| f.cycle_notation()).collect();
            let text = match s.format {
                Format::Text => format!("Delta^{} {}\n", nf.infimum, factors.join(" ")),
                Format::Json => format!(
                    "{}\n",
                    json!({"strands": nf.strands, "infimum": nf.infimum, "factors": factors})
                ),
            };
            emit(&s, &text)
        }
        Command::Enumerate { common, max_prefix, max_tail } => {
            let s = settings(&common)?;
            let words: Vec<String> = enumerate_lambda(s.n, max_prefix, max_tail).map(|w| w.to_string()).collect();
            let text = match s.format {
                Format::Text => words.iter().map(|w| format!("{w}\n")).collect(),
                Format::Json => format!("{}\n", json!({"n": s.n, "count": words.len(), "words": words})),
            };
            emit(&s, &text)
        }
        Command::Confluence { common, trials } => {
            let s = settings(&common)?;
            let params = TrialParams { n: s.n, ..TrialParams::default() };
            let (records, summary) = confluence_batch(s.seed, trials, &params);
            let mut buf = Vec::new();
            write_jsonl(&mut buf, &records, &summary)?;
            emit(&s, &String::from_utf8(buf)?)
        }
        Command::ScanCollisions { common, max_prefix, max_tail } => {
            let s = settings(&common)?;
            let rep = collision_scan(s.n, max_prefix, max_tail);
            let text = match s.format {
                Format::Json => format!("{}\n", serde_json::to_string(&rep)?),
                Format::Text => {
                    let mut t = format!(
                        "n={} prefix<={} tail<={} words={} collisions={}\n",
                        rep.n,
                        rep.max_prefix_len,
                        rep.max_tail_len,
                        rep.words,
                        rep.collisions.len()
                    );
                    for c in &rep.collisions {
                        t.push_str(&format!("  {}\n", c.join(" = ")));
                    }
                    if rep.collisions.is_empty() {
                        t.push_str("no group-level collisions (consistent with independence; not a proof)\n");
                    }
                    t
                }
            };
            emit(&s, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
