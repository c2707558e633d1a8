//! Experiments on the spanning set `Λ_n`: enumeration, confluence trials and
//! group-level collision scans. Findings are evidence, never proof.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::braid::{embed, Kind, Letter, MixedWord};
use crate::garside::normal_form;
use crate::hecke::Perm;
use crate::laurent::LaurentPoly;
use crate::normalizer::{is_lambda_form, Normalizer, PushOrder};
use crate::probe::{distinct, ProbeConfig};
use crate::rules::RuleBook;

/// Non-decreasing looping words of length at most `max_len` with no adjacent
/// inverse pair, shortest first, then by letter order.
fn prefixes(n: usize, max_len: usize) -> Vec<MixedWord> {
    let mut alphabet = Vec::new();
    for i in 1..=n as u16 {
        for kind in [Kind::LoopT, Kind::LoopTau] {
            for exp in [1, -1] {
                alphabet.push(Letter::new(kind, i, exp));
            }
        }
    }
    let mut out = vec![MixedWord::empty()];
    let mut layer = vec![MixedWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &alphabet {
                if let Some(&last) = w.letters().last() {
                    if l.index < last.index || l == last.inverse() {
                        continue;
                    }
                }
                let mut ls = w.letters().to_vec();
                ls.push(l);
                next.push(MixedWord(ls));
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Canonical reduced words of the permutations of `S_n` of length at most
/// `max_len`, shortest first.
fn tails(n: usize, max_len: usize) -> Vec<MixedWord> {
    let mut seen = BTreeMap::new();
    let mut layer = vec![Perm::identity(n)];
    seen.insert(Perm::identity(n), 0usize);
    for len in 1..=max_len {
        let mut next = Vec::new();
        for p in &layer {
            for i in 1..n as u16 {
                let ps = p.mul_gen(i);
                if ps.length() == len && !seen.contains_key(&ps) {
                    seen.insert(ps.clone(), len);
                    next.push(ps);
                }
            }
        }
        layer = next;
    }
    let mut words: Vec<MixedWord> = seen.keys().map(|p| p.canonical_word()).collect();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    words
}

/// Every Λ-shaped word within the bounds, once each, ordered by prefix and
/// then by tail.
pub fn enumerate_lambda(n: usize, max_prefix_len: usize, max_tail_len: usize) -> impl Iterator<Item = MixedWord> {
    let ts = tails(n, max_tail_len);
    prefixes(n, max_prefix_len).into_iter().flat_map(move |p| {
        let ts = ts.clone();
        ts.into_iter().map(move |t| p.concat(&t))
    })
}

/// Deterministic per-trial seed.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    // splitmix64 over the pair.
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialParams {
    pub n: usize,
    pub max_len: usize,
    pub max_terms: usize,
}

impl Default for TrialParams {
    fn default() -> Self {
        TrialParams { n: 3, max_len: 5, max_terms: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub master_seed: u64,
    pub trial_index: u64,
    pub n: usize,
    pub input: String,
    pub strategies: [String; 2],
    pub outputs_equal: bool,
    pub wall_micros: u128,
    pub tags: Vec<String>,
}

impl TrialRecord {
    /// The record without its timing, for reproducibility comparisons.
    pub fn timeless(&self) -> TrialRecord {
        TrialRecord { wall_micros: 0, ..self.clone() }
    }
}

fn random_element(rng: &mut ChaCha8Rng, p: &TrialParams) -> AlgebraElement {
    let n = p.n;
    let mut e = AlgebraElement::zero(n);
    let terms = rng.gen_range(1..=p.max_terms.max(1));
    for _ in 0..terms {
        let len = rng.gen_range(1..=p.max_len.max(1));
        let w = MixedWord::from_letters((0..len).map(|_| {
            let exp = if rng.gen_bool(0.5) { 1 } else { -1 };
            let kind = match rng.gen_range(0..3) {
                0 if n >= 2 => Kind::Braiding,
                0 | 1 => Kind::LoopT,
                _ => Kind::LoopTau,
            };
            let hi = if kind == Kind::Braiding { n - 1 } else { n };
            Letter::new(kind, rng.gen_range(1..=hi as u16), exp)
        }));
        let c = LaurentPoly::monomial(if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(-1..=1));
        e.add_word(&c, &w);
    }
    if e.is_zero() {
        e = AlgebraElement::one(n);
    }
    e
}

fn strategy_name(o: PushOrder) -> String {
    match o {
        PushOrder::Rightmost => "rightmost".into(),
        PushOrder::Leftmost => "leftmost".into(),
        PushOrder::Seeded(s) => format!("seeded:{s}"),
    }
}

/// One random element normalized under two push orders.
pub fn confluence_trial(master_seed: u64, index: u64, params: &TrialParams) -> TrialRecord {
    let seed = trial_seed(master_seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let input = random_element(&mut rng, params);
    confluence_on(master_seed, index, &input, [PushOrder::Rightmost, PushOrder::Seeded(rng.gen())])
}

/// Normalizes `input` under both orders and compares.
pub fn confluence_on(master_seed: u64, index: u64, input: &AlgebraElement, orders: [PushOrder; 2]) -> TrialRecord {
    let t = Instant::now();
    let n = input.n();
    let book = RuleBook::builtin(n);
    let mut tags = Vec::new();
    let outs: Vec<Option<AlgebraElement>> = orders
        .iter()
        .map(|&o| match Normalizer::new(&book).with_order(o).to_lambda(input) {
            Ok(e) => Some(e),
            Err(err) => {
                tags.push(format!("error:{err}"));
                None
            }
        })
        .collect();
    let outputs_equal = outs[0].is_some() && outs[0] == outs[1];
    tags.push(if outputs_equal { "confluent" } else { "mismatch" }.to_string());
    if let Some(out) = &outs[0] {
        let shape = out.terms().all(|(w, _)| is_lambda_form(w, n));
        tags.push(if shape { "shape-ok" } else { "shape-violation" }.to_string());
        let cfg = ProbeConfig { trials: 2, local_dim: 2, seed: trial_seed(master_seed, index ^ 0xA5A5) };
        let agrees = distinct(input, out, cfg).map(|v| !v.is_distinct()).unwrap_or(false);
        tags.push(if agrees { "probe-ok" } else { "probe-fail" }.to_string());
    }
    TrialRecord {
        master_seed,
        trial_index: index,
        n,
        input: input.to_string(),
        strategies: [strategy_name(orders[0]), strategy_name(orders[1])],
        outputs_equal,
        wall_micros: t.elapsed().as_micros(),
        tags,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfluenceSummary {
    pub trials: usize,
    pub mismatches: usize,
    pub probe_failures: usize,
    pub shape_violations: usize,
    pub errors: usize,
}

/// `trials` independent trials on the rayon pool, sorted by index.
pub fn confluence_batch(master_seed: u64, trials: u64, params: &TrialParams) -> (Vec<TrialRecord>, ConfluenceSummary) {
    let mut records: Vec<TrialRecord> =
        (0..trials).into_par_iter().map(|k| confluence_trial(master_seed, k, params)).collect();
    records.sort_by_key(|r| r.trial_index);
    let has = |r: &TrialRecord, t: &str| r.tags.iter().any(|x| x.starts_with(t));
    let summary = ConfluenceSummary {
        trials: records.len(),
        mismatches: records.iter().filter(|r| !r.outputs_equal).count(),
        probe_failures: records.iter().filter(|r| has(r, "probe-fail")).count(),
        shape_violations: records.iter().filter(|r| has(r, "shape-violation")).count(),
        errors: records.iter().filter(|r| has(r, "error:")).count(),
    };
    (records, summary)
}

/// Writes one JSON object per record, then the summary.
pub fn write_jsonl<W: Write, S: Serialize>(out: &mut W, records: &[TrialRecord], summary: &S) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        writeln!(out)?;
    }
    serde_json::to_writer(&mut *out, summary)?;
    writeln!(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionReport {
    pub n: usize,
    pub max_prefix_len: usize,
    pub max_tail_len: usize,
    pub words: usize,
    /// Groups of distinct Λ words with one group element; empty when the
    /// scan is consistent with independence at the group level.
    pub collisions: Vec<Vec<String>>,
}

/// Buckets enumerated Λ words by Garside key of their braid image.
pub fn collision_scan(n: usize, max_prefix_len: usize, max_tail_len: usize) -> CollisionReport {
    let words: Vec<MixedWord> = enumerate_lambda(n, max_prefix_len, max_tail_len).collect();
    let keyed: Vec<_> = words.par_iter().map(|w| (normal_form(&embed(w, n)), w)).collect();
    let mut buckets: BTreeMap<_, Vec<&MixedWord>> = BTreeMap::new();
    for (k, w) in keyed {
        buckets.entry(k).or_default().push(w);
    }
    let collisions = buckets
        .into_values()
        .filter(|b| b.len() > 1)
        .map(|b| b.into_iter().map(|w| w.to_string()).collect())
        .collect();
    CollisionReport { n, max_prefix_len, max_tail_len, words: words.len(), collisions }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumerations() {
        let v: Vec<String> = enumerate_lambda(1, 1, 0).map(|w| w.to_string()).collect();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], "1");
        let v: Vec<String> = enumerate_lambda(2, 0, 1).map(|w| w.to_string()).collect();
        assert_eq!(v, ["1", "g1"]);
    }

    #[test]
    fn seeds_are_stable() {
        assert_eq!(trial_seed(0, 0), trial_seed(0, 0));
        assert_ne!(trial_seed(0, 1), trial_seed(1, 0));
    }

    #[test]
    fn single_looping_is_trivially_confluent() {
        let e = AlgebraElement::word(2, MixedWord(vec![Letter::tau(2, 1)]));
        let r = confluence_on(0, 0, &e, [PushOrder::Rightmost, PushOrder::Leftmost]);
        assert!(r.outputs_equal);
    }
}
