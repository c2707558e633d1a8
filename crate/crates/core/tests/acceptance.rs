//! Acceptance suite: one line per criterion, non-zero exit if any gate fails.
//! Runs without the libtest harness so the report is always printed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mixhecke_core::algebra::AlgebraElement;
use mixhecke_core::braid::{defining_relations, embed, ArtinWord, Kind, Letter, MixedWord};
use mixhecke_core::certify::{certify_identity, Scope, SearchConfig};
use mixhecke_core::garside::group_equal;
use mixhecke_core::hecke::{hecke_tail_normalize, Perm};
use mixhecke_core::lab::{collision_scan, confluence_batch, TrialParams};
use mixhecke_core::normalizer::{is_lambda_form, Normalizer};
use mixhecke_core::probe::{distinct, ProbeConfig};
use mixhecke_core::rules::{head_unit_identity, validate_rules, Provenance, RuleBook, RuleTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: String) {
        println!("[{}] criterion {id}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures += 1;
        }
    }

    /// A red line that documents a known erratum; it does not gate the run.
    fn known_red(&mut self, id: &str, detail: String) {
        println!("[FAIL] criterion {id}: {detail} (known erratum, see notes)");
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn criterion_1(r: &mut Report) {
    let t = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=5 {
        for (family, lhs, rhs) in defining_relations(n) {
            checked += 1;
            if !group_equal(&embed(&lhs, n), &embed(&rhs, n)).unwrap_or(false) {
                bad.push(format!("{family} n={n}"));
            }
        }
    }
    let el = t.elapsed();
    let ok = bad.is_empty() && el < Duration::from_secs(60);
    r.line("1", ok, format!("{checked} relation instances for n<=5, {} failures {bad:?} ({}, limit 60s)", bad.len(), secs(el)));
}

fn criterion_2(r: &mut Report) {
    let t = Instant::now();
    let rows = validate_rules(&RuleTable::builtin(), &[1, 2, 3, 4], 100_000).expect("rule table instantiates");
    let el = t.elapsed();
    let sound: Vec<_> = rows.iter().filter(|x| x.provenance != Provenance::Erratum).collect();
    let errata: Vec<_> = rows.iter().filter(|x| x.provenance == Provenance::Erratum).collect();
    let sound_bad: Vec<_> = sound.iter().filter(|x| !x.as_expected()).map(|x| format!("n={} {}", x.n, x.id)).collect();
    let errata_bad: Vec<_> = errata.iter().filter(|x| !x.as_expected()).map(|x| format!("n={} {}", x.n, x.id)).collect();
    let slow = sound.iter().filter(|x| x.check_micros > 1_000_000).count();
    let ok = sound_bad.is_empty() && errata_bad.is_empty() && !errata.is_empty() && slow == 0 && el < Duration::from_secs(600);
    r.line(
        "2",
        ok,
        format!(
            "{} sound instances certified (budget 1e5), {} unexpected {:?}; printed g_i T_i^-1 rule: {} instances, all refuted by search, probe and q=1: {}; re-check >1s: {slow} ({}, limit 600s)",
            sound.len() - sound_bad.len(),
            sound_bad.len(),
            sound_bad.iter().take(5).collect::<Vec<_>>(),
            errata.len(),
            errata_bad.is_empty(),
            secs(el)
        ),
    );
}

fn random_loop_product(rng: &mut ChaCha8Rng) -> (usize, MixedWord) {
    let n = rng.gen_range(1..=4usize);
    let k = rng.gen_range(1..=4usize);
    let w = MixedWord::from_letters((0..k).map(|_| {
        let kind = if rng.gen_bool(0.5) { Kind::LoopT } else { Kind::LoopTau };
        Letter::new(kind, rng.gen_range(1..=n as u16), if rng.gen_bool(0.5) { 1 } else { -1 })
    }));
    (n, w)
}

fn random_mixed_word(rng: &mut ChaCha8Rng) -> (usize, MixedWord) {
    let n = rng.gen_range(2..=4usize);
    let len = rng.gen_range(2..=6usize);
    let mut ls: Vec<Letter> = (0..len)
        .map(|_| {
            let exp = if rng.gen_bool(0.5) { 1 } else { -1 };
            match rng.gen_range(0..3) {
                0 => Letter::g(rng.gen_range(1..n as u16), exp),
                1 => Letter::big_t(rng.gen_range(1..=n as u16), exp),
                _ => Letter::tau(rng.gen_range(1..=n as u16), exp),
            }
        })
        .collect();
    // At least one letter of each sort.
    ls[0] = Letter::g(rng.gen_range(1..n as u16), 1);
    ls[len - 1] = Letter::big_t(rng.gen_range(1..=n as u16), 1);
    (n, MixedWord(ls))
}

fn shape_ok(w: &MixedWord, out: &AlgebraElement) -> bool {
    let k = w.looping_count();
    let (m, big_m) = w.looping_range().unwrap();
    out.terms().all(|(t, _)| {
        let (p, g) = t.split_looping_prefix();
        p.len() == k
            && p.letters().iter().all(|l| l.is_looping() && (m..=big_m).contains(&l.index))
            && p.letters().windows(2).all(|x| x[0].index <= x[1].index)
            && g.letters().iter().all(|l| (m..big_m).contains(&l.index))
    })
}

fn criteria_3_4(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let products: Vec<(usize, MixedWord)> = (0..1000).map(|_| random_loop_product(&mut rng)).collect();
    let mut violations = 0;
    let mut errors = 0;
    let mut mismatches = 0;
    let probe = |seed| ProbeConfig { trials: 5, local_dim: 2, seed };
    let t = Instant::now();
    for (idx, (n, w)) in products.iter().enumerate() {
        let book = RuleBook::builtin(*n);
        let nz = Normalizer::new(&book);
        match nz.normalize_loop_product(w) {
            Ok(out) => {
                if !shape_ok(w, &out) {
                    violations += 1;
                }
            }
            Err(_) => errors += 1,
        }
        let input = AlgebraElement::word(*n, w.clone());
        match nz.to_lambda(&input) {
            Ok(lam) => {
                let v = distinct(&input, &lam, probe(idx as u64)).expect("probe");
                if v.is_distinct() || v.transcript().len() < 5 {
                    mismatches += 1;
                }
            }
            Err(_) => mismatches += 1,
        }
    }
    r.line(
        "3",
        violations == 0 && errors == 0,
        format!("1000 looping products (n<=4, k<=4): {errors} guard trips, {violations} monomials violating (i)-(iv)"),
    );
    let mut mixed_bad = 0;
    for idx in 0..500 {
        let (n, w) = random_mixed_word(&mut rng);
        let book = RuleBook::builtin(n);
        let input = AlgebraElement::word(n, w);
        let ok = match Normalizer::new(&book).to_lambda(&input) {
            Ok(lam) => {
                let v = distinct(&input, &lam, probe(10_000 + idx)).expect("probe");
                !v.is_distinct() && v.transcript().len() >= 5 && lam.terms().all(|(t, _)| is_lambda_form(t, n))
            }
            Err(_) => false,
        };
        if !ok {
            mixed_bad += 1;
        }
    }
    r.line(
        "4",
        mismatches == 0 && mixed_bad == 0,
        format!(
            "probe round-trip at 5 (prime, q) points: {mismatches}/1000 looping products and {mixed_bad}/500 mixed words mismatched ({})",
            secs(t.elapsed())
        ),
    );
}

fn criterion_5(r: &mut Report) {
    let mut corrected_bad = Vec::new();
    let mut printed_fail = Vec::new();
    let mut total = 0;
    for big_m in 2..=4u16 {
        for m in 1..big_m {
            total += 1;
            let n = big_m as usize;
            let book = RuleBook::builtin(n);
            let cfg = SearchConfig { budget: 1000, scope: Scope::all(), ..SearchConfig::default() };
            let (lhs, rhs) = head_unit_identity(n, m, big_m, 1);
            match certify_identity(&lhs, &rhs, &book, &cfg) {
                Ok(c) if c.check(&book, Scope::all()).is_ok() => {}
                _ => corrected_bad.push(format!("m={m} M={big_m}")),
            }
            let (lhs, rhs) = head_unit_identity(n, m, big_m, -1);
            if certify_identity(&lhs, &rhs, &book, &cfg).is_err() {
                printed_fail.push(format!("m={m} M={big_m}"));
            }
        }
    }
    r.line(
        "5",
        corrected_bad.is_empty(),
        format!(
            "1 - A G = q^-1 G^2 certified for {}/{total} pairs 1<=m<M<=4 with G = g_m..g_(M-2) g_(M-1) g_(M-2)^-1..g_m^-1",
            total - corrected_bad.len()
        ),
    );
    if printed_fail.is_empty() {
        r.line("5 (printed G)", true, format!("printed G certified for all {total} pairs"));
    } else {
        r.known_red(
            "5 (printed G)",
            format!("with the middle letter g_(M-1)^-1 as printed, the identity is refuted for {printed_fail:?}"),
        );
    }
}

fn random_artin(rng: &mut ChaCha8Rng, strands: usize, len: usize) -> Vec<(u16, i8)> {
    (0..len)
        .map(|_| (rng.gen_range(1..strands as u16), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect()
}

fn criterion_6(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut errors = 0;
    for _ in 0..10_000 {
        let strands = rng.gen_range(3..=6usize);
        let len = rng.gen_range(0..12);
        let w = random_artin(&mut rng, strands, len);
        let pos = rng.gen_range(0..=w.len());
        let i = rng.gen_range(1..strands as u16);
        let e: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        // Insert a relator: a cancelling pair, a braid relator or a far
        // commutator.
        let relator: Vec<(u16, i8)> = match rng.gen_range(0..3) {
            0 => vec![(i, e), (i, -e)],
            1 if (i as usize) + 1 < strands => {
                vec![(i, 1), (i + 1, 1), (i, 1), (i + 1, -1), (i, -1), (i + 1, -1)]
            }
            _ => match (1..strands as u16).find(|&j| j.abs_diff(i) > 1) {
                Some(j) => vec![(i, e), (j, 1), (i, -e), (j, -1)],
                None => vec![(i, -e), (i, e)],
            },
        };
        let mut v = w.clone();
        v.splice(pos..pos, relator);
        if group_equal(&ArtinWord::new(strands, w), &ArtinWord::new(strands, v)) != Ok(true) {
            errors += 1;
        }
    }
    for _ in 0..10_000 {
        let strands = rng.gen_range(3..=6usize);
        let len = rng.gen_range(0..12);
        let w = random_artin(&mut rng, strands, len);
        let mut v = w.clone();
        v.push((rng.gen_range(1..strands as u16), if rng.gen_bool(0.5) { 1 } else { -1 }));
        if group_equal(&ArtinWord::new(strands, w), &ArtinWord::new(strands, v)) != Ok(false) {
            errors += 1;
        }
    }
    let el = t.elapsed();
    r.line(
        "6",
        errors == 0 && el < Duration::from_secs(120),
        format!("1e4 relator insertions + 1e4 generator appends on <=6 strands: {errors} errors ({}, limit 120s)", secs(el)),
    );
}

fn criterion_7(r: &mut Report) {
    let n = 4;
    let mut words = vec![MixedWord::empty()];
    let mut layer = vec![MixedWord::empty()];
    for _ in 0..6 {
        let mut next = Vec::new();
        for w in &layer {
            for i in 1..n as u16 {
                let mut ls = w.letters().to_vec();
                ls.push(Letter::g(i, 1));
                next.push(MixedWord(ls));
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    let mut tails = BTreeSet::new();
    let mut invalid = 0;
    for w in &words {
        for (t, _) in hecke_tail_normalize(n, w).terms() {
            let p = Perm::of_word(n, t);
            if t.len() != p.length() || p.canonical_word() != *t {
                invalid += 1;
            }
            tails.insert(t.clone());
        }
    }
    r.line(
        "7",
        tails.len() == 24 && invalid == 0,
        format!("{} positive words of length <=6 at n=4 reach {} distinct tails (expected 24), {invalid} invalid", words.len(), tails.len()),
    );
}

fn criterion_8(r: &mut Report) {
    let t = Instant::now();
    let params = TrialParams { n: 3, ..TrialParams::default() };
    let (a, sa) = confluence_batch(8, 500, &params);
    let (b, sb) = confluence_batch(8, 500, &params);
    let same = sa == sb && a.iter().zip(&b).all(|(x, y)| x.timeless() == y.timeless());
    r.line(
        "8 (confluence)",
        same && sa.trials == 500,
        format!(
            "500 trials at n=3: {} mismatches, {} probe failures, {} shape violations; reproducible: {same} ({})",
            sa.mismatches,
            sa.probe_failures,
            sa.shape_violations,
            secs(t.elapsed())
        ),
    );
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut repro = true;
    for n in 1..=3 {
        let x = collision_scan(n, 4, 3);
        repro &= x == collision_scan(n, 4, 3);
        lines.push(format!("n={n}: {} words, {} collisions {:?}", x.words, x.collisions.len(), x.collisions.iter().take(3).collect::<Vec<_>>()));
    }
    r.line(
        "8 (collisions)",
        repro,
        format!("prefix<=4, tail<=3: {}; reproducible: {repro} ({})", lines.join("; "), secs(t.elapsed())),
    );
}

fn main() -> ExitCode {
    let mut r = Report { failures: 0 };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criteria_3_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    println!("acceptance: {} gating failures", r.failures);
    if r.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
