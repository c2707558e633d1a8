use std::collections::BTreeSet;

use mixhecke_core::braid::{free_reduce, Letter, MixedWord};
use mixhecke_core::lab::{collision_scan, confluence_batch, enumerate_lambda, TrialParams};
use mixhecke_core::normalizer::is_lambda_form;

fn all_words(alphabet: &[Letter], max_len: usize) -> Vec<MixedWord> {
    let mut out = vec![MixedWord::empty()];
    let mut layer = out.clone();
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |&l| w.concat(&MixedWord(vec![l]))))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn enumeration_fixture_n2() {
    let got: Vec<MixedWord> = enumerate_lambda(2, 2, 1).collect();
    assert_eq!(got.len(), 98);
    assert_eq!(got.iter().collect::<BTreeSet<_>>().len(), 98);

    // Brute force: every reduced word with at most two loopings and at most
    // one braiding that is already in Λ form.
    let mut alphabet = Vec::new();
    for i in 1..=2 {
        for e in [1, -1] {
            alphabet.extend([Letter::big_t(i, e), Letter::tau(i, e)]);
        }
    }
    alphabet.push(Letter::g(1, 1));
    let expected: BTreeSet<MixedWord> = all_words(&alphabet, 3)
        .into_iter()
        .filter(|w| free_reduce(w) == *w && w.looping_count() <= 2 && w.len() - w.looping_count() <= 1)
        .filter(|w| is_lambda_form(w, 2))
        .collect();
    assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), expected);
}

#[test]
fn confluence_batch_is_reproducible() {
    let params = TrialParams { n: 2, ..TrialParams::default() };
    let (a, sa) = confluence_batch(3, 40, &params);
    let (b, _) = confluence_batch(3, 40, &params);
    assert_eq!(sa.trials, 40);
    assert_eq!(sa.mismatches, 0);
    assert_eq!(sa.probe_failures, 0);
    assert!(a.iter().zip(&b).all(|(x, y)| x.timeless() == y.timeless()));
}

#[test]
fn small_scan_has_no_collisions() {
    let r = collision_scan(2, 2, 1);
    assert_eq!(r.words, 98);
    assert!(r.collisions.is_empty(), "{:?}", r.collisions);
}
