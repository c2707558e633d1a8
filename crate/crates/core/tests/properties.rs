use mixhecke_core::algebra::AlgebraElement;
use mixhecke_core::braid::{embed, free_reduce, ArtinWord, Letter, MixedWord};
use mixhecke_core::certify::{certify_identity, Certificate, Scope, SearchConfig};
use mixhecke_core::garside::{group_equal, normal_form};
use mixhecke_core::laurent::LaurentPoly;
use mixhecke_core::normalizer::{push_braidings_right, Normalizer, PushOrder};
use mixhecke_core::parse::{parse_element, parse_poly};
use mixhecke_core::rules::RuleBook;
use proptest::prelude::*;

const P: u64 = 1_000_000_007;

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, -4i64..=4), 0..4).prop_map(|ts| LaurentPoly::from_terms(ts))
}

fn sign() -> impl Strategy<Value = i8> {
    prop_oneof![Just(1i8), Just(-1i8)]
}

fn letter(n: u16) -> impl Strategy<Value = Letter> {
    let g = (1..n.max(2), sign()).prop_map(|(i, e)| Letter::g(i, e));
    let t = (1..=n, sign()).prop_map(|(i, e)| Letter::big_t(i, e));
    let tau = (1..=n, sign()).prop_map(|(i, e)| Letter::tau(i, e));
    if n >= 2 {
        prop_oneof![g, t, tau].boxed()
    } else {
        prop_oneof![t, tau].boxed()
    }
}

fn word(n: u16, max: usize) -> impl Strategy<Value = MixedWord> {
    prop::collection::vec(letter(n), 0..=max).prop_map(MixedWord)
}

fn looping_word(n: u16, max: usize) -> impl Strategy<Value = MixedWord> {
    let l = prop_oneof![
        (1..=n, sign()).prop_map(|(i, e)| Letter::big_t(i, e)),
        (1..=n, sign()).prop_map(|(i, e)| Letter::tau(i, e)),
    ];
    prop::collection::vec(l, 1..=max).prop_map(MixedWord)
}

fn element(n: u16) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((poly(), word(n, 4)), 0..4)
        .prop_map(move |ts| AlgebraElement::from_terms(n as usize, ts))
}

fn artin(strands: usize, max: usize) -> impl Strategy<Value = ArtinWord> {
    prop::collection::vec((1..strands as u16, sign()), 0..=max).prop_map(move |ls| ArtinWord::new(strands, ls))
}

proptest! {
    #[test]
    fn laurent_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), q in 2u64..P - 1) {
        let (x, y) = (a.eval_mod(q, P).unwrap(), b.eval_mod(q, P).unwrap());
        prop_assert_eq!((&a + &b).eval_mod(q, P).unwrap(), (x + y) % P);
        prop_assert_eq!((&a * &b).eval_mod(q, P).unwrap(), (x as u128 * y as u128 % P as u128) as u64);
    }

    #[test]
    fn poly_render_round_trip(a in poly()) {
        prop_assert_eq!(parse_poly(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn element_render_round_trip(e in element(3)) {
        prop_assert_eq!(parse_element(&e.to_string(), 3).unwrap(), e);
    }

    #[test]
    fn algebra_multiplication_is_associative(x in element(3), y in element(3), z in element(3)) {
        let l = x.mul(&y).unwrap().mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn garside_normal_form_is_idempotent(w in artin(5, 12)) {
        let nf = normal_form(&w);
        prop_assert!(nf.is_left_weighted());
        prop_assert_eq!(normal_form(&nf.to_word()), nf);
    }

    #[test]
    fn garside_detects_inverses(w in artin(4, 10)) {
        prop_assert_eq!(group_equal(&w.concat(&w.inverse()), &ArtinWord::identity(4)), Ok(true));
    }

    #[test]
    fn embedding_is_a_homomorphism(u in word(3, 5), v in word(3, 5)) {
        let whole = embed(&u.concat(&v), 3);
        let parts = embed(&u, 3).concat(&embed(&v, 3));
        prop_assert_eq!(normal_form(&whole), normal_form(&parts));
        prop_assert_eq!(normal_form(&embed(&free_reduce(&u), 3)), normal_form(&embed(&u, 3)));
    }

    #[test]
    fn big_passage_keeps_loopings_in_range(pi in looping_word(4, 3), i_off in 0u16..4, e in sign()) {
        prop_assume!(free_reduce(&pi) == pi);
        let (m, big_m) = pi.looping_range().unwrap();
        prop_assume!(m < big_m);
        let i = m + i_off % (big_m - m);
        let book = RuleBook::builtin(4);
        let mut ls = vec![Letter::g(i, e)];
        ls.extend(pi.letters());
        let out = push_braidings_right(&book, &AlgebraElement::word(4, MixedWord(ls))).unwrap();
        for (t, _) in out.terms() {
            let (prefix, tail) = t.split_looping_prefix();
            prop_assert_eq!(prefix.len(), pi.len());
            prop_assert!(prefix.letters().iter().all(|l| (m..=big_m).contains(&l.index)));
            // Inverse tails may come back rewritten through the quadratic relation.
            prop_assert!(tail.len() <= 1 && tail.letters().iter().all(|l| l.is_braiding() && l.index == i), "{}", t);
        }
    }

    #[test]
    fn normalization_is_deterministic_and_order_free(w in word(3, 5), seed in any::<u64>()) {
        let book = RuleBook::builtin(3);
        let e = AlgebraElement::word(3, w);
        let a = Normalizer::new(&book).to_lambda(&e).unwrap();
        prop_assert_eq!(&Normalizer::new(&book).to_lambda(&e).unwrap(), &a);
        prop_assert_eq!(&Normalizer::new(&book).with_order(PushOrder::Seeded(seed)).to_lambda(&e).unwrap(), &a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificates_round_trip(k in 0usize..228) {
        let book = RuleBook::builtin(4);
        let r = &book.instances()[k % book.instances().len()];
        prop_assume!(r.provenance != mixhecke_core::rules::Provenance::Erratum);
        let cfg = SearchConfig { budget: 500, scope: Scope::below(r.rule), ..SearchConfig::default() };
        let cert = certify_identity(&r.lhs_element(), &r.rhs, &book, &cfg).unwrap();
        let text = cert.to_text();
        let back = Certificate::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert!(back.check(&book, Scope::below(r.rule)).is_ok());
    }
}
