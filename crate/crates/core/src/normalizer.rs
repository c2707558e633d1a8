//! Rewriting to the spanning set `Λ_n`: braiding letters are pushed to the
//! right, the looping prefix is sorted by induction on `(k, d)` (looping count,
//! index spread), and the braiding tail is canonicalized in the Hecke algebra.
//!
//! Words are not freely reduced while the prefix is sorted, so every monomial
//! of `normalize_loop_product` keeps exactly the input's looping count.
//! `to_lambda` reduces the blocks at the end.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::braid::{free_reduce, Kind, Letter, MixedWord};
use crate::hecke::is_canonical_tail;
use crate::laurent::LaurentPoly;
use crate::rules::{head_rule, passage_traced, RuleBook, RuleError};

pub use crate::hecke::hecke_tail_normalize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("recursion guard tripped at depth {depth} on {word}")]
    BudgetExceeded { depth: usize, word: String },
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// `(k, d)`: looping count and index spread, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPair {
    pub k: usize,
    pub d: usize,
}

impl IndexPair {
    pub fn of(w: &MixedWord) -> Option<IndexPair> {
        let (m, big_m) = w.looping_range()?;
        Some(IndexPair { k: w.looping_count(), d: (big_m - m) as usize })
    }
}

/// Which braiding-looping pair is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PushOrder {
    #[default]
    Rightmost,
    Leftmost,
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub input: MixedWord,
    pub output: AlgebraElement,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.rule, self.input, self.output)
    }
}

fn word(ls: &[Letter]) -> MixedWord {
    MixedWord(ls.to_vec())
}

/// `c * u e v` added to `out` without free reduction.
fn add_sandwich(out: &mut AlgebraElement, c: &LaurentPoly, u: &[Letter], e: &AlgebraElement, v: &[Letter]) {
    for (w, d) in e.terms() {
        let mut ls = u.to_vec();
        ls.extend_from_slice(w.letters());
        ls.extend_from_slice(v);
        out.add_term(MixedWord(ls), c * d);
    }
}

fn monomial(n: usize, c: LaurentPoly, w: MixedWord) -> AlgebraElement {
    let mut e = AlgebraElement::zero(n);
    e.add_term(w, c);
    e
}

/// The pipeline with its rule book, strategy and memo table.
pub struct Normalizer<'a> {
    book: &'a RuleBook,
    order: PushOrder,
    memo: RwLock<HashMap<MixedWord, AlgebraElement>>,
    trace: Option<RwLock<Vec<TraceStep>>>,
    /// Overrides the default guard `10 k (d + 1)`.
    pub depth_limit: Option<usize>,
}

impl<'a> Normalizer<'a> {
    pub fn new(book: &'a RuleBook) -> Self {
        Normalizer { book, order: PushOrder::default(), memo: RwLock::new(HashMap::new()), trace: None, depth_limit: None }
    }

    pub fn with_order(mut self, order: PushOrder) -> Self {
        self.order = order;
        self
    }

    /// Records every rewrite. Memoization is off while tracing so the log is
    /// complete.
    pub fn traced(mut self) -> Self {
        self.trace = Some(RwLock::new(Vec::new()));
        self
    }

    pub fn take_trace(&self) -> Vec<TraceStep> {
        self.trace.as_ref().map(|t| std::mem::take(&mut *t.write().unwrap())).unwrap_or_default()
    }

    fn n(&self) -> usize {
        self.book.n()
    }

    fn log(&self, rule: &str, input: &MixedWord, output: &AlgebraElement) {
        if let Some(t) = &self.trace {
            t.write().unwrap().push(TraceStep { rule: rule.to_string(), input: input.clone(), output: output.clone() });
        }
    }

    /// Rewrites until every monomial is (loopings)(braidings).
    pub fn push_braidings_right(&self, e: &AlgebraElement) -> Result<AlgebraElement, NormalizeError> {
        let n = self.n();
        let mut rng = match self.order {
            PushOrder::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
            _ => None,
        };
        let mut pending = e.clone();
        let mut done = AlgebraElement::zero(n);
        while let Some((w, c)) = pending.pop_first() {
            let ls = w.letters();
            let spots: Vec<usize> = (0..ls.len().saturating_sub(1))
                .filter(|&p| ls[p].is_braiding() && ls[p + 1].is_looping())
                .collect();
            if spots.is_empty() {
                done.add_term(w, c);
                continue;
            }
            let p = match (self.order, rng.as_mut()) {
                (PushOrder::Leftmost, _) => spots[0],
                (PushOrder::Seeded(_), Some(r)) => spots[r.gen_range(0..spots.len())],
                _ => *spots.last().unwrap(),
            };
            let steps = passage_traced(self.book, ls[p], ls[p + 1])?;
            for (rule, rhs) in steps {
                self.log(&rule.name, &word(&ls[p..p + 2]), &rhs);
                add_sandwich(&mut pending, &c, &ls[..p], &rhs, &ls[p + 2..]);
            }
        }
        Ok(done)
    }

    /// Appends `tail` to every monomial and canonicalizes the braiding part.
    fn times_tail(&self, e: &AlgebraElement, tail: &[Letter], out: &mut AlgebraElement, c: &LaurentPoly) {
        let n = self.n();
        for (w, d) in e.terms() {
            let (pre, t) = w.split_looping_prefix();
            let full = t.concat(&word(tail));
            let h = if full.is_empty() { AlgebraElement::one(n) } else { hecke_tail_normalize(n, &full) };
            add_sandwich(out, &(c * d), pre.letters(), &h, &[]);
        }
    }

    /// Looping-only input, output in normal-form shape: same looping count,
    /// non-decreasing indices inside the input's range, braiding tail inside
    /// `[m, M-1]`.
    pub fn normalize_loop_product(&self, w: &MixedWord) -> Result<AlgebraElement, NormalizeError> {
        assert!(w.is_looping_only(), "normalize_loop_product takes looping-only words");
        let limit = self.depth_limit.unwrap_or_else(|| {
            let p = IndexPair::of(w).unwrap_or(IndexPair { k: 0, d: 0 });
            10 * p.k.max(1) * (p.d + 1)
        });
        self.nlp(w.letters(), 0, limit)
    }

    fn guard(&self, ls: &[Letter], depth: usize, limit: usize) -> Result<(), NormalizeError> {
        if depth > limit {
            return Err(NormalizeError::BudgetExceeded { depth, word: word(ls).to_string() });
        }
        Ok(())
    }

    fn nlp(&self, ls: &[Letter], depth: usize, limit: usize) -> Result<AlgebraElement, NormalizeError> {
        self.guard(ls, depth, limit)?;
        let n = self.n();
        let key = word(ls);
        if self.trace.is_none() {
            if let Some(hit) = self.memo.read().unwrap().get(&key) {
                return Ok(hit.clone());
            }
        }
        let out = self.nlp_uncached(ls, depth, limit)?;
        if self.trace.is_none() {
            self.memo.write().unwrap().insert(key, out.clone());
        }
        debug_assert_eq!(out.n(), n);
        Ok(out)
    }

    fn nlp_uncached(&self, ls: &[Letter], depth: usize, limit: usize) -> Result<AlgebraElement, NormalizeError> {
        let n = self.n();
        let one = LaurentPoly::one();
        let sorted = ls.windows(2).all(|p| p[0].index <= p[1].index);
        if sorted {
            return Ok(monomial(n, one, word(ls)));
        }
        let m = ls.iter().map(|l| l.index).min().unwrap();
        let big_m = ls.iter().map(|l| l.index).max().unwrap();
        let x = ls[0];
        let mut out = AlgebraElement::zero(n);
        if x.index == m {
            // A leading minimal index stays put.
            let r = self.nlp(&ls[1..], depth + 1, limit)?;
            add_sandwich(&mut out, &one, &[x], &r, &[]);
            return Ok(out);
        }
        let r = self.nlp(&ls[1..], depth + 1, limit)?;
        for (t, c) in r.terms() {
            let (u, g) = t.split_looping_prefix();
            let u = u.letters();
            if x.index < big_m {
                self.type_one(x, u, g.letters(), c, big_m, depth, limit, &mut out)?;
            } else {
                self.type_two(x, u, g.letters(), c, m, depth, limit, &mut out)?;
            }
        }
        Ok(out)
    }

    /// Leading index strictly inside `(m, M)`: sort it into the part of the
    /// rest below `M`, then move the new tail across the index-`M` block.
    #[allow(clippy::too_many_arguments)]
    fn type_one(
        &self,
        x: Letter,
        u: &[Letter],
        g: &[Letter],
        c: &LaurentPoly,
        big_m: u16,
        depth: usize,
        limit: usize,
        out: &mut AlgebraElement,
    ) -> Result<(), NormalizeError> {
        let cut = u.iter().position(|l| l.index == big_m).unwrap_or(u.len());
        let mut head = vec![x];
        head.extend_from_slice(&u[..cut]);
        let block = &u[cut..];
        let r = self.nlp(&head, depth + 1, limit)?;
        if block.is_empty() {
            self.times_tail(&r, g, out, c);
            return Ok(());
        }
        for (t, d) in r.terms() {
            let (v, h) = t.split_looping_prefix();
            let moved = self.push_through(h.letters(), block)?;
            for (bw, bc) in moved.terms() {
                let mut ls = v.letters().to_vec();
                ls.extend_from_slice(bw.letters());
                self.times_tail(&monomial(self.n(), LaurentPoly::one(), MixedWord(ls)), g, out, &(c * &(d * bc)));
            }
        }
        Ok(())
    }

    /// `h * block` with braiding `h` pushed to the right.
    fn push_through(&self, h: &[Letter], block: &[Letter]) -> Result<AlgebraElement, NormalizeError> {
        let mut ls = h.to_vec();
        ls.extend_from_slice(block);
        self.push_braidings_right(&monomial(self.n(), LaurentPoly::one(), MixedWord(ls)))
    }

    /// Leading index `M`: swap it with the rest's leading index-`m` letter.
    #[allow(clippy::too_many_arguments)]
    fn type_two(
        &self,
        x: Letter,
        u: &[Letter],
        g: &[Letter],
        c: &LaurentPoly,
        m: u16,
        depth: usize,
        limit: usize,
        out: &mut AlgebraElement,
    ) -> Result<(), NormalizeError> {
        let n = self.n();
        let y = u[0];
        if y.index > m {
            let mut ls = vec![x];
            ls.extend_from_slice(u);
            let r = self.nlp(&ls, depth + 1, limit)?;
            self.times_tail(&r, g, out, c);
            return Ok(());
        }
        let pair = word(&[x, y]);
        let rule = self.book.lookup(&pair).ok_or_else(|| RuleError::MissingRule(pair.to_string()))?;
        self.log(&rule.name, &pair, &rule.rhs);
        let mut expanded = AlgebraElement::zero(n);
        add_sandwich(&mut expanded, &LaurentPoly::one(), &[], &rule.rhs, &u[1..]);
        let pushed = self.push_braidings_right(&expanded)?;
        for (t, d) in pushed.terms() {
            let (loops, h) = t.split_looping_prefix();
            let mut tail = h.letters().to_vec();
            tail.extend_from_slice(g);
            let cd = c * d;
            self.after_swap(loops.letters(), &tail, &cd, m, depth, limit, out)?;
        }
        Ok(())
    }

    /// Dispatch for a sorted-to-be prefix after one swap: either it already
    /// starts at index `m`, or it is a head `t_M^e T_M^-e ...`.
    #[allow(clippy::too_many_arguments)]
    fn after_swap(
        &self,
        loops: &[Letter],
        tail: &[Letter],
        c: &LaurentPoly,
        m: u16,
        depth: usize,
        limit: usize,
        out: &mut AlgebraElement,
    ) -> Result<(), NormalizeError> {
        let n = self.n();
        if loops[0].index == m {
            let r = self.nlp(&loops[1..], depth + 1, limit)?;
            let mut lead = AlgebraElement::zero(n);
            add_sandwich(&mut lead, &LaurentPoly::one(), &[loops[0]], &r, &[]);
            self.times_tail(&lead, tail, out, c);
            return Ok(());
        }
        let (a, b) = (loops[0], loops[1]);
        let is_head = a.kind == Kind::LoopTau && b.kind == Kind::LoopT && a.index == b.index && a.exp == -b.exp;
        if !is_head {
            return Err(RuleError::PatternMismatch(format!("unexpected prefix {} after a swap", word(loops))).into());
        }
        self.head(a, b, &loops[2..], tail, c, m, depth, limit, out)
    }

    /// `t_M^e T_M^-e z` with `z` sorted first.
    #[allow(clippy::too_many_arguments)]
    fn head(
        &self,
        a: Letter,
        b: Letter,
        rest: &[Letter],
        tail: &[Letter],
        c: &LaurentPoly,
        m: u16,
        depth: usize,
        limit: usize,
        out: &mut AlgebraElement,
    ) -> Result<(), NormalizeError> {
        let n = self.n();
        if rest.is_empty() {
            self.times_tail(&monomial(n, LaurentPoly::one(), word(&[a, b])), tail, out, c);
            return Ok(());
        }
        let r = self.nlp(rest, depth + 1, limit)?;
        for (t, d) in r.terms() {
            let (z, k) = t.split_looping_prefix();
            let z = z.letters();
            let mut k_tail = k.letters().to_vec();
            k_tail.extend_from_slice(tail);
            let cd = c * d;
            if z[0].index > m {
                let mut ls = vec![a, b];
                ls.extend_from_slice(z);
                let r2 = self.nlp(&ls, depth + 1, limit)?;
                self.times_tail(&r2, &k_tail, out, &cd);
                continue;
            }
            let hw = word(&[a, b, z[0]]);
            let rule = head_rule(self.book, &hw).ok_or_else(|| RuleError::MissingRule(hw.to_string()))?;
            self.log(&rule.name, &hw, &rule.rhs);
            let mut expanded = AlgebraElement::zero(n);
            add_sandwich(&mut expanded, &LaurentPoly::one(), &[], &rule.rhs, &z[1..]);
            let pushed = self.push_braidings_right(&expanded)?;
            for (t2, d2) in pushed.terms() {
                let (loops, h) = t2.split_looping_prefix();
                let loops = loops.letters();
                if loops[0].index != m {
                    return Err(RuleError::PatternMismatch(format!("head rule left {} unresolved", word(loops))).into());
                }
                let mut tail2 = h.letters().to_vec();
                tail2.extend_from_slice(&k_tail);
                let r3 = self.nlp(&loops[1..], depth + 1, limit)?;
                let mut lead = AlgebraElement::zero(n);
                add_sandwich(&mut lead, &LaurentPoly::one(), &[loops[0]], &r3, &[]);
                self.times_tail(&lead, &tail2, out, &(&cd * d2));
            }
        }
        Ok(())
    }

    /// Full pipeline: every output monomial satisfies `is_lambda_form`.
    pub fn to_lambda(&self, e: &AlgebraElement) -> Result<AlgebraElement, NormalizeError> {
        let n = self.n();
        let mut cur = e.clone();
        for _ in 0..8 {
            if cur.terms().all(|(w, _)| is_lambda_form(w, n)) {
                return Ok(cur);
            }
            let pushed = self.push_braidings_right(&cur)?;
            let mut next = AlgebraElement::zero(n);
            for (w, c) in pushed.terms() {
                let (loops, tail) = w.split_looping_prefix();
                let sorted = if loops.is_empty() {
                    AlgebraElement::one(n)
                } else {
                    self.normalize_loop_product(&loops)?
                };
                let mut merged = AlgebraElement::zero(n);
                self.times_tail(&sorted, tail.letters(), &mut merged, c);
                for (mw, mc) in merged.terms() {
                    let (p, t) = mw.split_looping_prefix();
                    next.add_term(free_reduce(&p).concat(&t), mc.clone());
                }
            }
            cur = next;
        }
        if cur.terms().all(|(w, _)| is_lambda_form(w, n)) {
            Ok(cur)
        } else {
            Err(NormalizeError::BudgetExceeded { depth: 8, word: cur.to_string() })
        }
    }
}

/// `push_braidings_right` with the default strategy.
pub fn push_braidings_right(book: &RuleBook, e: &AlgebraElement) -> Result<AlgebraElement, RuleError> {
    Normalizer::new(book).push_braidings_right(e).map_err(|err| match err {
        NormalizeError::Rule(r) => r,
        other => RuleError::PatternMismatch(other.to_string()),
    })
}

pub fn normalize_loop_product(book: &RuleBook, w: &MixedWord) -> Result<AlgebraElement, NormalizeError> {
    Normalizer::new(book).normalize_loop_product(w)
}

pub fn to_lambda(book: &RuleBook, e: &AlgebraElement) -> Result<AlgebraElement, NormalizeError> {
    Normalizer::new(book).to_lambda(e)
}

/// Non-decreasing looping prefix with freely reduced blocks, then a canonical
/// Hecke tail.
pub fn is_lambda_form(w: &MixedWord, n: usize) -> bool {
    let (loops, tail) = w.split_looping_prefix();
    let ls = loops.letters();
    let sorted = ls.windows(2).all(|p| p[0].index <= p[1].index && p[0] != p[1].inverse());
    sorted && (tail.is_empty() || is_canonical_tail(n, &tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, parse_word};

    #[test]
    fn push_examples() {
        let book = RuleBook::builtin(2);
        let e = push_braidings_right(&book, &parse_element("g1 T1", 2).unwrap()).unwrap();
        assert_eq!(e.to_string(), "q^-1 * T2 g1 + (-1 + q^-1) * T2");
        let e = push_braidings_right(&book, &parse_element("T1 g1", 2).unwrap()).unwrap();
        assert_eq!(e.to_string(), "T1 g1");
    }

    #[test]
    fn loop_products() {
        let book = RuleBook::builtin(2);
        let nz = Normalizer::new(&book);
        assert_eq!(nz.normalize_loop_product(&parse_word("T1", 2).unwrap()).unwrap().to_string(), "T1");
        assert_eq!(nz.normalize_loop_product(&parse_word("T2 T1", 2).unwrap()).unwrap().to_string(), "T1 T2");
        let e = nz.normalize_loop_product(&parse_word("t2^-1 T2 T1", 2).unwrap()).unwrap();
        assert!(e.terms().all(|(w, _)| w.letters()[0].index == 1 && w.looping_count() == 3));
    }

    #[test]
    fn lambda_shape() {
        let n = 2;
        assert!(is_lambda_form(&parse_word("T1 t1 T2 g1", n).unwrap(), n));
        assert!(!is_lambda_form(&parse_word("T2 T1", n).unwrap(), n));
        assert!(!is_lambda_form(&parse_word("g1 T1", n).unwrap(), n));
        let book = RuleBook::builtin(n);
        assert_eq!(to_lambda(&book, &AlgebraElement::one(n)).unwrap().to_string(), "1");
    }
}
