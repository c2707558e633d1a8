//! Proof certificates for identities in `H_{2,n}(q)`.
//!
//! A certificate for `lhs = rhs` is a script of moves acting on the running
//! difference `D = lhs - rhs`, stored as a combination of group elements (each
//! word is keyed by the Garside normal form of its braid image, so group
//! moves are free). Every other move adds a multiple of a relation that holds
//! in the algebra, or right-multiplies by an invertible word. The certificate
//! is accepted when `D` reaches zero.
//!
//! Script lines:
//!
//! ```text
//! N 2
//! LHS g1 T1
//! RHS q^-1 * T2 g1 + (-1 + q^-1) * T2
//! GROUP g1 T1 -> T2 g1^-1
//! QUAD INV | 1 | T2 | 1 | 1
//! RULE passage.up | i=1 L=T | 1 | 1 | 1
//! RMUL g1^-1
//! ```
//! `QUAD SQ | c | u | i | v` rewrites `c u g_i g_i v` to `c u ((q-1) g_i + q) v`,
//! `QUAD INV` rewrites `c u g_i^-1 v` to `c u (q^-1 g_i + A) v`, and `RULE`
//! rewrites `c u lhs v` to `c u rhs v` for an earlier rule instance.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::cmp::Reverse;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Mutex;

use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::braid::{embed, Letter, MixedWord};
use crate::garside::{group_equal, normal_form, GarsideNF};
use crate::hecke::Perm;
use crate::laurent::LaurentPoly;
use crate::parse::{parse_element, parse_poly, parse_word};
use crate::probe::{distinct, ProbeConfig};
use crate::rules::{Bindings, Provenance, RuleBook};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadKind {
    Square,
    Inverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Group { from: MixedWord, to: MixedWord },
    Quad { kind: QuadKind, coeff: LaurentPoly, left: MixedWord, index: u16, right: MixedWord },
    Rule { name: String, bindings: Bindings, coeff: LaurentPoly, left: MixedWord, right: MixedWord },
    RightMul { word: MixedWord },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub lhs: AlgebraElement,
    pub rhs: AlgebraElement,
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("move {0}: words {1} and {2} are not equal in the group")]
    BadGroupMove(usize, String, String),
    #[error("move {0}: unknown rule {1}")]
    UnknownRule(usize, String),
    #[error("move {0}: rule {1} may not be cited here")]
    RuleNotAllowed(usize, String),
    #[error("move {0}: {1}")]
    Malformed(usize, String),
    #[error("replay leaves {0} nonzero terms")]
    Residue(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertParseError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
}

/// Why a search gave up. `NotFound` never implies the identity is false,
/// unless `probe_distinct` is set.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no certificate found after {explored} states{}", if *probe_distinct { " (probe: distinct)" } else { "" })]
pub struct NotFound {
    pub explored: usize,
    pub probe_distinct: bool,
}

/// Caches Garside keys of words at a fixed `n`.
#[derive(Default)]
pub struct Keyer {
    n: usize,
    cache: Mutex<HashMap<MixedWord, GarsideNF>>,
}

impl Keyer {
    pub fn new(n: usize) -> Self {
        Keyer { n, cache: Mutex::new(HashMap::new()) }
    }

    pub fn key(&self, w: &MixedWord) -> GarsideNF {
        if let Some(k) = self.cache.lock().unwrap().get(w) {
            return k.clone();
        }
        let k = normal_form(&embed(w, self.n));
        self.cache.lock().unwrap().insert(w.clone(), k.clone());
        k
    }
}

/// A combination of group elements, each with one representative word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Keyed {
    terms: BTreeMap<GarsideNF, (MixedWord, LaurentPoly)>,
}

impl Keyed {
    pub fn new() -> Self {
        Keyed { terms: BTreeMap::new() }
    }

    pub fn from_element(e: &AlgebraElement, keyer: &Keyer) -> Self {
        let mut k = Keyed::new();
        for (w, c) in e.terms() {
            k.add(keyer, w, c);
        }
        k
    }

    pub fn add(&mut self, keyer: &Keyer, w: &MixedWord, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let key = keyer.key(w);
        match self.terms.get_mut(&key) {
            Some(slot) => {
                slot.1 += c;
                if slot.1.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, (w.clone(), c.clone()));
            }
        }
    }

    /// `self += c * u e v`
    pub fn add_sandwich(&mut self, keyer: &Keyer, c: &LaurentPoly, u: &MixedWord, e: &AlgebraElement, v: &MixedWord) {
        for (w, d) in e.terms() {
            self.add(keyer, &u.concat(w).concat(v), &(c * d));
        }
    }

    pub fn right_mul(&self, keyer: &Keyer, x: &MixedWord) -> Keyed {
        let mut out = Keyed::new();
        for (w, c) in self.terms.values() {
            out.add(keyer, &w.mul(x), c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MixedWord, &LaurentPoly)> {
        self.terms.values().map(|(w, c)| (w, c))
    }

    fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for (k, (_, c)) in &self.terms {
            k.hash(&mut h);
            c.hash(&mut h);
        }
        h.finish()
    }
}

impl Default for Keyed {
    fn default() -> Self {
        Self::new()
    }
}

fn relation(kind: QuadKind, n: usize, i: u16) -> (MixedWord, AlgebraElement) {
    let g = Letter::g(i, 1);
    match kind {
        QuadKind::Square => (
            MixedWord(vec![g, g]),
            AlgebraElement::from_terms(n, [(LaurentPoly::b(), MixedWord(vec![g])), (LaurentPoly::q(), MixedWord::empty())]),
        ),
        QuadKind::Inverse => (
            MixedWord(vec![g.inverse()]),
            AlgebraElement::from_terms(
                n,
                [(LaurentPoly::q_pow(-1), MixedWord(vec![g])), (LaurentPoly::a(), MixedWord::empty())],
            ),
        ),
    }
}

/// What a certificate may cite: rules strictly above `tier` in the table.
#[derive(Clone, Copy, Debug, Default)]
pub struct Scope {
    pub tier: Option<usize>,
}

impl Scope {
    pub fn all() -> Self {
        Scope { tier: None }
    }

    pub fn below(tier: usize) -> Self {
        Scope { tier: Some(tier) }
    }

    fn admits(&self, rule: usize) -> bool {
        self.tier.is_none_or(|t| rule < t)
    }
}

/// Applies one move to `d`.
fn apply_move(
    d: &mut Keyed,
    mv: &Move,
    idx: usize,
    n: usize,
    book: &RuleBook,
    scope: Scope,
    keyer: &Keyer,
) -> Result<(), CheckError> {
    match mv {
        Move::Group { from, to } => {
            let ok = group_equal(&embed(from, n), &embed(to, n)).unwrap_or(false);
            if !ok {
                return Err(CheckError::BadGroupMove(idx, from.to_string(), to.to_string()));
            }
        }
        Move::Quad { kind, coeff, left, index, right } => {
            if *index == 0 || *index as usize >= n.max(1) {
                return Err(CheckError::Malformed(idx, format!("generator index {index} out of range")));
            }
            let (lhs, rhs) = relation(*kind, n, *index);
            d.add(keyer, &left.concat(&lhs).concat(right), &-coeff);
            d.add_sandwich(keyer, coeff, left, &rhs, right);
        }
        Move::Rule { name, bindings, coeff, left, right } => {
            let id = format!("{name} {bindings}");
            let r = book.by_name_and_bindings(name, bindings).ok_or_else(|| CheckError::UnknownRule(idx, id.clone()))?;
            if r.provenance == Provenance::Erratum || !scope.admits(r.rule) {
                return Err(CheckError::RuleNotAllowed(idx, id));
            }
            d.add(keyer, &left.concat(&r.lhs).concat(right), &-coeff);
            d.add_sandwich(keyer, coeff, left, &r.rhs, right);
        }
        Move::RightMul { word } => {
            *d = d.right_mul(keyer, word);
        }
    }
    Ok(())
}

impl Certificate {
    /// Replays the script, returning the first failure.
    pub fn check(&self, book: &RuleBook, scope: Scope) -> Result<(), CheckError> {
        let n = self.n;
        if book.n() != n || self.lhs.n() != n || self.rhs.n() != n {
            return Err(CheckError::Malformed(0, "strand count mismatch".into()));
        }
        let keyer = Keyer::new(n);
        let mut d = Keyed::from_element(&self.lhs.sub(&self.rhs).expect("same n"), &keyer);
        for (k, mv) in self.moves.iter().enumerate() {
            apply_move(&mut d, mv, k, n, book, scope, &keyer)?;
        }
        if d.is_zero() {
            Ok(())
        } else {
            Err(CheckError::Residue(d.len()))
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("N {}\nLHS {}\nRHS {}\n", self.n, self.lhs, self.rhs);
        for m in &self.moves {
            s.push_str(&m.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Certificate, CertParseError> {
        let mut n = None;
        let mut lhs_text = None;
        let mut rhs_text = None;
        let mut moves = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |m: String| CertParseError::Syntax(k + 1, m);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
            let rest = rest.trim();
            match head {
                "N" => n = Some(rest.parse::<usize>().map_err(|e| err(e.to_string()))?),
                "LHS" => lhs_text = Some(rest.to_string()),
                "RHS" => rhs_text = Some(rest.to_string()),
                _ => {
                    let n = n.ok_or_else(|| err("moves before the N line".into()))?;
                    moves.push(parse_move(head, rest, n).map_err(err)?);
                }
            }
        }
        let n = n.ok_or_else(|| CertParseError::Syntax(0, "missing N line".into()))?;
        let elem = |t: Option<String>, what: &str| -> Result<AlgebraElement, CertParseError> {
            let t = t.ok_or_else(|| CertParseError::Syntax(0, format!("missing {what} line")))?;
            parse_element(&t, n).map_err(|e| CertParseError::Syntax(0, format!("{what}: {e}")))
        };
        Ok(Certificate { n, lhs: elem(lhs_text, "LHS")?, rhs: elem(rhs_text, "RHS")?, moves })
    }
}

fn parse_move(head: &str, rest: &str, n: usize) -> Result<Move, String> {
    let word = |s: &str| parse_word(s.trim(), n).map_err(|e| e.to_string());
    let poly = |s: &str| parse_poly(s.trim()).map_err(|e| e.to_string());
    let fields: Vec<&str> = rest.split('|').map(str::trim).collect();
    match head {
        "GROUP" => {
            let (a, b) = rest.split_once("->").ok_or("GROUP needs '->'")?;
            Ok(Move::Group { from: word(a)?, to: word(b)? })
        }
        "QUAD" => {
            let [kind, c, u, i, v] = fields[..] else { return Err("QUAD needs 5 fields".into()) };
            let kind = match kind {
                "SQ" => QuadKind::Square,
                "INV" => QuadKind::Inverse,
                other => return Err(format!("unknown QUAD kind {other}")),
            };
            let index = i.parse::<u16>().map_err(|e| e.to_string())?;
            Ok(Move::Quad { kind, coeff: poly(c)?, left: word(u)?, index, right: word(v)? })
        }
        "RULE" => {
            let [name, b, c, u, v] = fields[..] else { return Err("RULE needs 5 fields".into()) };
            let bindings = Bindings::parse(b).ok_or_else(|| format!("bad bindings '{b}'"))?;
            Ok(Move::Rule { name: name.to_string(), bindings, coeff: poly(c)?, left: word(u)?, right: word(v)? })
        }
        "RMUL" => Ok(Move::RightMul { word: word(rest)? }),
        other => Err(format!("unknown move {other}")),
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Group { from, to } => write!(f, "GROUP {from} -> {to}"),
            Move::Quad { kind, coeff, left, index, right } => {
                let k = if *kind == QuadKind::Square { "SQ" } else { "INV" };
                write!(f, "QUAD {k} | {coeff} | {left} | {index} | {right}")
            }
            Move::Rule { name, bindings, coeff, left, right } => {
                write!(f, "RULE {name} | {bindings} | {coeff} | {left} | {right}")
            }
            Move::RightMul { word } => write!(f, "RMUL {word}"),
        }
    }
}

/// Replays `cert` against `lhs = rhs` with every non-erratum rule citable.
pub fn check_certificate(cert: &Certificate, lhs: &AlgebraElement, rhs: &AlgebraElement, book: &RuleBook) -> bool {
    cert.lhs == *lhs && cert.rhs == *rhs && cert.check(book, Scope::all()).is_ok()
}

/// Closes `d` with quadratic moves when every coset `w B_n` of its terms
/// carries a combination of braiding tails that vanishes in the Hecke algebra
/// `H_n(q)`. Each term `w` is written `c(w) phi(w)` with `phi` forgetting the
/// loopings; `c(w)` is constant on cosets.
fn close_right(terms: &[(MixedWord, LaurentPoly)], n: usize, keyer: &Keyer) -> Option<Vec<Move>> {
    let mut cosets: BTreeMap<GarsideNF, (MixedWord, Vec<(MixedWord, LaurentPoly)>)> = BTreeMap::new();
    for (w, c) in terms {
        let tail = w.forget_loopings();
        let kappa = w.concat(&tail.inverse());
        let key = keyer.key(&kappa);
        cosets.entry(key).or_insert_with(|| (kappa, Vec::new())).1.push((tail, c.clone()));
    }
    let mut moves = Vec::new();
    for (kappa, tails) in cosets.values() {
        let mut total: BTreeMap<Perm, LaurentPoly> = BTreeMap::new();
        for (tail, c) in tails {
            let mut states: BTreeMap<Perm, LaurentPoly> = BTreeMap::new();
            states.insert(Perm::identity(n), c.clone());
            let ls = tail.letters();
            for (k, l) in ls.iter().enumerate() {
                let rest = MixedWord(ls[k + 1..].to_vec());
                let s = l.index;
                let mut next: BTreeMap<Perm, LaurentPoly> = BTreeMap::new();
                let mut put = |p: Perm, c: LaurentPoly| {
                    let slot = next.entry(p.clone()).or_default();
                    *slot += &c;
                    if slot.is_zero() {
                        next.remove(&p);
                    }
                };
                for (p, c) in states {
                    let ps = p.mul_gen(s);
                    match (l.exp > 0, p.has_descent(s)) {
                        (true, false) | (false, true) => put(ps, c),
                        (true, true) => {
                            moves.push(Move::Quad {
                                kind: QuadKind::Square,
                                coeff: c.clone(),
                                left: kappa.concat(&ps.canonical_word()),
                                index: s,
                                right: rest.clone(),
                            });
                            put(p, &c * &LaurentPoly::b());
                            put(ps, &c * &LaurentPoly::q());
                        }
                        (false, false) => {
                            moves.push(Move::Quad {
                                kind: QuadKind::Inverse,
                                coeff: c.clone(),
                                left: kappa.concat(&p.canonical_word()),
                                index: s,
                                right: rest.clone(),
                            });
                            put(ps, &c * &LaurentPoly::q_pow(-1));
                            put(p, &c * &LaurentPoly::a());
                        }
                    }
                }
                states = next;
            }
            for (p, c) in states {
                let slot = total.entry(p.clone()).or_default();
                *slot += &c;
                if slot.is_zero() {
                    total.remove(&p);
                }
            }
        }
        if !total.is_empty() {
            return None;
        }
    }
    Some(moves)
}

/// The mirror of `close_right` through word reversal, which is an
/// anti-automorphism of the group and of the algebra.
fn close_left(terms: &[(MixedWord, LaurentPoly)], n: usize, keyer: &Keyer) -> Option<Vec<Move>> {
    let rev: Vec<(MixedWord, LaurentPoly)> = terms.iter().map(|(w, c)| (w.reversed(), c.clone())).collect();
    let moves = close_right(&rev, n, keyer)?;
    Some(
        moves
            .into_iter()
            .map(|m| match m {
                Move::Quad { kind, coeff, left, index, right } => {
                    Move::Quad { kind, coeff, left: right.reversed(), index, right: left.reversed() }
                }
                other => other,
            })
            .collect(),
    )
}

/// Tries both closing routes on the current difference.
pub fn close(d: &Keyed, n: usize, keyer: &Keyer) -> Option<Vec<Move>> {
    let terms: Vec<(MixedWord, LaurentPoly)> = d.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    close_right(&terms, n, keyer).or_else(|| close_left(&terms, n, keyer))
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub budget: usize,
    pub scope: Scope,
    pub probe: ProbeConfig,
    /// At most this many letters per word in a search state.
    pub max_word_len: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 2000, scope: Scope::all(), probe: ProbeConfig::default(), max_word_len: 48 }
    }
}

struct Node {
    d: Keyed,
    moves: Vec<Move>,
}

/// Candidate moves from one state, each followed by an optional close.
fn children(d: &Keyed, book: &RuleBook, cfg: &SearchConfig, rhs_index: &HashMap<MixedWord, Vec<(usize, LaurentPoly)>>) -> Vec<Move> {
    let mut out = Vec::new();
    let mut seen_rmul = HashSet::new();
    let max_lhs = book.instances().iter().map(|r| r.lhs.len()).max().unwrap_or(0);
    for (w, c) in d.terms() {
        let ls = w.letters();
        // Right multiplication by the inverse of a trailing braiding block,
        // or of a trailing looping.
        let cut = ls.iter().rposition(|l| l.is_looping()).map_or(0, |p| p + 1);
        if cut < ls.len() {
            let x = MixedWord(ls[cut..].to_vec()).inverse();
            if seen_rmul.insert(x.clone()) {
                out.push(Move::RightMul { word: x });
            }
        }
        if let Some(&l) = ls.last() {
            let x = MixedWord(vec![l.inverse()]);
            if seen_rmul.insert(x.clone()) {
                out.push(Move::RightMul { word: x });
            }
        }
        for p in 0..ls.len() {
            for len in 1..=max_lhs.min(ls.len() - p) {
                let sub = MixedWord(ls[p..p + len].to_vec());
                let (u, v) = (MixedWord(ls[..p].to_vec()), MixedWord(ls[p + len..].to_vec()));
                if let Some(r) = book.lookup(&sub) {
                    if cfg.scope.admits(r.rule) {
                        out.push(Move::Rule {
                            name: r.name.clone(),
                            bindings: r.bindings.clone(),
                            coeff: c.clone(),
                            left: u.clone(),
                            right: v.clone(),
                        });
                    }
                }
                // Read a rule backwards: cancel this term against one of the
                // rule's right-hand monomials.
                if let Some(hits) = rhs_index.get(&sub) {
                    for (ri, rc) in hits {
                        let r = &book.instances()[*ri];
                        if !cfg.scope.admits(r.rule) {
                            continue;
                        }
                        let inv = rc.invert_unit().expect("indexed coefficients are units");
                        out.push(Move::Rule {
                            name: r.name.clone(),
                            bindings: r.bindings.clone(),
                            coeff: -(c * &inv),
                            left: u.clone(),
                            right: v.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Bounded best-first search for a certificate of `lhs = rhs`.
pub fn certify_identity(
    lhs: &AlgebraElement,
    rhs: &AlgebraElement,
    book: &RuleBook,
    cfg: &SearchConfig,
) -> Result<Certificate, NotFound> {
    let n = lhs.n();
    let cert = |moves| Certificate { n, lhs: lhs.clone(), rhs: rhs.clone(), moves };
    if let Ok(v) = distinct(lhs, rhs, cfg.probe) {
        if v.is_distinct() {
            return Err(NotFound { explored: 0, probe_distinct: true });
        }
    }
    let keyer = Keyer::new(n);
    let start = Keyed::from_element(&lhs.sub(rhs).expect("same n"), &keyer);
    if start.is_zero() {
        return Ok(cert(Vec::new()));
    }
    let mut rhs_index: HashMap<MixedWord, Vec<(usize, LaurentPoly)>> = HashMap::new();
    for (k, r) in book.instances().iter().enumerate() {
        if r.provenance == Provenance::Erratum || !cfg.scope.admits(r.rule) {
            continue;
        }
        for (w, c) in r.rhs.terms() {
            if !w.is_empty() && c.is_unit() {
                rhs_index.entry(w.clone()).or_default().push((k, c.clone()));
            }
        }
    }
    let mut heap = BinaryHeap::new();
    let mut nodes = vec![Node { d: start.clone(), moves: Vec::new() }];
    let mut seen = HashSet::new();
    seen.insert(start.fingerprint());
    heap.push(Reverse((start.len(), 0usize, 0usize)));
    let mut explored = 0;
    while let Some(Reverse((_, _, id))) = heap.pop() {
        if explored >= cfg.budget {
            break;
        }
        explored += 1;
        let (d, moves) = {
            let node = &nodes[id];
            (node.d.clone(), node.moves.clone())
        };
        if let Some(tail) = close(&d, n, &keyer) {
            let mut all = moves;
            all.extend(tail);
            return Ok(cert(all));
        }
        for mv in children(&d, book, cfg, &rhs_index) {
            let mut next = d.clone();
            if apply_move(&mut next, &mv, 0, n, book, cfg.scope, &keyer).is_err() {
                continue;
            }
            if next.terms().any(|(w, _)| w.len() > cfg.max_word_len) || !seen.insert(next.fingerprint()) {
                continue;
            }
            let mut m2 = moves.clone();
            m2.push(mv);
            let depth = m2.len();
            let len = next.len();
            if next.is_zero() {
                return Ok(cert(m2));
            }
            nodes.push(Node { d: next, moves: m2 });
            heap.push(Reverse((len, depth, nodes.len() - 1)));
        }
    }
    Err(NotFound { explored, probe_distinct: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str, n: usize) -> AlgebraElement {
        parse_element(s, n).unwrap()
    }

    #[test]
    fn reflexive() {
        let book = RuleBook::builtin(2);
        let x = el("T1 g1", 2);
        let c = Certificate { n: 2, lhs: x.clone(), rhs: x.clone(), moves: vec![] };
        assert!(check_certificate(&c, &x, &x, &book));
    }

    #[test]
    fn passage_by_hand() {
        let book = RuleBook::builtin(2);
        let lhs = el("g1 T1", 2);
        let rhs = el("q^-1 * T2 g1 + (q^-1 - 1) * T2", 2);
        let moves = vec![
            Move::Group { from: parse_word("g1 T1", 2).unwrap(), to: parse_word("T2 g1^-1", 2).unwrap() },
            Move::Quad {
                kind: QuadKind::Inverse,
                coeff: LaurentPoly::one(),
                left: parse_word("T2", 2).unwrap(),
                index: 1,
                right: MixedWord::empty(),
            },
        ];
        let c = Certificate { n: 2, lhs: lhs.clone(), rhs: rhs.clone(), moves };
        assert!(check_certificate(&c, &lhs, &rhs, &book));
        let back = Certificate::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
        let mut bad = c.clone();
        bad.moves[0] = Move::Group { from: parse_word("g1 T1", 2).unwrap(), to: parse_word("T2 g1", 2).unwrap() };
        assert!(!check_certificate(&bad, &lhs, &rhs, &book));
    }

    #[test]
    fn search_examples() {
        let book = RuleBook::builtin(2);
        let cfg = SearchConfig::default();
        let lhs = el("g1 T1", 2);
        let rhs = el("q^-1 * T2 g1 + (q^-1 - 1) * T2", 2);
        let c = certify_identity(&lhs, &rhs, &book, &cfg).unwrap();
        assert!(c.moves.len() <= 3);
        assert!(check_certificate(&c, &lhs, &rhs, &book));

        let nf = certify_identity(&el("T1", 2), &el("t1", 2), &book, &cfg).unwrap_err();
        assert!(nf.probe_distinct);

        let lhs = el("1 - (q^-1 - 1) * g1", 2);
        let rhs = el("q^-1 * g1 g1", 2);
        let c = certify_identity(&lhs, &rhs, &book, &cfg).unwrap();
        assert!(check_certificate(&c, &lhs, &rhs, &book));
    }
}
