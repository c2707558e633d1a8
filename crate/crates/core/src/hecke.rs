//! The Iwahori-Hecke algebra `H_n(q)` on its permutation basis.
//!
//! Permutations use the same convention as the Garside module: an array of
//! labels by position, with right multiplication by `s_i` swapping positions
//! `i-1` and `i`. The canonical reduced word of a permutation is a product of
//! descending blocks `s_a s_{a-1} .. s_b` whose tops increase left to right.

use std::collections::BTreeMap;

use crate::algebra::AlgebraElement;
use crate::braid::{Letter, MixedWord};
use crate::laurent::LaurentPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn length(&self) -> usize {
        let p = &self.0;
        (0..p.len()).map(|a| (a + 1..p.len()).filter(|&b| p[a] > p[b]).count()).sum()
    }

    /// Whether `s_i` is a right descent.
    pub fn has_descent(&self, i: u16) -> bool {
        self.0[i as usize - 1] > self.0[i as usize]
    }

    pub fn mul_gen(&self, i: u16) -> Perm {
        let mut p = self.0.clone();
        p.swap(i as usize - 1, i as usize);
        Perm(p)
    }

    /// Permutation of a braiding word, ignoring exponents. Letters must be
    /// braiding letters with index below `n`.
    pub fn of_word(n: usize, w: &MixedWord) -> Perm {
        w.letters().iter().fold(Perm::identity(n), |p, l| p.mul_gen(l.index))
    }

    /// Canonical reduced word, as generator indices.
    pub fn canonical_indices(&self) -> Vec<u16> {
        let mut p = self.0.clone();
        let mut blocks: Vec<Vec<u16>> = Vec::new();
        for top in (1..p.len()).rev() {
            // Walk the largest remaining label to the last open position.
            let a = p.iter().position(|&v| v as usize == top).unwrap();
            let mut block = Vec::new();
            for i in (a + 1..=top).rev() {
                block.push(i as u16);
            }
            for i in a + 1..=top {
                p.swap(i - 1, i);
            }
            blocks.push(block);
        }
        blocks.into_iter().rev().flatten().collect()
    }

    pub fn canonical_word(&self) -> MixedWord {
        MixedWord::from_letters(self.canonical_indices().into_iter().map(|i| Letter::g(i, 1)))
    }
}

/// Element of `H_n(q)` in the permutation basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    n: usize,
    terms: BTreeMap<Perm, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(n: usize) -> Self {
        HeckeElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        let mut e = Self::zero(n);
        e.add(Perm::identity(n), LaurentPoly::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Perm, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn add(&mut self, p: Perm, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(p.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add_scaled(&mut self, c: &LaurentPoly, other: &HeckeElement) {
        for (p, d) in &other.terms {
            self.add(p.clone(), c * d);
        }
    }

    /// Right multiplication by `g_i^exp`.
    pub fn mul_letter(&self, i: u16, exp: i8) -> HeckeElement {
        let mut out = HeckeElement::zero(self.n);
        for (p, c) in &self.terms {
            let ps = p.mul_gen(i);
            if exp > 0 {
                if p.has_descent(i) {
                    out.add(p.clone(), c * &LaurentPoly::b());
                    out.add(ps, c * &LaurentPoly::q());
                } else {
                    out.add(ps, c.clone());
                }
            } else if p.has_descent(i) {
                // T_w T_s^-1 = T_{ws} when s is a descent of w.
                out.add(ps, c.clone());
            } else {
                out.add(ps, c * &LaurentPoly::q_pow(-1));
                out.add(p.clone(), c * &LaurentPoly::a());
            }
        }
        out
    }

    pub fn mul_word(&self, w: &MixedWord) -> HeckeElement {
        w.letters().iter().fold(self.clone(), |acc, l| acc.mul_letter(l.index, l.exp))
    }

    pub fn to_element(&self, strands: usize) -> AlgebraElement {
        AlgebraElement::from_terms(strands, self.terms.iter().map(|(p, c)| (c.clone(), p.canonical_word())))
    }
}

/// Hecke image of a braiding-only word on `n` moving strands.
pub fn hecke_of_word(n: usize, w: &MixedWord) -> HeckeElement {
    HeckeElement::one(n).mul_word(w)
}

/// Canonical form of a braiding-only word as a combination of canonical words.
pub fn hecke_tail_normalize(n: usize, w: &MixedWord) -> AlgebraElement {
    debug_assert!(w.is_braiding_only());
    hecke_of_word(n, w).to_element(n)
}

/// Whether `w` is the canonical reduced word of its permutation.
pub fn is_canonical_tail(n: usize, w: &MixedWord) -> bool {
    w.is_braiding_only()
        && w.letters().iter().all(|l| l.exp == 1 && (l.index as usize) < n.max(1))
        && Perm::of_word(n, w).canonical_word() == *w
}
