//! Formal `Z[q^±1]`-combinations of freely reduced words.
//!
//! Equality here is syntactic: two elements are equal when their term maps
//! coincide. The quadratic relation is never applied implicitly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::braid::{free_reduce, MixedWord};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("strand mismatch: n = {0} vs n = {1}")]
    StrandMismatch(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlgebraElement {
    n: usize,
    terms: BTreeMap<MixedWord, LaurentPoly>,
}

/// Rendering order: more letters first, then lexicographic letter codes.
pub fn monomial_order(a: &MixedWord, b: &MixedWord) -> Ordering {
    b.len().cmp(&a.len()).then_with(|| a.cmp(b))
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        AlgebraElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, LaurentPoly::one(), MixedWord::empty())
    }

    pub fn word(n: usize, w: MixedWord) -> Self {
        Self::monomial(n, LaurentPoly::one(), w)
    }

    pub fn constant(n: usize, c: LaurentPoly) -> Self {
        Self::monomial(n, c, MixedWord::empty())
    }

    pub fn monomial(n: usize, c: LaurentPoly, w: MixedWord) -> Self {
        let mut e = Self::zero(n);
        e.add_term(free_reduce(&w), c);
        e
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (LaurentPoly, MixedWord)>) -> Self {
        let mut e = Self::zero(n);
        for (c, w) in terms {
            e.add_term(free_reduce(&w), c);
        }
        e
    }

    pub fn n(&self) -> usize {
        self.n
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

    /// Adds `c * w`; the caller guarantees `w` is freely reduced.
    pub(crate) fn add_term(&mut self, w: MixedWord, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                *slot += &c;
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    /// Adds `c * w` for an arbitrary word.
    pub fn add_word(&mut self, c: &LaurentPoly, w: &MixedWord) {
        self.add_term(free_reduce(w), c.clone());
    }

    pub(crate) fn pop_first(&mut self) -> Option<(MixedWord, LaurentPoly)> {
        self.terms.pop_first()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MixedWord, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &MixedWord) -> LaurentPoly {
        self.terms.get(&free_reduce(w)).cloned().unwrap_or_default()
    }

    /// Terms in canonical rendering order.
    pub fn sorted_terms(&self) -> Vec<(&MixedWord, &LaurentPoly)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| monomial_order(a.0, b.0));
        v
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.n != other.n {
            return Err(AlgebraError::StrandMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &LaurentPoly, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (w, d) in &other.terms {
            self.add_term(w.clone(), c * d);
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&LaurentPoly::constant(-1))
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.n);
        for (w, d) in &self.terms {
            out.add_term(w.clone(), c * d);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(self.n);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.mul(wb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiplies every word on the left by `u` and on the right by `v`.
    pub fn sandwich(&self, u: &MixedWord, v: &MixedWord) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(free_reduce(&u.concat(w).concat(v)), c.clone());
        }
        out
    }

    pub fn map_words(&self, mut f: impl FnMut(&MixedWord) -> MixedWord) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(free_reduce(&f(w)), c.clone());
        }
        out
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &LaurentPoly) -> fmt::Result {
    if c.num_terms() > 1 {
        write!(f, "({c})")
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.sorted_terms().into_iter().enumerate() {
            // A single-term coefficient carries its sign into the joining operator.
            let (neg, mag) = if c.num_terms() == 1 && c.terms().all(|(_, k)| k.sign() == num_bigint::Sign::Minus) {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if w.is_empty() {
                write_coeff(f, &mag)?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write_coeff(f, &mag)?;
                write!(f, " * {w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::Letter;

    fn w(ls: &[Letter]) -> MixedWord {
        MixedWord::from_letters(ls.iter().copied())
    }

    #[test]
    fn addition_and_scaling() {
        let t = AlgebraElement::word(2, w(&[Letter::big_t(1, 1)]));
        assert!(t.add(&t.neg()).unwrap().is_zero());
        let g = AlgebraElement::word(2, w(&[Letter::g(1, 1)]));
        let sum = g.scale(&LaurentPoly::q()).add(&g).unwrap();
        assert_eq!(sum.len(), 1);
        assert_eq!(sum.coeff(&w(&[Letter::g(1, 1)])), LaurentPoly::q() + LaurentPoly::one());
        let tau = AlgebraElement::word(2, w(&[Letter::tau(1, 1)]));
        assert_eq!(t.add(&tau).unwrap().len(), 2);
        assert!(t.add(&AlgebraElement::one(3)).is_err());
    }

    #[test]
    fn products() {
        let t = AlgebraElement::word(2, w(&[Letter::big_t(1, 1)]));
        let tau = AlgebraElement::word(2, w(&[Letter::tau(1, 1)]));
        assert_eq!(t.mul(&tau).unwrap().to_string(), "T1 t1");
        let g = AlgebraElement::word(2, w(&[Letter::g(1, 1)]));
        let gp1 = g.add(&AlgebraElement::one(2)).unwrap();
        assert_eq!(gp1.mul(&g).unwrap().to_string(), "g1 g1 + g1");
        let tinv = AlgebraElement::word(2, w(&[Letter::big_t(1, -1)]));
        assert_eq!(tinv.mul(&t).unwrap(), AlgebraElement::one(2));
    }

    #[test]
    fn rendering_signs() {
        let e = AlgebraElement::from_terms(
            2,
            [
                (LaurentPoly::q_pow(-1), w(&[Letter::big_t(2, 1), Letter::g(1, 1)])),
                (LaurentPoly::a(), w(&[Letter::big_t(2, 1)])),
            ],
        );
        assert_eq!(e.to_string(), "q^-1 * T2 g1 + (-1 + q^-1) * T2");
        let e = AlgebraElement::from_terms(
            2,
            [(LaurentPoly::one(), MixedWord::empty()), (LaurentPoly::monomial(-1, 1), w(&[Letter::g(1, 1)]))],
        );
        assert_eq!(e.to_string(), "-q * g1 + 1");
    }
}
