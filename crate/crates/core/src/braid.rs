//! Words in the mixed braid group `B_{2,n}` and their image in the Artin braid
//! group on `n + 2` strands.
//!
//! Letters are braiding generators `g_i` (`1 <= i <= n-1`) and loopings `T_i`,
//! `t_i` (`1 <= i <= n`, `t` standing for tau). A looping of index `i > 1` is an
//! abbreviation for its defining word `g_{i-1} .. g_1 T g_1 .. g_{i-1}`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("letter {letter} is out of range for n = {n}")]
    IndexOutOfRange { letter: String, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Braiding,
    LoopT,
    LoopTau,
}

impl Kind {
    pub fn is_looping(self) -> bool {
        !matches!(self, Kind::Braiding)
    }

    fn symbol(self) -> char {
        match self {
            Kind::Braiding => 'g',
            Kind::LoopT => 'T',
            Kind::LoopTau => 't',
        }
    }
}

/// One generator letter with exponent `±1`. The derived order compares
/// `(kind, index, exponent)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub kind: Kind,
    pub index: u16,
    pub exp: i8,
}

impl Letter {
    pub fn new(kind: Kind, index: u16, exp: i8) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Letter { kind, index, exp }
    }

    pub fn g(index: u16, exp: i8) -> Self {
        Letter::new(Kind::Braiding, index, exp)
    }

    pub fn big_t(index: u16, exp: i8) -> Self {
        Letter::new(Kind::LoopT, index, exp)
    }

    pub fn tau(index: u16, exp: i8) -> Self {
        Letter::new(Kind::LoopTau, index, exp)
    }

    pub fn inverse(self) -> Self {
        Letter { exp: -self.exp, ..self }
    }

    pub fn is_looping(self) -> bool {
        self.kind.is_looping()
    }

    pub fn is_braiding(self) -> bool {
        self.kind == Kind::Braiding
    }

    pub fn in_range(self, n: usize) -> bool {
        let i = self.index as usize;
        match self.kind {
            Kind::Braiding => i >= 1 && i < n,
            _ => i >= 1 && i <= n,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.index)?;
        if self.exp < 0 {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// A finite word over generator letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MixedWord(pub Vec<Letter>);

impl MixedWord {
    pub fn empty() -> Self {
        MixedWord(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        MixedWord(letters.into_iter().collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &MixedWord) -> MixedWord {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        MixedWord(v)
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &MixedWord) -> MixedWord {
        free_reduce(&self.concat(other))
    }

    pub fn inverse(&self) -> MixedWord {
        MixedWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn validate(&self, n: usize) -> Result<(), BraidError> {
        match self.0.iter().find(|l| !l.in_range(n)) {
            Some(l) => Err(BraidError::IndexOutOfRange { letter: l.to_string(), n }),
            None => Ok(()),
        }
    }

    pub fn looping_count(&self) -> usize {
        self.0.iter().filter(|l| l.is_looping()).count()
    }

    pub fn is_looping_only(&self) -> bool {
        self.0.iter().all(|l| l.is_looping())
    }

    pub fn is_braiding_only(&self) -> bool {
        self.0.iter().all(|l| l.is_braiding())
    }

    /// `(min, max)` index over looping letters.
    pub fn looping_range(&self) -> Option<(u16, u16)> {
        let mut it = self.0.iter().filter(|l| l.is_looping()).map(|l| l.index);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), i| (lo.min(i), hi.max(i))))
    }

    /// Splits at the first braiding letter: `(looping prefix, rest)`.
    pub fn split_looping_prefix(&self) -> (MixedWord, MixedWord) {
        let cut = self.0.iter().position(|l| l.is_braiding()).unwrap_or(self.len());
        (MixedWord(self.0[..cut].to_vec()), MixedWord(self.0[cut..].to_vec()))
    }

    /// Rewrites every looping into its defining word over `g_i`, `T_1`, `t_1`.
    pub fn expand_loopings(&self) -> MixedWord {
        let mut out = Vec::new();
        for l in &self.0 {
            if l.is_looping() {
                out.extend(looping_word(l.kind, l.index, l.exp));
            } else {
                out.push(*l);
            }
        }
        MixedWord(out)
    }
}

impl MixedWord {
    /// Image under the retraction onto the braiding subgroup that sends both
    /// loop generators `T`, `t` to the identity.
    pub fn forget_loopings(&self) -> MixedWord {
        free_reduce(&MixedWord(self.expand_loopings().0.into_iter().filter(|l| l.is_braiding()).collect()))
    }

    /// Reversal without inverting letters; an anti-automorphism of the group.
    pub fn reversed(&self) -> MixedWord {
        MixedWord(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for MixedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn looping_word(kind: Kind, index: u16, exp: i8) -> Vec<Letter> {
    let mut w: Vec<Letter> = (1..index).rev().map(|k| Letter::g(k, 1)).collect();
    w.push(Letter::new(kind, 1, 1));
    w.extend((1..index).map(|k| Letter::g(k, 1)));
    if exp < 0 {
        w = w.into_iter().rev().map(Letter::inverse).collect();
    }
    w
}

/// Defining word of `T_i^{±1}` or `t_i^{±1}`.
pub fn expand_looping(kind: Kind, index: u16, exp: i8, n: usize) -> Result<MixedWord, BraidError> {
    let l = Letter::new(kind, index, exp);
    if !kind.is_looping() || !l.in_range(n) {
        return Err(BraidError::IndexOutOfRange { letter: l.to_string(), n });
    }
    Ok(MixedWord(looping_word(kind, index, exp)))
}

/// Cancels adjacent inverse pairs until none remain.
pub fn free_reduce(w: &MixedWord) -> MixedWord {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    MixedWord(out)
}

/// Word in the Artin generators `s_1 .. s_{strands-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArtinWord {
    pub strands: usize,
    pub letters: Vec<(u16, i8)>,
}

impl ArtinWord {
    pub fn new(strands: usize, letters: Vec<(u16, i8)>) -> Self {
        debug_assert!(letters.iter().all(|&(i, _)| i >= 1 && (i as usize) < strands));
        ArtinWord { strands, letters }
    }

    pub fn identity(strands: usize) -> Self {
        ArtinWord { strands, letters: Vec::new() }
    }

    pub fn concat(&self, other: &ArtinWord) -> ArtinWord {
        assert_eq!(self.strands, other.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        ArtinWord { strands: self.strands, letters }
    }

    pub fn inverse(&self) -> ArtinWord {
        ArtinWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }
}

impl fmt::Display for ArtinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(i, e)| if e < 0 { format!("s{i}^-1") } else { format!("s{i}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Images of the two looping generators in the ambient braid group. Strand 1
/// is the fixed strand I, strand 2 is II, moving strand `i` is ambient strand
/// `i + 2`; `g_i` always maps to `s_{i+2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LoopImages {
    /// `T -> s_2 s_1^2 s_2` (around both fixed strands), `t -> s_2^2` (around II).
    /// Satisfies every defining relation.
    #[default]
    Nested,
    /// `T -> s_2^2`, `t -> s_2 s_1^2 s_2^-1`. Breaks the mixed relation.
    PlainOver,
    /// `T -> s_2^2`, `t -> s_2^-1 s_1^2 s_2`. Breaks the mixed relation.
    PlainUnder,
}

impl LoopImages {
    fn image(self, kind: Kind) -> &'static [(u16, i8)] {
        match (self, kind) {
            (LoopImages::Nested, Kind::LoopT) => &[(2, 1), (1, 1), (1, 1), (2, 1)],
            (LoopImages::Nested, Kind::LoopTau) => &[(2, 1), (2, 1)],
            (_, Kind::LoopT) => &[(2, 1), (2, 1)],
            (LoopImages::PlainOver, Kind::LoopTau) => &[(2, 1), (1, 1), (1, 1), (2, -1)],
            (LoopImages::PlainUnder, Kind::LoopTau) => &[(2, -1), (1, 1), (1, 1), (2, 1)],
            (_, Kind::Braiding) => unreachable!("braiding letters map to single generators"),
        }
    }
}

/// Homomorphic image in `B_{n+2}`.
pub fn embed_with(w: &MixedWord, n: usize, images: LoopImages) -> ArtinWord {
    let mut out = Vec::new();
    for l in &w.expand_loopings().0 {
        let mut piece: Vec<(u16, i8)> = match l.kind {
            Kind::Braiding => vec![(l.index + 2, 1)],
            k => images.image(k).to_vec(),
        };
        if l.exp < 0 {
            piece = piece.into_iter().rev().map(|(i, e)| (i, -e)).collect();
        }
        out.extend(piece);
    }
    ArtinWord::new(n + 2, out)
}

pub fn embed(w: &MixedWord, n: usize) -> ArtinWord {
    embed_with(w, n, LoopImages::default())
}

/// The defining relations of `B_{2,n}` as `(family, lhs, rhs)`, with `T`, `t`,
/// `g_k` read as in the group presentation (loopings of index 1).
pub fn defining_relations(n: usize) -> Vec<(&'static str, MixedWord, MixedWord)> {
    let g = |k: usize| Letter::g(k as u16, 1);
    let t1 = Letter::big_t(1, 1);
    let tau1 = Letter::tau(1, 1);
    let w = |ls: &[Letter]| MixedWord::from_letters(ls.iter().copied());
    let mut rels = Vec::new();
    for k in 1..n {
        for j in 1..n {
            if k.abs_diff(j) > 1 {
                rels.push(("far-commutation", w(&[g(k), g(j)]), w(&[g(j), g(k)])));
            }
        }
    }
    for k in 1..n.saturating_sub(1) {
        rels.push(("braid", w(&[g(k), g(k + 1), g(k)]), w(&[g(k + 1), g(k), g(k + 1)])));
    }
    for k in 2..n {
        rels.push(("T-commutation", w(&[t1, g(k)]), w(&[g(k), t1])));
        rels.push(("tau-commutation", w(&[tau1, g(k)]), w(&[g(k), tau1])));
    }
    if n >= 2 {
        rels.push(("T-type-B", w(&[t1, g(1), t1, g(1)]), w(&[g(1), t1, g(1), t1])));
        rels.push(("tau-type-B", w(&[tau1, g(1), tau1, g(1)]), w(&[g(1), tau1, g(1), tau1])));
        rels.push(("mixed", w(&[tau1, g(1), t1, g(1)]), w(&[g(1), t1, g(1), tau1])));
    }
    rels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn looping_expansion() {
        let w = expand_looping(Kind::LoopT, 3, 1, 4).unwrap();
        assert_eq!(w.to_string(), "g2 g1 T1 g1 g2");
        assert_eq!(expand_looping(Kind::LoopTau, 1, 1, 2).unwrap().to_string(), "t1");
        assert_eq!(
            expand_looping(Kind::LoopT, 2, -1, 3).unwrap().to_string(),
            "g1^-1 T1^-1 g1^-1"
        );
        assert!(expand_looping(Kind::LoopT, 4, 1, 3).is_err());
    }

    #[test]
    fn reduction() {
        let w = MixedWord::from_letters([Letter::big_t(1, 1), Letter::big_t(1, -1)]);
        assert!(free_reduce(&w).is_empty());
        let w = MixedWord::from_letters([Letter::g(1, 1), Letter::g(2, 1), Letter::g(2, -1)]);
        assert_eq!(free_reduce(&w).to_string(), "g1");
        let w = MixedWord::from_letters([Letter::g(1, 1), Letter::g(2, 1)]);
        assert_eq!(free_reduce(&w), w);
    }

    #[test]
    fn embedding_images() {
        let one = |l: Letter| MixedWord::from_letters([l]);
        assert_eq!(embed(&one(Letter::g(1, 1)), 2).letters, vec![(3, 1)]);
        assert_eq!(embed(&one(Letter::big_t(1, 1)), 2).letters, vec![(2, 1), (1, 1), (1, 1), (2, 1)]);
        assert_eq!(embed(&one(Letter::tau(1, 1)), 2).letters, vec![(2, 1), (2, 1)]);
        assert_eq!(
            embed(&one(Letter::big_t(1, -1)), 2).letters,
            vec![(2, -1), (1, -1), (1, -1), (2, -1)]
        );
    }

    #[test]
    fn relation_families_present() {
        let fams: std::collections::BTreeSet<_> =
            defining_relations(5).into_iter().map(|(f, _, _)| f).collect();
        assert_eq!(fams.len(), 7);
    }
}
